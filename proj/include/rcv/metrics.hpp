#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcv/ballots.hpp"
#include "rcv/rational.hpp"

namespace rcv {

/// wins(a, b) = number of voters strictly preferring a to b, reading partial
/// ballots as weak orders (unranked candidates tie for last).
using PairwiseMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

using Committee = std::vector<CandidateId>;  // ascending ids

PairwiseMatrix pairwise_matrix(const PreferenceProfile& profile);

/// True when every member strictly beats every non-member head to head.
bool is_condorcet_committee(const PairwiseMatrix& wins, std::span<const CandidateId> members);

/// The unique size-`size` Condorcet committee, if one exists.
///
/// Members of such a committee beat at least n - size candidates while
/// non-members beat at most n - size - 1, so the only candidate set is the
/// one with >= n - size strict pairwise wins; this is checked directly.
std::optional<Committee> condorcet_committee(const PairwiseMatrix& wins, int size);
std::optional<Committee> condorcet_committee(const PreferenceProfile& profile, int size);

inline constexpr int kExhaustiveCommitteeLimit = 20;

/// Enumerates all C(n, size) subsets. Throws Error when n exceeds
/// kExhaustiveCommitteeLimit. Returns the first committee found in
/// lexicographic order; see count_condorcet_committees for uniqueness checks.
std::optional<Committee> condorcet_committee_exhaustive(const PairwiseMatrix& wins, int size);
int count_condorcet_committees(const PairwiseMatrix& wins, int size);

/// A share of the electorate kept as an exact count over V.
struct Percentage {
  std::int64_t count = 0;
  std::int64_t total = 0;

  Rational exact() const { return make_rational(100 * count, total); }
  double value() const { return total == 0 ? 0.0 : 100.0 * count / total; }
  std::string display() const { return to_decimal(exact(), 1); }

  friend bool operator==(const Percentage&, const Percentage&) = default;
};

/// Voters none of whose top-s ranked candidates (all ranked candidates if
/// fewer than s) are in `winners`.
Percentage degree_of_misrepresentation(const PreferenceProfile& profile, int s,
                                       std::span<const CandidateId> winners);

/// Voters all of whose top-s ranked candidates (all ranked candidates if
/// fewer than s) are in `winners`.
Percentage degree_of_maximal_representation(const PreferenceProfile& profile, int s,
                                            std::span<const CandidateId> winners);

/// |w1 \ w2|. Throws Error on a size mismatch.
int winner_set_diff(std::span<const CandidateId> w1, std::span<const CandidateId> w2);

struct PartyOptions {
  /// Count every independent winner as its own party.
  bool independents_distinct = true;
  std::string independent_label = "Ind";
};

/// Distinct parties among `winners`. Throws Error if a winner has no party.
int party_count(std::span<const CandidateId> winners,
                const std::map<CandidateId, std::string>& parties,
                const PartyOptions& options = {});

/// Party map from a profile's own labels (empty labels are skipped).
std::map<CandidateId, std::string> parties_of(const PreferenceProfile& profile);

}  // namespace rcv
