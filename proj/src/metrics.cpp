#include "rcv/metrics.hpp"

#include <algorithm>
#include <set>

namespace rcv {

PairwiseMatrix pairwise_matrix(const PreferenceProfile& profile) {
  const auto n = static_cast<Eigen::Index>(profile.num_candidates());
  PairwiseMatrix wins = PairwiseMatrix::Zero(n, n);
  std::vector<std::size_t> position(static_cast<std::size_t>(n));
  for (const ProfileEntry& e : profile.entries()) {
    std::fill(position.begin(), position.end(), e.ballot.ranking.size());
    for (std::size_t k = 0; k < e.ballot.ranking.size(); ++k) position[e.ballot.ranking[k]] = k;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        if (position[a] < position[b]) wins(a, b) += e.count;
      }
    }
  }
  return wins;
}

bool is_condorcet_committee(const PairwiseMatrix& wins, std::span<const CandidateId> members) {
  const auto n = static_cast<CandidateId>(wins.rows());
  std::vector<char> in(n);
  for (CandidateId c : members) in.at(c) = 1;
  for (CandidateId a : members) {
    for (CandidateId b = 0; b < n; ++b) {
      if (!in[b] && wins(a, b) <= wins(b, a)) return false;
    }
  }
  return true;
}

namespace {

void check_size(const PairwiseMatrix& wins, int size) {
  if (size < 1 || size >= wins.rows()) {
    throw Error("committee size must satisfy 1 <= size < n");
  }
}

}  // namespace

std::optional<Committee> condorcet_committee(const PairwiseMatrix& wins, int size) {
  check_size(wins, size);
  const auto n = static_cast<CandidateId>(wins.rows());
  Committee members;
  for (CandidateId a = 0; a < n; ++a) {
    int beaten = 0;
    for (CandidateId b = 0; b < n; ++b) beaten += wins(a, b) > wins(b, a) ? 1 : 0;
    if (beaten >= static_cast<int>(n) - size) members.push_back(a);
  }
  if (members.size() != static_cast<std::size_t>(size)) return std::nullopt;
  if (!is_condorcet_committee(wins, members)) return std::nullopt;
  return members;
}

std::optional<Committee> condorcet_committee(const PreferenceProfile& profile, int size) {
  return condorcet_committee(pairwise_matrix(profile), size);
}

namespace {

template <typename Visit>
void for_each_subset(int n, int size, Visit&& visit) {
  std::vector<CandidateId> pick(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) pick[i] = static_cast<CandidateId>(i);
  for (;;) {
    if (!visit(pick)) return;
    int i = size - 1;
    while (i >= 0 && pick[i] == static_cast<CandidateId>(n - size + i)) --i;
    if (i < 0) return;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::optional<Committee> condorcet_committee_exhaustive(const PairwiseMatrix& wins, int size) {
  check_size(wins, size);
  if (wins.rows() > kExhaustiveCommitteeLimit) {
    throw Error("exhaustive committee search limited to " +
                std::to_string(kExhaustiveCommitteeLimit) + " candidates");
  }
  std::optional<Committee> found;
  for_each_subset(static_cast<int>(wins.rows()), size, [&](const std::vector<CandidateId>& s) {
    if (is_condorcet_committee(wins, s)) found = s;
    return !found;
  });
  return found;
}

int count_condorcet_committees(const PairwiseMatrix& wins, int size) {
  check_size(wins, size);
  if (wins.rows() > kExhaustiveCommitteeLimit) {
    throw Error("exhaustive committee search limited to " +
                std::to_string(kExhaustiveCommitteeLimit) + " candidates");
  }
  int count = 0;
  for_each_subset(static_cast<int>(wins.rows()), size, [&](const std::vector<CandidateId>& s) {
    count += is_condorcet_committee(wins, s) ? 1 : 0;
    return true;
  });
  return count;
}

namespace {

enum class Predicate { NoneElected, AllElected };

Percentage degree(const PreferenceProfile& profile, int s, std::span<const CandidateId> winners,
                  Predicate pred) {
  if (s < 1) throw Error("seat count must be >= 1");
  if (winners.size() != static_cast<std::size_t>(s)) throw Error("winner set size must equal s");
  std::vector<char> won(profile.num_candidates());
  for (CandidateId c : winners) won.at(c) = 1;

  Percentage out{0, profile.total_voters()};
  for (const ProfileEntry& e : profile.entries()) {
    const auto& r = e.ballot.ranking;
    const auto top = r.begin() + std::min<std::ptrdiff_t>(s, static_cast<std::ptrdiff_t>(r.size()));
    const bool hit = pred == Predicate::NoneElected
                         ? std::none_of(r.begin(), top, [&](CandidateId c) { return won[c]; })
                         : std::all_of(r.begin(), top, [&](CandidateId c) { return won[c]; });
    if (hit) out.count += e.count;
  }
  return out;
}

}  // namespace

Percentage degree_of_misrepresentation(const PreferenceProfile& profile, int s,
                                       std::span<const CandidateId> winners) {
  return degree(profile, s, winners, Predicate::NoneElected);
}

Percentage degree_of_maximal_representation(const PreferenceProfile& profile, int s,
                                            std::span<const CandidateId> winners) {
  return degree(profile, s, winners, Predicate::AllElected);
}

int winner_set_diff(std::span<const CandidateId> w1, std::span<const CandidateId> w2) {
  if (w1.size() != w2.size()) throw Error("winner sets differ in size");
  const std::set<CandidateId> other(w2.begin(), w2.end());
  return static_cast<int>(
      std::count_if(w1.begin(), w1.end(), [&](CandidateId c) { return !other.contains(c); }));
}

int party_count(std::span<const CandidateId> winners,
                const std::map<CandidateId, std::string>& parties, const PartyOptions& options) {
  std::set<std::string> labels;
  int independents = 0;
  for (CandidateId c : winners) {
    auto it = parties.find(c);
    if (it == parties.end() || it->second.empty()) {
      throw Error("no party recorded for winner " + std::to_string(c + 1));
    }
    if (options.independents_distinct && it->second == options.independent_label) {
      ++independents;
    } else {
      labels.insert(it->second);
    }
  }
  return static_cast<int>(labels.size()) + independents;
}

std::map<CandidateId, std::string> parties_of(const PreferenceProfile& profile) {
  std::map<CandidateId, std::string> out;
  for (CandidateId c = 0; c < profile.num_candidates(); ++c) {
    if (!profile.parties()[c].empty()) out.emplace(c, profile.parties()[c]);
  }
  return out;
}

}  // namespace rcv
