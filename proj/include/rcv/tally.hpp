#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcv/ballots.hpp"
#include "rcv/rational.hpp"

namespace rcv {

class TallyError : public Error {
 public:
  using Error::Error;
};

enum class Method { Irv, SequentialRcv, Stv };

std::string to_string(Method m);

enum class TieMode {
  BackwardThenLot,  // earlier-round totals first, lot as last resort
  LotOnly,
};

struct TiePolicy {
  TieMode mode = TieMode::BackwardThenLot;
  std::uint64_t seed = 0;
};

struct TallyOptions {
  /// Truncate every transfer value to five decimal places (Scottish rules).
  bool scots_5dp = false;
};

enum class EventKind { Eliminated, Elected, ExhaustedDelta };

struct RoundEvent {
  EventKind kind;
  CandidateId candidate = 0;  // unused for ExhaustedDelta
  Rational amount;            // surplus for Elected, newly exhausted for ExhaustedDelta

  friend bool operator==(const RoundEvent&, const RoundEvent&) = default;
};

/// One column of a votes-by-round table.
struct Round {
  /// Indexed by CandidateId; empty for candidates not shown this round.
  std::vector<std::optional<Rational>> totals;
  std::vector<RoundEvent> events;
  Rational exhausted;  // cumulative
  /// STV only: votes held by candidates elected in earlier rounds (exactly
  /// the quota each when transfers are exact).
  Rational elected_holdings;

  friend bool operator==(const Round&, const Round&) = default;
};

struct RoundTable {
  std::vector<Round> rounds;
  std::optional<Rational> quota;
  /// Candidates removed before this table started (earlier sequential seats).
  std::vector<CandidateId> removed;

  friend bool operator==(const RoundTable&, const RoundTable&) = default;
};

enum class TieResolution {
  EarlierRound,     // totals differed at an earlier round
  Lot,              // seeded draw
  Inconsequential,  // order cannot change the result; lowest index first
};

struct TieEvent {
  std::size_t table = 0;
  std::size_t round = 0;
  std::vector<CandidateId> candidates;
  CandidateId chosen = 0;
  TieResolution resolution = TieResolution::EarlierRound;

  friend bool operator==(const TieEvent&, const TieEvent&) = default;
};

struct TallyOutcome {
  Method method = Method::Irv;
  std::vector<CandidateId> winners;  // in order of election
  std::vector<RoundTable> tables;
  std::optional<Rational> quota;
  std::vector<TieEvent> tie_events;
  bool lot_used = false;

  friend bool operator==(const TallyOutcome&, const TallyOutcome&) = default;
};

/// floor(v / (s + 1)) + 1
std::int64_t droop_quota(std::int64_t voters, std::int64_t seats);

/// Instant runoff over the profile's continuing candidates. The majority
/// threshold is recomputed each round over non-exhausted weight.
TallyOutcome irv(const PreferenceProfile& profile, const TiePolicy& policy = {});

/// Seat k goes to the IRV winner of the original profile with the first k-1
/// winners removed. Throws TallyError if the ballots run out before S seats.
TallyOutcome sequential_rcv(const Election& election, const TiePolicy& policy = {});

/// Droop-quota STV with weighted inclusive (Gregory) surplus transfers.
TallyOutcome stv(const Election& election, const TiePolicy& policy = {},
                 const TallyOptions& options = {});

TallyOutcome tabulate(Method method, const Election& election, const TiePolicy& policy = {},
                      const TallyOptions& options = {});

}  // namespace rcv
