#include "rcv/tally.hpp"

#include <algorithm>
#include <numeric>

#include "rcv/random.hpp"

namespace rcv {

std::string to_string(Method m) {
  switch (m) {
    case Method::Irv:
      return "irv";
    case Method::SequentialRcv:
      return "seqrcv";
    case Method::Stv:
      return "stv";
  }
  return "unknown";
}

std::int64_t droop_quota(std::int64_t voters, std::int64_t seats) {
  if (voters < 1 || seats < 1) throw TallyError("quota needs voters >= 1 and seats >= 1");
  return voters / (seats + 1) + 1;
}

namespace {

constexpr std::size_t kNoHolder = static_cast<std::size_t>(-1);

/// Where one profile entry currently sits during a count.
struct BallotState {
  const ProfileEntry* entry;
  Rational weight;
  std::size_t pos;  // index into the ranking of the current holder, or kNoHolder
  CandidateId holder() const { return entry->ballot.ranking[pos]; }
};

/// Resolves ties using earlier rounds of the current table, then the lot.
class TieBreaker {
 public:
  TieBreaker(const TiePolicy& policy, TallyOutcome& out)
      : policy_(policy), engine_(make_engine(policy.seed)), out_(out) {}

  /// Picks the candidate to eliminate from `tied` (ascending ids), all of
  /// which share the lowest total in the last round of `history`.
  CandidateId pick_lowest(std::vector<CandidateId> tied, const std::vector<Round>& history,
                          std::size_t table, bool inconsequential) {
    TieEvent ev{table, history.size() - 1, tied, 0, TieResolution::EarlierRound};
    std::vector<CandidateId> pool = tied;
    if (inconsequential) {
      ev.resolution = TieResolution::Inconsequential;
      pool.resize(1);
    } else if (policy_.mode == TieMode::BackwardThenLot) {
      for (std::size_t r = history.size() - 1; r-- > 0 && pool.size() > 1;) {
        const auto& totals = history[r].totals;
        Rational low = *totals[pool.front()];
        for (CandidateId c : pool) low = std::min(low, *totals[c]);
        std::erase_if(pool, [&](CandidateId c) { return *totals[c] != low; });
      }
    }
    if (pool.size() > 1) {
      ev.resolution = TieResolution::Lot;
      out_.lot_used = true;
      pool = {pool[uniform_below(engine_, pool.size())]};
    }
    ev.chosen = pool.front();
    out_.tie_events.push_back(std::move(ev));
    return pool.front();
  }

 private:
  TiePolicy policy_;
  Engine engine_;
  TallyOutcome& out_;
};

/// Descending by current total, then by the latest earlier round where the
/// totals differ, then by id. Used only where order cannot change winners.
void order_for_election(std::vector<CandidateId>& cands, const std::vector<Rational>& current,
                        const std::vector<Round>& history) {
  std::sort(cands.begin(), cands.end(), [&](CandidateId a, CandidateId b) {
    if (current[a] != current[b]) return current[a] > current[b];
    for (std::size_t r = history.size(); r-- > 0;) {
      const auto& ta = history[r].totals[a];
      const auto& tb = history[r].totals[b];
      if (ta && tb && *ta != *tb) return *ta > *tb;
    }
    return a < b;
  });
}

std::vector<CandidateId> lowest_of(const std::vector<CandidateId>& cands,
                                   const std::vector<Rational>& totals) {
  Rational low = totals[cands.front()];
  for (CandidateId c : cands) low = std::min(low, totals[c]);
  std::vector<CandidateId> out;
  for (CandidateId c : cands) {
    if (totals[c] == low) out.push_back(c);
  }
  return out;
}

void note_exhaustion(Round& round, const std::vector<Round>& previous) {
  const Rational before = previous.empty() ? Rational(0) : previous.back().exhausted;
  if (round.exhausted != before) {
    round.events.push_back({EventKind::ExhaustedDelta, 0, round.exhausted - before});
  }
}

std::vector<BallotState> initial_states(const PreferenceProfile& p,
                                        const std::vector<char>& eligible) {
  std::vector<BallotState> states;
  states.reserve(p.entries().size());
  for (const ProfileEntry& e : p.entries()) {
    BallotState s{&e, e.ballot.weight, kNoHolder};
    for (std::size_t k = 0; k < e.ballot.ranking.size(); ++k) {
      if (eligible[e.ballot.ranking[k]]) {
        s.pos = k;
        break;
      }
    }
    states.push_back(std::move(s));
  }
  return states;
}

/// Moves `s` to its next eligible candidate. Returns false if it exhausts.
bool advance(BallotState& s, const std::vector<char>& eligible) {
  const auto& ranking = s.entry->ballot.ranking;
  for (std::size_t k = s.pos + 1; k < ranking.size(); ++k) {
    if (eligible[ranking[k]]) {
      s.pos = k;
      return true;
    }
  }
  s.pos = kNoHolder;
  return false;
}

/// Runs one IRV count and appends its table to `out`. Returns the winner.
CandidateId run_irv(const PreferenceProfile& p, TieBreaker& ties, TallyOutcome& out,
                    std::vector<CandidateId> removed) {
  const std::size_t n = p.num_candidates();
  const std::size_t table_index = out.tables.size();
  std::vector<char> continuing(n);
  for (CandidateId c : p.continuing()) continuing[c] = 1;

  std::vector<BallotState> states = initial_states(p, continuing);
  std::vector<Rational> totals(n);
  Rational exhausted;
  for (const BallotState& s : states) {
    const Rational amount = s.weight * s.entry->count;
    if (s.pos == kNoHolder) {
      exhausted += amount;
    } else {
      totals[s.holder()] += amount;
    }
  }

  RoundTable table;
  table.removed = std::move(removed);
  for (;;) {
    std::vector<CandidateId> alive;
    for (CandidateId c = 0; c < n; ++c) {
      if (continuing[c]) alive.push_back(c);
    }
    Round round;
    round.totals.resize(n);
    Rational active;
    for (CandidateId c : alive) {
      round.totals[c] = totals[c];
      active += totals[c];
    }
    round.exhausted = exhausted;
    note_exhaustion(round, table.rounds);
    if (active == 0) throw TallyError("all ballots exhausted before a winner was found");

    const CandidateId leader = *std::max_element(
        alive.begin(), alive.end(), [&](CandidateId a, CandidateId b) { return totals[a] < totals[b]; });
    if (alive.size() == 1 || totals[leader] * 2 > active) {
      round.events.push_back({EventKind::Elected, leader, Rational(0)});
      table.rounds.push_back(std::move(round));
      out.tables.push_back(std::move(table));
      return leader;
    }

    std::vector<CandidateId> tied = lowest_of(alive, totals);
    CandidateId loser = tied.front();
    table.rounds.push_back(round);
    if (tied.size() > 1) {
      // Zero-vote candidates transfer nothing, so they all go before anyone
      // holding votes no matter the order.
      const bool inconsequential = totals[tied.front()] == 0;
      loser = ties.pick_lowest(tied, table.rounds, table_index, inconsequential);
    }
    table.rounds.back().events.push_back({EventKind::Eliminated, loser, Rational(0)});

    continuing[loser] = 0;
    for (BallotState& s : states) {
      if (s.pos == kNoHolder || s.holder() != loser) continue;
      const Rational amount = s.weight * s.entry->count;
      if (advance(s, continuing)) {
        totals[s.holder()] += amount;
      } else {
        exhausted += amount;
      }
    }
    totals[loser] = 0;
  }
}

}  // namespace

TallyOutcome irv(const PreferenceProfile& profile, const TiePolicy& policy) {
  TallyOutcome out;
  out.method = Method::Irv;
  TieBreaker ties(policy, out);
  out.winners.push_back(run_irv(profile, ties, out, {}));
  return out;
}

TallyOutcome sequential_rcv(const Election& election, const TiePolicy& policy) {
  const PreferenceProfile& profile = election.profile();
  if (profile.continuing().size() < static_cast<std::size_t>(election.seats())) {
    throw TallyError("fewer continuing candidates than seats");
  }
  TallyOutcome out;
  out.method = Method::SequentialRcv;
  TieBreaker ties(policy, out);
  std::set<CandidateId> removed;
  for (int seat = 0; seat < election.seats(); ++seat) {
    std::optional<RemovalResult> reduced;
    try {
      reduced = remove_candidates(profile, removed);
    } catch (const ProfileError&) {
      throw TallyError("all ballots exhausted before seat " + std::to_string(seat + 1) +
                       " of " + std::to_string(election.seats()) + " was filled");
    }
    const CandidateId w = run_irv(reduced->profile, ties, out,
                                  std::vector<CandidateId>(removed.begin(), removed.end()));
    out.winners.push_back(w);
    removed.insert(w);
  }
  return out;
}

TallyOutcome stv(const Election& election, const TiePolicy& policy, const TallyOptions& options) {
  const PreferenceProfile& p = election.profile();
  const std::size_t n = p.num_candidates();
  const auto seats = static_cast<std::size_t>(election.seats());
  if (p.continuing().size() < seats) throw TallyError("fewer continuing candidates than seats");

  TallyOutcome out;
  out.method = Method::Stv;
  TieBreaker ties(policy, out);
  const Rational quota = make_rational(droop_quota(p.total_voters(), election.seats()));
  out.quota = quota;

  std::vector<char> hopeful(n);
  for (CandidateId c : p.continuing()) hopeful[c] = 1;
  std::vector<BallotState> states = initial_states(p, hopeful);
  std::vector<Rational> totals(n);
  std::vector<Rational> holdings(n);  // elected candidates, after their surplus left
  Rational exhausted;
  for (const BallotState& s : states) {
    const Rational amount = s.weight * s.entry->count;
    if (s.pos == kNoHolder) {
      exhausted += amount;
    } else {
      totals[s.holder()] += amount;
    }
  }

  RoundTable table;
  table.quota = quota;
  std::vector<CandidateId> elected_before;

  auto elect = [&](CandidateId c, Round& round) {
    hopeful[c] = 0;
    out.winners.push_back(c);
    const Rational surplus = totals[c] > quota ? Rational(totals[c] - quota) : Rational(0);
    round.events.push_back({EventKind::Elected, c, surplus});
  };

  // Moves every ballot held by `from` onward, scaled by `factor` (1 for an
  // elimination). Returns the total weight that left `from`.
  auto transfer = [&](CandidateId from, const std::optional<Rational>& factor) {
    Rational moved;
    for (BallotState& s : states) {
      if (s.pos == kNoHolder || s.holder() != from) continue;
      if (factor) {
        s.weight *= *factor;
        if (options.scots_5dp) s.weight = truncate_decimal(s.weight, 5);
      }
      const Rational amount = s.weight * s.entry->count;
      moved += amount;
      if (advance(s, hopeful)) {
        totals[s.holder()] += amount;
      } else {
        exhausted += amount;
      }
    }
    return moved;
  };

  for (;;) {
    std::vector<CandidateId> alive;
    for (CandidateId c = 0; c < n; ++c) {
      if (hopeful[c]) alive.push_back(c);
    }
    Round round;
    round.totals.resize(n);
    for (CandidateId c : alive) round.totals[c] = totals[c];
    round.exhausted = exhausted;
    for (CandidateId c : elected_before) round.elected_holdings += holdings[c];
    note_exhaustion(round, table.rounds);
    const std::size_t remaining = seats - out.winners.size();

    if (alive.size() <= remaining) {
      order_for_election(alive, totals, table.rounds);
      for (CandidateId c : alive) elect(c, round);
      table.rounds.push_back(std::move(round));
      break;
    }

    std::vector<CandidateId> reached;
    for (CandidateId c : alive) {
      if (totals[c] >= quota) reached.push_back(c);
    }

    if (!reached.empty()) {
      order_for_election(reached, totals, table.rounds);
      for (CandidateId c : reached) elect(c, round);
      if (out.winners.size() == seats) {
        table.rounds.push_back(std::move(round));
        break;
      }
      std::vector<CandidateId> still;
      for (CandidateId c : alive) {
        if (hopeful[c]) still.push_back(c);
      }
      if (still.size() == seats - out.winners.size()) {
        order_for_election(still, totals, table.rounds);
        for (CandidateId c : still) elect(c, round);
        table.rounds.push_back(std::move(round));
        break;
      }
      table.rounds.push_back(std::move(round));
      // `reached` is already in descending-surplus order.
      for (CandidateId c : reached) {
        const Rational factor = (totals[c] - quota) / totals[c];
        holdings[c] = totals[c] - transfer(c, factor);
        totals[c] = 0;
        elected_before.push_back(c);
      }
      continue;
    }

    std::vector<CandidateId> tied = lowest_of(alive, totals);
    CandidateId loser = tied.front();
    table.rounds.push_back(std::move(round));
    if (tied.size() > 1) {
      std::size_t positive = 0;
      for (CandidateId c : alive) positive += totals[c] > 0 ? 1 : 0;
      const bool inconsequential = totals[tied.front()] == 0 && positive >= remaining;
      loser = ties.pick_lowest(tied, table.rounds, 0, inconsequential);
    }
    table.rounds.back().events.push_back({EventKind::Eliminated, loser, Rational(0)});
    hopeful[loser] = 0;
    transfer(loser, std::nullopt);
    totals[loser] = 0;
  }

  out.tables.push_back(std::move(table));
  return out;
}

TallyOutcome tabulate(Method method, const Election& election, const TiePolicy& policy,
                      const TallyOptions& options) {
  switch (method) {
    case Method::Irv:
      return irv(election.profile(), policy);
    case Method::SequentialRcv:
      return sequential_rcv(election, policy);
    case Method::Stv:
      return stv(election, policy, options);
  }
  throw TallyError("unknown method");
}

}  // namespace rcv
