#include <doctest.h>

#include "rcv/genmodels.hpp"
#include "rcv/report.hpp"
#include "rcv/tally.hpp"
#include "support.hpp"

using namespace rcv;
using rcv::test::as_set;
using rcv::test::id;
using rcv::test::ids;
using rcv::test::load;

namespace {

Rational q(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }

const Rational& total(const Round& r, CandidateId c) {
  REQUIRE(r.totals.at(c).has_value());
  return *r.totals[c];
}

/// Plain IRV over one integer count per voter. Returns nothing whenever the
/// lowest total is shared, so only tie-free counts are compared.
std::optional<CandidateId> oracle_irv(const PreferenceProfile& p) {
  const auto voters = rcv::test::expand_voters(p);
  std::set<CandidateId> alive;
  for (CandidateId c : p.continuing()) alive.insert(c);
  for (;;) {
    std::map<CandidateId, std::int64_t> count;
    for (CandidateId c : alive) count[c] = 0;
    std::int64_t active = 0;
    for (const auto& ballot : voters) {
      for (CandidateId c : ballot) {
        if (alive.count(c)) {
          ++count[c];
          ++active;
          break;
        }
      }
    }
    for (const auto& [c, k] : count) {
      if (2 * k > active || alive.size() == 1) return c;
    }
    std::int64_t low = active + 1;
    for (const auto& [c, k] : count) low = std::min(low, k);
    std::vector<CandidateId> lowest;
    for (const auto& [c, k] : count) {
      if (k == low) lowest.push_back(c);
    }
    if (lowest.size() > 1) return std::nullopt;
    alive.erase(lowest.front());
  }
}

/// Seat-count, event-shape and conservation checks shared by every method.
void check_audit(const TallyOutcome& r, const PreferenceProfile& p, std::size_t seats) {
  CHECK(r.winners.size() == seats);
  CHECK(as_set(r.winners).size() == seats);
  bool lot = false;
  for (const TieEvent& t : r.tie_events) lot |= t.resolution == TieResolution::Lot;
  CHECK(lot == r.lot_used);

  for (const RoundTable& table : r.tables) {
    Rational base = p.total_weight();
    if (r.method == Method::SequentialRcv) {
      base = remove_candidates(p, {table.removed.begin(), table.removed.end()}).profile.total_weight();
    }
    std::vector<std::optional<Rational>> last(p.num_candidates());
    for (const Round& round : table.rounds) {
      Rational sum = round.exhausted + round.elected_holdings;
      for (const auto& t : round.totals) {
        if (t) sum += *t;
      }
      CHECK(sum == base);

      int eliminated = 0, elected = 0;
      for (const RoundEvent& e : round.events) {
        eliminated += e.kind == EventKind::Eliminated;
        elected += e.kind == EventKind::Elected;
      }
      CHECK(((eliminated == 1 && elected == 0) || (eliminated == 0 && elected >= 1)));

      if (r.method != Method::Stv) {
        CHECK(round.elected_holdings == 0);
        for (CandidateId c = 0; c < p.num_candidates(); ++c) {
          if (last[c] && round.totals[c]) CHECK(*round.totals[c] >= *last[c]);
          last[c] = round.totals[c];
        }
      }
    }
  }
}

PreferenceProfile scaled(const PreferenceProfile& p, std::int64_t k) {
  std::vector<ProfileEntry> entries = p.entries();
  for (ProfileEntry& e : entries) e.count *= k;
  return PreferenceProfile(p.names(), entries, p.parties(), p.withdrawn());
}

/// Splits every entry with count > 1 into two entries and reverses the order.
PreferenceProfile split(const PreferenceProfile& p) {
  std::vector<ProfileEntry> entries;
  for (const ProfileEntry& e : p.entries()) {
    if (e.count > 1) {
      entries.push_back({e.ballot, e.count / 2});
      entries.push_back({e.ballot, e.count - e.count / 2});
    } else {
      entries.push_back(e);
    }
  }
  std::reverse(entries.begin(), entries.end());
  return PreferenceProfile(p.names(), entries, p.parties(), p.withdrawn());
}

}  // namespace

TEST_CASE("Droop quota") {
  CHECK(droop_quota(10000, 2) == 3334);
  CHECK(droop_quota(10000, 4) == 2001);
  CHECK(droop_quota(378, 2) == 127);
  CHECK(droop_quota(1, 1) == 1);
  CHECK_THROWS_AS(droop_quota(0, 1), TallyError);
}

TEST_CASE("IRV on the four-candidate example") {
  const Election e = load("table1.blt");
  const PreferenceProfile& p = e.profile();
  const auto [a, b, c, d] = std::tuple{id(p, "A"), id(p, "B"), id(p, "C"), id(p, "D")};
  const TallyOutcome r = irv(p);
  CHECK(r.winners == std::vector<CandidateId>{c});
  REQUIRE(r.tables.size() == 1);
  const auto& rounds = r.tables[0].rounds;
  REQUIRE(rounds.size() == 3);
  CHECK(total(rounds[0], a) == 3700);
  CHECK(total(rounds[1], a) == 3700);
  CHECK(total(rounds[2], a) == 3700);
  CHECK(total(rounds[0], b) == 1801);
  CHECK_FALSE(rounds[1].totals[b].has_value());
  CHECK(total(rounds[0], c) == 2498);
  CHECK(total(rounds[1], c) == 3399);
  CHECK(total(rounds[2], c) == 4000);
  CHECK(total(rounds[0], d) == 2001);
  CHECK(total(rounds[1], d) == 2901);
  CHECK(rounds[2].exhausted == 2300);
  CHECK(rounds[0].events == std::vector<RoundEvent>{{EventKind::Eliminated, b, q(0)}});
  CHECK_FALSE(r.quota.has_value());
  CHECK_FALSE(r.lot_used);
  check_audit(r, p, 1);
}

TEST_CASE("IRV on the five-candidate construction") {
  const Election e = load("table4.blt");
  const PreferenceProfile& p = e.profile();
  const TallyOutcome r = irv(p);
  CHECK(r.winners == std::vector<CandidateId>{id(p, "C4")});
  const Round& last = r.tables[0].rounds.back();
  CHECK(total(last, id(p, "C4")) == 5002);
  CHECK(total(last, id(p, "C1")) == 4998);
  check_audit(r, p, 1);
}

TEST_CASE("IRV with one candidate") {
  const PreferenceProfile p({"Solo"}, {{Ballot{{0}}, 3}});
  const TallyOutcome r = irv(p);
  CHECK(r.winners == std::vector<CandidateId>{0});
  CHECK(r.tables[0].rounds.size() == 1);
}

TEST_CASE("sequential RCV on the four-candidate example") {
  const Election e = load("table1.blt");
  const PreferenceProfile& p = e.profile();
  const TallyOutcome two = sequential_rcv(e.with_seats(2));
  CHECK(two.winners == ids(p, {"C", "D"}));
  REQUIRE(two.tables.size() == 2);
  const auto& seat2 = two.tables[1].rounds;
  CHECK(two.tables[1].removed == ids(p, {"C"}));
  REQUIRE(seat2.size() == 2);
  CHECK(seat2[0].events.front() == RoundEvent{EventKind::Eliminated, id(p, "B"), q(0)});
  CHECK(total(seat2[0], id(p, "B")) == 2299);
  CHECK(total(seat2[1], id(p, "D")) == 5399);
  CHECK(seat2[1].events.back().kind == EventKind::Elected);
  CHECK(seat2[1].events.back().candidate == id(p, "D"));
  check_audit(two, p, 2);

  const TallyOutcome three = sequential_rcv(e.with_seats(3));
  CHECK(three.winners == ids(p, {"C", "D", "A"}));
  check_audit(three, p, 3);
}

TEST_CASE("sequential RCV in Genola") {
  const Election e = load("genola.blt");
  const PreferenceProfile& p = e.profile();
  const TallyOutcome r = sequential_rcv(e);
  CHECK(r.winners == ids(p, {"Robison", "Lundberg"}));
  const auto& seat2 = r.tables[1].rounds;
  REQUIRE(seat2.size() == 1);
  CHECK(total(seat2[0], id(p, "Hughes")) == 179);
  CHECK(total(seat2[0], id(p, "Lundberg")) == 184);
  check_audit(r, p, 2);
}

TEST_CASE("sequential RCV runs out of ballots") {
  const Election e(PreferenceProfile({"A", "B", "C"}, {{Ballot{{0}}, 10}}), 2);
  CHECK_THROWS_AS(sequential_rcv(e), TallyError);
}

TEST_CASE("STV on the four-candidate example") {
  const Election e = load("table1.blt");
  const PreferenceProfile& p = e.profile();
  const auto [a, b, c, d] = std::tuple{id(p, "A"), id(p, "B"), id(p, "C"), id(p, "D")};
  const TallyOutcome r = stv(e);
  CHECK(r.winners == std::vector<CandidateId>{a, b});
  CHECK(*r.quota == 3334);
  const auto& rounds = r.tables[0].rounds;
  REQUIRE(rounds.size() == 3);
  CHECK(total(rounds[0], a) == 3700);
  CHECK(rounds[0].events == std::vector<RoundEvent>{{EventKind::Elected, a, q(366)}});

  // 3600 ballots pass to B and 100 to C at 366/3700 each
  CHECK(total(rounds[1], b) == q(1801) + q(3600 * 366, 3700));
  CHECK(total(rounds[1], c) == q(2498) + q(100 * 366, 3700));
  CHECK(total(rounds[1], d) == 2001);
  CHECK(rounds[1].elected_holdings == 3334);
  CHECK(rounds[1].events == std::vector<RoundEvent>{{EventKind::Eliminated, d, q(0)}});
  CHECK(to_decimal(q(3600 * 366, 3700), 2) == "356.11");
  CHECK(to_decimal(q(100 * 366, 3700), 2) == "9.89");

  const Rational b_final = q(1801) + q(1400) + q(3600 * 366, 3700);
  CHECK(total(rounds[2], b) == b_final);
  CHECK(to_decimal(b_final, 2) == "3557.11");
  CHECK(rounds[2].events.front().kind == EventKind::Elected);
  CHECK(rounds[2].events.front().candidate == b);
  check_audit(r, p, 2);
}

TEST_CASE("STV on the five-candidate construction") {
  const Election e = load("table4.blt");
  const TallyOutcome r = stv(e);
  CHECK(as_set(r.winners) == as_set(ids(e.profile(), {"C1", "C2", "C3", "C5"})));
  CHECK(*r.quota == 2001);
  check_audit(r, e.profile(), 4);
}

TEST_CASE("STV in Genola") {
  const Election e = load("genola.blt");
  const PreferenceProfile& p = e.profile();
  const auto [h, l, rob] = std::tuple{id(p, "Hughes"), id(p, "Lundberg"), id(p, "Robison")};
  const TallyOutcome r = stv(e);
  CHECK(*r.quota == 127);
  CHECK(r.winners == std::vector<CandidateId>{rob, h});
  const auto& rounds = r.tables[0].rounds;
  REQUIRE(rounds.size() == 3);
  CHECK(total(rounds[0], rob) == 197);
  CHECK(rounds[0].events.front() == RoundEvent{EventKind::Elected, rob, q(70)});
  CHECK(total(rounds[1], h) == q(93) + q(86 * 70, 197));
  CHECK(total(rounds[1], l) == q(88) + q(96 * 70, 197));
  CHECK(rounds[1].exhausted == q(15 * 70, 197));
  CHECK(rounds[1].events.back() == RoundEvent{EventKind::Eliminated, l, q(0)});
  check_audit(r, p, 2);
}

TEST_CASE("sequential RCV and STV on the excellence example") {
  const Election e = load("table6.blt");
  const PreferenceProfile& p = e.profile();
  CHECK(as_set(stv(e).winners) == as_set(ids(p, {"A", "C"})));
  CHECK(as_set(sequential_rcv(e).winners) == as_set(ids(p, {"A", "B"})));
}

TEST_CASE("STV elects the last hopefuls below quota") {
  const Election e(PreferenceProfile({"A", "B", "C"},
                                     {{Ballot{{0}}, 50}, {Ballot{{1}}, 30}, {Ballot{{2}}, 20}}),
                   2);
  const TallyOutcome r = stv(e);
  CHECK(*r.quota == 34);
  CHECK(r.winners == std::vector<CandidateId>{0, 1});
  const Round& last = r.tables[0].rounds.back();
  CHECK(total(last, 1) == 30);
  CHECK(last.events.back() == RoundEvent{EventKind::Elected, 1, q(0)});
  check_audit(r, e.profile(), 2);
}

TEST_CASE("STV with simultaneous quota winners transfers the larger surplus first") {
  const Election e(PreferenceProfile({"A", "B", "C", "D"}, {{Ballot{{0, 2}}, 40},
                                                            {Ballot{{1, 3}}, 35},
                                                            {Ballot{{2}}, 10},
                                                            {Ballot{{3}}, 15}}),
                   3);
  const TallyOutcome r = stv(e);
  CHECK(*r.quota == 26);
  const auto& first = r.tables[0].rounds[0].events;
  REQUIRE(first.size() == 2);
  CHECK(first[0] == RoundEvent{EventKind::Elected, 0, q(14)});
  CHECK(first[1] == RoundEvent{EventKind::Elected, 1, q(9)});
  // C: 10 + 14, D: 15 + 9
  CHECK(total(r.tables[0].rounds[1], 2) == 24);
  CHECK(total(r.tables[0].rounds[1], 3) == 24);
  check_audit(r, e.profile(), 3);
}

TEST_CASE("STV with five-decimal truncation") {
  const Election e = load("table1.blt");
  const PreferenceProfile& p = e.profile();
  const TallyOutcome r = stv(e, {}, TallyOptions{true});
  CHECK(r.winners == ids(p, {"A", "B"}));
  CHECK(total(r.tables[0].rounds[1], id(p, "B")) == q(1801) + q(3600) * q(9891, 100000));
  check_audit(r, p, 2);

  const Election g = load("genola.blt");
  const TallyOutcome rg = stv(g, {}, TallyOptions{true});
  CHECK(rg.winners == stv(g).winners);
  // 70/197 truncates to 0.35532
  CHECK(total(rg.tables[0].rounds[1], 0) == q(93) + q(86) * q(35532, 100000));
  check_audit(rg, g.profile(), 2);
}

TEST_CASE("ties are broken by earlier rounds") {
  // round 1: A 10, B 6, C 5, D 4; round 2: B and C tie at 6, C was lower before
  const PreferenceProfile p({"A", "B", "C", "D"}, {{Ballot{{0}}, 10},
                                                   {Ballot{{1}}, 6},
                                                   {Ballot{{2, 1}}, 5},
                                                   {Ballot{{3, 2}}, 1},
                                                   {Ballot{{3}}, 3}});
  const TallyOutcome r = irv(p);
  CHECK(r.winners == std::vector<CandidateId>{1});
  REQUIRE(r.tie_events.size() == 1);
  const TieEvent& t = r.tie_events.front();
  CHECK(t.round == 1);
  CHECK(t.candidates == std::vector<CandidateId>{1, 2});
  CHECK(t.chosen == 2);
  CHECK(t.resolution == TieResolution::EarlierRound);
  CHECK_FALSE(r.lot_used);
  check_audit(r, p, 1);

  const TallyOutcome lot = irv(p, TiePolicy{TieMode::LotOnly, 5});
  CHECK(lot.lot_used);
  CHECK(lot.tie_events.front().resolution == TieResolution::Lot);
}

TEST_CASE("an unresolvable tie goes to the seeded lot") {
  const PreferenceProfile p({"A", "B"}, {{Ballot{{0}}, 5}, {Ballot{{1}}, 5}});
  std::set<CandidateId> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const TallyOutcome r = irv(p, TiePolicy{TieMode::BackwardThenLot, seed});
    CHECK(r.lot_used);
    CHECK(r == irv(p, TiePolicy{TieMode::BackwardThenLot, seed}));
    seen.insert(r.winners.front());
  }
  CHECK(seen.size() == 2);
}

TEST_CASE("zero-vote ties never use the lot") {
  const PreferenceProfile p({"A", "B", "C", "D", "E"},
                            {{Ballot{{0}}, 3}, {Ballot{{1, 0}}, 2}, {Ballot{{2, 0}}, 1}});
  const TallyOutcome r = irv(p);
  CHECK_FALSE(r.lot_used);
  REQUIRE_FALSE(r.tie_events.empty());
  CHECK(r.tie_events.front().resolution == TieResolution::Inconsequential);
  CHECK(r.tie_events.front().candidates == std::vector<CandidateId>{3, 4});
  CHECK(r.tie_events.front().chosen == 3);
  CHECK(r.winners == std::vector<CandidateId>{0});

  const Election e(PreferenceProfile({"A", "B", "C", "D", "E"},
                                     {{Ballot{{0}}, 30}, {Ballot{{1}}, 20}, {Ballot{{2}}, 10}}),
                   2);
  const TallyOutcome s = stv(e);
  CHECK_FALSE(s.lot_used);
  CHECK(s.winners == std::vector<CandidateId>{0, 1});
  check_audit(s, e.profile(), 2);
}

TEST_CASE("audit invariants on random profiles") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const PreferenceProfile p = rcv::test::random_partial_profile(seed, 7);
    CAPTURE(seed);
    check_audit(irv(p, {TieMode::BackwardThenLot, seed}), p, 1);
    for (int s = 1; s < static_cast<int>(p.num_candidates()); ++s) {
      const Election e(p, s);
      check_audit(stv(e, {TieMode::BackwardThenLot, seed}), p, static_cast<std::size_t>(s));
      check_audit(stv(e, {TieMode::BackwardThenLot, seed}, {true}), p, static_cast<std::size_t>(s));
      try {
        check_audit(sequential_rcv(e, {TieMode::BackwardThenLot, seed}), p,
                    static_cast<std::size_t>(s));
      } catch (const TallyError&) {
        // truncated profiles can run out of ballots before every seat fills
      }
    }
  }
}

TEST_CASE("IRV agrees with a direct count when no tie occurs") {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const PreferenceProfile p = rcv::test::random_partial_profile(seed, 7);
    const auto expected = oracle_irv(p);
    if (!expected) continue;
    ++compared;
    CAPTURE(seed);
    CHECK(irv(p).winners.front() == *expected);
  }
  CHECK(compared > 300);
}

TEST_CASE("all three methods agree for one seat") {
  int compared = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(i % 5);
    const PreferenceProfile p = sample_ic({Culture::IC, n, 1001, derive_seed(77, i)});
    const Election e(p, 1);
    const TiePolicy policy{TieMode::BackwardThenLot, i};
    const TallyOutcome a = irv(p, policy), b = sequential_rcv(e, policy), c = stv(e, policy);
    if (a.lot_used || b.lot_used || c.lot_used) continue;
    ++compared;
    CAPTURE(i);
    CHECK(a.winners == b.winners);
    CHECK(a.winners == c.winners);
  }
  CHECK(compared > 900);
  for (const char* f : {"table1.blt", "table4.blt", "table6.blt", "genola.blt", "ward_parties.blt"}) {
    const Election e = load(f).with_seats(1);
    CHECK(irv(e.profile()).winners == stv(e).winners);
    CHECK(irv(e.profile()).winners == sequential_rcv(e).winners);
  }
}

TEST_CASE("scaling every count leaves winners and ties unchanged") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const PreferenceProfile p = rcv::test::random_partial_profile(seed, 6);
    const PreferenceProfile p3 = scaled(p, 3);
    CAPTURE(seed);
    const TiePolicy policy{TieMode::BackwardThenLot, seed};
    const TallyOutcome a = irv(p, policy), b = irv(p3, policy);
    CHECK(a.winners == b.winners);
    CHECK(a.tie_events == b.tie_events);
    if (p.num_candidates() > 2) {
      const Election e(p, 2), e3(p3, 2);
      try {
        const TallyOutcome sa = sequential_rcv(e, policy), sb = sequential_rcv(e3, policy);
        CHECK(sa.winners == sb.winners);
        CHECK(sa.tie_events == sb.tie_events);
      } catch (const TallyError&) {
        CHECK_THROWS_AS(sequential_rcv(e3, policy), TallyError);
      }
    }
  }
  // The integer Droop quota does not scale exactly (floor(kV/(S+1)) + 1 is
  // not k times floor(V/(S+1)) + 1), so STV is checked on the fixtures only.
  const Election e = load("table1.blt");
  for (std::int64_t k : {2, 3, 7}) {
    const Election ek(scaled(e.profile(), k), 2);
    CHECK(stv(ek).winners == stv(e).winners);
    CHECK(sequential_rcv(ek).winners == sequential_rcv(e).winners);
    CHECK(stv(ek).tie_events == stv(e).tie_events);
  }
}

TEST_CASE("merged and split profiles tabulate identically") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const PreferenceProfile p = rcv::test::random_partial_profile(seed, 6);
    const TiePolicy policy{TieMode::BackwardThenLot, seed};
    const int s = 1 + static_cast<int>(seed % (p.num_candidates() - 1));
    CAPTURE(seed);
    for (const PreferenceProfile& other : {p.merged(), split(p)}) {
      CHECK(irv(other, policy).winners == irv(p, policy).winners);
      const TallyOutcome a = stv(Election(other, s), policy), b = stv(Election(p, s), policy);
      CHECK(a.winners == b.winners);
      CHECK(a.tables == b.tables);
    }
  }
}

TEST_CASE("tabulation is deterministic") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PreferenceProfile p = rcv::test::random_partial_profile(seed, 6);
    const Election e(p, 1 + static_cast<int>(seed % (p.num_candidates() - 1)));
    for (Method m : {Method::Irv, Method::Stv}) {
      CHECK(tabulate(m, e, {TieMode::BackwardThenLot, 9}) ==
            tabulate(m, e, {TieMode::BackwardThenLot, 9}));
    }
  }
}

TEST_CASE("JSON view of an STV count") {
  const Election e = load("table1.blt");
  const TallyOutcome r = stv(e);
  const nlohmann::json j = to_json(r, e.profile());
  CHECK(j["schema"] == kJsonSchemaVersion);
  CHECK(j["method"] == "stv");
  CHECK(j["winners"] == nlohmann::json::array({"A", "B"}));
  CHECK(j["quota"] == "3334.00000");
  CHECK(j["rounds"][1]["totals"]["B"] == "2157.10811");
  CHECK(j["rounds"][1]["exact"]["B"]["num"] == "79813");
  CHECK(j["rounds"][1]["exact"]["B"]["den"] == "37");
  CHECK(j["rounds"][0]["events"][0]["surplus"]["display"] == "366.00000");
  CHECK(j["lot_used"] == false);
  CHECK(nlohmann::json::parse(j.dump()) == j);
}

TEST_CASE("round table text") {
  const Election e = load("table1.blt");
  const std::string text = format_rounds(stv(e), e.profile());
  CHECK(text.find("Quota: 3334.00") != std::string::npos);
  CHECK(text.find("3557.11*") != std::string::npos);
  CHECK(text.find("2001.00-") != std::string::npos);
  const std::string seq = format_rounds(sequential_rcv(e), e.profile());
  CHECK(seq.find("Seat 2 (removed: C)") != std::string::npos);
  CHECK(seq.find("5399.00*") != std::string::npos);
}
