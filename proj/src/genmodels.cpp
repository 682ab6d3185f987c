#include "rcv/genmodels.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rcv/random.hpp"

namespace rcv {

std::string to_string(Culture c) { return c == Culture::IC ? "ic" : "iac"; }

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

std::vector<CandidateId> unrank_permutation(std::uint64_t index, int n) {
  std::vector<CandidateId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), CandidateId{0});
  std::vector<CandidateId> out;
  out.reserve(pool.size());
  for (int k = n; k >= 1; --k) {
    const std::uint64_t block = factorial(k - 1);
    const auto pick = static_cast<std::size_t>(index / block);
    index %= block;
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

std::vector<std::string> letter_names(int n) {
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) {
    names.push_back(k < 26 ? std::string(1, static_cast<char>('A' + k)) : "C" + std::to_string(k + 1));
  }
  return names;
}

namespace {

void check_model(const CultureModel& model, Culture expected) {
  if (model.kind != expected) throw Error("culture model kind mismatch");
  if (model.candidates < 2 || model.candidates > kMaxSampledCandidates) {
    throw Error("samplers support 2 <= n <= " + std::to_string(kMaxSampledCandidates));
  }
  if (model.voters < 1) throw Error("samplers need at least one voter");
}

/// Tallies ranking indices drawn by `draw` (called once per voter).
template <typename Draw>
PreferenceProfile collect(const CultureModel& model, Draw&& draw) {
  const std::uint64_t types = factorial(model.candidates);
  std::vector<ProfileEntry> entries;
  auto emit = [&](std::uint64_t type, std::int64_t count) {
    entries.push_back({Ballot{unrank_permutation(type, model.candidates), Rational(1)}, count});
  };
  if (types <= 40320) {
    std::vector<std::int64_t> counts(types);
    for (std::int64_t v = 0; v < model.voters; ++v) ++counts[draw(v)];
    for (std::uint64_t t = 0; t < types; ++t) {
      if (counts[t] > 0) emit(t, counts[t]);
    }
  } else {
    std::map<std::uint64_t, std::int64_t> counts;
    for (std::int64_t v = 0; v < model.voters; ++v) ++counts[draw(v)];
    for (auto [t, c] : counts) emit(t, c);
  }
  return PreferenceProfile(letter_names(model.candidates), std::move(entries));
}

}  // namespace

PreferenceProfile sample_ic(const CultureModel& model) {
  check_model(model, Culture::IC);
  Engine engine = make_engine(model.seed);
  const std::uint64_t types = factorial(model.candidates);
  return collect(model, [&](std::int64_t) { return uniform_below(engine, types); });
}

PreferenceProfile sample_iac(const CultureModel& model) {
  check_model(model, Culture::IAC);
  Engine engine = make_engine(model.seed);
  const std::uint64_t types = factorial(model.candidates);
  // Ball k of the urn beyond the initial `types` is a copy of draw k.
  std::vector<std::uint64_t> drawn;
  drawn.reserve(static_cast<std::size_t>(model.voters));
  return collect(model, [&](std::int64_t v) {
    const std::uint64_t r = uniform_below(engine, types + static_cast<std::uint64_t>(v));
    const std::uint64_t type = r < types ? r : drawn[r - types];
    drawn.push_back(type);
    return type;
  });
}

PreferenceProfile sample(const CultureModel& model) {
  return model.kind == Culture::IC ? sample_ic(model) : sample_iac(model);
}

namespace {

struct DisjointPlan {
  std::int64_t quota;
  std::int64_t leader;       // C1's first-place count
  std::int64_t base;         // C(S+1)'s first-place count; C(k) gets base + S + 1 - k
};

std::optional<DisjointPlan> plan_disjoint(int s, std::int64_t v) {
  if (s < 2 || v < 1) return std::nullopt;
  const std::int64_t quota = v / (s + 1) + 1;
  const std::int64_t step_sum = static_cast<std::int64_t>(s) * (s - 1) / 2;

  // C1's share sits just under half: the largest count that splits evenly
  // over the S-1 surplus recipients and leaves a remainder that splits into
  // S consecutive counts.
  for (std::int64_t leader = (v - 1) / 2; leader >= quota; --leader) {
    const std::int64_t rest = v - leader - step_sum;
    if (leader % (s - 1) != 0 || rest % s != 0) continue;
    const std::int64_t base = rest / s;
    if (base < 1) return std::nullopt;
    const std::int64_t top = base + s - 1;
    const bool c1_elected = leader >= quota;
    const bool others_below = top < quota;
    // Each recipient gets (leader - quota) / (s - 1) of C1's surplus.
    const bool recipients_elected = (base * (s - 1) + (leader - quota)) >= quota * (s - 1);
    // After absorbing C(S+1), C(S) must outrank every other trailing candidate.
    const bool cs_survives = 2 * base + 1 > top;
    if (c1_elected && others_below && recipients_elected && cs_survives) {
      return DisjointPlan{quota, leader, base};
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Election construct_disjoint(int seats, std::int64_t voters) {
  if (seats < 2) throw Error("construct_disjoint needs at least two seats");
  const auto plan = plan_disjoint(seats, voters);
  if (!plan) {
    throw Error("construct_disjoint(" + std::to_string(seats) + ") needs at least " +
                std::to_string(construct_disjoint_min_voters(seats)) + " voters");
  }
  const int s = seats;
  const int n = 2 * s;
  // Ids: C1 = 0, ..., C(S+1) = s; extras C(S+2)..C(2S) = s+1..2s-1.
  const auto cs = static_cast<CandidateId>(s - 1);

  auto complete = [&](std::vector<CandidateId> head) {
    for (CandidateId c = 0; c <= static_cast<CandidateId>(s); ++c) {
      if (std::find(head.begin(), head.end(), c) == head.end()) head.push_back(c);
    }
    std::vector<CandidateId> out;
    for (CandidateId c : head) {
      out.push_back(c);
      if (c == cs) {
        for (CandidateId x = static_cast<CandidateId>(s + 1); x < static_cast<CandidateId>(n); ++x) {
          out.push_back(x);
        }
      }
    }
    return out;
  };

  std::vector<CandidateId> recipients;
  for (CandidateId c = 1; c <= static_cast<CandidateId>(s); ++c) {
    if (c != cs) recipients.push_back(c);
  }

  std::vector<ProfileEntry> entries;
  for (CandidateId r : recipients) {
    entries.push_back({Ballot{complete({0, r}), Rational(1)}, plan->leader / (s - 1)});
  }
  for (CandidateId c = 1; c <= static_cast<CandidateId>(s); ++c) {
    const std::int64_t count = plan->base + s - static_cast<std::int64_t>(c);
    std::vector<CandidateId> head = c == cs ? std::vector<CandidateId>{c}
                                            : std::vector<CandidateId>{c, cs};
    entries.push_back({Ballot{complete(head), Rational(1)}, count});
  }

  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k) names.push_back("C" + std::to_string(k));
  return Election(PreferenceProfile(std::move(names), std::move(entries)), s,
                  "Disjoint winner sets, S=" + std::to_string(s));
}

std::int64_t construct_disjoint_min_voters(int seats) {
  if (seats < 2) throw Error("construct_disjoint needs at least two seats");
  for (std::int64_t v = 2 * seats;; ++v) {
    if (plan_disjoint(seats, v)) return v;
  }
}

}  // namespace rcv
