#pragma once

// Shared test helpers: fixture loading, random profile generators and the
// brute-force oracles used to check the library independently.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rcv/ballots.hpp"
#include "rcv/random.hpp"

namespace rcv::test {

inline std::string fixture(const std::string& name) {
  return std::string(RCV_FIXTURE_DIR) + "/" + name;
}

inline Election load(const std::string& name) { return read_blt_file(fixture(name)); }

inline CandidateId id(const PreferenceProfile& p, const std::string& name) {
  auto c = p.find(name);
  if (!c) throw std::runtime_error("no candidate " + name);
  return *c;
}

inline std::vector<CandidateId> ids(const PreferenceProfile& p,
                                    std::initializer_list<const char*> names) {
  std::vector<CandidateId> out;
  for (const char* n : names) out.push_back(id(p, n));
  return out;
}

inline std::set<CandidateId> as_set(const std::vector<CandidateId>& v) {
  return {v.begin(), v.end()};
}

/// Random profile with partial rankings: n in [2, max_n], up to 12 ballot
/// types, counts in [1, 60].
inline PreferenceProfile random_partial_profile(std::uint64_t seed, int max_n = 6,
                                                bool complete = false) {
  std::mt19937_64 gen(seed);
  auto below = [&](int k) { return static_cast<int>(gen() % static_cast<std::uint64_t>(k)); };
  const int n = 2 + below(max_n - 1);
  const int types = 1 + below(12);
  std::vector<ProfileEntry> entries;
  for (int t = 0; t < types; ++t) {
    std::vector<CandidateId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), CandidateId{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    const int len = complete ? n : 1 + below(n);
    perm.resize(static_cast<std::size_t>(len));
    entries.push_back({Ballot{perm, Rational(1)}, 1 + below(60)});
  }
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) names.push_back(std::string(1, static_cast<char>('A' + k)));
  return PreferenceProfile(names, entries);
}

/// One ranking per voter, expanded from the profile's counts.
inline std::vector<std::vector<CandidateId>> expand_voters(const PreferenceProfile& p) {
  std::vector<std::vector<CandidateId>> voters;
  for (const ProfileEntry& e : p.entries()) {
    for (std::int64_t k = 0; k < e.count; ++k) voters.push_back(e.ballot.ranking);
  }
  return voters;
}

/// Head-to-head counts by scanning each voter's ballot for which of the two
/// candidates appears first (an unranked candidate never appears).
inline std::int64_t oracle_prefers(const PreferenceProfile& p, CandidateId a, CandidateId b) {
  std::int64_t count = 0;
  for (const auto& ballot : expand_voters(p)) {
    for (CandidateId c : ballot) {
      if (c == a) {
        ++count;
        break;
      }
      if (c == b) break;
    }
  }
  return count;
}

/// All compositions of `v` into `parts` nonnegative integers.
inline std::vector<std::vector<std::int64_t>> compositions(std::int64_t v, int parts) {
  if (parts == 1) return {{v}};
  std::vector<std::vector<std::int64_t>> out;
  for (std::int64_t first = 0; first <= v; ++first) {
    for (auto rest : compositions(v - first, parts - 1)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  }
  return out;
}

}  // namespace rcv::test
