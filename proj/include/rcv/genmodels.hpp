#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcv/ballots.hpp"

namespace rcv {

enum class Culture { IC, IAC };

std::string to_string(Culture c);

struct CultureModel {
  Culture kind = Culture::IC;
  int candidates = 3;
  std::int64_t voters = 1001;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxSampledCandidates = 12;  // 12! still fits comfortably in 64 bits

std::uint64_t factorial(int n);

/// The `index`-th permutation of 0..n-1 in lexicographic order.
std::vector<CandidateId> unrank_permutation(std::uint64_t index, int n);

/// Candidate labels "A", "B", ... used by the samplers.
std::vector<std::string> letter_names(int n);

/// Each voter draws one of the n! complete rankings uniformly.
PreferenceProfile sample_ic(const CultureModel& model);

/// The anonymous profile (v_1..v_{n!}) is uniform over compositions of V.
/// Drawn with a Polya urn holding one ball per ranking, each draw returning
/// the ball plus one copy (a flat Dirichlet-multinomial).
PreferenceProfile sample_iac(const CultureModel& model);

PreferenceProfile sample(const CultureModel& model);

/// An election with n = 2*seats candidates C1..Cn whose STV winners
/// {C1..C(S-1), C(S+1)} are disjoint from its sequential RCV winners
/// {C(S), C(S+2)..C(2S)}. Throws Error when `voters` is too small.
Election construct_disjoint(int seats, std::int64_t voters);

/// Smallest electorate for which construct_disjoint succeeds.
std::int64_t construct_disjoint_min_voters(int seats);

}  // namespace rcv
