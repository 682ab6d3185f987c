#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcv/ballots.hpp"
#include "rcv/genmodels.hpp"
#include "rcv/metrics.hpp"
#include "rcv/tally.hpp"

namespace rcv {

struct ExperimentConfig {
  Culture model = Culture::IC;
  int candidates = 3;
  int seats = 2;
  std::int64_t voters = 1001;
  std::int64_t runs = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Count lot-resolved runs in the Condorcet-committee columns.
  bool include_tied_in_cc = true;
  bool scots_5dp = false;
};

/// Throws Error for invalid configs; returns warnings for legal but
/// off-grid ones (n > 6).
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// A reported percentage together with the counts behind it.
struct Ratio {
  std::int64_t count = 0;
  std::int64_t denominator = 0;

  double percent() const { return denominator == 0 ? 0.0 : 100.0 * count / denominator; }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Aggregated comparison counters. Every field is an integer sum, so merging
/// partial reports in any order gives the same result.
struct SimulationReport {
  ExperimentConfig config;
  std::int64_t runs = 0;
  std::int64_t excluded_ties = 0;
  /// diff_counts[k] = non-tied runs whose winner sets differ by k candidates.
  std::vector<std::int64_t> diff_counts;
  std::int64_t cc_exists = 0;
  std::int64_t cc_considered = 0;  // denominator for cc_exists
  std::int64_t stv_cc = 0;
  std::int64_t rcv_cc = 0;
  std::int64_t cc_conditioned = 0;  // runs with a committee that entered stv_cc/rcv_cc
  /// Voter counts summed over non-tied runs with differing winner sets.
  std::int64_t misrep_rcv_voters = 0;
  std::int64_t misrep_stv_voters = 0;
  std::int64_t maxrep_rcv_voters = 0;
  std::int64_t maxrep_stv_voters = 0;

  std::int64_t compared() const;  // non-tied runs
  std::int64_t differing() const;
  Ratio same_winners() const { return {diff_counts.at(0), compared()}; }
  Ratio diff(int k) const;
  Ratio stv_chooses_cc() const { return {stv_cc, cc_conditioned}; }
  Ratio rcv_chooses_cc() const { return {rcv_cc, cc_conditioned}; }
  Ratio cc_exists_ratio() const { return {cc_exists, cc_considered}; }
  /// Average degree (in percent) over differing non-tied runs.
  Ratio avg_misrep_rcv() const { return {misrep_rcv_voters, differing() * config.voters}; }
  Ratio avg_misrep_stv() const { return {misrep_stv_voters, differing() * config.voters}; }
  Ratio avg_maxrep_rcv() const { return {maxrep_rcv_voters, differing() * config.voters}; }
  Ratio avg_maxrep_stv() const { return {maxrep_stv_voters, differing() * config.voters}; }

  void merge(const SimulationReport& other);
  friend bool operator==(const SimulationReport& a, const SimulationReport& b);
};

/// Outcome of comparing both methods on one election.
struct Comparison {
  TallyOutcome rcv;
  TallyOutcome stv;
  int diff = 0;
  std::optional<Committee> committee;
  bool rcv_selects_cc = false;
  bool stv_selects_cc = false;
  Percentage misrep_rcv, misrep_stv, maxrep_rcv, maxrep_stv;
  bool tied() const { return rcv.lot_used || stv.lot_used; }
};

Comparison compare_methods(const Election& election, const TiePolicy& policy = {},
                           const TallyOptions& options = {});

/// Replica i samples with derive_seed(cfg.seed, i). The report does not
/// depend on cfg.workers.
SimulationReport run_experiment(const ExperimentConfig& cfg);

struct BatchRecord {
  std::string path;
  std::string title;
  std::optional<std::string> error;
  int seats = 0;
  std::int64_t voters = 0;
  std::vector<std::string> rcv_winners, stv_winners;
  int diff = 0;
  bool cc_exists = false;
  bool rcv_selects_cc = false;
  bool stv_selects_cc = false;
  bool lot_used = false;
  Percentage misrep_rcv, misrep_stv, maxrep_rcv, maxrep_stv;
  std::optional<int> parties_rcv, parties_stv;
};

struct BatchAggregate {
  std::int64_t elections = 0;
  std::int64_t errors = 0;
  std::int64_t differing = 0;
  std::vector<std::int64_t> diff_counts;
  std::int64_t cc_exists = 0;
  std::int64_t rcv_selects_cc = 0;
  std::int64_t stv_selects_cc = 0;
  std::int64_t with_parties = 0;
  std::int64_t stv_more_parties = 0;
  std::int64_t rcv_more_parties = 0;
  std::int64_t stv_misrep_higher = 0;  // among differing elections
};

struct BatchResult {
  std::vector<BatchRecord> records;
  BatchAggregate aggregate;
};

struct BatchOptions {
  std::optional<int> seats_override;
  TiePolicy policy;
  TallyOptions tally;
  PartyOptions parties;
  /// Extra candidate-name -> party labels, applied on top of BLT labels.
  std::map<std::string, std::string> party_map;
};

/// Compares both methods on every file. Unreadable or invalid files are
/// recorded with an error and skipped.
BatchResult run_batch(const std::vector<std::string>& files, const BatchOptions& options = {});

}  // namespace rcv
