#include "rcv/simharness.hpp"

#include <algorithm>
#include <thread>

#include "rcv/random.hpp"

namespace rcv {

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw Error("runs must be >= 1");
  if (cfg.voters < 1) throw Error("voters must be >= 1");
  if (cfg.workers < 1) throw Error("workers must be >= 1");
  if (cfg.seats < 1 || cfg.seats >= cfg.candidates) {
    throw Error("seats must satisfy 1 <= S < n");
  }
  if (cfg.candidates > kMaxSampledCandidates) {
    throw Error("at most " + std::to_string(kMaxSampledCandidates) + " candidates supported");
  }
  std::vector<std::string> warnings;
  if (cfg.candidates > 6) {
    warnings.push_back("n=" + std::to_string(cfg.candidates) +
                       " is outside the published n <= 6 grid; runtime grows with n!");
  }
  return warnings;
}

std::int64_t SimulationReport::compared() const {
  std::int64_t total = 0;
  for (auto c : diff_counts) total += c;
  return total;
}

std::int64_t SimulationReport::differing() const { return compared() - diff_counts.at(0); }

Ratio SimulationReport::diff(int k) const {
  const auto idx = static_cast<std::size_t>(k);
  return {idx < diff_counts.size() ? diff_counts[idx] : 0, compared()};
}

void SimulationReport::merge(const SimulationReport& o) {
  runs += o.runs;
  excluded_ties += o.excluded_ties;
  if (diff_counts.size() < o.diff_counts.size()) diff_counts.resize(o.diff_counts.size());
  for (std::size_t k = 0; k < o.diff_counts.size(); ++k) diff_counts[k] += o.diff_counts[k];
  cc_exists += o.cc_exists;
  cc_considered += o.cc_considered;
  stv_cc += o.stv_cc;
  rcv_cc += o.rcv_cc;
  cc_conditioned += o.cc_conditioned;
  misrep_rcv_voters += o.misrep_rcv_voters;
  misrep_stv_voters += o.misrep_stv_voters;
  maxrep_rcv_voters += o.maxrep_rcv_voters;
  maxrep_stv_voters += o.maxrep_stv_voters;
}

bool operator==(const SimulationReport& a, const SimulationReport& b) {
  auto key = [](const SimulationReport& r) {
    return std::tuple(r.runs, r.excluded_ties, r.diff_counts, r.cc_exists, r.cc_considered,
                      r.stv_cc, r.rcv_cc, r.cc_conditioned, r.misrep_rcv_voters,
                      r.misrep_stv_voters, r.maxrep_rcv_voters, r.maxrep_stv_voters);
  };
  return key(a) == key(b);
}

namespace {

bool same_set(std::vector<CandidateId> a, const Committee& sorted) {
  std::sort(a.begin(), a.end());
  return a == sorted;
}

}  // namespace

Comparison compare_methods(const Election& election, const TiePolicy& policy,
                           const TallyOptions& options) {
  Comparison c{sequential_rcv(election, policy), stv(election, policy, options)};
  const PreferenceProfile& p = election.profile();
  const int s = election.seats();
  c.diff = winner_set_diff(c.rcv.winners, c.stv.winners);
  c.committee = condorcet_committee(p, s);
  if (c.committee) {
    c.rcv_selects_cc = same_set(c.rcv.winners, *c.committee);
    c.stv_selects_cc = same_set(c.stv.winners, *c.committee);
  }
  c.misrep_rcv = degree_of_misrepresentation(p, s, c.rcv.winners);
  c.misrep_stv = degree_of_misrepresentation(p, s, c.stv.winners);
  c.maxrep_rcv = degree_of_maximal_representation(p, s, c.rcv.winners);
  c.maxrep_stv = degree_of_maximal_representation(p, s, c.stv.winners);
  return c;
}

namespace {

void run_replica(const ExperimentConfig& cfg, std::int64_t index, SimulationReport& report) {
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
  const CultureModel model{cfg.model, cfg.candidates, cfg.voters, seed};
  const Election election(sample(model), cfg.seats);
  const TiePolicy policy{TieMode::BackwardThenLot, derive_seed(seed, 1)};
  const Comparison c = compare_methods(election, policy, TallyOptions{cfg.scots_5dp});

  ++report.runs;
  ++report.cc_considered;
  if (c.committee) {
    ++report.cc_exists;
    if (!c.tied() || cfg.include_tied_in_cc) {
      ++report.cc_conditioned;
      report.rcv_cc += c.rcv_selects_cc ? 1 : 0;
      report.stv_cc += c.stv_selects_cc ? 1 : 0;
    }
  }
  if (c.tied()) {
    ++report.excluded_ties;
    return;
  }
  ++report.diff_counts.at(static_cast<std::size_t>(c.diff));
  if (c.diff > 0) {
    report.misrep_rcv_voters += c.misrep_rcv.count;
    report.misrep_stv_voters += c.misrep_stv.count;
    report.maxrep_rcv_voters += c.maxrep_rcv.count;
    report.maxrep_stv_voters += c.maxrep_stv.count;
  }
}

SimulationReport empty_report(const ExperimentConfig& cfg) {
  SimulationReport r;
  r.config = cfg;
  r.diff_counts.assign(static_cast<std::size_t>(cfg.seats) + 1, 0);
  return r;
}

}  // namespace

SimulationReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(cfg.workers, cfg.runs));
  std::vector<SimulationReport> partial(static_cast<std::size_t>(workers), empty_report(cfg));
  std::vector<std::exception_ptr> failures(partial.size());

  auto work = [&](std::int64_t w) {
    try {
      for (std::int64_t i = w; i < cfg.runs; i += workers) {
        run_replica(cfg, i, partial[static_cast<std::size_t>(w)]);
      }
    } catch (...) {
      failures[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::int64_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  SimulationReport report = empty_report(cfg);
  for (const auto& p : partial) report.merge(p);
  return report;
}

BatchResult run_batch(const std::vector<std::string>& files, const BatchOptions& options) {
  BatchResult result;
  BatchAggregate& agg = result.aggregate;
  for (const std::string& path : files) {
    BatchRecord rec;
    rec.path = path;
    try {
      Election e = read_blt_file(path);
      if (options.seats_override) e = e.with_seats(*options.seats_override);
      const PreferenceProfile& p = e.profile();
      rec.title = e.title();
      rec.seats = e.seats();
      rec.voters = p.total_voters();

      const Comparison c = compare_methods(e, options.policy, options.tally);
      for (CandidateId w : c.rcv.winners) rec.rcv_winners.push_back(p.name(w));
      for (CandidateId w : c.stv.winners) rec.stv_winners.push_back(p.name(w));
      rec.diff = c.diff;
      rec.cc_exists = c.committee.has_value();
      rec.rcv_selects_cc = c.rcv_selects_cc;
      rec.stv_selects_cc = c.stv_selects_cc;
      rec.lot_used = c.tied();
      rec.misrep_rcv = c.misrep_rcv;
      rec.misrep_stv = c.misrep_stv;
      rec.maxrep_rcv = c.maxrep_rcv;
      rec.maxrep_stv = c.maxrep_stv;

      std::map<CandidateId, std::string> parties = parties_of(p);
      for (const auto& [name, party] : options.party_map) {
        if (auto id = p.find(name)) parties[*id] = party;
      }
      const bool labelled = std::all_of(c.rcv.winners.begin(), c.rcv.winners.end(),
                                        [&](CandidateId w) { return parties.contains(w); }) &&
                            std::all_of(c.stv.winners.begin(), c.stv.winners.end(),
                                        [&](CandidateId w) { return parties.contains(w); });
      if (labelled) {
        rec.parties_rcv = party_count(c.rcv.winners, parties, options.parties);
        rec.parties_stv = party_count(c.stv.winners, parties, options.parties);
      }
    } catch (const Error& err) {
      rec.error = err.what();
    }

    if (rec.error) {
      ++agg.errors;
    } else {
      ++agg.elections;
      if (agg.diff_counts.size() <= static_cast<std::size_t>(rec.diff)) {
        agg.diff_counts.resize(static_cast<std::size_t>(rec.diff) + 1);
      }
      ++agg.diff_counts[static_cast<std::size_t>(rec.diff)];
      if (rec.diff > 0) {
        ++agg.differing;
        if (rec.misrep_stv.count > rec.misrep_rcv.count) ++agg.stv_misrep_higher;
      }
      agg.cc_exists += rec.cc_exists ? 1 : 0;
      agg.rcv_selects_cc += rec.rcv_selects_cc ? 1 : 0;
      agg.stv_selects_cc += rec.stv_selects_cc ? 1 : 0;
      if (rec.parties_rcv && rec.parties_stv) {
        ++agg.with_parties;
        agg.stv_more_parties += *rec.parties_stv > *rec.parties_rcv ? 1 : 0;
        agg.rcv_more_parties += *rec.parties_rcv > *rec.parties_stv ? 1 : 0;
      }
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace rcv
