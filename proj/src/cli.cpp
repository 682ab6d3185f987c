#include "rcv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rcv/ballots.hpp"
#include "rcv/genmodels.hpp"
#include "rcv/metrics.hpp"
#include "rcv/report.hpp"
#include "rcv/simharness.hpp"
#include "rcv/tally.hpp"

namespace rcv {

using nlohmann::json;

std::map<std::string, std::string> read_party_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open party map " + path);
  std::map<std::string, std::string> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(path + ":" + std::to_string(lineno) + ": expected 'candidate,party'");
    }
    std::string name = line.substr(0, comma);
    std::string party = line.substr(comma + 1);
    if (lineno == 1 && name == "candidate" && party == "party") continue;
    out[name] = party;
  }
  return out;
}

namespace {

struct Options {
  std::string file;
  std::vector<std::string> files;
  std::string method;
  std::optional<int> seats;
  std::optional<int> size;
  std::optional<std::uint64_t> seed;
  bool scots_5dp = false;
  std::string model;
  int candidates = 0;
  std::int64_t voters = 1001;
  std::int64_t construct_voters = 10000;
  std::int64_t runs = 100000;
  int workers = 1;
  bool json = false;
  std::string party_map;
  bool merge_independents = false;
  std::optional<int> s_override;
  std::string output;
  bool exclude_tied_cc = false;
};

Election load(const Options& o) {
  Election e = read_blt_file(o.file);
  if (o.seats) e = e.with_seats(*o.seats);
  return e;
}

TiePolicy policy_of(const Options& o) { return TiePolicy{TieMode::BackwardThenLot, *o.seed}; }

Culture culture_of(const std::string& s) { return s == "iac" ? Culture::IAC : Culture::IC; }

json profile_json(const Election& e) {
  const PreferenceProfile& p = e.profile();
  json j{{"schema", kJsonSchemaVersion}, {"title", e.title()}, {"seats", e.seats()},
         {"candidates", p.names()}};
  j["ballots"] = json::array();
  for (const ProfileEntry& entry : p.entries()) {
    json ranking = json::array();
    for (CandidateId c : entry.ballot.ranking) ranking.push_back(p.name(c));
    j["ballots"].push_back({{"count", entry.count}, {"ranking", ranking}});
  }
  return j;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw Error("cannot write " + o.output);
  f << text;
}

int cmd_tally(const Options& o, std::ostream& out) {
  const Election e = load(o);
  const Method method = o.method == "irv"      ? Method::Irv
                        : o.method == "seqrcv" ? Method::SequentialRcv
                                               : Method::Stv;
  const TallyOutcome r = tabulate(method, e, policy_of(o), TallyOptions{o.scots_5dp});
  if (o.json) {
    out << to_json(r, e.profile()).dump(2) << "\n";
    return kExitOk;
  }
  out << "Method: " << to_string(method) << "\n";
  if (method != Method::Irv) out << "Seats: " << e.seats() << "\n";
  out << "Winners: " << names_of(r.winners, e.profile()) << "\n";
  if (r.lot_used) out << "Note: a tie was resolved by lot\n";
  out << "\n" << format_rounds(r, e.profile());
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const Election e = load(o);
  const Comparison c = compare_methods(e, policy_of(o), TallyOptions{o.scots_5dp});
  const PreferenceProfile& p = e.profile();
  if (o.json) {
    json j{{"schema", kJsonSchemaVersion},
           {"seats", e.seats()},
           {"seqrcv", to_json(c.rcv, p)["winners"]},
           {"stv", to_json(c.stv, p)["winners"]},
           {"diff", c.diff},
           {"disjoint", c.diff == e.seats()},
           {"lot_used", c.tied()}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "seqrcv: " << names_of(c.rcv.winners, p) << "\n";
  out << "stv: " << names_of(c.stv.winners, p) << "\n";
  out << "diff=" << c.diff;
  if (c.diff == 0) out << " (identical)";
  if (c.diff == e.seats()) out << " (disjoint)";
  out << "\n";
  if (c.tied()) out << "Note: a tie was resolved by lot\n";
  return kExitOk;
}

int cmd_condorcet(const Options& o, std::ostream& out) {
  const Election e = read_blt_file(o.file);
  const int size = o.size.value_or(e.seats());
  const auto committee = condorcet_committee(e.profile(), size);
  if (o.json) {
    json j{{"schema", kJsonSchemaVersion}, {"size", size}, {"committee", nullptr}};
    if (committee) {
      j["committee"] = json::array();
      for (CandidateId c : *committee) j["committee"].push_back(e.profile().name(c));
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << (committee ? names_of(*committee, e.profile()) : std::string("none")) << "\n";
  return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out) {
  const Election e = load(o);
  const PreferenceProfile& p = e.profile();
  const int s = e.seats();
  const TiePolicy policy = policy_of(o);
  const TallyOptions tally{o.scots_5dp};
  const TallyOutcome rcv = sequential_rcv(e, policy);
  const TallyOutcome stv_out = stv(e, policy, tally);

  const PairwiseMatrix wins = pairwise_matrix(p);
  json j{{"schema", kJsonSchemaVersion}, {"seats", s}, {"candidates", p.names()}};
  j["pairwise"] = json::array();
  for (Eigen::Index a = 0; a < wins.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < wins.cols(); ++b) row.push_back(wins(a, b));
    j["pairwise"].push_back(row);
  }
  const auto committee = condorcet_committee(wins, s);
  j["condorcet_committee"] = nullptr;
  if (committee) {
    j["condorcet_committee"] = json::array();
    for (CandidateId c : *committee) j["condorcet_committee"].push_back(p.name(c));
  }
  j["winners"] = {{"seqrcv", to_json(rcv, p)["winners"]}, {"stv", to_json(stv_out, p)["winners"]}};
  auto degrees = [&](const TallyOutcome& r) {
    const Percentage mis = degree_of_misrepresentation(p, s, r.winners);
    const Percentage max = degree_of_maximal_representation(p, s, r.winners);
    return json{{"misrep", mis.display()},
                {"maxrep", max.display()},
                {"misrep_count", mis.count},
                {"maxrep_count", max.count},
                {"voters", mis.total}};
  };
  j["degrees"] = {{"seqrcv", degrees(rcv)}, {"stv", degrees(stv_out)}};

  std::map<CandidateId, std::string> parties = parties_of(p);
  if (!o.party_map.empty()) {
    for (const auto& [name, party] : read_party_map(o.party_map)) {
      if (auto id = p.find(name)) parties[*id] = party;
    }
  }
  PartyOptions popts;
  popts.independents_distinct = !o.merge_independents;
  j["party_counts"] = nullptr;
  auto labelled = [&](const TallyOutcome& r) {
    return std::all_of(r.winners.begin(), r.winners.end(),
                       [&](CandidateId w) { return parties.contains(w); });
  };
  if (labelled(rcv) && labelled(stv_out)) {
    j["party_counts"] = {{"seqrcv", party_count(rcv.winners, parties, popts)},
                         {"stv", party_count(stv_out.winners, parties, popts)}};
  }
  j["lot_used"] = rcv.lot_used || stv_out.lot_used;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.model = culture_of(o.model);
  cfg.candidates = o.candidates;
  cfg.seats = *o.seats;
  cfg.voters = o.voters;
  cfg.runs = o.runs;
  cfg.seed = *o.seed;
  cfg.workers = o.workers;
  cfg.scots_5dp = o.scots_5dp;
  cfg.include_tied_in_cc = !o.exclude_tied_cc;
  for (const auto& w : validate(cfg)) err << "warning: " << w << "\n";
  const SimulationReport r = run_experiment(cfg);
  if (o.json) {
    out << to_json(r).dump(2) << "\n";
    return kExitOk;
  }
  out << comparison_csv_header() << "\n" << comparison_csv_row(r) << "\n\n";
  out << degrees_csv_header() << "\n" << degrees_csv_row(r) << "\n";
  return kExitOk;
}

int cmd_batch(const Options& o, std::ostream& out, std::ostream& err) {
  BatchOptions b;
  b.seats_override = o.s_override;
  b.policy = policy_of(o);
  b.tally.scots_5dp = o.scots_5dp;
  b.parties.independents_distinct = !o.merge_independents;
  if (!o.party_map.empty()) b.party_map = read_party_map(o.party_map);
  const BatchResult r = run_batch(o.files, b);
  for (const BatchRecord& rec : r.records) {
    if (rec.error) err << rec.path << ": " << *rec.error << "\n";
  }
  if (o.json) {
    out << to_json(r).dump(2) << "\n";
    return kExitOk;
  }
  out << batch_csv_header() << "\n";
  for (const BatchRecord& rec : r.records) out << batch_csv_row(rec) << "\n";
  const BatchAggregate& a = r.aggregate;
  err << "elections=" << a.elections << " errors=" << a.errors << " differing=" << a.differing
      << " cc_exists=" << a.cc_exists << " rcv_selects_cc=" << a.rcv_selects_cc
      << " stv_selects_cc=" << a.stv_selects_cc << "\n";
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const CultureModel model{culture_of(o.model), o.candidates, o.voters, *o.seed};
  const Election e(sample(model), o.seats.value_or(1),
                   to_string(model.kind) + " n=" + std::to_string(o.candidates) +
                       " v=" + std::to_string(o.voters) + " seed=" + std::to_string(*o.seed));
  write_output(o, o.json ? profile_json(e).dump(2) + "\n" : serialize_blt(e), out);
  return kExitOk;
}

int cmd_construct(const Options& o, std::ostream& out) {
  const Election e = construct_disjoint(*o.seats, o.construct_voters);
  write_output(o, o.json ? profile_json(e).dump(2) + "\n" : serialize_blt(e), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranked-choice tabulation: IRV, sequential RCV and STV", "rcvtab"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> methods{"irv", "seqrcv", "stv"};
  const std::vector<std::string> models{"ic", "iac"};

  auto add_json = [&](CLI::App* cmd) { cmd->add_flag("--json", o.json, "Emit JSON"); };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Seed for the lot and samplers")->required();
  };

  auto* tally = app.add_subcommand("tally", "Tabulate one election");
  tally->add_option("file", o.file, "BLT file")->required();
  tally->add_option("--method", o.method)->required()->check(CLI::IsMember(methods));
  tally->add_option("--seats", o.seats, "Override the file's seat count");
  add_seed(tally);
  tally->add_flag("--scots-5dp", o.scots_5dp, "Truncate transfer values to 5 decimals");
  add_json(tally);

  auto* compare = app.add_subcommand("compare", "Compare sequential RCV and STV winner sets");
  compare->add_option("file", o.file)->required();
  compare->add_option("--seats", o.seats);
  add_seed(compare);
  compare->add_flag("--scots-5dp", o.scots_5dp);
  add_json(compare);

  auto* condorcet = app.add_subcommand("condorcet", "Find the Condorcet committee");
  condorcet->add_option("file", o.file)->required();
  condorcet->add_option("--size", o.size, "Committee size (default: seats)");
  add_json(condorcet);

  auto* metrics = app.add_subcommand("metrics", "Pairwise matrix, committee, degrees, parties (JSON)");
  metrics->add_option("file", o.file)->required();
  metrics->add_option("--seats", o.seats);
  add_seed(metrics);
  metrics->add_flag("--scots-5dp", o.scots_5dp);
  metrics->add_option("--party-map", o.party_map, "CSV of candidate,party");
  metrics->add_flag("--merge-independents", o.merge_independents);
  add_json(metrics);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison under IC or IAC");
  simulate->add_option("--model", o.model)->required()->check(CLI::IsMember(models));
  simulate->add_option("--candidates", o.candidates)->required();
  simulate->add_option("--seats", o.seats)->required();
  simulate->add_option("--voters", o.voters)->capture_default_str();
  simulate->add_option("--runs", o.runs)->capture_default_str();
  simulate->add_option("--workers", o.workers)->capture_default_str();
  add_seed(simulate);
  simulate->add_flag("--scots-5dp", o.scots_5dp);
  simulate->add_flag("--exclude-tied-from-cc", o.exclude_tied_cc);
  add_json(simulate);

  auto* batch = app.add_subcommand("batch", "Compare both methods over many BLT files");
  batch->add_option("files", o.files);
  batch->add_option("--s-override", o.s_override, "Use this seat count for every election");
  add_seed(batch);
  batch->add_flag("--scots-5dp", o.scots_5dp);
  batch->add_option("--party-map", o.party_map);
  batch->add_flag("--merge-independents", o.merge_independents);
  add_json(batch);

  auto* generate = app.add_subcommand("generate", "Write a random IC/IAC election as BLT");
  generate->add_option("--model", o.model)->required()->check(CLI::IsMember(models));
  generate->add_option("--candidates", o.candidates)->required();
  generate->add_option("--voters", o.voters)->capture_default_str();
  generate->add_option("--seats", o.seats, "Seat count written to the header (default 1)");
  add_seed(generate);
  generate->add_option("-o,--output", o.output);
  add_json(generate);

  auto* construct = app.add_subcommand("construct", "Write an election with disjoint winner sets");
  construct->add_option("--seats", o.seats)->required();
  construct->add_option("--voters", o.construct_voters)->capture_default_str();
  construct->add_option("-o,--output", o.output);
  add_json(construct);

  std::vector<const char*> argv{"rcvtab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (tally->parsed()) return cmd_tally(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (condorcet->parsed()) return cmd_condorcet(o, out);
    if (metrics->parsed()) return cmd_metrics(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out, err);
    if (batch->parsed()) return cmd_batch(o, out, err);
    if (generate->parsed()) return cmd_generate(o, out);
    if (construct->parsed()) return cmd_construct(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace rcv
