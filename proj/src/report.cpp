#include "rcv/report.hpp"

#include <cstdio>
#include <sstream>

namespace rcv {

using nlohmann::json;

json exact_json(const Rational& value) {
  return {{"display", to_decimal(value, 5)},
          {"num", value.get_num().get_str()},
          {"den", value.get_den().get_str()}};
}

namespace {

std::string event_type(EventKind k) {
  switch (k) {
    case EventKind::Eliminated:
      return "eliminated";
    case EventKind::Elected:
      return "elected";
    case EventKind::ExhaustedDelta:
      return "exhausted";
  }
  return "unknown";
}

std::string resolution_name(TieResolution r) {
  switch (r) {
    case TieResolution::EarlierRound:
      return "earlier_round";
    case TieResolution::Lot:
      return "lot";
    case TieResolution::Inconsequential:
      return "inconsequential";
  }
  return "unknown";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string names_of(std::span<const CandidateId> ids, const PreferenceProfile& profile) {
  std::string out;
  for (CandidateId c : ids) out += (out.empty() ? "" : ", ") + profile.name(c);
  return out;
}

json to_json(const TallyOutcome& outcome, const PreferenceProfile& profile) {
  json j;
  j["schema"] = kJsonSchemaVersion;
  j["method"] = to_string(outcome.method);
  j["winners"] = json::array();
  for (CandidateId c : outcome.winners) j["winners"].push_back(profile.name(c));
  if (outcome.quota) j["quota"] = to_decimal(*outcome.quota, 5);

  j["rounds"] = json::array();
  for (std::size_t t = 0; t < outcome.tables.size(); ++t) {
    for (const Round& r : outcome.tables[t].rounds) {
      json round;
      if (outcome.method == Method::SequentialRcv) round["seat"] = t + 1;
      round["totals"] = json::object();
      round["exact"] = json::object();
      for (CandidateId c = 0; c < r.totals.size(); ++c) {
        if (!r.totals[c]) continue;
        round["totals"][profile.name(c)] = to_decimal(*r.totals[c], 5);
        round["exact"][profile.name(c)] = {{"num", r.totals[c]->get_num().get_str()},
                                           {"den", r.totals[c]->get_den().get_str()}};
      }
      round["exhausted"] = exact_json(r.exhausted);
      round["events"] = json::array();
      for (const RoundEvent& e : r.events) {
        json ev{{"type", event_type(e.kind)}};
        if (e.kind == EventKind::ExhaustedDelta) {
          ev["amount"] = exact_json(e.amount);
        } else {
          ev["candidate"] = profile.name(e.candidate);
        }
        if (e.kind == EventKind::Elected && outcome.method == Method::Stv) {
          ev["surplus"] = exact_json(e.amount);
        }
        round["events"].push_back(std::move(ev));
      }
      j["rounds"].push_back(std::move(round));
    }
  }
  j["lot_used"] = outcome.lot_used;
  j["tie_events"] = json::array();
  for (const TieEvent& t : outcome.tie_events) {
    json names = json::array();
    for (CandidateId c : t.candidates) names.push_back(profile.name(c));
    j["tie_events"].push_back({{"table", t.table},
                               {"round", t.round + 1},
                               {"candidates", names},
                               {"chosen", profile.name(t.chosen)},
                               {"resolution", resolution_name(t.resolution)}});
  }
  return j;
}

namespace {

json ratio_json(const Ratio& r) {
  return {{"percent", r.percent()}, {"count", r.count}, {"denominator", r.denominator}};
}

}  // namespace

json to_json(const SimulationReport& r) {
  const ExperimentConfig& c = r.config;
  json j;
  j["schema"] = kJsonSchemaVersion;
  j["config"] = {{"model", to_string(c.model)}, {"n", c.candidates}, {"s", c.seats},
                 {"v", c.voters},               {"runs", c.runs},    {"seed", c.seed},
                 {"workers", c.workers}};
  j["runs"] = r.runs;
  j["excluded_ties"] = r.excluded_ties;
  j["same_winners"] = ratio_json(r.same_winners());
  j["diff"] = json::array();
  for (std::size_t k = 1; k < r.diff_counts.size(); ++k) {
    j["diff"].push_back(ratio_json(r.diff(static_cast<int>(k))));
  }
  j["stv_chooses_cc"] = ratio_json(r.stv_chooses_cc());
  j["rcv_chooses_cc"] = ratio_json(r.rcv_chooses_cc());
  j["cc_exists"] = ratio_json(r.cc_exists_ratio());
  j["avg_misrep_rcv"] = ratio_json(r.avg_misrep_rcv());
  j["avg_misrep_stv"] = ratio_json(r.avg_misrep_stv());
  j["avg_maxrep_rcv"] = ratio_json(r.avg_maxrep_rcv());
  j["avg_maxrep_stv"] = ratio_json(r.avg_maxrep_stv());
  return j;
}

namespace {

json percentage_json(const Percentage& p) {
  return {{"percent", p.display()}, {"count", p.count}, {"total", p.total}};
}

}  // namespace

json to_json(const BatchResult& batch) {
  json j;
  j["schema"] = kJsonSchemaVersion;
  j["elections"] = json::array();
  for (const BatchRecord& r : batch.records) {
    json e{{"path", r.path}};
    if (r.error) {
      e["error"] = *r.error;
    } else {
      e["title"] = r.title;
      e["seats"] = r.seats;
      e["voters"] = r.voters;
      e["rcv_winners"] = r.rcv_winners;
      e["stv_winners"] = r.stv_winners;
      e["diff"] = r.diff;
      e["cc_exists"] = r.cc_exists;
      e["rcv_selects_cc"] = r.rcv_selects_cc;
      e["stv_selects_cc"] = r.stv_selects_cc;
      e["lot_used"] = r.lot_used;
      e["degrees"] = {{"seqrcv", {{"misrep", percentage_json(r.misrep_rcv)},
                                  {"maxrep", percentage_json(r.maxrep_rcv)}}},
                      {"stv", {{"misrep", percentage_json(r.misrep_stv)},
                               {"maxrep", percentage_json(r.maxrep_stv)}}}};
      if (r.parties_rcv) e["party_counts"] = {{"seqrcv", *r.parties_rcv}, {"stv", *r.parties_stv}};
    }
    j["elections"].push_back(std::move(e));
  }
  const BatchAggregate& a = batch.aggregate;
  j["aggregate"] = {{"elections", a.elections},
                    {"errors", a.errors},
                    {"differing", a.differing},
                    {"diff_counts", a.diff_counts},
                    {"cc_exists", a.cc_exists},
                    {"rcv_selects_cc", a.rcv_selects_cc},
                    {"stv_selects_cc", a.stv_selects_cc},
                    {"with_parties", a.with_parties},
                    {"stv_more_parties", a.stv_more_parties},
                    {"rcv_more_parties", a.rcv_more_parties},
                    {"stv_misrep_higher", a.stv_misrep_higher}};
  return j;
}

std::string format_rounds(const TallyOutcome& outcome, const PreferenceProfile& profile) {
  std::ostringstream out;
  std::size_t width = 9;
  for (const auto& name : profile.names()) width = std::max(width, name.size() + 2);

  for (std::size_t t = 0; t < outcome.tables.size(); ++t) {
    const RoundTable& table = outcome.tables[t];
    if (outcome.method == Method::SequentialRcv) {
      out << "Seat " << t + 1;
      if (!table.removed.empty()) out << " (removed: " << names_of(table.removed, profile) << ")";
      out << "\n";
    }
    if (table.quota) out << "Quota: " << to_decimal(*table.quota, 2) << "\n";

    auto pad = [&](std::string s, std::size_t w) {
      if (s.size() < w) s.insert(0, w - s.size(), ' ');
      return s;
    };
    out << std::string("Candidate").append(width - 9, ' ');
    for (std::size_t r = 0; r < table.rounds.size(); ++r) out << pad("R" + std::to_string(r + 1), 12);
    out << "\n";
    for (CandidateId c = 0; c < profile.num_candidates(); ++c) {
      bool shown = false;
      std::string row = profile.name(c);
      row.append(width - row.size(), ' ');
      for (const Round& r : table.rounds) {
        std::string cell;
        if (r.totals[c]) {
          shown = true;
          cell = to_decimal(*r.totals[c], 2);
          for (const RoundEvent& e : r.events) {
            if (e.candidate != c || e.kind == EventKind::ExhaustedDelta) continue;
            cell += e.kind == EventKind::Elected ? "*" : "-";
          }
        }
        row += pad(cell, 12);
      }
      if (shown) out << row << "\n";
    }
    std::string ex = "Exhausted";
    ex.append(width - ex.size(), ' ');
    for (const Round& r : table.rounds) ex += pad(to_decimal(r.exhausted, 2), 12);
    out << ex << "\n";
    if (t + 1 < outcome.tables.size()) out << "\n";
  }
  return out.str();
}

std::string comparison_csv_header() {
  return "n,s,same,diff1,diff2,stv_cc,rcv_cc,cc_exists,excluded_ties";
}

std::string comparison_csv_row(const SimulationReport& r) {
  const auto& c = r.config;
  return std::to_string(c.candidates) + "," + std::to_string(c.seats) + "," +
         fixed(r.same_winners().percent(), 3) + "," + fixed(r.diff(1).percent(), 3) + "," +
         fixed(r.diff(2).percent(), 3) + "," + fixed(r.stv_chooses_cc().percent(), 3) + "," +
         fixed(r.rcv_chooses_cc().percent(), 3) + "," + fixed(r.cc_exists_ratio().percent(), 3) +
         "," + std::to_string(r.excluded_ties);
}

std::string degrees_csv_header() { return "n,s,mis_rcv,mis_stv,max_rcv,max_stv"; }

std::string degrees_csv_row(const SimulationReport& r) {
  const auto& c = r.config;
  return std::to_string(c.candidates) + "," + std::to_string(c.seats) + "," +
         fixed(r.avg_misrep_rcv().percent(), 3) + "," + fixed(r.avg_misrep_stv().percent(), 3) +
         "," + fixed(r.avg_maxrep_rcv().percent(), 3) + "," +
         fixed(r.avg_maxrep_stv().percent(), 3);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

}  // namespace

std::string batch_csv_header() {
  return "path,title,seats,voters,rcv_winners,stv_winners,diff,cc_exists,rcv_cc,stv_cc,"
         "mis_rcv,mis_stv,max_rcv,max_stv,parties_rcv,parties_stv,lot_used,error";
}

std::string batch_csv_row(const BatchRecord& r) {
  std::string row = csv_field(r.path) + "," + csv_field(r.title) + ",";
  if (r.error) return row + ",,,,,,,,,,,,,,," + csv_field(*r.error);
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  row += std::to_string(r.seats) + "," + std::to_string(r.voters) + "," +
         csv_field(join(r.rcv_winners, ";")) + "," + csv_field(join(r.stv_winners, ";")) + "," +
         std::to_string(r.diff) + "," + (r.cc_exists ? "1" : "0") + "," +
         (r.rcv_selects_cc ? "1" : "0") + "," + (r.stv_selects_cc ? "1" : "0") + "," +
         r.misrep_rcv.display() + "," + r.misrep_stv.display() + "," + r.maxrep_rcv.display() +
         "," + r.maxrep_stv.display() + "," + opt(r.parties_rcv) + "," + opt(r.parties_stv) + "," +
         (r.lot_used ? "1" : "0") + ",";
  return row;
}

}  // namespace rcv
