#pragma once

#include <json.hpp>

#include <string>

#include "rcv/metrics.hpp"
#include "rcv/simharness.hpp"
#include "rcv/tally.hpp"

namespace rcv {

inline constexpr int kJsonSchemaVersion = 1;

/// {"display": "356.10811", "num": "131760", "den": "370"} style value.
nlohmann::json exact_json(const Rational& value);

/// method, winners, quota?, rounds[{seat?, totals, exact, exhausted, events}],
/// lot_used, tie_events. Totals use 5 fractional digits.
nlohmann::json to_json(const TallyOutcome& outcome, const PreferenceProfile& profile);

nlohmann::json to_json(const SimulationReport& report);
nlohmann::json to_json(const BatchResult& batch);

/// Candidates x rounds table, 2 decimals, '*' marks the round a candidate is
/// elected and '-' the round they are eliminated.
std::string format_rounds(const TallyOutcome& outcome, const PreferenceProfile& profile);

std::string names_of(std::span<const CandidateId> ids, const PreferenceProfile& profile);

std::string comparison_csv_header();  // n,s,same,diff1,diff2,stv_cc,rcv_cc,cc_exists,excluded_ties
std::string comparison_csv_row(const SimulationReport& report);
std::string degrees_csv_header();  // n,s,mis_rcv,mis_stv,max_rcv,max_stv
std::string degrees_csv_row(const SimulationReport& report);

std::string batch_csv_header();
std::string batch_csv_row(const BatchRecord& record);

}  // namespace rcv
