#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcv/rational.hpp"

namespace rcv {

/// Zero-based candidate index, stable for the lifetime of an election.
using CandidateId = std::uint32_t;

/// Base for all domain errors (bad input, infeasible requests).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProfileError : public Error {
 public:
  using Error::Error;
};

struct Ballot {
  std::vector<CandidateId> ranking;
  Rational weight{1};

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

struct ProfileEntry {
  Ballot ballot;
  std::int64_t count = 1;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// A multiset of (possibly partial) rankings over candidates 0..n-1.
///
/// Immutable once built. Candidates can be marked withdrawn (see
/// remove_candidates); withdrawn ids keep their slot so ids never shift.
class PreferenceProfile {
 public:
  /// Throws ProfileError unless every ranking is non-empty, duplicate-free and
  /// in range, every count is >= 1, every weight >= 0, and V >= 1.
  PreferenceProfile(std::vector<std::string> names, std::vector<ProfileEntry> entries,
                    std::vector<std::string> parties = {},
                    std::vector<bool> withdrawn = {});

  std::size_t num_candidates() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(CandidateId c) const { return names_.at(c); }
  /// Party label per candidate; empty string when unknown.
  const std::vector<std::string>& parties() const { return parties_; }
  const std::vector<ProfileEntry>& entries() const { return entries_; }
  const std::vector<bool>& withdrawn() const { return withdrawn_; }
  bool is_withdrawn(CandidateId c) const { return withdrawn_.at(c); }

  /// Non-withdrawn candidates, ascending.
  std::vector<CandidateId> continuing() const;
  std::int64_t total_voters() const { return total_voters_; }
  Rational total_weight() const;
  std::optional<CandidateId> find(std::string_view name) const;

  /// Entries with identical ballots merged, in first-appearance order.
  PreferenceProfile merged() const;

  /// Same ballots (up to merging) and same candidate metadata.
  bool equivalent(const PreferenceProfile& other) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> parties_;
  std::vector<ProfileEntry> entries_;
  std::vector<bool> withdrawn_;
  std::int64_t total_voters_ = 0;
};

/// A profile plus a seat count, 1 <= seats < n.
class Election {
 public:
  Election(PreferenceProfile profile, int seats, std::string title = {});

  const PreferenceProfile& profile() const { return profile_; }
  int seats() const { return seats_; }
  const std::string& title() const { return title_; }

  Election with_seats(int seats) const { return Election(profile_, seats, title_); }

 private:
  PreferenceProfile profile_;
  int seats_;
  std::string title_;
};

struct RemovalResult {
  PreferenceProfile profile;
  std::int64_t dropped = 0;  // voters whose ballots became empty
};

/// Deletes `removed` from every ranking (survivor order kept), drops ballots
/// left empty and marks the ids withdrawn. Throws ProfileError when no
/// candidate or no ballot would survive.
RemovalResult remove_candidates(const PreferenceProfile& profile,
                                const std::set<CandidateId>& removed);

struct FirstPlaceTotals {
  std::map<CandidateId, Rational> totals;  // one key per continuing candidate
  Rational exhausted;
};

/// Each ballot's weight*count goes to its highest-ranked continuing
/// candidate, or to `exhausted` if it ranks none of them.
FirstPlaceTotals first_place_totals(const PreferenceProfile& profile,
                                    const std::set<CandidateId>& continuing);

// ---------------------------------------------------------------------------
// BLT files

enum class BltErrorKind {
  MalformedHeader,
  MalformedBallot,
  DuplicateCandidate,
  CandidateOutOfRange,
  MissingSentinel,
  ExplicitTie,
  EmptyRanking,
  SeatsOutOfRange,
  MissingNames,
  EmptyProfile,
};

class BltError : public Error {
 public:
  BltError(BltErrorKind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  BltErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  BltErrorKind kind_;
  std::size_t line_;
};

Election parse_blt(std::string_view text);
std::string serialize_blt(const Election& election);

Election read_blt_file(const std::string& path);

}  // namespace rcv
