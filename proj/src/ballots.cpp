#include "rcv/ballots.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace rcv {

// ---------------------------------------------------------------------------
// PreferenceProfile

PreferenceProfile::PreferenceProfile(std::vector<std::string> names,
                                     std::vector<ProfileEntry> entries,
                                     std::vector<std::string> parties,
                                     std::vector<bool> withdrawn)
    : names_(std::move(names)),
      parties_(std::move(parties)),
      entries_(std::move(entries)),
      withdrawn_(std::move(withdrawn)) {
  const std::size_t n = names_.size();
  if (n == 0) throw ProfileError("profile has no candidates");
  if (parties_.empty()) parties_.assign(n, "");
  if (withdrawn_.empty()) withdrawn_.assign(n, false);
  if (parties_.size() != n) throw ProfileError("party list size does not match candidates");
  if (withdrawn_.size() != n) throw ProfileError("withdrawn mask size does not match candidates");

  std::vector<bool> seen(n);
  for (const ProfileEntry& e : entries_) {
    if (e.count < 1) throw ProfileError("ballot count must be >= 1");
    if (e.ballot.weight < 0) throw ProfileError("ballot weight must be >= 0");
    if (e.ballot.ranking.empty()) throw ProfileError("empty ranking");
    std::fill(seen.begin(), seen.end(), false);
    for (CandidateId c : e.ballot.ranking) {
      if (c >= n) throw ProfileError("candidate index " + std::to_string(c) + " out of range");
      if (seen[c]) throw ProfileError("candidate " + names_[c] + " ranked twice");
      if (withdrawn_[c]) throw ProfileError("withdrawn candidate " + names_[c] + " ranked");
      seen[c] = true;
    }
    total_voters_ += e.count;
  }
  if (total_voters_ < 1) throw ProfileError("profile has no voters");
}

std::vector<CandidateId> PreferenceProfile::continuing() const {
  std::vector<CandidateId> out;
  for (CandidateId c = 0; c < num_candidates(); ++c) {
    if (!withdrawn_[c]) out.push_back(c);
  }
  return out;
}

Rational PreferenceProfile::total_weight() const {
  Rational sum;
  for (const ProfileEntry& e : entries_) sum += e.ballot.weight * e.count;
  return sum;
}

std::optional<CandidateId> PreferenceProfile::find(std::string_view name) const {
  for (CandidateId c = 0; c < num_candidates(); ++c) {
    if (names_[c] == name) return c;
  }
  return std::nullopt;
}

PreferenceProfile PreferenceProfile::merged() const {
  std::map<std::pair<std::vector<CandidateId>, std::string>, std::size_t> index;
  std::vector<ProfileEntry> out;
  for (const ProfileEntry& e : entries_) {
    auto key = std::make_pair(e.ballot.ranking, e.ballot.weight.get_str());
    auto [it, inserted] = index.try_emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back(e);
    } else {
      out[it->second].count += e.count;
    }
  }
  return PreferenceProfile(names_, std::move(out), parties_, withdrawn_);
}

bool PreferenceProfile::equivalent(const PreferenceProfile& other) const {
  if (names_ != other.names_ || parties_ != other.parties_ || withdrawn_ != other.withdrawn_) {
    return false;
  }
  auto canonical = [](const PreferenceProfile& p) {
    std::vector<std::tuple<std::vector<CandidateId>, std::string, std::int64_t>> rows;
    const PreferenceProfile m = p.merged();
    for (const ProfileEntry& e : m.entries()) {
      rows.emplace_back(e.ballot.ranking, e.ballot.weight.get_str(), e.count);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  return canonical(*this) == canonical(other);
}

// ---------------------------------------------------------------------------
// Election

Election::Election(PreferenceProfile profile, int seats, std::string title)
    : profile_(std::move(profile)), seats_(seats), title_(std::move(title)) {
  const auto n = static_cast<int>(profile_.num_candidates());
  if (seats_ < 1 || seats_ >= n) {
    throw ProfileError("seats must satisfy 1 <= S < n (S=" + std::to_string(seats_) +
                       ", n=" + std::to_string(n) + ")");
  }
}

// ---------------------------------------------------------------------------
// Profile transformations

RemovalResult remove_candidates(const PreferenceProfile& profile,
                                const std::set<CandidateId>& removed) {
  const std::size_t n = profile.num_candidates();
  std::vector<bool> withdrawn = profile.withdrawn();
  for (CandidateId c : removed) {
    if (c >= n) throw ProfileError("cannot remove unknown candidate " + std::to_string(c));
    withdrawn[c] = true;
  }
  if (std::all_of(withdrawn.begin(), withdrawn.end(), [](bool w) { return w; })) {
    throw ProfileError("cannot remove every candidate");
  }

  std::vector<ProfileEntry> entries;
  entries.reserve(profile.entries().size());
  std::int64_t dropped = 0;
  for (const ProfileEntry& e : profile.entries()) {
    ProfileEntry kept{Ballot{{}, e.ballot.weight}, e.count};
    for (CandidateId c : e.ballot.ranking) {
      if (!removed.contains(c)) kept.ballot.ranking.push_back(c);
    }
    if (kept.ballot.ranking.empty()) {
      dropped += e.count;
    } else {
      entries.push_back(std::move(kept));
    }
  }
  if (entries.empty()) throw ProfileError("removal leaves no ballots");
  return {PreferenceProfile(profile.names(), std::move(entries), profile.parties(),
                            std::move(withdrawn)),
          dropped};
}

FirstPlaceTotals first_place_totals(const PreferenceProfile& profile,
                                    const std::set<CandidateId>& continuing) {
  FirstPlaceTotals out;
  for (CandidateId c : continuing) out.totals.emplace(c, Rational(0));
  for (const ProfileEntry& e : profile.entries()) {
    const Rational amount = e.ballot.weight * e.count;
    auto it = std::find_if(e.ballot.ranking.begin(), e.ballot.ranking.end(),
                           [&](CandidateId c) { return continuing.contains(c); });
    if (it == e.ballot.ranking.end()) {
      out.exhausted += amount;
    } else {
      out.totals[*it] += amount;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// BLT

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

std::optional<std::int64_t> to_int(const std::string& tok) {
  std::int64_t v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::optional<std::string> unquote(const std::string& line) {
  const auto first = line.find_first_not_of(" \t");
  const auto last = line.find_last_not_of(" \t");
  if (first == std::string::npos || line[first] != '"' || line[last] != '"' || first == last) {
    return std::nullopt;
  }
  return line.substr(first + 1, last - first - 1);
}

std::pair<std::string, std::string> split_party(const std::string& label) {
  if (label.size() > 3 && label.back() == ')') {
    const auto open = label.rfind(" (");
    if (open != std::string::npos && open > 0) {
      return {label.substr(0, open), label.substr(open + 2, label.size() - open - 3)};
    }
  }
  return {label, ""};
}

}  // namespace

Election parse_blt(std::string_view text) {
  const std::vector<std::string> lines = split_lines(text);
  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && is_blank(lines[i])) ++i;
  };

  skip_blank();
  if (i == lines.size()) throw BltError(BltErrorKind::MalformedHeader, 1, "empty input");
  const auto header = tokens(lines[i]);
  std::optional<std::int64_t> n, seats;
  if (header.size() == 2) {
    n = to_int(header[0]);
    seats = to_int(header[1]);
  }
  if (!n || !seats || *n < 1) {
    throw BltError(BltErrorKind::MalformedHeader, i + 1, "expected '<candidates> <seats>'");
  }
  if (*seats < 1 || *seats >= *n) {
    throw BltError(BltErrorKind::SeatsOutOfRange, i + 1,
                   "seats must satisfy 1 <= S < n (S=" + std::to_string(*seats) +
                       ", n=" + std::to_string(*n) + ")");
  }
  ++i;

  std::set<CandidateId> withdrawn;
  skip_blank();
  if (i < lines.size()) {
    const auto toks = tokens(lines[i]);
    if (!toks.empty() && toks[0].size() > 1 && toks[0][0] == '-') {
      for (const auto& tok : toks) {
        auto v = to_int(tok);
        if (!v || *v >= 0) {
          throw BltError(BltErrorKind::MalformedHeader, i + 1, "bad withdrawn entry '" + tok + "'");
        }
        if (-*v > *n) {
          throw BltError(BltErrorKind::CandidateOutOfRange, i + 1,
                         "withdrawn candidate " + tok + " out of range");
        }
        withdrawn.insert(static_cast<CandidateId>(-*v - 1));
      }
      ++i;
    }
  }

  std::vector<ProfileEntry> entries;
  bool terminated = false;
  for (; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const std::size_t lineno = i + 1;
    auto toks = tokens(lines[i]);
    if (toks.size() == 1 && toks[0] == "0") {
      terminated = true;
      ++i;
      break;
    }
    if (unquote(lines[i])) {
      throw BltError(BltErrorKind::MissingSentinel, lineno, "missing '0' terminator line");
    }
    if (lines[i].find('=') != std::string::npos) {
      throw BltError(BltErrorKind::ExplicitTie, lineno, "explicit ties ('=') are not supported");
    }
    if (!toks.empty() && toks[0].front() == '(') toks.erase(toks.begin());  // ballot id
    if (toks.empty()) throw BltError(BltErrorKind::MalformedBallot, lineno, "empty ballot line");
    auto count = to_int(toks[0]);
    if (!count || *count < 1) {
      throw BltError(BltErrorKind::MalformedBallot, lineno, "ballot count must be >= 1");
    }
    if (toks.back() != "0") {
      throw BltError(BltErrorKind::MissingSentinel, lineno, "ballot line not terminated by 0");
    }
    ProfileEntry entry{Ballot{}, *count};
    std::vector<bool> seen(static_cast<std::size_t>(*n));
    for (std::size_t k = 1; k + 1 < toks.size(); ++k) {
      auto c = to_int(toks[k]);
      if (!c) {
        throw BltError(BltErrorKind::MalformedBallot, lineno, "bad candidate '" + toks[k] + "'");
      }
      if (*c < 1 || *c > *n) {
        throw BltError(BltErrorKind::CandidateOutOfRange, lineno,
                       "candidate " + toks[k] + " out of range");
      }
      const auto id = static_cast<CandidateId>(*c - 1);
      if (seen[id]) {
        throw BltError(BltErrorKind::DuplicateCandidate, lineno,
                       "candidate " + toks[k] + " ranked twice");
      }
      seen[id] = true;
      entry.ballot.ranking.push_back(id);
    }
    if (entry.ballot.ranking.empty()) {
      throw BltError(BltErrorKind::EmptyRanking, lineno, "ballot ranks no candidates");
    }
    entries.push_back(std::move(entry));
  }
  if (!terminated) {
    throw BltError(BltErrorKind::MissingSentinel, lines.size(), "missing '0' terminator line");
  }

  std::vector<std::string> names, parties;
  skip_blank();
  for (std::int64_t k = 0; k < *n; ++k, ++i) {
    std::optional<std::string> label = i < lines.size() ? unquote(lines[i]) : std::nullopt;
    if (!label) {
      throw BltError(BltErrorKind::MissingNames, std::min(i + 1, lines.size()),
                     "expected quoted name for candidate " + std::to_string(k + 1));
    }
    auto [name, party] = split_party(*label);
    names.push_back(std::move(name));
    parties.push_back(std::move(party));
  }
  std::string title;
  skip_blank();
  if (i < lines.size()) {
    auto t = unquote(lines[i]);
    if (!t) throw BltError(BltErrorKind::MissingNames, i + 1, "expected quoted election title");
    title = *t;
    ++i;
  }
  skip_blank();
  if (i < lines.size()) {
    throw BltError(BltErrorKind::MalformedBallot, i + 1, "unexpected content after title");
  }
  if (entries.empty()) throw BltError(BltErrorKind::EmptyProfile, i, "no ballots");

  // Withdrawn candidates may still appear on ballots in the file; drop them here.
  for (ProfileEntry& e : entries) {
    std::erase_if(e.ballot.ranking, [&](CandidateId c) { return withdrawn.contains(c); });
  }
  std::erase_if(entries, [](const ProfileEntry& e) { return e.ballot.ranking.empty(); });
  if (entries.empty()) throw BltError(BltErrorKind::EmptyProfile, i, "no ballots after withdrawals");
  std::vector<bool> mask(static_cast<std::size_t>(*n));
  for (CandidateId c : withdrawn) mask[c] = true;

  PreferenceProfile profile(std::move(names), std::move(entries), std::move(parties),
                            std::move(mask));
  return Election(std::move(profile), static_cast<int>(*seats), std::move(title));
}

std::string serialize_blt(const Election& election) {
  const PreferenceProfile& p = election.profile();
  std::string out;
  out += std::to_string(p.num_candidates()) + " " + std::to_string(election.seats()) + "\n";

  std::string withdrawn;
  for (CandidateId c = 0; c < p.num_candidates(); ++c) {
    if (p.is_withdrawn(c)) {
      withdrawn += (withdrawn.empty() ? "-" : " -") + std::to_string(c + 1);
    }
  }
  if (!withdrawn.empty()) out += withdrawn + "\n";

  for (const ProfileEntry& e : p.entries()) {
    if (e.ballot.weight != 1) throw ProfileError("BLT cannot encode fractional ballot weights");
    out += std::to_string(e.count);
    for (CandidateId c : e.ballot.ranking) out += " " + std::to_string(c + 1);
    out += " 0\n";
  }
  out += "0\n";
  for (CandidateId c = 0; c < p.num_candidates(); ++c) {
    out += "\"" + p.name(c);
    if (!p.parties()[c].empty()) out += " (" + p.parties()[c] + ")";
    out += "\"\n";
  }
  out += "\"" + election.title() + "\"\n";
  return out;
}

Election read_blt_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_blt(buf.str());
}

}  // namespace rcv
