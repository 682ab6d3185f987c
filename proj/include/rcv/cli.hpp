#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rcv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `rcvtab` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `candidate,party` lines; an optional header row is skipped.
std::map<std::string, std::string> read_party_map(const std::string& path);

}  // namespace rcv
