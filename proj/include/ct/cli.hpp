#ifndef CT_CLI_HPP
#define CT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ct/lattice.hpp"

namespace ct {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;

struct RunConfig {
  std::string command;
  std::string seed_file;
  std::string diagram_file;  // scatter renders it, verify checks it instead of completing
  std::string out;           // empty: write to the output stream
  Int order = 4;
  std::vector<IntVector> points;
  std::optional<IntVector> target;
  std::string format = "json";
  std::uint64_t rng_seed = 1;
  int trials = 20;
  bool check_tropical = false;
  Index index = 1;  // 1-based, as in seed files
};

/// "1,0;0,1" -> {(1,0), (0,1)}.
std::vector<IntVector> parse_points(const std::string& text);

/// Runs one command. Outputs go to --out (written through a temporary file and renamed) or
/// to out; diagnostics go to err. Returns kExitOk, kExitPropertyFailure or kExitInputError.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ct

#endif  // CT_CLI_HPP
