#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stillwater/config.hpp"
#include "stillwater/diagnostics.hpp"
#include "stillwater/io.hpp"

namespace stillwater {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int no_convergence = 3;
inline constexpr int verification = 4;
}  // namespace exit_code

/// eta, beta, u1, u2 and optionally div_u, curl_u.
FieldFile state_file(const State& s, const Field& beta, bool div_u = false, bool curl_u = false);
/// Inverse of state_file; throws FormatError if a required field is missing.
State read_state(const FieldFile& f);

/// Summary-table header and one row; numbers in shortest round-trip form.
std::string branch_csv_header();
std::string branch_csv_row(double kappa, const BranchPoint& p, const DiagnosticsReport& d);

/// Shortest decimal that parses back to x.
std::string format_number(double x);

struct VerifyCheck {
  std::string name;
  bool pass;
  std::string detail;
};

/// The invariant suite on the configured problem, with random data drawn
/// from cfg.seed.
std::vector<VerifyCheck> verify_suite(const RunConfig& cfg);

/// Runs one mode, writing artifacts under cfg.out and progress to log.
/// Returns one of exit_code; library errors are mapped, not rethrown.
int run(Mode mode, const RunConfig& cfg, std::ostream& log);

}  // namespace stillwater
