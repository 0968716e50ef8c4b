#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "pgcubic/cli/config.hpp"
#include "pgcubic/cli/output.hpp"

namespace pgcubic::cli {

/// Parses "RE", "RE+IMi" or "IMi" (e.g. "0.2+0.1i", "-0.3-0.4i", "0.5").
std::complex<double> parse_complex(const std::string& text);

/// Comma-separated list of times.
std::vector<double> parse_time_list(const std::string& text);

int cmd_classify(std::complex<double> a2, double a3, const RunConfig& config, std::ostream& out);
int cmd_evolve(std::complex<double> a2, double a3, const std::vector<double>& times,
               const RunConfig& config, std::ostream& out);
int cmd_region_scan(double s, const RunConfig& config, std::ostream& out);
int cmd_boundary(double s, int n, const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

/// Full argv-level entry point.  Exit codes: 0 success, 1 verification
/// failure, 2 usage/config error, 3 domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgcubic::cli
