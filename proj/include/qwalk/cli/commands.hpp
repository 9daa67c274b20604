#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qwalk/cli/run_config.hpp"

namespace qwalk::cli {

/// Parameter varied by a sweep.
enum class SweepAxis { kKick, kSteps, kFwhm };

SweepAxis parse_sweep_axis(std::string_view text);
std::string_view to_string(SweepAxis axis);

/// Route used by `analytic` when the config names the simulation: the
/// resonant formula at beta = 0 without an ensemble, the path sum otherwise.
Route analytic_route(const RunConfig& run);

/// Distribution of `route` for the run, ensemble-averaged when fwhm > 0.
MomentumDistribution compute_distribution(const RunConfig& run, Route route, unsigned threads);

/// Warns on `err` when a near-resonant result lies outside the validity
/// range (|beta| T or fwhm T above 0.1). Returns true when it warned.
bool warn_validity(const MomentumDistribution& dist, std::ostream& err);

struct CompareResult {
    double max_norm = 0.0;
    double l1 = 0.0;
    double max_norm_excluding_initial = 0.0;
    double l1_excluding_initial = 0.0;
    int argmax_n = 0;
    bool passed = false;
};

CompareResult compare_distributions(const MomentumDistribution& a, const MomentumDistribution& b,
                                    const CompareSpec& spec);

ExitCode cmd_simulate(const RunConfig& run, std::ostream& out, std::ostream& err);
ExitCode cmd_analytic(const RunConfig& run, std::ostream& out, std::ostream& err);
ExitCode cmd_compare(const RunConfig& run, std::ostream& out, std::ostream& err);
ExitCode cmd_sweep(const RunConfig& run, SweepAxis axis, const std::vector<double>& values, std::ostream& out,
                   std::ostream& err);

/// Full command line (without the program name). Maps failures to exit
/// codes: 2 configuration, 3 numerical, 4 failed comparison.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwalk::cli
