#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qwalk/cli/run_config.hpp"

namespace qwalk::cli {

/// Comment block carried by every emitted file: tool command, route and the
/// resolved config as one JSON line.
std::string provenance_header(const std::string& command, Route route, const RunConfig& run,
                              const std::string& comment = "# ");

/// n,P,P1,P2 rows after the provenance block; numbers printed with %.17g.
std::string distribution_csv(const std::string& command, const RunConfig& run, const MomentumDistribution& dist);

struct PlotSeries {
    std::string label;
    const MomentumDistribution* dist = nullptr;
};

/// Bar chart of the first series with the rest overlaid as lines. Vertical
/// grid lines every five classes and a dashed axis through n = 1/2, the
/// mirror line of the two-class ratchet.
std::string render_svg(const std::string& title, const std::vector<PlotSeries>& series,
                       const std::string& provenance);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

/// %.17g
std::string format_number(double x);

}  // namespace qwalk::cli
