#pragma once

#include <string>
#include <vector>

#include "soqo/experiment.hpp"

namespace soqo {

// Self-contained SVG: one line per policy over the sweep axis, with a
// shaded band from the mean-reflected 95th percentile up to the 95th
// percentile. Deterministic output (fixed palette, fixed formatting) so
// repeated runs diff clean. EmptyInput when rows is empty.
std::string emit_plot(const std::vector<ResultRow>& rows);

void write_plot_svg(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace soqo
