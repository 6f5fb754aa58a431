#pragma once

#include <string>
#include <vector>

namespace a0c {

/// Learning-curve figure: x = cumulative accounted environment steps,
/// y = episode return smoothed by a trailing mean over 10 episodes. One
/// series per input CSV (mean over repetitions with a shaded min-max
/// band); legend labels are derived from each file's n_trace.
void emit_plot(const std::vector<std::string>& csv_paths,
               const std::string& out_path);

/// Same, returning the SVG document.
std::string plot_svg(const std::vector<std::string>& csv_paths);

}  // namespace a0c
