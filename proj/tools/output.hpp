#ifndef WHICHWAY_TOOLS_OUTPUT_HPP
#define WHICHWAY_TOOLS_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace whichway::cli {

inline constexpr const char* kToolName = "whichway";
inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// 12 significant digits, enough to round-trip every analytic tolerance.
std::string num12(double x);

std::uint64_t fnv1a64(const std::string& bytes);

void write_text_file(const std::string& path, const std::string& content);

/// Writes `<stem>.manifest.json` recording command, parameters, seed,
/// duration and a digest of every produced file.
void write_manifest(const std::string& out_path, const std::string& command,
                    const Json& parameters, std::uint64_t master_seed,
                    double duration_seconds, const std::vector<std::string>& outputs);

/// Replace the extension of `path` with `suffix` (e.g. ".manifest.json").
std::string with_suffix(const std::string& path, const std::string& suffix);

struct SvgSeries {
  std::string label;
  std::string color;
  bool dashed = false;
  bool dots = false;  // render markers instead of a line
  std::vector<double> x, y;
};

/// Minimal SVG line plot: axes, ticks, legend, one polyline per series.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, double x_min, double x_max,
                       double y_min, double y_max, const std::vector<SvgSeries>& series);

}  // namespace whichway::cli

#endif
