#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace whichway::cli {

std::string num12(double x) {
  char b[48];
  std::snprintf(b, sizeof b, "%.12g", x);
  return b;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot reopen output file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_manifest(const std::string& out_path, const std::string& command,
                    const Json& parameters, std::uint64_t master_seed,
                    double duration_seconds, const std::vector<std::string>& outputs) {
  Json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["command"] = command;
  manifest["parameters"] = parameters;
  manifest["master_seed"] = master_seed;
  manifest["duration_seconds"] = duration_seconds;
  manifest["outputs"] = Json::array();
  for (const std::string& path : outputs) {
    const std::string bytes = read_file(path);
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    manifest["outputs"].push_back(
        {{"path", path}, {"bytes", bytes.size()}, {"fnv1a64", digest}});
  }
  write_text_file(out_path, manifest.dump(2) + "\n");
}

namespace {

struct Frame {
  double x0 = 70, y0 = 30, width = 520, height = 320;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return x0 + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return y0 + (y_max - y) / (y_max - y_min) * height; }
};

void append_ticks(std::ostringstream& svg, const Frame& f) {
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x_min + (f.x_max - f.x_min) * i / 4;
    const double y = f.y_min + (f.y_max - f.y_min) * i / 4;
    const double pxx = f.px(x), pyy = f.py(y);
    svg << "<line x1='" << pxx << "' y1='" << f.y0 + f.height << "' x2='" << pxx
        << "' y2='" << f.y0 + f.height + 5 << "' stroke='black'/>\n";
    svg << "<text x='" << pxx << "' y='" << f.y0 + f.height + 18
        << "' font-size='11' text-anchor='middle'>" << num12(x).substr(0, 6)
        << "</text>\n";
    svg << "<line x1='" << f.x0 - 5 << "' y1='" << pyy << "' x2='" << f.x0 << "' y2='"
        << pyy << "' stroke='black'/>\n";
    svg << "<text x='" << f.x0 - 8 << "' y='" << pyy + 4
        << "' font-size='11' text-anchor='end'>" << num12(y).substr(0, 6)
        << "</text>\n";
  }
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, double x_min, double x_max,
                       double y_min, double y_max,
                       const std::vector<SvgSeries>& series) {
  Frame f;
  f.x_min = x_min;
  f.x_max = x_max;
  f.y_min = y_min;
  f.y_max = y_max;

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='660' "
         "height='420'>\n";
  svg << "<rect x='" << f.x0 << "' y='" << f.y0 << "' width='" << f.width
      << "' height='" << f.height << "' fill='white' stroke='black'/>\n";
  svg << "<text x='" << f.x0 + f.width / 2 << "' y='18' font-size='14' "
      << "text-anchor='middle'>" << title << "</text>\n";
  svg << "<text x='" << f.x0 + f.width / 2 << "' y='" << f.y0 + f.height + 38
      << "' font-size='12' text-anchor='middle'>" << x_label << "</text>\n";
  svg << "<text x='16' y='" << f.y0 + f.height / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 16 "
      << f.y0 + f.height / 2 << ")'>" << y_label << "</text>\n";
  append_ticks(svg, f);

  double legend_y = f.y0 + 14;
  for (const SvgSeries& s : series) {
    if (s.dots) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        svg << "<circle cx='" << f.px(s.x[i]) << "' cy='" << f.py(s.y[i])
            << "' r='2.2' fill='" << s.color << "'/>\n";
      }
    } else {
      svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.6'";
      if (s.dashed) svg << " stroke-dasharray='6 4'";
      svg << " points='";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        svg << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
      }
      svg << "'/>\n";
    }
    svg << "<text x='" << f.x0 + f.width - 150 << "' y='" << legend_y
        << "' font-size='12' fill='" << s.color << "'>" << s.label << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace whichway::cli
