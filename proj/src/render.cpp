#include "tidyplan/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "tidyplan/error.hpp"

namespace tidyplan {

namespace {

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();
};

Bounds scene_bounds(const SceneDescription& scene) {
  Bounds b;
  for (const auto& r : scene.receptacles()) {
    b.x0 = std::min(b.x0, r.surface.x);
    b.y0 = std::min(b.y0, r.surface.y);
    b.x1 = std::max(b.x1, r.surface.x + r.surface.w);
    b.y1 = std::max(b.y1, r.surface.y + r.surface.d);
  }
  return b;
}

std::vector<const ReceptacleSpec*> sorted_receptacles(const SceneDescription& scene) {
  std::vector<const ReceptacleSpec*> receptacles;
  for (const auto& r : scene.receptacles()) receptacles.push_back(&r);
  std::sort(receptacles.begin(), receptacles.end(),
            [](const ReceptacleSpec* a, const ReceptacleSpec* b) { return a->id < b->id; });
  return receptacles;
}

std::string xml_escaped(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_ascii(const SceneDescription& scene, const Arrangement& x,
                         int canvas_width) {
  if (canvas_width < 20) canvas_width = 20;
  const Bounds b = scene_bounds(scene);
  const double span_x = b.x1 - b.x0;
  const double span_y = b.y1 - b.y0;
  const int cols = canvas_width;
  // Terminal cells are roughly twice as tall as wide.
  const int rows =
      std::max(8, static_cast<int>(std::lround(span_y / span_x * cols * 0.5)));

  auto to_col = [&](double wx) {
    const int c = static_cast<int>(std::lround((wx - b.x0) / span_x * (cols - 1)));
    return std::clamp(c, 0, cols - 1);
  };
  auto to_row = [&](double wy) {
    // World y grows upward; rows grow downward.
    const int r = static_cast<int>(std::lround((b.y1 - wy) / span_y * (rows - 1)));
    return std::clamp(r, 0, rows - 1);
  };

  std::vector<std::string> canvas(static_cast<std::size_t>(rows), std::string(cols, ' '));
  for (const ReceptacleSpec* rec : sorted_receptacles(scene)) {
    const int c0 = to_col(rec->surface.x);
    const int c1 = to_col(rec->surface.x + rec->surface.w);
    const int r0 = to_row(rec->surface.y + rec->surface.d);
    const int r1 = to_row(rec->surface.y);
    for (int c = c0; c <= c1; ++c) {
      canvas[r0][c] = '-';
      canvas[r1][c] = '-';
    }
    for (int r = r0; r <= r1; ++r) {
      canvas[r][c0] = '|';
      canvas[r][c1] = '|';
    }
    canvas[r0][c0] = canvas[r0][c1] = canvas[r1][c0] = canvas[r1][c1] = '+';
    const std::string label = rec->id.substr(0, std::max(0, c1 - c0 - 1));
    for (std::size_t i = 0; i < label.size(); ++i) canvas[r0][c0 + 1 + i] = label[i];
  }

  std::vector<const Placement*> placements;
  for (const auto& p : x.placements) placements.push_back(&p);
  std::sort(placements.begin(), placements.end(),
            [](const Placement* a, const Placement* b) { return a->object_id < b->object_id; });

  std::ostringstream legend;
  char marker = 'a';
  for (const Placement* p : placements) {
    canvas[to_row(p->position.y)][to_col(p->position.x)] = marker;
    legend << "  " << marker << " = " << p->object_id << " @ " << p->receptacle_id << '\n';
    marker = marker == 'z' ? 'A' : static_cast<char>(marker + 1);
  }

  std::ostringstream out;
  out << "scene " << scene.id() << " (top view, " << x.placements.size()
      << " placed)\n";
  for (const auto& line : canvas) out << line << '\n';
  out << legend.str();
  return out.str();
}

std::string render_svg(const SceneDescription& scene, const Arrangement& x) {
  const Bounds b = scene_bounds(scene);
  const double margin = 0.05 * std::max(b.x1 - b.x0, b.y1 - b.y0);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << b.x0 - margin << ' '
      << b.y0 - margin << ' ' << (b.x1 - b.x0) + 2 * margin << ' '
      << (b.y1 - b.y0) + 2 * margin << "\">\n";
  // Flip y so world +y points up in the image.
  out << "<g transform=\"translate(0," << b.y0 + b.y1 << ") scale(1,-1)\">\n";

  for (const ReceptacleSpec* rec : sorted_receptacles(scene)) {
    out << "  <rect x=\"" << rec->surface.x << "\" y=\"" << rec->surface.y << "\" width=\""
        << rec->surface.w << "\" height=\"" << rec->surface.d
        << "\" fill=\"#eef3f7\" stroke=\"#456\" stroke-width=\"0.005\"/>\n";
    out << "  <text x=\"" << rec->surface.x + 0.01 << "\" y=\"" << rec->surface.y + 0.01
        << "\" font-size=\"0.04\" transform=\"scale(1,-1) translate(0,"
        << -(2 * rec->surface.y + 0.05) << ")\">" << xml_escaped(rec->id) << "</text>\n";
  }

  for (const auto& p : x.placements) {
    const ObjectSpec* obj = scene.find_object(p.object_id);
    if (obj == nullptr) fail(ErrorCode::reference, "unknown object '" + p.object_id + "'");
    const double w = obj->footprint.width;
    const double d = obj->footprint.depth;
    out << "  <rect x=\"" << p.position.x - w / 2 << "\" y=\"" << p.position.y - d / 2
        << "\" width=\"" << w << "\" height=\"" << d
        << "\" fill=\"#ffd27f\" stroke=\"#a60\" stroke-width=\"0.004\"/>\n";
    out << "  <text x=\"" << p.position.x - w / 2 << "\" y=\"" << p.position.y
        << "\" font-size=\"0.03\" transform=\"scale(1,-1) translate(0,"
        << -2 * p.position.y << ")\">" << xml_escaped(p.object_id) << "</text>\n";
  }

  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace tidyplan
