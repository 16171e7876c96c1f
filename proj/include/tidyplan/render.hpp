#pragma once

#include <string>

#include "tidyplan/scene.hpp"

namespace tidyplan {

// Top-down plot of receptacle rectangles and placed objects. Output is for
// human inspection only; nothing downstream parses it.
std::string render_ascii(const SceneDescription& scene, const Arrangement& x,
                         int canvas_width = 100);

std::string render_svg(const SceneDescription& scene, const Arrangement& x);

}  // namespace tidyplan
