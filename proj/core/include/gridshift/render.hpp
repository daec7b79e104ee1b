#pragma once

// Text and SVG views of colorings.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

enum class RenderFormat { ascii, svg };
RenderFormat parse_render_format(std::string_view s);

struct RenderOptions {
  RenderFormat format = RenderFormat::ascii;
  // SVG fill per color, color 1 first. Any SVG paint string works.
  std::vector<std::string> palette = default_palette();
  // Draws subgrid borders, and heavier midgrid borders when present.
  std::optional<PatternLayout> overlay;
  int cell_size = 20;

  static std::vector<std::string> default_palette();
};

// ascii: one line per row, colors 1-9 as digits then 'A' for 10 onward.
// svg: standalone SVG 1.1 with one <rect class="cell"> per cell and one
// <line class="subgrid"> or <line class="midgrid"> per overlay border.
// Throws Error if the palette has fewer entries than the coloring's
// colors, or if the ascii symbol range (35 colors) is exceeded.
std::string render(const Coloring& c, const RenderOptions& o = {});

// Inverse of the ascii rendering for a given color count.
Coloring parse_ascii(std::string_view text, int colors);

}  // namespace gridshift
