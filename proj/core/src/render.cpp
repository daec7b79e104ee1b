#include "gridshift/render.hpp"

#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

namespace {

constexpr int kMaxAsciiColors = 35;

char symbol(int color) {
  return color <= 9 ? static_cast<char>('0' + color) : static_cast<char>('A' + color - 10);
}

int color_of(char ch) {
  if (ch >= '1' && ch <= '9') return ch - '0';
  if (ch >= 'A' && ch <= 'Z') return ch - 'A' + 10;
  return 0;
}

std::string ascii(const Coloring& c) {
  if (c.colors() > kMaxAsciiColors) throw Error("ascii rendering supports at most 35 colors");
  std::string out;
  out.reserve(static_cast<std::size_t>(c.rows() * (c.cols() + 1)));
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) out.push_back(symbol(c.at(r, col)));
    out.push_back('\n');
  }
  return out;
}

std::string svg(const Coloring& c, const RenderOptions& o) {
  if (o.cell_size < 1) throw Error("cell size must be positive");
  const int s = o.cell_size;
  const int w = c.cols() * s;
  const int h = c.rows() * s;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<g stroke=\"#999999\" stroke-width=\"0.5\">\n";
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) {
      os << "<rect class=\"cell\" x=\"" << col * s << "\" y=\"" << r * s << "\" width=\"" << s << "\" height=\"" << s
         << "\" fill=\"" << o.palette[static_cast<std::size_t>(c.at(r, col) - 1)] << "\"/>\n";
    }
  }
  os << "</g>\n";
  if (o.overlay) {
    validate(*o.overlay, c.spec());
    const int z = o.overlay->subgrid;
    const int mid = o.overlay->midgrid.value_or(0);
    const int tr = o.overlay->tiled_rows(c.spec());
    const int tc = o.overlay->tiled_cols(c.spec());
    auto line = [&](int x1, int y1, int x2, int y2, bool heavy) {
      os << "<line class=\"" << (heavy ? "midgrid" : "subgrid") << "\" x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
         << "\" y2=\"" << y2 << "\" stroke=\"#000000\" stroke-width=\"" << (heavy ? 4 : 2) << "\"/>\n";
    };
    for (int col = 0; col <= tc; col += z) line(col * s, 0, col * s, tr * s, mid > 0 && col % mid == 0);
    for (int r = 0; r <= tr; r += z) line(0, r * s, tc * s, r * s, mid > 0 && r % mid == 0);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

RenderFormat parse_render_format(std::string_view s) {
  if (s == "ascii") return RenderFormat::ascii;
  if (s == "svg") return RenderFormat::svg;
  throw Error("unknown render format '" + std::string(s) + "'");
}

std::vector<std::string> RenderOptions::default_palette() {
  return {"#d62728", "#ffffff", "#17becf", "#2ca02c", "#ffdd00", "#9467bd", "#ff7f0e", "#7f7f7f"};
}

std::string render(const Coloring& c, const RenderOptions& o) {
  if (o.format == RenderFormat::ascii) return ascii(c);
  if (static_cast<int>(o.palette.size()) < c.colors()) {
    throw Error("palette has " + std::to_string(o.palette.size()) + " entries but the coloring uses " + std::to_string(c.colors()) + " colors");
  }
  return svg(c, o);
}

Coloring parse_ascii(std::string_view text, int colors) {
  std::vector<int> cells;
  int rows = 0;
  int cols = -1;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (cols >= 0 && static_cast<int>(line.size()) != cols) throw FormatError("ascii rows have different lengths");
    cols = static_cast<int>(line.size());
    for (char ch : line) {
      const int v = color_of(ch);
      if (v == 0) throw FormatError(std::string("bad ascii cell '") + ch + "'");
      cells.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty ascii grid");
  return Coloring(GridSpec(rows, cols, colors), std::move(cells));
}

}  // namespace gridshift
