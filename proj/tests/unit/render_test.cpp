#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gridshift/error.hpp"
#include "gridshift/render.hpp"

using namespace gridshift;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Render, AsciiRoundTrip) {
  const auto c = fixtures::right_shift_4x4();
  const std::string a = render(c);
  EXPECT_EQ(a, "1234\n4123\n3412\n2341\n");
  EXPECT_EQ(parse_ascii(a, 4), c);
  std::vector<int> cells(12);
  for (int i = 0; i < 12; ++i) cells[static_cast<std::size_t>(i)] = i + 1;
  const Coloring big(GridSpec(1, 12, 12), cells);
  EXPECT_EQ(render(big), "123456789ABC\n");
  EXPECT_EQ(parse_ascii(render(big), 12), big);
  EXPECT_THROW(parse_ascii("12\n1\n", 2), FormatError);
  EXPECT_THROW(parse_ascii("1.\n", 2), FormatError);
}

TEST(Render, SvgCellsAndOverlay) {
  RenderOptions o;
  o.format = RenderFormat::svg;
  PatternLayout l;
  l.subgrid = 2;
  l.midgrid = 4;
  o.overlay = l;
  const Coloring c = Coloring::constant(GridSpec(4, 4, 2), 1);
  const std::string s = render(c, o);
  EXPECT_EQ(s.rfind("<?xml", 0), 0U);
  EXPECT_EQ(count(s, "<rect class=\"cell\""), 16U);
  // Borders at 0, 2, 4 in each direction; 0 and 4 are midgrid borders.
  EXPECT_EQ(count(s, "class=\"subgrid\""), 2U);
  EXPECT_EQ(count(s, "class=\"midgrid\""), 4U);
  EXPECT_NE(s.find("width=\"80\""), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Render, PaletteMustCoverColors) {
  RenderOptions o;
  o.format = RenderFormat::svg;
  o.palette = {"red"};
  EXPECT_THROW(render(fixtures::grid442_representatives()[0], o), Error);
  o.palette = {"red", "white"};
  EXPECT_NE(render(fixtures::grid442_representatives()[0], o).find("fill=\"white\""), std::string::npos);
  EXPECT_THROW(parse_render_format("png"), Error);
}
