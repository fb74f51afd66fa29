#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <set>
#include <string>
#include <utility>

#include "cyclobox/cyclobox.hpp"

using namespace cyclobox;

namespace {

struct Marker {
  std::string cls;
  std::string id;
  double x;
  double y;
};

std::vector<Marker> circles(const std::string& svg) {
  static const std::regex re(
      R"re(<circle(?: id="([^"]*)")? class="([^"]*)" cx="([-0-9.]+)" cy="([-0-9.]+)")re");
  std::vector<Marker> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back({(*it)[2], (*it)[1], std::stod((*it)[3]), std::stod((*it)[4])});
  }
  return out;
}

}  // namespace

TEST(Scene, BoxPointsSymmetric) {
  SceneSpec s;
  s.kind = SceneKind::box_points;
  s.q = 5;
  s.N = 1;
  const auto svg = render_scene(s);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
  const auto pts = circles(svg);
  ASSERT_EQ(pts.size(), 81u);
  std::multiset<std::pair<long, long>> cloud;
  auto key = [](double x, double y) { return std::pair{std::lround(x * 1e6), std::lround(y * 1e6)}; };
  for (const auto& m : pts) cloud.insert(key(m.x, m.y));
  for (const auto& m : pts) EXPECT_EQ(cloud.count(key(-m.x, -m.y)), cloud.count(key(m.x, m.y)));
  long vertices = 0;
  for (const auto& m : pts) vertices += m.cls == "vx";
  EXPECT_EQ(vertices, 16);
  EXPECT_NE(svg.find("complete"), std::string::npos);
  EXPECT_EQ(svg.find("-0.000000000"), std::string::npos);
}

TEST(Scene, PolesCircle) {
  for (std::uint64_t q : {13u, 15u}) {
    SceneSpec s;
    s.kind = SceneKind::poles_circle;
    s.q = q;
    const auto svg = render_scene(s);
    const double radius = euclidean_diameter(q, 1) / 2;
    bool found = false;
    for (const auto& m : circles(svg)) {
      if (m.id != "NP") continue;
      found = true;
      EXPECT_NEAR(m.x, 0.0, 1e-9 * radius);
      EXPECT_NEAR(-m.y, radius, 1e-6);
    }
    EXPECT_TRUE(found);
    for (const char* id : {"EP", "SP", "WP"}) EXPECT_NE(svg.find(std::string("id=\"") + id + "\""), std::string::npos);
    char r[64];
    std::snprintf(r, sizeof r, "r=\"%.9f\"", radius);
    EXPECT_NE(svg.find(r), std::string::npos);
  }
  SceneSpec even;
  even.kind = SceneKind::poles_circle;
  even.q = 14;
  EXPECT_NE(render_scene(even).find("id=\"NP\""), std::string::npos);
}

TEST(Scene, PolytopesDeterministic) {
  SceneSpec s;
  s.kind = SceneKind::random_polytopes;
  s.q = 7;
  s.N = 2;
  s.K = 3;
  s.count = 26;
  s.seed = 99;
  const auto a = render_scene(s);
  EXPECT_EQ(a, render_scene(s));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n') > 26 * 3, true);
  std::size_t lines = 0;
  for (auto pos = a.find("<line"); pos != std::string::npos; pos = a.find("<line", pos + 1)) ++lines;
  EXPECT_EQ(lines, 26u * 3u);
  s.seed = 100;
  EXPECT_NE(a, render_scene(s));
  s.kind = SceneKind::pyramids;
  s.count = 10;
  const auto pyr = render_scene(s);
  lines = 0;
  for (auto pos = pyr.find("<line"); pos != std::string::npos; pos = pyr.find("<line", pos + 1)) ++lines;
  EXPECT_EQ(lines, 10u * 6u);
}

TEST(Scene, BudgetGuardAndSampling) {
  SceneSpec s;
  s.kind = SceneKind::box_points;
  s.q = 11;
  s.N = 2;
  s.budget = 5000;
  EXPECT_THROW(render_scene(s), GuardError);
  s.allow_sampling = true;
  const auto svg = render_scene(s);
  EXPECT_EQ(circles(svg).size(), 5000u);
  EXPECT_NE(svg.find("sampled"), std::string::npos);
  EXPECT_EQ(svg, render_scene(s));
  s.q = 2;
  EXPECT_THROW(render_scene(s), std::invalid_argument);
  EXPECT_THROW(parse_scene_kind("torus"), std::invalid_argument);
}
