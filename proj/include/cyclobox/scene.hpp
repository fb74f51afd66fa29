#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cyclobox/errors.hpp"
#include "cyclobox/poles.hpp"
#include "cyclobox/rng.hpp"

namespace cyclobox {

enum class SceneKind { box_points, poles_circle, random_polytopes, pyramids };

inline SceneKind parse_scene_kind(std::string_view s) {
  if (s == "box_points") return SceneKind::box_points;
  if (s == "poles_circle") return SceneKind::poles_circle;
  if (s == "random_polytopes") return SceneKind::random_polytopes;
  if (s == "pyramids") return SceneKind::pyramids;
  throw std::invalid_argument("unknown scene '" + std::string(s) + "'");
}

inline constexpr std::uint64_t kDefaultPointBudget = 100000;

struct SceneSpec {
  SceneKind kind = SceneKind::box_points;
  std::uint64_t q = 5;        // modulus; composite values are fine here
  std::int64_t N = 1;
  std::uint32_t K = 3;        // polytope / pyramid base size
  std::uint64_t count = 26;   // number of polytopes or pyramids
  std::uint64_t budget = kDefaultPointBudget;
  std::uint64_t seed = 1;
  bool allow_sampling = false;
};

namespace detail {

// Fixed 9-decimal formatting with negative zero folded to zero.
inline std::string svg_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

struct CloudPoint {
  std::complex<double> z;
  bool vertex;
};

// (2N+1)^{q-1} or 2^{q-1}, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

inline Coeffs random_vertex(std::uint64_t q, std::int64_t N, SampleStream& rng) {
  Coeffs c(q - 1);
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j % 64 == 0) bits = rng.next();
    c[j] = (bits & 1U) ? N : -N;
    bits >>= 1U;
  }
  return c;
}

inline Coeffs random_box_point(std::uint64_t q, std::int64_t N, SampleStream& rng) {
  Coeffs c(q - 1);
  for (auto& v : c) v = rng.between(-N, N);
  return c;
}

struct Cloud {
  std::vector<CloudPoint> points;
  std::uint64_t population = 0;
  bool sampled = false;
};

// Either the whole box / vertex set or, when over budget and permitted, a
// seeded uniform sample of `budget` points.
inline Cloud build_cloud(const SceneSpec& s, bool vertices_only) {
  Cloud cloud;
  const std::uint64_t dims = s.q - 1;
  const std::uint64_t width = vertices_only ? 2 : static_cast<std::uint64_t>(2 * s.N + 1);
  cloud.population = saturating_pow(width, dims);
  if (cloud.population <= s.budget) {
    Coeffs c(dims);
    for (std::uint64_t idx = 0; idx < cloud.population; ++idx) {
      std::uint64_t rest = idx;
      bool vertex = true;
      for (auto& v : c) {
        const auto digit = static_cast<std::int64_t>(rest % width);
        rest /= width;
        v = vertices_only ? (digit ? s.N : -s.N) : digit - s.N;
        vertex = vertex && (v == s.N || v == -s.N);
      }
      cloud.points.push_back({embed_complex(s.q, c), vertex});
    }
    return cloud;
  }
  if (!s.allow_sampling) {
    throw GuardError("render budget exceeded: " + std::to_string(cloud.population) + " points > budget " +
                     std::to_string(s.budget) + " (enable sampling to render a subset)");
  }
  cloud.sampled = true;
  for (std::uint64_t i = 0; i < s.budget; ++i) {
    SampleStream rng(s.seed, i);
    const Coeffs c = vertices_only ? random_vertex(s.q, s.N, rng) : random_box_point(s.q, s.N, rng);
    bool vertex = std::all_of(c.begin(), c.end(), [&](std::int64_t v) { return v == s.N || v == -s.N; });
    cloud.points.push_back({embed_complex(s.q, c), vertex});
  }
  return cloud;
}

inline void svg_point(std::string& out, std::complex<double> z, double r, std::string_view cls,
                      std::string_view id = {}) {
  out += "<circle";
  if (!id.empty()) out += " id=\"" + std::string(id) + "\"";
  out += " class=\"" + std::string(cls) + "\" cx=\"" + svg_num(z.real()) + "\" cy=\"" +
         svg_num(-z.imag()) + "\" r=\"" + svg_num(r) + "\"/>\n";
}

inline void svg_line(std::string& out, std::complex<double> a, std::complex<double> b, double w) {
  out += "<line x1=\"" + svg_num(a.real()) + "\" y1=\"" + svg_num(-a.imag()) + "\" x2=\"" +
         svg_num(b.real()) + "\" y2=\"" + svg_num(-b.imag()) + "\" stroke-width=\"" + svg_num(w) + "\"/>\n";
}

// Streams for polytopes are keyed away from the cloud-sampling streams.
inline constexpr std::uint64_t kShapeStreamOffset = 0x8000000000000000ULL;

}  // namespace detail

/**
 * Renders a scene as a standalone SVG 1.1 document in complex-plane
 * coordinates (y flipped). The output is a pure function of the spec.
 */
inline std::string render_scene(const SceneSpec& s) {
  if (s.q < 3) throw std::invalid_argument("render_scene: q must be >= 3");
  if (s.N < 1) throw std::invalid_argument("render_scene: N must be >= 1");
  if (s.budget == 0) throw std::invalid_argument("render_scene: budget must be positive");
  const bool shapes = s.kind == SceneKind::random_polytopes || s.kind == SceneKind::pyramids;
  if (shapes && s.K < 2) throw std::invalid_argument("render_scene: K must be >= 2");

  const auto cloud = detail::build_cloud(s, s.kind != SceneKind::box_points);

  struct Shape {
    std::vector<std::complex<double>> base;
    std::optional<std::complex<double>> apex;
  };
  std::vector<Shape> shape_list;
  if (shapes) {
    for (std::uint64_t i = 0; i < s.count; ++i) {
      SampleStream rng(s.seed, detail::kShapeStreamOffset + i);
      Shape sh;
      for (std::uint32_t k = 0; k < s.K; ++k) sh.base.push_back(embed_complex(s.q, detail::random_vertex(s.q, s.N, rng)));
      if (s.kind == SceneKind::pyramids) sh.apex = embed_complex(s.q, detail::random_box_point(s.q, s.N, rng));
      shape_list.push_back(std::move(sh));
    }
  }

  double radius = 0.0;
  for (const auto& p : cloud.points) radius = std::max(radius, std::abs(p.z));
  double circle_radius = 0.0;
  if (s.kind == SceneKind::poles_circle) {
    circle_radius = (s.q % 2 == 1) ? euclidean_diameter(s.q, s.N) / 2.0
                                   : std::abs(embed_complex(s.q, north_pole(s.q, s.N)));
    radius = std::max(radius, circle_radius);
  }
  if (radius == 0.0) radius = 1.0;
  const double extent = radius * 1.05;
  const double n_points = static_cast<double>(std::max<std::size_t>(cloud.points.size(), 1));
  const double marker = extent * 0.02 / std::max(1.0, std::log(n_points));

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + detail::svg_num(-extent) + " " +
         detail::svg_num(-extent) + " " + detail::svg_num(2 * extent) + " " + detail::svg_num(2 * extent) + "\">\n";
  out += "<desc>q=" + std::to_string(s.q) + " N=" + std::to_string(s.N) + " points=" +
         std::to_string(cloud.points.size()) + " of " + std::to_string(cloud.population) +
         (cloud.sampled ? " sampled seed=" + std::to_string(s.seed) : std::string(" complete")) + "</desc>\n";
  out += "<style>.pt{fill:#8a8a8a}.vx{fill:#1f4e9c}.pole{fill:#c0392b}.apex{fill:#e67e22}"
         "line{stroke:#2c3e50;stroke-opacity:0.7}.ring{fill:none;stroke:#c0392b}</style>\n";

  if (s.kind == SceneKind::poles_circle) {
    out += "<circle class=\"ring\" cx=\"0.000000000\" cy=\"0.000000000\" r=\"" + detail::svg_num(circle_radius) +
           "\" stroke-width=\"" + detail::svg_num(marker / 2) + "\"/>\n";
  }
  out += "<g id=\"cloud\">\n";
  for (const auto& p : cloud.points) detail::svg_point(out, p.z, marker, p.vertex ? "vx" : "pt");
  out += "</g>\n";

  if (s.kind == SceneKind::poles_circle) {
    out += "<g id=\"poles\">\n";
    detail::svg_point(out, embed_complex(s.q, north_pole(s.q, s.N)), marker * 2, "pole", "NP");
    detail::svg_point(out, embed_complex(s.q, east_pole(s.q, s.N)), marker * 2, "pole", "EP");
    detail::svg_point(out, embed_complex(s.q, south_pole(s.q, s.N)), marker * 2, "pole", "SP");
    detail::svg_point(out, embed_complex(s.q, west_pole(s.q, s.N)), marker * 2, "pole", "WP");
    out += "</g>\n";
  }
  if (shapes) {
    out += "<g id=\"shapes\">\n";
    for (const auto& sh : shape_list) {
      for (std::size_t a = 0; a < sh.base.size(); ++a) {
        for (std::size_t b = a + 1; b < sh.base.size(); ++b) detail::svg_line(out, sh.base[a], sh.base[b], marker / 3);
      }
      if (sh.apex) {
        for (const auto& v : sh.base) detail::svg_line(out, *sh.apex, v, marker / 3);
        detail::svg_point(out, *sh.apex, marker * 1.5, "apex");
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace cyclobox
