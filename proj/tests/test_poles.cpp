#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cyclobox/cyclobox.hpp"
#include "oracles.hpp"

using namespace cyclobox;

namespace {
std::vector<long> as_longs(const Coeffs& c) { return {c.begin(), c.end()}; }
}  // namespace

TEST(Poles, NorthExamples) {
  EXPECT_EQ(north_pole(3, 1), (Coeffs{1, -1}));
  EXPECT_NEAR(embed_complex(3, north_pole(3, 1)).imag(), std::sqrt(3.0), 1e-12);
  EXPECT_EQ(north_pole(5, 1), (Coeffs{1, 1, -1, -1}));
  // Tie at the real exponent goes to the first quadrant.
  EXPECT_EQ(north_pole(4, 1), (Coeffs{1, -1, -1}));
  const auto z = embed_complex(4, north_pole(4, 1));
  EXPECT_GT(z.real(), 0.0);
  EXPECT_NEAR(z.imag(), 2.0, 1e-12);
}

TEST(Poles, EastExamples) {
  EXPECT_EQ(east_pole(5, 1), (Coeffs{1, -1, -1, 1}));
  EXPECT_NEAR(embed_complex(5, east_pole(5, 1)).real(), std::sqrt(5.0), 1e-12);
  EXPECT_EQ(east_pole(3, 1), (Coeffs{-1, -1}));
  EXPECT_NEAR(embed_complex(3, east_pole(3, 1)).real(), 1.0, 1e-12);
}

TEST(Poles, MatchBruteForceArgmax) {
  for (std::uint64_t q = 3; q <= 17; ++q) {
    EXPECT_EQ(as_longs(north_pole(q, 1)), oracle::north_pole_argmax(q)) << "q=" << q;
    if (q % 4 != 0) {
      EXPECT_EQ(as_longs(east_pole(q, 1)), oracle::east_pole_argmax(q)) << "q=" << q;
    }
  }
}

TEST(Poles, AxisAlignmentForOddQ) {
  for (std::uint64_t q = 3; q <= 101; q += 2) {
    EXPECT_NEAR(embed_complex(q, north_pole(q, 1)).real(), 0.0, 1e-9);
    EXPECT_NEAR(embed_complex(q, east_pole(q, 1)).imag(), 0.0, 1e-9);
    const auto sp = embed_complex(q, south_pole(q, 1));
    const auto np = embed_complex(q, north_pole(q, 1));
    EXPECT_NEAR(sp.imag(), -np.imag(), 1e-9);
    EXPECT_NEAR(embed_complex(q, west_pole(q, 1)).real(), -embed_complex(q, east_pole(q, 1)).real(), 1e-9);
  }
}

TEST(Embedding, Examples) {
  const auto a = embed_complex(CyclotomicInt(3, {1, -1}));
  EXPECT_NEAR(a.real(), 0.0, 1e-12);
  EXPECT_NEAR(a.imag(), std::sqrt(3.0), 1e-12);
  EXPECT_EQ(embed_complex(CyclotomicInt::zero(7)), std::complex<double>(0.0, 0.0));
  const auto b = embed_complex(CyclotomicInt(3, {1, 1}));
  EXPECT_NEAR(b.real(), -1.0, 1e-12);
  EXPECT_NEAR(b.imag(), 0.0, 1e-12);
}

TEST(EuclideanDiameter, Examples) {
  EXPECT_NEAR(euclidean_diameter(3, 1), 2 * std::sqrt(3.0), 1e-9);
  const double s72 = std::sin(72.0 * std::numbers::pi / 180.0);
  const double s144 = std::sin(144.0 * std::numbers::pi / 180.0);
  EXPECT_NEAR(euclidean_diameter(5, 1), 2 * (2 * s72 + 2 * s144), 1e-6);
  for (std::uint64_t q : {3u, 7u, 13u, 51u}) {
    EXPECT_NEAR(euclidean_diameter(q, 2), 2 * euclidean_diameter(q, 1), 1e-9);
  }
  EXPECT_THROW(euclidean_diameter(6, 1), std::invalid_argument);
  EXPECT_NEAR(euclidean_diameter(BoxSpec(7, 3)), euclidean_diameter(7, 3), 0.0);
}

TEST(EuclideanDiameter, AttainedByPoles) {
  // No pair of vertices is farther apart in the complex plane than NP and SP.
  for (std::uint64_t q : {3u, 5u, 7u, 9u, 11u}) {
    double best = 0.0;
    const auto verts = oracle::sign_vectors(q);
    for (const auto& a : verts) {
      for (const auto& b : verts) best = std::max(best, std::abs(oracle::value(q, a) - oracle::value(q, b)));
    }
    EXPECT_NEAR(best, euclidean_diameter(q, 1), 1e-9) << "q=" << q;
  }
}
