#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cyclobox/cyclobox.hpp"

using namespace cyclobox;

TEST(SampleStream, CounterBasedAndBounded) {
  SampleStream a(7, 3);
  SampleStream b(7, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  SampleStream c(7, 4);
  SampleStream d(8, 3);
  SampleStream a2(7, 3);
  const auto first = a2.next();
  EXPECT_NE(first, c.next());
  EXPECT_NE(first, d.next());
  SampleStream e(1, 0);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(e.below(7), 7u);
    const auto v = e.between(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    const double u = e.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Sampling, ReproducibleFirstSample) {
  const BoxSpec box(101, 3);
  SampleStream r1(42, 0);
  SampleStream r2(42, 0);
  const auto v = sample_vertex(box, r1);
  EXPECT_EQ(v, sample_vertex(box, r2));
  EXPECT_TRUE(box.is_vertex(v));
  SampleStream r3(42, 1);
  const auto x = sample_box_point(box, r3);
  EXPECT_TRUE(box.contains(x));
}

TEST(Sampling, VertexTraceIsBalanced) {
  const BoxSpec box(101, 2);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    SampleStream rng(5, static_cast<std::uint64_t>(i));
    sum += trace(sample_vertex(box, rng)).get_d();
  }
  const double sigma = 2.0 * std::sqrt(100.0);
  EXPECT_LE(std::abs(sum / n), 4.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST(Sampling, BoxPointChiSquare) {
  const BoxSpec box(3, 1);
  std::array<long, 9> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    SampleStream rng(9, static_cast<std::uint64_t>(i));
    const auto x = sample_box_point(box, rng);
    counts.at(static_cast<std::size_t>((x.coeff(1).get_si() + 1) * 3 + x.coeff(2).get_si() + 1))++;
  }
  const double expected = n / 9.0;
  double chi2 = 0.0;
  for (const long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 26.124);  // chi-square, 8 dof, significance 0.001
}

TEST(Sampling, BoxPairMeanWithinThreeStandardErrors) {
  const BoxSpec box(3, 1);
  SamplerConfig cfg;
  cfg.seed = 17;
  cfg.sample_count = 20000;
  const double mean = sample_mean_box_pair_dist_sq(box, cfg).to_double();
  // Spread of d^2 over the 81 x 81 pairs, computed by enumeration.
  std::vector<CyclotomicInt> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(CyclotomicInt(3, {i / 3 - 1, i % 3 - 1}));
  double s1 = 0.0, s2 = 0.0;
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      const double d = normalized_dist_sq(a, b, box).to_double();
      s1 += d;
      s2 += d * d;
    }
  }
  const double var = s2 / 81.0 - (s1 / 81.0) * (s1 / 81.0);
  EXPECT_NEAR(mean, 5.0 / 27.0, 3.0 * std::sqrt(var / 20000.0));
}

TEST(Parallel, OrderAndExceptions) {
  for (unsigned w : {1u, 2u, 3u, 8u}) {
    const auto out = parallel_index_map(10, w, [](std::uint64_t i) { return i * i; });
    ASSERT_EQ(out.size(), 10u);
    for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(out[i], i * i);
  }
  EXPECT_TRUE(parallel_index_map(0, 4, [](std::uint64_t i) { return i; }).empty());
  EXPECT_THROW(parallel_index_map(100, 4,
                                  [](std::uint64_t i) -> int {
                                    if (i == 57) throw std::runtime_error("boom");
                                    return 0;
                                  }),
               std::runtime_error);
  EXPECT_THROW(parallel_index_map(1, 0, [](std::uint64_t i) { return i; }), std::invalid_argument);
}

TEST(Parallel, ProgressReachesTotal) {
  std::uint64_t last = 0;
  const WorkerPlan plan(2, [&](std::uint64_t done, std::uint64_t total) {
    EXPECT_LE(done, total);
    last = done;
  });
  parallel_index_map(1000, plan, [](std::uint64_t i) { return i; });
  EXPECT_EQ(last, 1000u);
}

TEST(SamplerConfig, Validation) {
  SamplerConfig cfg;
  cfg.sample_count = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.sample_count = 1;
  cfg.worker_count = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
