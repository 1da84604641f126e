#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "corridor_scan.hpp"
#include "cslam/icp.hpp"

using namespace cslam;

namespace {

constexpr double kPi = std::numbers::pi;

double fit_cost(std::span<const PointPair> pairs, const Pose2& t) {
  double c = 0.0;
  for (const auto& p : pairs) {
    const Vec2 d = p.target - t.apply(p.source);
    c += d.dot(d);
  }
  return c;
}

// Coarse-to-fine grid search over (theta, tx, ty).
Pose2 grid_fit(std::span<const PointPair> pairs) {
  Pose2 best{0, 0, 0};
  double span_t = 20.0, span_a = kPi;
  for (int level = 0; level < 14; ++level) {
    Pose2 level_best = best;
    double level_cost = INFINITY;
    for (int ia = -12; ia <= 12; ++ia)
      for (int ix = -12; ix <= 12; ++ix)
        for (int iy = -12; iy <= 12; ++iy) {
          const Pose2 t{best.x + span_t * ix / 12.0, best.y + span_t * iy / 12.0,
                        best.theta + span_a * ia / 12.0};
          const double c = fit_cost(pairs, t);
          if (c < level_cost) {
            level_cost = c;
            level_best = t;
          }
        }
    best = level_best;
    span_t /= 4.0;
    span_a /= 4.0;
  }
  return best;
}

std::vector<PointPair> pairs_under(const Pose2& t, const std::vector<Vec2>& src) {
  std::vector<PointPair> out;
  for (const Vec2& p : src) out.push_back({p, t.apply(p)});
  return out;
}

}  // namespace

TEST(SvdFit, AlignedPairsGiveIdentity) {
  const std::vector<Vec2> src{{0, 0}, {1, 0}, {0, 2}};
  const Pose2 t = svd_rigid_fit(pairs_under(Pose2::identity(), src));
  EXPECT_NEAR(t.x, 0.0, 1e-12);
  EXPECT_NEAR(t.y, 0.0, 1e-12);
  EXPECT_NEAR(t.theta, 0.0, 1e-12);
}

TEST(SvdFit, QuarterTurnExact) {
  const std::vector<PointPair> pairs{{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}, {{2, 2}, {-2, 2}}};
  const Pose2 t = svd_rigid_fit(pairs);
  EXPECT_NEAR(t.theta, kPi / 2, 1e-12);
  EXPECT_NEAR(t.x, 0.0, 1e-12);
  EXPECT_NEAR(t.y, 0.0, 1e-12);
}

TEST(SvdFit, TwoPointCaseMatchesGridSearch) {
  const std::vector<PointPair> pairs{{{0, 0}, {1, 1}}, {{2, 0}, {1, 3}}};
  const Pose2 t = svd_rigid_fit(pairs);
  const Pose2 g = grid_fit(pairs);
  EXPECT_NEAR(t.x, g.x, 1e-3);
  EXPECT_NEAR(t.y, g.y, 1e-3);
  EXPECT_NEAR(normalize_angle(t.theta - g.theta), 0.0, 1e-3);
  EXPECT_NEAR(t.theta, kPi / 2, 1e-12);
}

TEST(SvdFit, RejectsDegenerateInput) {
  EXPECT_THROW(svd_rigid_fit(std::vector<PointPair>{{{0, 0}, {1, 1}}}), std::invalid_argument);
  EXPECT_THROW(svd_rigid_fit(std::vector<PointPair>{{{1, 1}, {0, 0}}, {{1, 1}, {2, 0}}}),
               std::invalid_argument);
}

TEST(SvdFit, MatchesGridSearchOnNoisyPairsProperty) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int i = 0; i < 100; ++i) {
    std::vector<PointPair> pairs;
    const Pose2 t{c(rng), c(rng), c(rng) * 0.6};
    for (int k = 0; k < 5; ++k) {
      const Vec2 s{c(rng), c(rng)};
      pairs.push_back({s, t.apply(s) + Vec2{noise(rng), noise(rng)}});
    }
    const Pose2 fit = svd_rigid_fit(pairs);
    const Pose2 grid = grid_fit(pairs);
    ASSERT_NEAR(fit.x, grid.x, 1e-3);
    ASSERT_NEAR(fit.y, grid.y, 1e-3);
    ASSERT_NEAR(normalize_angle(fit.theta - grid.theta), 0.0, 1e-3);
    ASSERT_LE(fit_cost(pairs, fit), fit_cost(pairs, grid) + 1e-9);
  }
}

TEST(PointGrid, NearestMatchesBruteForceProperty) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> c(-10.0, 10.0);
  std::vector<Vec2> pts(300);
  for (auto& p : pts) p = {c(rng), c(rng)};
  const PointGrid grid(pts, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q{c(rng), c(rng)};
    long best = -1;
    double best_d = 1.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double d = distance(q, pts[k]);
      if (d <= best_d) {
        if (d < best_d || best < 0) best = static_cast<long>(k);
        best_d = d;
      }
    }
    double sq = 0.0;
    const long got = grid.nearest(q, 1.0, &sq);
    if (best < 0) {
      ASSERT_EQ(got, -1);
    } else {
      ASSERT_GE(got, 0);
      ASSERT_NEAR(std::sqrt(sq), best_d, 1e-12);
    }
  }
}

TEST(Icp, IdenticalCloudsGiveIdentity) {
  const PointCloud2 c = testworld::corridor_scan();
  const IcpResult r = icp_register(c, c, Pose2::identity());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.transform.x, 0.0, 1e-12);
  EXPECT_NEAR(r.transform.y, 0.0, 1e-12);
  EXPECT_NEAR(r.transform.theta, 0.0, 1e-12);
  EXPECT_LT(r.mean_sq_error, 1e-20);
}

TEST(Icp, RecoversKnownTransformFromGoodInitial) {
  const PointCloud2 c = testworld::corridor_scan();
  const Pose2 truth{1.0, 2.0, kPi / 6};
  const IcpResult r = icp_register(c, transform_cloud(truth, c), {0.8, 2.2, kPi / 6 - 0.05});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.transform.x, 1.0, 1e-6);
  EXPECT_NEAR(r.transform.y, 2.0, 1e-6);
  EXPECT_NEAR(r.transform.theta, kPi / 6, 1e-6);
}

TEST(Icp, NoOverlapDoesNotConverge) {
  const PointCloud2 a{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}, "a"};
  const PointCloud2 b{{{50, 50}, {51, 50}, {50, 51}}, "b"};
  const IcpResult r = icp_register(a, b, Pose2::identity());
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(Icp, RejectsTinyClouds) {
  const PointCloud2 a{{{0, 0}, {1, 0}}, "a"};
  const PointCloud2 b{{{0, 0}, {1, 0}, {0, 1}}, "b"};
  EXPECT_THROW(icp_register(a, b, Pose2::identity()), std::invalid_argument);
  EXPECT_THROW(icp_register(b, a, Pose2::identity()), std::invalid_argument);
}

TEST(Icp, NoiselessRecoveryOverRandomTransforms) {
  const PointCloud2 src = testworld::corridor_scan();
  ASSERT_EQ(src.points.size(), 360u);
  const double ext = testworld::extent(src);
  std::mt19937_64 rng(63);
  for (int i = 0; i < 200; ++i) {
    const auto trial = testworld::random_trial(rng, ext);
    const IcpResult r = icp_register(src, transform_cloud(trial.truth, src), trial.initial);
    ASSERT_TRUE(r.converged) << "trial " << i;
    ASSERT_LT(std::abs(r.transform.x - trial.truth.x), 1e-6);
    ASSERT_LT(std::abs(r.transform.y - trial.truth.y), 1e-6);
    ASSERT_LT(std::abs(normalize_angle(r.transform.theta - trial.truth.theta)), 1e-6);
  }
}

TEST(Icp, NoisyRecoveryOverRandomTransforms) {
  const PointCloud2 src = testworld::corridor_scan();
  const double ext = testworld::extent(src);
  std::mt19937_64 rng(64);
  int success = 0;
  for (int i = 0; i < 200; ++i) {
    const auto trial = testworld::random_trial(rng, ext);
    const PointCloud2 s = testworld::with_range_noise(src, 0.01, rng);
    const PointCloud2 t = transform_cloud(trial.truth, testworld::with_range_noise(src, 0.01, rng));
    const IcpResult r = icp_register(s, t, trial.initial);
    const double rot = std::abs(normalize_angle(r.transform.theta - trial.truth.theta));
    const double trans = std::hypot(r.transform.x - trial.truth.x, r.transform.y - trial.truth.y);
    success += rot < kPi / 180.0 && trans < 0.02 * ext;
  }
  EXPECT_GE(success, 190);
}
