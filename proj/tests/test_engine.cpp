#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "interp/conditions.hpp"
#include "interp/engine.hpp"
#include "interp/extend.hpp"
#include "util.hpp"

#include <random>

using namespace interp;
using namespace interp::test;

namespace {

/// Independent N = 2 oracle for the Lipschitz operator inner problem at fixed
/// z: the dual restricted to the simplex, on a dense lambda grid.
Real lipschitz_inner_dual(const OpDataset& ds, Real L, const Vec& z, int n = 20001) {
  const Vec& t1 = ds.samples[0].t;
  const Vec& t2 = ds.samples[1].t;
  const Real dt2 = (t1 - t2).squaredNorm();
  const Real d1 = (z - ds.samples[0].x).squaredNorm();
  const Real d2 = (z - ds.samples[1].x).squaredNorm();
  Real best = -kInf;
  for (int i = 0; i < n; ++i) {
    const Real l = Real(i) / (n - 1);
    best = std::max(best, l * (1 - l) * dt2 - L * L * (l * d1 + (1 - l) * d2));
  }
  return best;
}

}  // namespace

TEST_CASE("inner value matches the dual closed form for two-point Lipschitz data") {
  std::mt19937_64 rng(51);
  const Real L = 1;
  for (int trial = 0; trial < 25; ++trial) {
    const auto ds = random_odataset(rng, 2, 2);
    const auto recs = records_of(ds);
    EngineOptions opt;
    opt.inner_iters = 4000;
    for (int zt = 0; zt < 3; ++zt) {
      const Vec z = random_vec(rng, 2, -1.5, 1.5);
      const Real primal = inner_extension_value(recs, 2, cond_op_lipschitz(L), z, opt);
      const Real dual = lipschitz_inner_dual(ds, L, z);
      CHECK(std::abs(primal - dual) <= 2e-4 * (1 + std::abs(dual)));
    }
  }
}

TEST_CASE("restriction to dataset points never exceeds the satisfied threshold") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<Real> curv(0.1, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    // Members of the class: quadratics with curvature within [0, L].
    const Real a = curv(rng);
    FuncDataset ds;
    ds.d = 1;
    for (int s = 0; s < 3; ++s) {
      const Vec x = random_vec(rng, 1);
      ds.samples.push_back({x, 0.5 * a * x.squaredNorm(), a * x});
    }
    REQUIRE(check_smooth_convex(ds, 1, SmoothConvexVariant::Pdoubleprime).satisfied);
    const auto recs = records_of(ds);
    EngineOptions opt;
    opt.inner_iters = 2500;
    for (const auto& s : ds.samples) {
      const Real v = inner_extension_value(recs, 1, cond_smooth_convex_p2(1), s.x, opt);
      CHECK(v <= 1e-4);
    }
  }
}

TEST_CASE("inner value at the analytic worst point recovers half the p2 margin") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<Real> u(-1, 1);
  int positive_seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    FuncDataset ds;
    ds.d = 1;
    for (int s = 0; s < 2; ++s) {
      FuncSample smp{Vec(1), u(rng), Vec(1)};
      smp.x[0] = u(rng);
      smp.g[0] = u(rng);
      ds.samples.push_back(std::move(smp));
    }
    const auto recs = records_of(ds);
    EngineOptions opt;
    opt.inner_iters = 6000;
    for (int i = 0; i < 2; ++i) {
      const int j = 1 - i;
      const Real m = p2_margin(ds.samples[i], ds.samples[j], 1);
      const Vec z = worst_z_smooth_convex(ds.samples[i], ds.samples[j], 1);
      const Real inner = inner_extension_value(recs, 1, cond_smooth_convex_pprime(1), z, opt);
      CHECK(inner >= m / 2 - 1e-5);  // weak duality at the half weights
      if (m > 0.05) {
        ++positive_seen;
        CHECK(inner == doctest::Approx(m / 2).epsilon(1e-5));
      }
    }
  }
  CHECK(positive_seen > 10);
}

TEST_CASE("strengthening value is nondecreasing under grid refinement") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 8; ++trial) {
    const auto ds = random_odataset(rng, 1, 3);
    const auto recs = records_of(ds);
    EngineOptions coarse;
    coarse.inner_iters = 1500;
    coarse.grid_per_axis = 9;
    EngineOptions fine = coarse;
    fine.grid_per_axis = 17;
    const auto [lo, hi] = default_box(recs, 1, coarse);
    const Real scale = 1 + 1;  // record scale is O(1) here
    const Real vc = strengthening_value(recs, 1, cond_op_lipschitz(1), lo, hi, coarse).value;
    const Real vf = strengthening_value(recs, 1, cond_op_lipschitz(1), lo, hi, fine).value;
    CHECK(vf >= vc - 1e-5 * scale);
  }
}

TEST_CASE("engine verdict equals the pairwise Lipschitz verdict outside the band") {
  std::mt19937_64 rng(59);
  int agree = 0;
  EngineOptions opt;
  opt.inner_iters = 1500;
  opt.grid_per_axis = 9;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 1 + (rng() % 2);
    const auto ds = random_odataset(rng, d, 3);
    const Verdict pairwise = check_operator_lipschitz(ds, 1);
    const Real band = 1e-3 * pairwise.scale;
    if (std::abs(pairwise.worst_margin) <= band) continue;
    const auto recs = records_of(ds);
    const auto [lo, hi] = default_box(recs, d, opt);
    const bool ext =
        verify_one_point_extensible(recs, d, cond_op_lipschitz(1), lo, hi, band / 2, opt);
    CHECK(ext == pairwise.satisfied);
    ++agree;
  }
  CHECK(agree >= 30);
}

TEST_CASE("no monotone Lipschitz extension exists for the operator counterexample") {
  const auto ds = op_counterexample();
  const auto recs = records_of(ds);
  EngineOptions opt;
  opt.inner_iters = 2500;
  opt.grid_per_axis = 17;
  const auto [lo, hi] = default_box(recs, 2, opt);
  const auto sv = strengthening_value(recs, 2, cond_op_monotone_lipschitz(0, 1), lo, hi, opt);
  CHECK(sv.value > 1e-3);  // a separating z exists
  CHECK(!verify_one_point_extensible(recs, 2, cond_op_monotone_lipschitz(0, 1), lo, hi, 1e-4,
                                     opt));
}

TEST_CASE("no blockwise extension exists for the three-point counterexample") {
  const auto ds = blockwise_counterexample();
  const auto recs = records_of(ds);
  EngineOptions opt;
  opt.inner_iters = 2500;
  opt.grid_per_axis = 17;
  const auto [lo, hi] = default_box(recs, 2, opt);
  const auto sv =
      strengthening_value(recs, 2, cond_blockwise({{0}, {1}}, {1, 1}), lo, hi, opt);
  CHECK(sv.value > 1e-3);
}

TEST_CASE("a single self-consistent point is extensible") {
  const auto ds = fdataset(1, {fsample({0.2}, 0.1, {0.4})});
  const auto recs = records_of(ds);
  EngineOptions opt;
  opt.inner_iters = 1500;
  const auto [lo, hi] = default_box(recs, 1, opt);
  CHECK(verify_one_point_extensible(recs, 1, cond_smooth_convex_p2(1), lo, hi, 1e-4, opt));
}

TEST_CASE("pairs in the p-prime/p2 gap are flagged by the strengthening value") {
  // First-figure data: x1 = f1 = 0, g1 = x2 = 1, L = 1. For g2 in (1, 2) the
  // quadratic-upper-bound description admits values the cocoercivity form
  // rejects.
  EngineOptions opt;
  opt.inner_iters = 4000;
  for (Real g2 : {1.3, 1.5, 1.7}) {
    const Real lo_p2 = 1 + (g2 - 1) * (g2 - 1) / 2;
    FuncDataset ds = fdataset(1, {fsample({0}, 0, {1}), fsample({1}, 0, {g2})});
    ds.samples[1].f = (std::max(1.0, g2 - 0.5) + lo_p2) / 2;  // inside p', below the p2 floor
    REQUIRE(check_smooth_convex(ds, 1, SmoothConvexVariant::Pprime).satisfied);
    REQUIRE(!check_smooth_convex(ds, 1, SmoothConvexVariant::Pdoubleprime).satisfied);
    const auto recs = records_of(ds);
    const auto [blo, bhi] = default_box(recs, 1, opt);
    const auto sv = strengthening_value(recs, 1, cond_smooth_convex_pprime(1), blo, bhi, opt);
    CHECK(sv.value > 0);
    // The argmax sits near one of the analytic candidates.
    Real nearest = kInf;
    for (int i = 0; i < 2; ++i)
      nearest = std::min(nearest, (sv.argmax - worst_z_smooth_convex(ds.samples[i],
                                                                     ds.samples[1 - i], 1))
                                      .norm());
    CHECK(nearest <= 0.15);
  }
}

TEST_CASE("divergence guard flags an unbounded evaluator") {
  ConditionEvaluator bad;
  bad.kind = MapKind::Function;
  bad.arity = 2;
  bad.eval = [](const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    out.push_back(-(a[0]->f + a[1]->f));  // decreasing in f_z: unbounded below
  };
  const auto ds = fdataset(1, {fsample({0}, 0, {0})});
  const auto recs = records_of(ds);
  EngineOptions opt;
  opt.inner_iters = 200000;
  CHECK_THROWS_AS(inner_extension_value(recs, 1, bad, vec({0.5}), opt), std::runtime_error);
}
