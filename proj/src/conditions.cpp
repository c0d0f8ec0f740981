#include "interp/conditions.hpp"

#include <algorithm>

namespace interp {

namespace {

/// Streams signed margins and keeps the worst one with its witness.
struct MarginTracker {
  Real worst = -kInf;
  std::optional<Witness> witness;

  void feed(Real m, Witness w) {
    if (m > worst) {
      worst = m;
      witness = std::move(w);
    }
  }
  void feed(Real m, std::vector<int> idx, const char* constraint) {
    if (m > worst) {
      worst = m;
      witness = Witness{std::move(idx), {}, constraint};
    }
  }
};

Real block_sq(const Vec& u, const std::vector<int>& block) {
  Real s = 0;
  for (int c : block) s += u[c] * u[c];
  return s;
}

}  // namespace

Real p2_margin(const FuncSample& si, const FuncSample& sj, Real L) {
  return sj.f - si.f + sj.g.dot(si.x - sj.x) + (si.g - sj.g).squaredNorm() / (2 * L);
}

Real loja_pair_margin(const FuncSample& si, const FuncSample& sj, Real L) {
  const Vec dx = si.x - sj.x;
  return sj.f - si.f + 0.5 * (si.g + sj.g).dot(dx) + (si.g - sj.g).squaredNorm() / (4 * L) -
         (L / 4) * dx.squaredNorm();
}

Real blockwise_pair_margin(const FuncSample& si, const FuncSample& sj,
                           const std::vector<int>& block, Real Lm) {
  return sj.f - si.f + sj.g.dot(si.x - sj.x) + block_sq(si.g - sj.g, block) / (2 * Lm);
}

Verdict check_smooth_convex(const FuncDataset& ds, Real L, SmoothConvexVariant variant,
                            Tolerances tol) {
  validate(ds, SmoothConvex{L, variant});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& si = ds.samples[i];
      const auto& sj = ds.samples[j];
      switch (variant) {
        case SmoothConvexVariant::P:
          t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x), {i, j}, "convexity");
          if (i < j)
            t.feed((si.g - sj.g).squaredNorm() - L * L * (si.x - sj.x).squaredNorm(), {i, j},
                   "gradient-lipschitz");
          break;
        case SmoothConvexVariant::Pprime:
          t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x), {i, j}, "convexity");
          t.feed(si.f - sj.f - sj.g.dot(si.x - sj.x) - (L / 2) * (si.x - sj.x).squaredNorm(),
                 {i, j}, "quadratic-upper-bound");
          break;
        case SmoothConvexVariant::Pdoubleprime:
          t.feed(p2_margin(si, sj, L), {i, j}, "cocoercivity-form");
          break;
      }
    }
  }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

Verdict check_lojasiewicz(const FuncDataset& ds, Real mu, Real L, Real f_star, Tolerances tol) {
  validate(ds, Lojasiewicz{mu, L, f_star});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i) {
    const auto& s = ds.samples[i];
    if (mu > 0)
      t.feed(s.f - f_star - s.g.squaredNorm() / (2 * mu), {i}, "gradient-dominance");
    t.feed(f_star - s.f, {i}, "above-minimum");
    for (int j = 0; j < n; ++j)
      if (j != i) t.feed(loja_pair_margin(s, ds.samples[j], L), {i, j}, "pair-smoothness");
  }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

Verdict check_blockwise(const FuncDataset& ds, const std::vector<std::vector<int>>& partition,
                        const std::vector<Real>& Lvec, Tolerances tol) {
  validate(ds, BlockwiseSmooth{partition, Lvec});
  const int n = ds.size();
  const int nb = static_cast<int>(partition.size());
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int m = 0; m < nb; ++m)
        t.feed(blockwise_pair_margin(ds.samples[i], ds.samples[j], partition[m], Lvec[m]),
               Witness{{i, j}, {{"block", static_cast<Real>(m)}}, "blockwise-smoothness"});
    }
  const Real Lmax = *std::max_element(Lvec.begin(), Lvec.end());
  return make_verdict(t.worst, margin_scale(ds, Lmax), std::move(t.witness), tol);
}

Verdict check_operator_monotone_lipschitz(const OpDataset& ds, Real mu, Real L, Tolerances tol) {
  validate(ds, MonotoneLipschitzOp{mu, L});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec dx = ds.samples[i].x - ds.samples[j].x;
      const Vec dt = ds.samples[i].t - ds.samples[j].t;
      t.feed(-dt.dot(dx) + mu * dx.squaredNorm(), {i, j}, "monotonicity");
      t.feed(dt.squaredNorm() - L * L * dx.squaredNorm(), {i, j}, "lipschitz");
    }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

Verdict check_operator_cocoercive(const OpDataset& ds, Real mu, Real beta, Tolerances tol) {
  validate(ds, CocoerciveOp{mu, beta});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec dx = ds.samples[i].x - ds.samples[j].x;
      const Vec dt = ds.samples[i].t - ds.samples[j].t;
      t.feed(-dt.dot(dx) + mu * dx.squaredNorm(), {i, j}, "strong-monotonicity");
      t.feed(-dt.dot(dx) + beta * dt.squaredNorm(), {i, j}, "cocoercivity");
    }
  return make_verdict(t.worst, margin_scale(ds, std::max(mu, 1 / beta)), std::move(t.witness),
                      tol);
}

Verdict check_uniformly_convex(const FuncDataset& ds, Real mu, Real q, Tolerances tol) {
  validate(ds, UniformlyConvex{mu, q});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& si = ds.samples[i];
      const auto& sj = ds.samples[j];
      const Real dn = (si.x - sj.x).norm();
      t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x) + (mu / q) * std::pow(dn, q), {i, j},
             "uniform-convexity");
    }
  return make_verdict(t.worst, margin_scale(ds, mu), std::move(t.witness), tol);
}

Verdict check_operator_lipschitz(const OpDataset& ds, Real L, Tolerances tol) {
  validate(ds, LipschitzOp{L});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec dx = ds.samples[i].x - ds.samples[j].x;
      const Vec dt = ds.samples[i].t - ds.samples[j].t;
      t.feed(dt.squaredNorm() - L * L * dx.squaredNorm(), {i, j}, "lipschitz");
    }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

}  // namespace interp
