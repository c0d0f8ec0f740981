#include "interp/strengthened.hpp"

#include "interp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace interp {

namespace {

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
    feed(m, Witness{std::move(idx), {}, constraint});
  }
};

Real block_sq(const Vec& u, const std::vector<int>& block) {
  Real s = 0;
  for (int c : block) s += u[c] * u[c];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Smooth convex alpha family

Real alpha_iterate(int k) {
  if (k < 0) throw ValidationError("k must be nonnegative");
  if (k > 1074) return 1.0;
  return 1.0 - std::ldexp(1.0, -k);
}

Verdict check_smooth_convex_alpha(const FuncDataset& ds, Real L, Real alpha, Tolerances tol) {
  validate(ds, SmoothConvexAlpha{L, alpha});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& si = ds.samples[i];
      const auto& sj = ds.samples[j];
      t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x) +
                 alpha * (si.g - sj.g).squaredNorm() / (2 * L),
             {i, j}, "alpha-lower-bound");
      if (i < j)
        t.feed((si.g - sj.g).squaredNorm() - L * L * (si.x - sj.x).squaredNorm(), {i, j},
               "gradient-lipschitz");
    }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

// ---------------------------------------------------------------------------
// Lojasiewicz

LojaPairCoefficients loja_pair_coefficients(const FuncSample& si, const FuncSample& sj, Real mu,
                                            Real L, Real f_star) {
  LojaPairCoefficients c;
  c.A = loja_pair_margin(si, sj, L);
  c.B = (L + mu) * (si.f - f_star - si.g.squaredNorm() / (2 * L));
  c.C = (L - mu) * (sj.f - f_star + sj.g.squaredNorm() / (2 * L));
  c.a0 = 2 * mu * c.A;
  c.a1 = c.B - c.C - (L + 3 * mu) * c.A;
  c.a2 = (L + mu) * c.A - 2 * c.B;
  c.a3 = c.B;
  c.alpha_max = 2 * mu / (2 * L + mu);
  return c;
}

std::pair<Real, Real> loja_cubic_max(const LojaPairCoefficients& c) {
  auto P = [&](Real a) { return c.a0 + a * (c.a1 + a * (c.a2 + a * c.a3)); };
  Real best = P(0), arg = 0;
  auto consider = [&](Real a) {
    if (a <= 0 || a >= c.alpha_max) return;
    const Real v = P(a);
    if (v > best) {
      best = v;
      arg = a;
    }
  };
  {
    const Real v = P(c.alpha_max);
    if (v > best) {
      best = v;
      arg = c.alpha_max;
    }
  }
  // Real roots of P'(a) = a1 + 2 a2 a + 3 a3 a^2 inside the interval.
  const Real qa = 3 * c.a3, qb = 2 * c.a2, qc = c.a1;
  if (std::abs(qa) < 1e-300 * (std::abs(qb) + std::abs(qc)) || qa == 0) {
    if (qb != 0) consider(-qc / qb);
  } else {
    const Real disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
      const Real r = std::sqrt(disc);
      // Citardauq pairing keeps both roots accurate.
      const Real q = -0.5 * (qb + (qb >= 0 ? r : -r));
      consider(q / qa);
      if (q != 0) consider(qc / q);
    }
  }
  return {best, arg};
}

Verdict check_loja_strengthened(const FuncDataset& ds, Real mu, Real L, Real f_star,
                                Tolerances tol) {
  validate(ds, Lojasiewicz{mu, L, f_star});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i) {
    const auto& s = ds.samples[i];
    if (mu > 0)
      t.feed(s.f - f_star - s.g.squaredNorm() / (2 * mu), {i}, "gradient-dominance");
    t.feed(f_star + s.g.squaredNorm() / (2 * L) - s.f, {i}, "stationary-lower-bound");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto c = loja_pair_coefficients(ds.samples[i], ds.samples[j], mu, L, f_star);
      if (mu > 0) {
        const auto [m, arg] = loja_cubic_max(c);
        t.feed(m, Witness{{i, j}, {{"alpha", arg}}, "pair-cubic"});
      } else {
        // Degenerate interval: only the classical pair content remains.
        t.feed(c.A, Witness{{i, j}, {{"alpha", 0.0}}, "pair-cubic"});
      }
    }
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

// ---------------------------------------------------------------------------
// Blockwise

BlockTripleCoefficients block_triple_coefficients(const FuncSample& si, const FuncSample& sj,
                                                  const FuncSample& sk,
                                                  const std::vector<std::vector<int>>& partition,
                                                  const std::vector<Real>& Lvec, int m) {
  BlockTripleCoefficients c;
  c.A_ijm = blockwise_pair_margin(si, sj, partition[m], Lvec[m]);
  c.A_ikm = blockwise_pair_margin(si, sk, partition[m], Lvec[m]);
  const Vec djk = sj.g - sk.g;
  Real worst = 0;
  for (size_t l = 0; l < partition.size(); ++l)
    worst = std::max(worst, block_sq(djk, partition[l]) / (2 * Lvec[l]));
  c.B_jkm = worst - block_sq(djk, partition[m]) / (2 * Lvec[m]);
  return c;
}

std::pair<Real, Real> block_quadratic_max(const BlockTripleCoefficients& c) {
  // P(l) = A_ijm + l (A_ikm - A_ijm + B) - l^2 B, concave since B >= 0.
  Real best = c.A_ijm, arg = 0;
  if (c.A_ikm > best) {
    best = c.A_ikm;
    arg = 1;
  }
  if (c.B_jkm > 0) {
    const Real lstar = (c.A_ikm - c.A_ijm + c.B_jkm) / (2 * c.B_jkm);
    if (lstar > 0 && lstar < 1) {
      const Real v =
          c.A_ijm + lstar * (c.A_ikm - c.A_ijm + c.B_jkm) - lstar * lstar * c.B_jkm;
      if (v > best) {
        best = v;
        arg = lstar;
      }
    }
  }
  return {best, arg};
}

Verdict check_blockwise_strengthened(const FuncDataset& ds,
                                     const std::vector<std::vector<int>>& partition,
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
  // Terwise content; (i, j, k) and (i, k, j) share the same maximum.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == i) continue;
        for (int m = 0; m < nb; ++m) {
          const auto c = block_triple_coefficients(ds.samples[i], ds.samples[j], ds.samples[k],
                                                   partition, Lvec, m);
          const auto [v, arg] = block_quadratic_max(c);
          t.feed(v, Witness{{i, j, k},
                            {{"lambda", arg}, {"block", static_cast<Real>(m)}},
                            "triple-quadratic"});
        }
      }
    }
  const Real Lmax = *std::max_element(Lvec.begin(), Lvec.end());
  return make_verdict(t.worst, margin_scale(ds, Lmax), std::move(t.witness), tol);
}

// ---------------------------------------------------------------------------
// Operators

namespace {

OpTripleCoefficients pair_coeffs(const OpDataset& ds, int i, int j, int k,
                                 Real (*a)(const Vec&, const Vec&, Real, Real),
                                 Real (*b)(const Vec&, const Vec&, Real, Real), Real p1,
                                 Real p2) {
  auto dx = [&](int u, int v) { return Vec(ds.samples[u].x - ds.samples[v].x); };
  auto dt = [&](int u, int v) { return Vec(ds.samples[u].t - ds.samples[v].t); };
  OpTripleCoefficients c;
  c.A_ij = a(dt(i, j), dx(i, j), p1, p2);
  c.A_ik = a(dt(i, k), dx(i, k), p1, p2);
  c.A_jk = a(dt(j, k), dx(j, k), p1, p2);
  c.B_ij = b(dt(i, j), dx(i, j), p1, p2);
  c.B_ik = b(dt(i, k), dx(i, k), p1, p2);
  c.B_jk = b(dt(j, k), dx(j, k), p1, p2);
  return c;
}

}  // namespace

OpTripleCoefficients op_monotone_coefficients(const OpDataset& ds, int i, int j, int k, Real mu,
                                              Real L) {
  auto a = [](const Vec& dt, const Vec& dx, Real, Real L_) {
    return dt.squaredNorm() - L_ * L_ * dx.squaredNorm();
  };
  auto b = [](const Vec& dt, const Vec& dx, Real mu_, Real L_) {
    return -2 * L_ * dt.dot(dx) + 2 * L_ * mu_ * dx.squaredNorm();
  };
  return pair_coeffs(ds, i, j, k, +a, +b, mu, L);
}

OpTripleCoefficients op_cocoercive_coefficients(const OpDataset& ds, int i, int j, int k, Real mu,
                                                Real beta) {
  auto a = [](const Vec& dt, const Vec& dx, Real mu_, Real) {
    return -dt.dot(dx) + mu_ * dx.squaredNorm();
  };
  auto b = [](const Vec& dt, const Vec& dx, Real, Real beta_) {
    return -dt.dot(dx) + beta_ * dt.squaredNorm();
  };
  return pair_coeffs(ds, i, j, k, +a, +b, mu, beta);
}

Real op_monotone_poly(const OpTripleCoefficients& c, Real mu, bool swap, Real lk, Real mi,
                      Real mj) {
  const Real Aij = swap ? c.B_ij : c.A_ij, Aik = swap ? c.B_ik : c.A_ik,
             Ajk = swap ? c.B_jk : c.A_jk;
  const Real Bij = swap ? c.A_ij : c.B_ij, Bik = swap ? c.A_ik : c.B_ik,
             Bjk = swap ? c.A_jk : c.B_jk;
  return lk * (mi + mj) * (Aik * mi + Ajk * mj) - lk * mi * mj * Aij +
         lk * lk * (Bik * mi + Bjk * mj) + Bij * mi * mj * (mi + mj - 2 * mu * lk);
}

Real op_cocoercive_poly(const OpTripleCoefficients& c, Real mu, Real beta, bool swap, Real lk,
                        Real mi, Real mj) {
  const Real Aij = swap ? c.B_ij : c.A_ij, Aik = swap ? c.B_ik : c.A_ik,
             Ajk = swap ? c.B_jk : c.A_jk;
  const Real Bij = swap ? c.A_ij : c.B_ij, Bik = swap ? c.A_ik : c.B_ik,
             Bjk = swap ? c.A_jk : c.B_jk;
  return lk * (mi + mj) * (Bik * mi + Bjk * mj) - lk * mi * mj * Bij +
         lk * lk * (Aik * mi + Ajk * mj) +
         Aij * mi * mj * (mi + mj + 2 * lk - 4 * beta * mu * lk);
}

namespace {

template <class F>
SimplexMax simplex_scan(F&& f, const SimplexScanOptions& opt) {
  const int S = std::max(1, opt.subdivisions);
  const int keep = std::max(1, opt.refine_starts);

  std::vector<SimplexMax> best;  // kept sorted descending by value
  best.reserve(keep + 1);
  auto offer = [&](Real v, Real lk, Real mi, Real mj) {
    if (best.size() == static_cast<size_t>(keep) && v <= best.back().value) return;
    SimplexMax cand{v, {lk, mi, mj}};
    auto pos = std::upper_bound(best.begin(), best.end(), v,
                                [](Real val, const SimplexMax& s) { return val > s.value; });
    best.insert(pos, cand);
    if (best.size() > static_cast<size_t>(keep)) best.pop_back();
  };

  for (int a = 0; a <= S; ++a)
    for (int b = 0; b <= S - a; ++b) {
      const Real lk = Real(a) / S, mi = Real(b) / S, mj = Real(S - a - b) / S;
      offer(f(lk, mi, mj), lk, mi, mj);
    }

  // Pattern-search refinement in (lk, mi) with mj = 1 - lk - mi.
  SimplexMax top = best.front();
  for (const auto& start : best) {
    Real lk = start.point[0], mi = start.point[1];
    Real v = start.value;
    Real h = 1.0 / S;
    for (int round = 0; round < opt.refine_rounds; ++round) {
      bool improved = false;
      const Real cand[8][2] = {{lk + h, mi},     {lk - h, mi},     {lk, mi + h},
                               {lk, mi - h},     {lk + h, mi - h}, {lk - h, mi + h},
                               {lk + h, mi + h}, {lk - h, mi - h}};
      for (const auto& c : cand) {
        const Real l2 = std::clamp(c[0], 0.0, 1.0);
        const Real m2 = std::clamp(c[1], 0.0, 1.0 - l2);
        const Real v2 = f(l2, m2, 1.0 - l2 - m2);
        if (v2 > v) {
          v = v2;
          lk = l2;
          mi = m2;
          improved = true;
        }
      }
      if (!improved) h /= 2;
      if (h < 1e-14) break;
    }
    if (v > top.value) top = SimplexMax{v, {lk, mi, 1.0 - lk - mi}};
  }
  return top;
}

}  // namespace

SimplexMax op_monotone_poly_max(const OpTripleCoefficients& c, Real mu, bool swap,
                                const SimplexScanOptions& opt) {
  return simplex_scan(
      [&](Real lk, Real mi, Real mj) { return op_monotone_poly(c, mu, swap, lk, mi, mj); }, opt);
}

SimplexMax op_cocoercive_poly_max(const OpTripleCoefficients& c, Real mu, Real beta, bool swap,
                                  const SimplexScanOptions& opt) {
  return simplex_scan(
      [&](Real lk, Real mi, Real mj) {
        return op_cocoercive_poly(c, mu, beta, swap, lk, mi, mj);
      },
      opt);
}

namespace {

template <class PairFn, class CoeffFn, class MaxFn>
Verdict check_op_strengthened(const OpDataset& ds, Real scale, Tolerances tol, PairFn pair_ab,
                              CoeffFn coeffs, MaxFn poly_max, const char* pair_a,
                              const char* pair_b) {
  const int n = ds.size();
  MarginTracker t;
  // Pairwise faces, stated explicitly so datasets with fewer than three
  // records keep the classical content.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto [a, b] = pair_ab(i, j);
      t.feed(a, {i, j}, pair_a);
      t.feed(b, {i, j}, pair_b);
    }
  // Terwise scans; (i, j, k) and (j, i, k) share the same maximum.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = i + 1; j < n; ++j) {
        if (j == k) continue;
        const auto c = coeffs(i, j, k);
        for (bool swap : {false, true}) {
          const SimplexMax m = poly_max(c, swap);
          t.feed(m.value, Witness{{i, j, k},
                                  {{"lambda_k", m.point[0]},
                                   {"mu_i", m.point[1]},
                                   {"mu_j", m.point[2]},
                                   {"swapped", swap ? 1.0 : 0.0}},
                                  "triple-simplex"});
        }
      }
    }
  return make_verdict(t.worst, scale, std::move(t.witness), tol);
}

}  // namespace

Verdict check_op_monotone_strengthened(const OpDataset& ds, Real mu, Real L, Tolerances tol,
                                       const SimplexScanOptions& opt) {
  validate(ds, MonotoneLipschitzOp{mu, L});
  return check_op_strengthened(
      ds, margin_scale(ds, L), tol,
      [&](int i, int j) {
        const Vec dt = ds.samples[i].t - ds.samples[j].t;
        const Vec dx = ds.samples[i].x - ds.samples[j].x;
        return std::pair<Real, Real>{dt.squaredNorm() - L * L * dx.squaredNorm(),
                                     -dt.dot(dx) + mu * dx.squaredNorm()};
      },
      [&](int i, int j, int k) { return op_monotone_coefficients(ds, i, j, k, mu, L); },
      [&](const OpTripleCoefficients& c, bool swap) {
        return op_monotone_poly_max(c, mu, swap, opt);
      },
      "lipschitz", "monotonicity");
}

Verdict check_op_cocoercive_strengthened(const OpDataset& ds, Real mu, Real beta, Tolerances tol,
                                         const SimplexScanOptions& opt) {
  validate(ds, CocoerciveOp{mu, beta});
  return check_op_strengthened(
      ds, margin_scale(ds, std::max(mu, 1 / beta)), tol,
      [&](int i, int j) {
        const Vec dt = ds.samples[i].t - ds.samples[j].t;
        const Vec dx = ds.samples[i].x - ds.samples[j].x;
        return std::pair<Real, Real>{-dt.dot(dx) + mu * dx.squaredNorm(),
                                     -dt.dot(dx) + beta * dt.squaredNorm()};
      },
      [&](int i, int j, int k) { return op_cocoercive_coefficients(ds, i, j, k, mu, beta); },
      [&](const OpTripleCoefficients& c, bool swap) {
        return op_cocoercive_poly_max(c, mu, beta, swap, opt);
      },
      "strong-monotonicity", "cocoercivity");
}

// ---------------------------------------------------------------------------
// Uniformly convex

Real unif_convex_triple(const FuncDataset& ds, int i, int j, int k, Real mu, Real q,
                        Real lambda) {
  const auto& si = ds.samples[i];
  const auto& sj = ds.samples[j];
  const auto& sk = ds.samples[k];
  const Real lin = lambda * (-si.f + sk.f + sk.g.dot(si.x - sk.x)) +
                   (1 - lambda) * (-sj.f + sk.f + sk.g.dot(sj.x - sk.x));
  if (mu == 0) return lin;
  const Real dij = (si.x - sj.x).norm();
  const Vec mix = sk.x - lambda * si.x - (1 - lambda) * sj.x;
  const Real cross = lambda * std::pow(1 - lambda, q) + (1 - lambda) * std::pow(lambda, q);
  return lin + (mu / q) * (cross * std::pow(dij, q) + std::pow(mix.norm(), q));
}

namespace {

template <class F>
std::pair<Real, Real> line_scan_max(F&& f, const LineScanOptions& opt) {
  const int n = std::max(2, opt.grid);
  Real best = -kInf, arg = 0;
  for (int i = 0; i < n; ++i) {
    const Real l = Real(i) / (n - 1);
    const Real v = f(l);
    if (v > best) {
      best = v;
      arg = l;
    }
  }
  // Golden-section refinement around the best cell.
  Real lo = std::max(0.0, arg - 1.0 / (n - 1));
  Real hi = std::min(1.0, arg + 1.0 / (n - 1));
  const Real gr = (std::sqrt(5.0) - 1) / 2;
  Real c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  Real fc = f(c), fd = f(d);
  for (int it = 0; it < opt.golden_iters; ++it) {
    if (fc < fd) {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    } else {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    }
  }
  const Real mid = (lo + hi) / 2;
  const Real vm = f(mid);
  if (vm > best) {
    best = vm;
    arg = mid;
  }
  return {best, arg};
}

}  // namespace

Verdict check_unif_convex_strengthened(const FuncDataset& ds, Real mu, Real q, Tolerances tol,
                                       const LineScanOptions& opt) {
  validate(ds, UniformlyConvex{mu, q});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& si = ds.samples[i];
      const auto& sj = ds.samples[j];
      t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x) +
                 (mu / q) * std::pow((si.x - sj.x).norm(), q),
             {i, j}, "uniform-convexity");
    }
  // Terwise content; (i, j, k) and (j, i, k) mirror in lambda.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = i + 1; j < n; ++j) {
        if (j == k) continue;
        const auto [v, arg] =
            line_scan_max([&](Real l) { return unif_convex_triple(ds, i, j, k, mu, q, l); }, opt);
        t.feed(v, Witness{{i, j, k}, {{"lambda", arg}}, "triple-line"});
      }
    }
  return make_verdict(t.worst, margin_scale(ds, mu), std::move(t.witness), tol);
}

// ---------------------------------------------------------------------------
// Constrained domain

std::vector<std::pair<int, int>> constrained_gated_pairs(const FuncDataset& ds,
                                                         const Domain& domain) {
  std::vector<std::pair<int, int>> gated;
  const int n = ds.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Real dist = dist_to_complement(domain, ds.samples[j].x);
      if ((ds.samples[i].x - ds.samples[j].x).norm() < 2 * dist) gated.emplace_back(i, j);
    }
  return gated;
}

Verdict check_constrained_smooth_convex(const FuncDataset& ds, Real L, const Domain& domain,
                                        Tolerances tol) {
  validate(ds, ConstrainedSmoothConvex{L, domain});
  const int n = ds.size();
  MarginTracker t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& si = ds.samples[i];
      const auto& sj = ds.samples[j];
      t.feed(sj.f - si.f + sj.g.dot(si.x - sj.x), {i, j}, "convexity");
      if (i < j)
        t.feed((si.g - sj.g).squaredNorm() - L * L * (si.x - sj.x).squaredNorm(), {i, j},
               "gradient-lipschitz");
    }
  for (const auto& [i, j] : constrained_gated_pairs(ds, domain))
    t.feed(p2_margin(ds.samples[j], ds.samples[i], L), {i, j}, "gated-cocoercivity-form");
  return make_verdict(t.worst, margin_scale(ds, L), std::move(t.witness), tol);
}

// ---------------------------------------------------------------------------
// Value bounds through N-hop chains

namespace {

/// Hop feasibility: the f-interval along one hop with gradient step u is
/// nonempty iff <u, w> / N >= |u|^2 / L, where w = y - x.
struct ChainGeometry {
  Vec w;
  Real L;
  int N;

  Real slack(const Vec& u) const { return w.dot(u) / N - u.squaredNorm() / L; }
  bool feasible(const Vec& u) const { return slack(u) >= 0; }
};

}  // namespace

BoundsBU bounds_BU(const Vec& x, const Vec& g_x, Real f_x, const Vec& y, const Vec& g_y, Real L,
                   int N, std::uint64_t seed) {
  if (N != 1 && N != 2) throw ValidationError("bounds are implemented for N in {1, 2}");
  if (!(L > 0)) throw ValidationError("L must be positive");
  const Vec w = y - x;
  if (N == 1) {
    BoundsBU r;
    r.B = f_x + g_x.dot(w) + (g_x - g_y).squaredNorm() / (2 * L);
    r.U = f_x - g_y.dot(x - y) - (g_x - g_y).squaredNorm() / (2 * L);
    r.certified = true;
    return r;
  }

  const ChainGeometry geo{w, L, 2};
  auto feasible = [&](const Vec& g1) {
    return geo.feasible(g1 - g_x) && geo.feasible(g_y - g1);
  };
  // Chained extremes: minimal (resp. maximal) f_1 then f_2 along the two hops.
  auto chain_min = [&](const Vec& g1) {
    const Real f1 = f_x + g_x.dot(w) / 2 + (g1 - g_x).squaredNorm() / (2 * L);
    return f1 + g1.dot(w) / 2 + (g_y - g1).squaredNorm() / (2 * L);
  };
  auto chain_max = [&](const Vec& g1) {
    const Real f1 = f_x + g1.dot(w) / 2 - (g1 - g_x).squaredNorm() / (2 * L);
    return f1 + g_y.dot(w) / 2 - (g_y - g1).squaredNorm() / (2 * L);
  };

  const Eigen::Index d = x.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);

  const Real spread = 0.5 * (L * w.norm() + (g_y - g_x).norm()) + 1e-6;
  std::vector<Vec> starts;
  starts.push_back((g_x + g_y) / 2);
  starts.push_back(g_x + (L / 4.0) * w);
  starts.push_back(g_y - (L / 4.0) * w);
  while (starts.size() < 50) {
    Vec c(d);
    for (Eigen::Index i = 0; i < d; ++i) c[i] = gauss(rng);
    const Real blend = unif(rng);
    starts.push_back(blend * g_x + (1 - blend) * g_y + spread * unif(rng) * c);
  }

  auto search = [&](bool minimize) {
    Real best = minimize ? kInf : -kInf;
    bool found = false;
    std::vector<Vec> dirs;
    for (Eigen::Index c = 0; c < d; ++c) {
      Vec e = Vec::Zero(d);
      e[c] = 1;
      dirs.push_back(e);
    }
    if (w.norm() > 0) dirs.push_back(w.normalized());
    if ((g_y - g_x).norm() > 0) dirs.push_back((g_y - g_x).normalized());
    for (int extra = 0; extra < 3; ++extra) {
      Vec r(d);
      for (Eigen::Index i = 0; i < d; ++i) r[i] = gauss(rng);
      if (r.norm() > 0) dirs.push_back(r.normalized());
    }
    for (const auto& s0 : starts) {
      Vec g1 = s0;
      if (!feasible(g1)) {
        // Pull toward the straight chain until feasible.
        const Vec mid = (g_x + g_y) / 2;
        bool ok = false;
        for (int step = 0; step < 60; ++step) {
          g1 = mid + std::pow(0.7, step) * (s0 - mid);
          if (feasible(g1)) {
            ok = true;
            break;
          }
        }
        if (!ok) continue;
      }
      Real v = minimize ? chain_min(g1) : chain_max(g1);
      Real h = spread / 2;
      for (int round = 0; round < 120 && h > 1e-13 * (1 + spread); ++round) {
        bool improved = false;
        for (const auto& dir : dirs)
          for (Real sgn : {1.0, -1.0}) {
            const Vec cand = g1 + sgn * h * dir;
            if (!feasible(cand)) continue;
            const Real vc = minimize ? chain_min(cand) : chain_max(cand);
            if (minimize ? vc < v : vc > v) {
              v = vc;
              g1 = cand;
              improved = true;
            }
          }
        if (!improved) h /= 2;
      }
      found = true;
      best = minimize ? std::min(best, v) : std::max(best, v);
    }
    if (!found) throw std::runtime_error("bounds search found no feasible two-hop chain");
    return best;
  };

  BoundsBU r;
  r.B = search(true);
  r.U = search(false);
  r.certified = false;

  const BoundsBU one = bounds_BU(x, g_x, f_x, y, g_y, L, 1);
  const Real guard = 1e-7 * (1 + std::abs(one.B) + std::abs(one.U));
  if (r.B > one.B + guard || r.U < one.U - guard)
    throw std::runtime_error("two-hop bounds failed the one-hop sanity check");
  return r;
}

}  // namespace interp
