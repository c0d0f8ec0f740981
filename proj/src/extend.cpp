#include "interp/extend.hpp"

#include <cmath>

namespace interp {

namespace {

Real unif_lower(const FuncSample& s, const Vec& x, Real mu, Real q) {
  return s.f + s.g.dot(x - s.x) + (mu / q) * std::pow((x - s.x).norm(), q);
}

}  // namespace

UniformExtension extend_uniformly_convex(const FuncSample& a, const FuncSample& b, const Vec& x,
                                         Real mu, Real q) {
  if (!(mu >= 0) || !(q >= 2)) throw ValidationError("need mu >= 0 and q >= 2");
  const FuncSample* s[2] = {&a, &b};

  Real scale = 1;
  for (const auto* p : s) {
    scale = std::max(scale, std::abs(p->f));
    scale = std::max(scale, p->g.squaredNorm());
    scale = std::max(scale, mu * std::pow(p->x.norm() + x.norm(), q));
  }
  const Real tol = 1e-8 * scale;

  // The pair itself must be consistent.
  for (int i = 0; i < 2; ++i)
    if (unif_lower(*s[1 - i], s[i]->x, mu, q) - s[i]->f > tol)
      throw ValidationError("pair does not satisfy the uniformly convex description");

  UniformExtension ext;
  const Real l0 = unif_lower(*s[0], x, mu, q);
  const Real l1 = unif_lower(*s[1], x, mu, q);
  ext.i_star = l0 >= l1 ? 0 : 1;
  ext.f = std::max(l0, l1);

  const Vec X = x - s[ext.i_star]->x;
  const Real Xn = X.norm();
  const Vec base =
      s[ext.i_star]->g + (Xn > 0 ? mu * std::pow(Xn, q - 2) : 0.0) * X;

  const int j = 1 - ext.i_star;
  const Vec Xj = x - s[j]->x;

  auto goal2_margin = [&](Real K) {
    const Vec g = base + K * X;
    Real worst = -kInf;
    for (int u = 0; u < 2; ++u) {
      const Real lhs =
          ext.f + g.dot(s[u]->x - x) + (mu / q) * std::pow((x - s[u]->x).norm(), q) - s[u]->f;
      worst = std::max(worst, lhs);
    }
    return worst;
  };

  ext.K = 0;
  if (X.dot(Xj) > 0 && goal2_margin(0) > tol) {
    Real K = 1;
    bool done = false;
    for (int step = 0; step <= 60; ++step, K *= 2) {
      if (goal2_margin(K) <= tol) {
        ext.K = K;
        done = true;
        break;
      }
    }
    if (!done)
      throw std::runtime_error("slope-boost doubling exhausted; pair violates the precondition");
  }
  ext.g = base + ext.K * X;

  // Mandatory post-check of both goals.
  for (int u = 0; u < 2; ++u)
    if (unif_lower(*s[u], x, mu, q) - ext.f > tol)
      throw std::runtime_error("extension failed its first goal");
  if (goal2_margin(ext.K) > tol) throw std::runtime_error("extension failed its second goal");
  return ext;
}

Vec worst_z_smooth_convex(const FuncSample& si, const FuncSample& sj, Real L) {
  if (!(L > 0)) throw ValidationError("L must be positive");
  return si.x + (sj.g - si.g) / L;
}

WorstZ worst_z_loja_stationary(const FuncSample& si, Real L) {
  if (!(L > 0)) throw ValidationError("L must be positive");
  return {si.x - si.g / L, Vec::Zero(si.x.size())};
}

WorstZ worst_z_loja(const FuncSample& si, const FuncSample& sj, Real mu, Real L, Real alpha) {
  if (!(L > 0) || !(mu >= 0) || !(mu <= L)) throw ValidationError("need 0 <= mu <= L");
  const Real amax = 2 * mu / (2 * L + mu);
  if (!(alpha >= 0 && alpha <= amax + 1e-15))
    throw ValidationError("alpha outside the admissible interval");

  // Stationarity of the weighted dual in z and g_z:
  //   -L(2-a) z +              a g_z = -g_j + (1-a) g_i - L x_j - (1-a) L x_i
  //      L a  z + (2-a-2La/mu) g_z =  g_j + (1-a) g_i + L x_j - (1-a) L x_i
  const Real a = alpha;
  const Real w = (a == 0) ? 2.0 : 2 - a - 2 * L * a / mu;
  const Real c11 = -L * (2 - a), c12 = a;
  const Real c21 = L * a, c22 = w;
  const Vec r1 = -sj.g + (1 - a) * si.g - L * sj.x - (1 - a) * L * si.x;
  const Vec r2 = sj.g + (1 - a) * si.g + L * sj.x - (1 - a) * L * si.x;
  const Real det = c11 * c22 - c12 * c21;
  if (std::abs(det) < 1e-300) throw std::runtime_error("degenerate dual stationarity system");
  WorstZ out;
  out.z = (c22 * r1 - c12 * r2) / det;
  out.g_z = (c11 * r2 - c21 * r1) / det;
  return out;
}

}  // namespace interp
