#pragma once

#include "interp/types.hpp"

namespace interp {

/// Extension values built from the pairwise uniformly convex construction:
/// the supporting sample, the new value and gradient, and the slope boost K.
struct UniformExtension {
  int i_star = 0;
  Real f = 0;
  Vec g;
  Real K = 0;
};

/// Extends a consistent pair to the point x. The returned values satisfy the
/// defining inequalities of the construction; this is re-checked numerically
/// before returning. K is 0 when the displacement inner product is
/// nonpositive, otherwise the smallest power of two in {1, ..., 2^60} that
/// closes the second goal. Doubling exhaustion signals a violated
/// precondition.
UniformExtension extend_uniformly_convex(const FuncSample& a, const FuncSample& b, const Vec& x,
                                         Real mu, Real q);

/// Analytic worst candidate for the pairwise smooth convex strengthening:
/// z = x_i + (g_j - g_i) / L for the ordered pair (i, j).
Vec worst_z_smooth_convex(const FuncSample& si, const FuncSample& sj, Real L);

struct WorstZ {
  Vec z;
  Vec g_z;
};

/// Stationary dual branch: z = x_i - g_i / L with g_z = 0.
WorstZ worst_z_loja_stationary(const FuncSample& si, Real L);

/// Pair dual branch at a given alpha in [0, 2 mu / (2L + mu)]: solves the
/// two stationarity equations of the weighted dual for (z, g_z).
WorstZ worst_z_loja(const FuncSample& si, const FuncSample& sj, Real mu, Real L, Real alpha);

}  // namespace interp
