#pragma once

#include "interp/types.hpp"

#include <array>
#include <cstdint>

namespace interp {

// ---------------------------------------------------------------------------
// Refinement sequence for the smooth convex family

/// alpha_k = 1 - 2^{-k}: alpha_0 = 0, alpha_{k+1} = (alpha_k + 1) / 2.
Real alpha_iterate(int k);

/// Pairwise family member p_alpha: convexity with an alpha-weighted gradient
/// term plus squared gradient Lipschitz continuity. alpha = 0 is the plain
/// smooth convex description; alpha = 1 is the cocoercivity-form condition
/// together with the Lipschitz line.
Verdict check_smooth_convex_alpha(const FuncDataset& ds, Real L, Real alpha, Tolerances tol = {});

// ---------------------------------------------------------------------------
// Lojasiewicz

/// Cubic data for one ordered pair: P(a) = a0 + a1 a + a2 a^2 + a3 a^3 must be
/// nonpositive on [0, 2 mu / (2L + mu)].
struct LojaPairCoefficients {
  Real A = 0, B = 0, C = 0;
  Real a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  Real alpha_max = 0;
};

LojaPairCoefficients loja_pair_coefficients(const FuncSample& si, const FuncSample& sj, Real mu,
                                            Real L, Real f_star);

/// Exact maximum of the pair cubic over its interval (endpoints plus real
/// critical points), with the maximizing alpha.
std::pair<Real, Real> loja_cubic_max(const LojaPairCoefficients& c);

Verdict check_loja_strengthened(const FuncDataset& ds, Real mu, Real L, Real f_star,
                                Tolerances tol = {});

// ---------------------------------------------------------------------------
// Blockwise

/// Quadratic-in-lambda data for one ordered triple (i, j, k) and block m:
/// P(l) = (1-l) A_ijm + l A_ikm + l (1-l) B_jkm on [0, 1]. B_jkm >= 0 always.
struct BlockTripleCoefficients {
  Real A_ijm = 0, A_ikm = 0, B_jkm = 0;
};

BlockTripleCoefficients block_triple_coefficients(const FuncSample& si, const FuncSample& sj,
                                                  const FuncSample& sk,
                                                  const std::vector<std::vector<int>>& partition,
                                                  const std::vector<Real>& Lvec, int m);

/// Closed-form maximum of the blockwise lambda-quadratic over [0, 1].
std::pair<Real, Real> block_quadratic_max(const BlockTripleCoefficients& c);

Verdict check_blockwise_strengthened(const FuncDataset& ds,
                                     const std::vector<std::vector<int>>& partition,
                                     const std::vector<Real>& Lvec, Tolerances tol = {});

// ---------------------------------------------------------------------------
// Operators

/// Pairwise coefficients entering the terwise operator conditions.
struct OpTripleCoefficients {
  Real A_ij = 0, A_ik = 0, A_jk = 0;
  Real B_ij = 0, B_ik = 0, B_jk = 0;
};

/// A_ij = |t_i-t_j|^2 - L^2 |x_i-x_j|^2,
/// B_ij = -2L <t_i-t_j, x_i-x_j> + 2 L mu |x_i-x_j|^2.
OpTripleCoefficients op_monotone_coefficients(const OpDataset& ds, int i, int j, int k, Real mu,
                                              Real L);

/// A_ij = -<t_i-t_j, x_i-x_j> + mu |x_i-x_j|^2,
/// B_ij = -<t_i-t_j, x_i-x_j> + beta |t_i-t_j|^2.
OpTripleCoefficients op_cocoercive_coefficients(const OpDataset& ds, int i, int j, int k, Real mu,
                                                Real beta);

struct SimplexScanOptions {
  int subdivisions = 200;   // barycentric grid resolution per edge
  int refine_starts = 10;   // best cells kept for local refinement
  int refine_rounds = 40;   // halving pattern-search rounds per start
};

/// Maximum of a homogeneous cubic over the closed probability simplex
/// {(l, mi, mj) >= 0, l + mi + mj = 1} by grid scan plus derivative-free
/// refinement; returns the value and the maximizing multipliers.
struct SimplexMax {
  Real value = -kInf;
  std::array<Real, 3> point{0, 0, 0};
};

/// First (swap = false) or second (swap = true, A and B exchanged) terwise
/// polynomial of the strengthened monotone Lipschitz description.
Real op_monotone_poly(const OpTripleCoefficients& c, Real mu, bool swap, Real lk, Real mi,
                      Real mj);
SimplexMax op_monotone_poly_max(const OpTripleCoefficients& c, Real mu, bool swap,
                                const SimplexScanOptions& opt);

/// Same for the cocoercive description (the factor is mi + mj + (2-4 beta mu) lk).
Real op_cocoercive_poly(const OpTripleCoefficients& c, Real mu, Real beta, bool swap, Real lk,
                        Real mi, Real mj);
SimplexMax op_cocoercive_poly_max(const OpTripleCoefficients& c, Real mu, Real beta, bool swap,
                                  const SimplexScanOptions& opt);

Verdict check_op_monotone_strengthened(const OpDataset& ds, Real mu, Real L, Tolerances tol = {},
                                       const SimplexScanOptions& opt = {});

Verdict check_op_cocoercive_strengthened(const OpDataset& ds, Real mu, Real beta,
                                         Tolerances tol = {},
                                         const SimplexScanOptions& opt = {});

// ---------------------------------------------------------------------------
// Uniformly convex

struct LineScanOptions {
  int grid = 1024;         // lambda grid on [0, 1]
  int golden_iters = 60;   // golden-section refinement around the best cell
};

/// Terwise objective of the strengthened uniformly convex description.
Real unif_convex_triple(const FuncDataset& ds, int i, int j, int k, Real mu, Real q, Real lambda);

Verdict check_unif_convex_strengthened(const FuncDataset& ds, Real mu, Real q,
                                       Tolerances tol = {}, const LineScanOptions& opt = {});

// ---------------------------------------------------------------------------
// Constrained domain

/// Plain smooth convex description on all pairs, plus the cocoercivity-form
/// inequality on ordered pairs (i, j) with |x_i - x_j| < 2 dist(x_j, R^d \ Q):
/// the gated inequality lower-bounds f_j through the tangent at x_i.
Verdict check_constrained_smooth_convex(const FuncDataset& ds, Real L, const Domain& domain,
                                        Tolerances tol = {});

/// Ordered pairs (i, j) passing the distance gate.
std::vector<std::pair<int, int>> constrained_gated_pairs(const FuncDataset& ds,
                                                         const Domain& domain);

// ---------------------------------------------------------------------------
// Two-point value bounds on a constrained domain

struct BoundsBU {
  Real B = 0;
  Real U = 0;
  bool certified = true;  // false for the multistart N = 2 search (best found)
};

/// Lower/upper bounds on the value at y compatible with the pair data through
/// an N-hop chain. N = 1 is closed form; N = 2 is a 50-start local search over
/// the intermediate gradient, declared best-found.
BoundsBU bounds_BU(const Vec& x, const Vec& g_x, Real f_x, const Vec& y, const Vec& g_y, Real L,
                   int N, std::uint64_t seed = 20240801);

}  // namespace interp
