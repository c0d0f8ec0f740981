#pragma once

#include "interp/types.hpp"

namespace interp {

// Classical pairwise descriptions, evaluated on every ordered pair of distinct
// records (symmetric inequalities once per unordered pair). Margins are signed
// left-hand sides; the condition holds iff the worst margin is below threshold.

Verdict check_smooth_convex(const FuncDataset& ds, Real L, SmoothConvexVariant variant,
                            Tolerances tol = {});

Verdict check_lojasiewicz(const FuncDataset& ds, Real mu, Real L, Real f_star,
                          Tolerances tol = {});

Verdict check_blockwise(const FuncDataset& ds, const std::vector<std::vector<int>>& partition,
                        const std::vector<Real>& Lvec, Tolerances tol = {});

Verdict check_operator_monotone_lipschitz(const OpDataset& ds, Real mu, Real L,
                                          Tolerances tol = {});

Verdict check_operator_cocoercive(const OpDataset& ds, Real mu, Real beta, Tolerances tol = {});

Verdict check_uniformly_convex(const FuncDataset& ds, Real mu, Real q, Tolerances tol = {});

Verdict check_operator_lipschitz(const OpDataset& ds, Real L, Tolerances tol = {});

// Margin helpers shared with the strengthened and SOS modules.

/// f_i >= f_j + <g_j, x_i-x_j> + |g_i-g_j|^2 / (2L), as a signed margin.
Real p2_margin(const FuncSample& si, const FuncSample& sj, Real L);

/// Third line of the Lojasiewicz description for the ordered pair (i, j).
Real loja_pair_margin(const FuncSample& si, const FuncSample& sj, Real L);

/// Blockwise margin A_{ijm} for the ordered pair (i, j) and block m.
Real blockwise_pair_margin(const FuncSample& si, const FuncSample& sj,
                           const std::vector<int>& block, Real Lm);

}  // namespace interp
