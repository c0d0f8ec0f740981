#pragma once

#include "interp/strengthened.hpp"
#include "interp/types.hpp"

#include <string>

namespace interp {

/// One upper-triangle entry of a symmetric template, affine in the free
/// parameter vector theta: value = c + coeffs . theta. Unlisted entries are
/// fixed at zero.
struct AffineEntry {
  int i = 0;
  int j = 0;
  Vec coeffs;  // length theta_dim; empty means fixed
  Real c = 0;

  bool fixed() const { return coeffs.size() == 0; }
};

struct MatrixTemplate {
  int dim = 0;
  std::vector<AffineEntry> entries;
};

/// Family of symmetric blocks, each entry affine in a shared theta. A
/// nonnegative scalar constraint is a 1x1 block.
struct PsdFeasibilityProblem {
  std::vector<MatrixTemplate> blocks;
  int theta_dim = 0;

  Mat assemble(int block, const Vec& theta) const;
};

struct PsdVerdict {
  bool feasible = false;
  Real best_min_eig = -kInf;
  Vec theta;
  std::vector<Mat> matrices;
  int iterations = 0;
};

struct PsdSolveOptions {
  Real eps_psd = 1e-7;
  int max_iter = 20000;
};

/// Maximizes the concave margin phi(theta) = min over blocks of the smallest
/// eigenvalue, by supergradient ascent with diminishing steps c/sqrt(k)
/// (c rescaled geometrically across restarts) and best-iterate tracking.
/// Feasible iff the best margin reaches -eps_psd; otherwise the verdict is
/// presumed infeasible, without a certificate.
PsdVerdict solve_psd_feasibility(const PsdFeasibilityProblem& p, PsdSolveOptions opt = {});

// Builders for the strengthened descriptions. Fixed entries follow the
// papers' matrix patterns; remaining entries are derived mechanically from
// the linear coupling lists.

/// Two 2x2 blocks certifying the pair cubic on its interval; theta = (Mbar12,
/// Mbar22). Throws if the fixed top-left entry disagrees with the cubic's
/// constant coefficient.
PsdFeasibilityProblem build_loja_sos(const LojaPairCoefficients& c, Real mu, Real L);

/// One 2x2 block plus a nonnegative scalar for the blockwise lambda
/// quadratic; theta = (K).
PsdFeasibilityProblem build_blockwise_sos(const BlockTripleCoefficients& c);

/// Two independent 7x7 blocks (A,B and B,A roles swapped) for the terwise
/// monotone Lipschitz polynomials; theta has nine parameters per block.
PsdFeasibilityProblem build_op_monotone_sos(const OpTripleCoefficients& c, Real mu, Real L);

/// Same pattern with the cocoercive trace coupling (factor 2 - 4 beta mu).
PsdFeasibilityProblem build_op_cocoercive_sos(const OpTripleCoefficients& c, Real mu, Real beta);

// JSON schema {"blocks":[{"dim":n,"fixed":[[i,j,v]],"affine":[[i,j,[coeffs],c]]}],
// "theta_dim":m} for debugging and regression capture.
std::string psd_problem_to_json(const PsdFeasibilityProblem& p);
PsdFeasibilityProblem psd_problem_from_json(const std::string& text);

}  // namespace interp
