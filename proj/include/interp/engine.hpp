#pragma once

#include "interp/types.hpp"

#include <functional>

namespace interp {

/// Uniform record for both mapping kinds: operators store the value in g and
/// leave f at zero.
struct ExtRecord {
  Vec x;
  Real f = 0;
  Vec g;
};

enum class MapKind { Function, Operator };

/// A finite family of jointly convex constraint left-hand sides on m
/// (point, value) arguments. Evaluators must be deterministic, and convex in
/// the candidate extension values.
struct ConditionEvaluator {
  MapKind kind = MapKind::Function;
  int arity = 2;
  bool convex = true;
  std::function<void(const std::vector<const ExtRecord*>&, std::vector<Real>&)> eval;
};

struct EngineOptions {
  int inner_iters = 5000;    // subgradient steps for the inner minimization
  int grid_per_axis = 33;    // outer z grid resolution
  int refine_rounds = 60;    // coordinate-search rounds around the best cell
  Real box_inflate = -1;     // <0: max(1, max_i |g_i| / L_like) per axis
  Real L_like = 1;           // normalizer for the default inflation rule
  int polish_top = 6;        // candidates re-solved before reporting the max
  int polish_factor = 4;     // iteration multiplier for the polishing solves
};

std::vector<ExtRecord> records_of(const FuncDataset& ds);
std::vector<ExtRecord> records_of(const OpDataset& ds);

/// Value of the inner extension problem at a fixed candidate z: the minimum
/// over extension values of the worst constraint, with every tuple and
/// permutation mixing z with dataset rows enforced. Solved by subgradient
/// descent on the pointwise maximum (diminishing steps, best iterate).
Real inner_extension_value(const std::vector<ExtRecord>& ds, Eigen::Index d,
                           const ConditionEvaluator& cond, const Vec& z,
                           const EngineOptions& opt = {});

struct StrengtheningResult {
  Real value = -kInf;
  Vec argmax;
};

/// Outer maximization over a box grid (plus the dataset points themselves and
/// local refinement around the best cell).
StrengtheningResult strengthening_value(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                        const ConditionEvaluator& cond, const Vec& box_lo,
                                        const Vec& box_hi, const EngineOptions& opt = {});

/// Default box: bounding box of the points, inflated per axis.
std::pair<Vec, Vec> default_box(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                const EngineOptions& opt);

bool verify_one_point_extensible(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                 const ConditionEvaluator& cond, const Vec& box_lo,
                                 const Vec& box_hi, Real tol, const EngineOptions& opt = {});

// Evaluator factories for the pairwise descriptions used as oracles.
ConditionEvaluator cond_smooth_convex_pprime(Real L);
ConditionEvaluator cond_smooth_convex_p2(Real L);
ConditionEvaluator cond_op_lipschitz(Real L);
ConditionEvaluator cond_op_monotone_lipschitz(Real mu, Real L);
ConditionEvaluator cond_blockwise(std::vector<std::vector<int>> partition, std::vector<Real> Lvec);

}  // namespace interp
