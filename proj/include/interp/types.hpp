#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace interp {

using Real = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr Real kInf = std::numeric_limits<Real>::infinity();

/// Default threshold: a margin m is accepted when m <= tol_abs + tol_rel * scale.
struct Tolerances {
  Real abs = 1e-9;
  Real rel = 1e-9;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Datasets

/// One first-order record (x, f(x), g) with g a candidate subgradient at x.
struct FuncSample {
  Vec x;
  Real f = 0;
  Vec g;
};

/// One operator record (x, T(x)).
struct OpSample {
  Vec x;
  Vec t;
};

/// Repeated x with different g encodes a multivalued subdifferential.
struct FuncDataset {
  Eigen::Index d = 0;
  std::vector<FuncSample> samples;

  int size() const { return static_cast<int>(samples.size()); }
  void validate() const;
};

struct OpDataset {
  Eigen::Index d = 0;
  std::vector<OpSample> samples;

  int size() const { return static_cast<int>(samples.size()); }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Class specifications

enum class SmoothConvexVariant {
  P,             // convexity + gradient Lipschitz continuity
  Pprime,        // convexity + quadratic upper bound
  Pdoubleprime,  // single cocoercivity-form inequality
};

struct SmoothConvex {
  Real L = 1;
  SmoothConvexVariant variant = SmoothConvexVariant::Pdoubleprime;
};

struct SmoothConvexAlpha {
  Real L = 1;
  Real alpha = 0;  // in [0, 1]
};

struct Lojasiewicz {
  Real mu = 0;  // 0 <= mu <= L
  Real L = 1;
  Real f_star = 0;  // minimal value; a minimizer sample is optional
};

struct BlockwiseSmooth {
  std::vector<std::vector<int>> partition;  // 0-based coordinate blocks covering [0, d)
  std::vector<Real> L;                      // one constant per block, > 0
};

struct MonotoneLipschitzOp {
  Real mu = 0;  // 0 <= mu <= L
  Real L = 1;
};

struct CocoerciveOp {
  Real mu = 0;    // >= 0
  Real beta = 1;  // > 0
};

struct UniformlyConvex {
  Real mu = 0;  // >= 0
  Real q = 2;   // >= 2
};

struct LipschitzOp {
  Real L = 1;
};

/// Open halfspace a.x < b.
struct Halfspace {
  Vec a;
  Real b = 0;
};

struct Ball {
  Vec center;
  Real radius = 1;
};

/// Open convex domain with a closed-form distance to its complement.
using Domain = std::variant<std::vector<Halfspace>, Ball>;

struct ConstrainedSmoothConvex {
  Real L = 1;
  Domain domain;
};

using ClassSpec = std::variant<SmoothConvex, SmoothConvexAlpha, Lojasiewicz, BlockwiseSmooth,
                               MonotoneLipschitzOp, CocoerciveOp, UniformlyConvex, LipschitzOp,
                               ConstrainedSmoothConvex>;

/// Distance from y (inside the domain) to the complement of the domain.
Real dist_to_complement(const Domain& dom, const Vec& y);
bool contains(const Domain& dom, const Vec& y);

// ---------------------------------------------------------------------------
// Verdicts

/// Indices and multiplier values attaining the worst margin.
struct Witness {
  std::vector<int> indices;
  std::vector<std::pair<std::string, Real>> multipliers;
  std::string constraint;
};

struct Verdict {
  bool satisfied = true;
  Real worst_margin = -kInf;  // -inf when no constraint applies
  std::optional<Witness> witness;
  Real scale = 1;
  Real threshold = 0;
};

inline Verdict make_verdict(Real worst_margin, Real scale, std::optional<Witness> witness,
                            Tolerances tol = {}) {
  Verdict v;
  v.worst_margin = worst_margin;
  v.scale = scale;
  v.threshold = tol.abs + tol.rel * scale;
  v.satisfied = worst_margin <= v.threshold;
  v.witness = std::move(witness);
  return v;
}

/// Data-dependent margin scale: 1 + max over samples of (|f|, |g|^2, C |x|^2).
Real margin_scale(const FuncDataset& ds, Real curvature);
/// Operator analogue: 1 + max over samples of (|t|^2, C |x|^2).
Real margin_scale(const OpDataset& ds, Real curvature);

/// Raises unless the dataset kind matches the class and all parameter
/// invariants hold (e.g. 0 <= mu <= L, partition covers [0, d)).
void validate(const FuncDataset& ds, const ClassSpec& spec);
void validate(const OpDataset& ds, const ClassSpec& spec);
void validate_params(const ClassSpec& spec, Eigen::Index d);

// ---------------------------------------------------------------------------
// Gram

/// Symmetric matrix of all pairwise inner products among {x_i} then {g_i}
/// (or {t_i}); size 2N x 2N.
Mat gram(const FuncDataset& ds);
Mat gram(const OpDataset& ds);

}  // namespace interp
