#include "interp/types.hpp"

#include <algorithm>
#include <set>

namespace interp {

namespace {

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " has a non-finite entry");
}

}  // namespace

void FuncDataset::validate() const {
  if (samples.empty()) throw ValidationError("dataset has no samples");
  if (d <= 0) throw ValidationError("dataset dimension must be positive");
  for (const auto& s : samples) {
    if (s.x.size() != d || s.g.size() != d)
      throw ValidationError("sample dimension mismatch");
    check_finite(s.x, "x");
    check_finite(s.g, "g");
    if (!std::isfinite(s.f)) throw ValidationError("f has a non-finite entry");
  }
}

void OpDataset::validate() const {
  if (samples.empty()) throw ValidationError("dataset has no samples");
  if (d <= 0) throw ValidationError("dataset dimension must be positive");
  for (const auto& s : samples) {
    if (s.x.size() != d || s.t.size() != d)
      throw ValidationError("sample dimension mismatch");
    check_finite(s.x, "x");
    check_finite(s.t, "t");
  }
}

Real dist_to_complement(const Domain& dom, const Vec& y) {
  if (const auto* ball = std::get_if<Ball>(&dom)) {
    return ball->radius - (y - ball->center).norm();
  }
  const auto& hs = std::get<std::vector<Halfspace>>(dom);
  if (hs.empty()) throw ValidationError("empty halfspace list");
  Real dist = kInf;
  for (const auto& h : hs) {
    const Real na = h.a.norm();
    if (na <= 0) throw ValidationError("halfspace with zero normal");
    dist = std::min(dist, (h.b - h.a.dot(y)) / na);
  }
  return dist;
}

bool contains(const Domain& dom, const Vec& y) { return dist_to_complement(dom, y) > 0; }

Real margin_scale(const FuncDataset& ds, Real curvature) {
  Real m = 0;
  for (const auto& s : ds.samples) {
    m = std::max(m, std::abs(s.f));
    m = std::max(m, s.g.squaredNorm());
    m = std::max(m, curvature * s.x.squaredNorm());
  }
  return 1 + m;
}

Real margin_scale(const OpDataset& ds, Real curvature) {
  Real m = 0;
  for (const auto& s : ds.samples) {
    m = std::max(m, s.t.squaredNorm());
    m = std::max(m, curvature * s.x.squaredNorm());
  }
  return 1 + m;
}

namespace {

void validate_partition(const BlockwiseSmooth& spec, Eigen::Index d) {
  if (spec.partition.empty()) throw ValidationError("blockwise partition is empty");
  if (spec.partition.size() != spec.L.size())
    throw ValidationError("blockwise partition and L lists differ in length");
  for (Real Lm : spec.L)
    if (!(Lm > 0)) throw ValidationError("blockwise L must be positive");
  std::set<int> seen;
  for (const auto& block : spec.partition) {
    if (block.empty()) throw ValidationError("blockwise partition has an empty block");
    for (int c : block) {
      if (c < 0 || c >= d) throw ValidationError("partition coordinate out of range");
      if (!seen.insert(c).second) throw ValidationError("partition blocks overlap");
    }
  }
  if (static_cast<Eigen::Index>(seen.size()) != d)
    throw ValidationError("partition does not cover every coordinate");
}

}  // namespace

void validate_params(const ClassSpec& spec, Eigen::Index d) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SmoothConvex>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
        } else if constexpr (std::is_same_v<T, SmoothConvexAlpha>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
          if (!(s.alpha >= 0 && s.alpha <= 1)) throw ValidationError("alpha must be in [0, 1]");
        } else if constexpr (std::is_same_v<T, Lojasiewicz>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
          if (!(s.mu >= 0 && s.mu <= s.L)) throw ValidationError("need 0 <= mu <= L");
          if (!std::isfinite(s.f_star)) throw ValidationError("f_star must be finite");
        } else if constexpr (std::is_same_v<T, BlockwiseSmooth>) {
          validate_partition(s, d);
        } else if constexpr (std::is_same_v<T, MonotoneLipschitzOp>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
          if (!(s.mu >= 0 && s.mu <= s.L)) throw ValidationError("need 0 <= mu <= L");
        } else if constexpr (std::is_same_v<T, CocoerciveOp>) {
          if (!(s.beta > 0)) throw ValidationError("beta must be positive");
          if (!(s.mu >= 0)) throw ValidationError("mu must be nonnegative");
        } else if constexpr (std::is_same_v<T, UniformlyConvex>) {
          if (!(s.mu >= 0)) throw ValidationError("mu must be nonnegative");
          if (!(s.q >= 2)) throw ValidationError("q must be >= 2");
        } else if constexpr (std::is_same_v<T, LipschitzOp>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
        } else if constexpr (std::is_same_v<T, ConstrainedSmoothConvex>) {
          if (!(s.L > 0)) throw ValidationError("L must be positive");
        }
      },
      spec);
}

namespace {

bool is_function_class(const ClassSpec& spec) {
  return !std::holds_alternative<MonotoneLipschitzOp>(spec) &&
         !std::holds_alternative<CocoerciveOp>(spec) && !std::holds_alternative<LipschitzOp>(spec);
}

}  // namespace

void validate(const FuncDataset& ds, const ClassSpec& spec) {
  ds.validate();
  if (!is_function_class(spec))
    throw ValidationError("operator class given a function dataset");
  validate_params(spec, ds.d);
  if (const auto* c = std::get_if<ConstrainedSmoothConvex>(&spec)) {
    for (const auto& s : ds.samples)
      if (!contains(c->domain, s.x)) throw ValidationError("sample outside domain");
  }
}

void validate(const OpDataset& ds, const ClassSpec& spec) {
  ds.validate();
  if (is_function_class(spec))
    throw ValidationError("function class given an operator dataset");
  validate_params(spec, ds.d);
}

namespace {

template <class Dataset, class ValueOf>
Mat gram_of(const Dataset& ds, ValueOf value) {
  const int n = ds.size();
  Mat pts(ds.d, 2 * n);
  for (int i = 0; i < n; ++i) {
    pts.col(i) = ds.samples[i].x;
    pts.col(n + i) = value(ds.samples[i]);
  }
  Mat g = pts.transpose() * pts;
  return (g + g.transpose()) / 2;
}

}  // namespace

Mat gram(const FuncDataset& ds) {
  ds.validate();
  return gram_of(ds, [](const FuncSample& s) { return s.g; });
}

Mat gram(const OpDataset& ds) {
  ds.validate();
  return gram_of(ds, [](const OpSample& s) { return s.t; });
}

}  // namespace interp
