#pragma once

#include "interp/types.hpp"

#include <initializer_list>
#include <random>

namespace interp::test {

inline Vec vec(std::initializer_list<Real> vals) {
  Vec v(vals.size());
  int i = 0;
  for (Real x : vals) v[i++] = x;
  return v;
}

inline FuncSample fsample(std::initializer_list<Real> x, Real f, std::initializer_list<Real> g) {
  return FuncSample{vec(x), f, vec(g)};
}

inline OpSample osample(std::initializer_list<Real> x, std::initializer_list<Real> t) {
  return OpSample{vec(x), vec(t)};
}

inline FuncDataset fdataset(Eigen::Index d, std::vector<FuncSample> samples) {
  FuncDataset ds;
  ds.d = d;
  ds.samples = std::move(samples);
  return ds;
}

inline OpDataset odataset(Eigen::Index d, std::vector<OpSample> samples) {
  OpDataset ds;
  ds.d = d;
  ds.samples = std::move(samples);
  return ds;
}

/// Three-point blockwise counterexample: consistent pairwise, no extension.
inline FuncDataset blockwise_counterexample() {
  return fdataset(2, {fsample({-1, 0}, 0.5, {-1, 0}), fsample({1, 0}, 0.5, {1, 0}),
                      fsample({0, 0}, 0.0, {0, -1})});
}

/// Three-point monotone Lipschitz counterexample (mu = 0, L = 1).
inline OpDataset op_counterexample() {
  return odataset(2, {osample({0, 0}, {0, 0}), osample({1, 0}, {0, 0}),
                      osample({0.5, 0}, {0, -0.5})});
}

inline Vec random_vec(std::mt19937_64& rng, Eigen::Index d, Real lo = -1, Real hi = 1) {
  std::uniform_real_distribution<Real> u(lo, hi);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = u(rng);
  return v;
}

inline FuncDataset random_fdataset(std::mt19937_64& rng, Eigen::Index d, int n, Real span = 1) {
  FuncDataset ds;
  ds.d = d;
  std::uniform_real_distribution<Real> u(-span, span);
  for (int i = 0; i < n; ++i) ds.samples.push_back({random_vec(rng, d, -span, span), u(rng),
                                                    random_vec(rng, d, -span, span)});
  return ds;
}

inline OpDataset random_odataset(std::mt19937_64& rng, Eigen::Index d, int n, Real span = 1) {
  OpDataset ds;
  ds.d = d;
  for (int i = 0; i < n; ++i)
    ds.samples.push_back({random_vec(rng, d, -span, span), random_vec(rng, d, -span, span)});
  return ds;
}

}  // namespace interp::test
