#include "interp/engine.hpp"

#include <algorithm>
#include <cmath>

namespace interp {

std::vector<ExtRecord> records_of(const FuncDataset& ds) {
  std::vector<ExtRecord> r;
  r.reserve(ds.samples.size());
  for (const auto& s : ds.samples) r.push_back({s.x, s.f, s.g});
  return r;
}

std::vector<ExtRecord> records_of(const OpDataset& ds) {
  std::vector<ExtRecord> r;
  r.reserve(ds.samples.size());
  for (const auto& s : ds.samples) r.push_back({s.x, 0, s.t});
  return r;
}

namespace {

Real record_scale(const std::vector<ExtRecord>& ds) {
  Real m = 1;
  for (const auto& s : ds) {
    m = std::max(m, std::abs(s.f));
    m = std::max(m, s.g.squaredNorm());
    m = std::max(m, s.x.squaredNorm());
  }
  return m;
}

/// All arity-m argument lists mixing z into tuples of dataset rows, following
/// the strengthening definition: the remaining m-1 slots range over all rows
/// with repetition, and z takes every position.
struct TupleEnumerator {
  const std::vector<ExtRecord>& ds;
  int arity;

  template <class Fn>
  void for_each(const ExtRecord& zrec, Fn&& fn) const {
    const int n = static_cast<int>(ds.size());
    const int m = arity;
    std::vector<const ExtRecord*> args(m);
    std::vector<int> idx(m - 1, 0);
    while (true) {
      for (int zpos = 0; zpos < m; ++zpos) {
        int q = 0;
        for (int s = 0; s < m; ++s)
          args[s] = (s == zpos) ? &zrec : &ds[idx[q++]];
        fn(args);
      }
      int carry = m - 2;
      while (carry >= 0 && ++idx[carry] == n) idx[carry--] = 0;
      if (carry < 0) break;
    }
  }
};

struct InnerObjective {
  const ConditionEvaluator& cond;
  Eigen::Index d;

  mutable std::vector<Real> buf;
  mutable ExtRecord zrec;
  std::vector<std::vector<const ExtRecord*>> args_lists;  // fixed across iterations

  InnerObjective(const std::vector<ExtRecord>& ds, Eigen::Index d_,
                 const ConditionEvaluator& cond_, const Vec& z)
      : cond(cond_), d(d_) {
    zrec.x = z;
    zrec.f = 0;
    zrec.g = Vec::Zero(d);
    TupleEnumerator{ds, cond.arity}.for_each(
        zrec, [&](const std::vector<const ExtRecord*>& args) { args_lists.push_back(args); });
  }

  int var_dim() const {
    return cond.kind == MapKind::Function ? static_cast<int>(d) + 1 : static_cast<int>(d);
  }

  void unpack(const Vec& v) const {
    if (cond.kind == MapKind::Function) {
      zrec.f = v[0];
      zrec.g = v.tail(d);
    } else {
      zrec.g = v;
    }
  }

  Real value(const Vec& v, size_t* active = nullptr) const {
    unpack(v);
    Real worst = -kInf;
    for (size_t t = 0; t < args_lists.size(); ++t) {
      buf.clear();
      cond.eval(args_lists[t], buf);
      for (Real c : buf)
        if (c > worst) {
          worst = c;
          if (active) *active = t;
        }
    }
    return worst;
  }

  /// Indices of the argument lists holding the two largest constraint values.
  std::pair<size_t, size_t> top2(const Vec& v) const {
    unpack(v);
    Real w1 = -kInf, w2 = -kInf;
    size_t t1 = 0, t2 = 0;
    for (size_t t = 0; t < args_lists.size(); ++t) {
      buf.clear();
      cond.eval(args_lists[t], buf);
      for (Real c : buf) {
        if (c > w1) {
          w2 = w1;
          t2 = t1;
          w1 = c;
          t1 = t;
        } else if (c > w2) {
          w2 = c;
          t2 = t;
        }
      }
    }
    return {t1, t2};
  }

  /// Worst constraint value within one argument list only.
  Real value_of(size_t t, const Vec& v) const {
    unpack(v);
    buf.clear();
    cond.eval(args_lists[t], buf);
    Real worst = -kInf;
    for (Real c : buf) worst = std::max(worst, c);
    return worst;
  }
};

}  // namespace

namespace {

struct InnerSolution {
  Real value = kInf;
  Vec v;
};

InnerSolution inner_solve(const std::vector<ExtRecord>& ds, Eigen::Index d,
                          const ConditionEvaluator& cond, const Vec& z, const EngineOptions& opt,
                          const Vec* warm = nullptr) {
  if (!cond.convex) throw ValidationError("inner solver requires a convex evaluator");
  if (ds.empty()) throw ValidationError("empty dataset");

  const InnerObjective obj(ds, d, cond, z);
  const int n = obj.var_dim();
  const Real scale = record_scale(ds);

  // Start from the dataset averages unless a warm start is given.
  Vec v = Vec::Zero(n);
  if (warm && warm->size() == n) {
    v = *warm;
  } else {
    Vec gbar = Vec::Zero(d);
    Real fbar = 0;
    for (const auto& s : ds) {
      gbar += s.g;
      fbar += s.f;
    }
    gbar /= static_cast<Real>(ds.size());
    fbar /= static_cast<Real>(ds.size());
    if (cond.kind == MapKind::Function) {
      v[0] = fbar;
      v.tail(d) = gbar;
    } else {
      v = gbar;
    }
  }

  Real best = obj.value(v);
  Vec best_v = v;

  // Subgradient by central differences on the active constraint only.
  auto subgrad = [&](const Vec& at, size_t active, Vec& g) {
    Vec p = at;
    for (int i = 0; i < n; ++i) {
      const Real h = 1e-6 * (1 + std::abs(at[i]));
      p[i] = at[i] + h;
      const Real fp = obj.value_of(active, p);
      p[i] = at[i] - h;
      const Real fm = obj.value_of(active, p);
      p[i] = at[i];
      g[i] = (fp - fm) / (2 * h);
    }
  };

  const int total = std::max(50, opt.inner_iters);
  const int stage_len = std::max(40, total / 20);
  Real c = 0.5 * std::sqrt(scale);
  Vec g(n);
  int used = 0;
  int halvings = 0;
  while (used < total) {
    v = best_v;
    const Real stage_start = best;
    for (int k = 1; k <= stage_len && used < total; ++k, ++used) {
      size_t active = 0;
      const Real val = obj.value(v, &active);
      if (val < best) {
        best = val;
        best_v = v;
      }
      subgrad(v, active, g);
      const Real gn = g.norm();
      if (gn < 1e-14) return {best, best_v};
      v -= (c / std::sqrt(static_cast<Real>(k))) * g / gn;
      if (v.norm() > 1e6 * scale)
        throw std::runtime_error("inner iterates diverged; evaluator may be non-convex");
    }
    // Keep the step scale only while a stage descends by more than a step
    // length; zig-zagging near the minimum improves by at most ~c per stage.
    if (stage_start - best < 0.5 * c) {
      c /= 2;
      ++halvings;
    }
    if (c < 1e-12 * scale) break;
  }
  if (halvings == 0 && total >= 1000)
    throw std::runtime_error("inner iterates kept descending; evaluator may be unbounded");

  // Compass polish: the subgradient phase lands near the minimum but stalls
  // at step-size accuracy on kinked maxima; a shrinking pattern search in the
  // (at most d+1)-dimensional variable closes the gap cheaply.
  {
    Real h = std::max(1e-2 * (1 + best_v.norm()), 4 * c);
    std::vector<Vec> dirs;
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e[i] = 1;
      dirs.push_back(e);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[i] = 1 / std::sqrt(2.0);
        e[j] = 1 / std::sqrt(2.0);
        dirs.push_back(e);
        e[j] = -e[j];
        dirs.push_back(e);
      }
    auto fd_grad_of = [&](size_t t, const Vec& at, Vec& out) {
      Vec p = at;
      for (int i = 0; i < n; ++i) {
        const Real hh = 1e-6 * (1 + std::abs(at[i]));
        p[i] = at[i] + hh;
        const Real fp = obj.value_of(t, p);
        p[i] = at[i] - hh;
        const Real fm = obj.value_of(t, p);
        p[i] = at[i];
        out[i] = (fp - fm) / (2 * hh);
      }
    };
    Vec ga(n), gb(n);
    for (int round = 0; round < 80 && h > 1e-11 * (1 + best_v.norm()); ++round) {
      bool improved = false;
      // Min-norm combination of the two most active gradients descends the
      // kink between pieces that axis moves cannot enter.
      const auto [ta, tb] = obj.top2(best_v);
      fd_grad_of(ta, best_v, ga);
      fd_grad_of(tb, best_v, gb);
      Vec bundle = ga;
      if (ta != tb) {
        const Vec diff = ga - gb;
        const Real dn = diff.squaredNorm();
        const Real lam = dn > 1e-300 ? std::clamp(-gb.dot(diff) / dn, 0.0, 1.0) : 0.0;
        bundle = gb + lam * diff;
      }
      auto attempt = [&](const Vec& cand) {
        const Real val = obj.value(cand);
        if (val < best) {
          best = val;
          best_v = cand;
          improved = true;
        }
      };
      if (bundle.norm() > 1e-300) attempt(best_v - h * bundle / bundle.norm());
      for (const auto& dir : dirs)
        for (Real sgn : {1.0, -1.0}) attempt(best_v + sgn * h * dir);
      if (!improved) h /= 2;
    }
  }
  return {best, best_v};
}

}  // namespace

Real inner_extension_value(const std::vector<ExtRecord>& ds, Eigen::Index d,
                           const ConditionEvaluator& cond, const Vec& z,
                           const EngineOptions& opt) {
  return inner_solve(ds, d, cond, z, opt).value;
}

std::pair<Vec, Vec> default_box(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                const EngineOptions& opt) {
  Vec lo = Vec::Constant(d, kInf), hi = Vec::Constant(d, -kInf);
  Real vmax = 0;
  for (const auto& s : ds) {
    lo = lo.cwiseMin(s.x);
    hi = hi.cwiseMax(s.x);
    vmax = std::max(vmax, s.g.norm());
  }
  const Real infl =
      opt.box_inflate >= 0 ? opt.box_inflate : std::max(1.0, vmax / std::max(opt.L_like, 1e-12));
  return {Vec(lo.array() - infl), Vec(hi.array() + infl)};
}

StrengtheningResult strengthening_value(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                        const ConditionEvaluator& cond, const Vec& box_lo,
                                        const Vec& box_hi, const EngineOptions& opt) {
  for (const auto& s : ds)
    if (((s.x - box_lo).array() < -1e-12).any() || ((box_hi - s.x).array() < -1e-12).any())
      throw ValidationError("box must contain the dataset points");

  // Coarse solves locate candidates; the reported maximum is re-solved with a
  // larger budget, warm-started from the coarse optimizer, so one poorly
  // converged inner solve cannot inflate the outer maximum.
  struct Candidate {
    Real coarse;
    Vec z;
    Vec warm;
  };
  std::vector<Candidate> pool;
  const int keep = std::max(1, opt.polish_top);
  auto consider = [&](const Vec& z) {
    const InnerSolution sol = inner_solve(ds, d, cond, z, opt);
    if (pool.size() == size_t(keep) && sol.value <= pool.back().coarse) return sol.value;
    Candidate c{sol.value, z, sol.v};
    auto pos = std::upper_bound(pool.begin(), pool.end(), sol.value,
                                [](Real v, const Candidate& q) { return v > q.coarse; });
    pool.insert(pos, std::move(c));
    if (pool.size() > size_t(keep)) pool.pop_back();
    return sol.value;
  };

  const int n = std::max(2, opt.grid_per_axis);
  std::vector<int> idx(d, 0);
  Vec z(d);
  while (true) {
    for (Eigen::Index c = 0; c < d; ++c)
      z[c] = box_lo[c] + (box_hi[c] - box_lo[c]) * Real(idx[c]) / (n - 1);
    consider(z);
    Eigen::Index carry = d - 1;
    while (carry >= 0 && ++idx[carry] == n) idx[carry--] = 0;
    if (carry < 0) break;
  }
  // Dataset points are always candidates (restriction to z in Q).
  for (const auto& s : ds) consider(s.x);

  // Coordinate search around the best coarse candidate.
  Vec zb = pool.front().z;
  Real best_coarse = pool.front().coarse;
  Real h = (box_hi - box_lo).maxCoeff() / (n - 1);
  for (int round = 0; round < opt.refine_rounds && h > 1e-10; ++round) {
    bool improved = false;
    for (Eigen::Index c = 0; c < d; ++c)
      for (Real sgn : {1.0, -1.0}) {
        Vec cand = zb;
        cand[c] = std::clamp(cand[c] + sgn * h, box_lo[c], box_hi[c]);
        const Real v = consider(cand);
        if (v > best_coarse) {
          best_coarse = v;
          zb = cand;
          improved = true;
        }
      }
    if (!improved) h /= 2;
  }

  EngineOptions polish = opt;
  polish.inner_iters = opt.inner_iters * std::max(1, opt.polish_factor);
  StrengtheningResult res;
  for (const auto& c : pool) {
    const Real v = inner_solve(ds, d, cond, c.z, polish, &c.warm).value;
    if (v > res.value) {
      res.value = v;
      res.argmax = c.z;
    }
  }
  return res;
}

bool verify_one_point_extensible(const std::vector<ExtRecord>& ds, Eigen::Index d,
                                 const ConditionEvaluator& cond, const Vec& box_lo,
                                 const Vec& box_hi, Real tol, const EngineOptions& opt) {
  return strengthening_value(ds, d, cond, box_lo, box_hi, opt).value <= tol;
}

// ---------------------------------------------------------------------------
// Evaluator factories

ConditionEvaluator cond_smooth_convex_pprime(Real L) {
  ConditionEvaluator c;
  c.kind = MapKind::Function;
  c.arity = 2;
  c.eval = [L](const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    const auto& x = *a[0];
    const auto& y = *a[1];
    out.push_back(y.f - x.f + y.g.dot(x.x - y.x));
    out.push_back(x.f - y.f - y.g.dot(x.x - y.x) - (L / 2) * (x.x - y.x).squaredNorm());
  };
  return c;
}

ConditionEvaluator cond_smooth_convex_p2(Real L) {
  ConditionEvaluator c;
  c.kind = MapKind::Function;
  c.arity = 2;
  c.eval = [L](const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    const auto& x = *a[0];
    const auto& y = *a[1];
    out.push_back(y.f - x.f + y.g.dot(x.x - y.x) + (x.g - y.g).squaredNorm() / (2 * L));
  };
  return c;
}

ConditionEvaluator cond_op_lipschitz(Real L) {
  ConditionEvaluator c;
  c.kind = MapKind::Operator;
  c.arity = 2;
  c.eval = [L](const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    const auto& x = *a[0];
    const auto& y = *a[1];
    out.push_back((x.g - y.g).squaredNorm() - L * L * (x.x - y.x).squaredNorm());
  };
  return c;
}

ConditionEvaluator cond_op_monotone_lipschitz(Real mu, Real L) {
  ConditionEvaluator c;
  c.kind = MapKind::Operator;
  c.arity = 2;
  c.eval = [mu, L](const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    const auto& x = *a[0];
    const auto& y = *a[1];
    const Vec dx = x.x - y.x;
    const Vec dt = x.g - y.g;
    out.push_back(-dt.dot(dx) + mu * dx.squaredNorm());
    out.push_back((dt.squaredNorm() - L * L * dx.squaredNorm()) / (2 * L));
  };
  return c;
}

ConditionEvaluator cond_blockwise(std::vector<std::vector<int>> partition,
                                  std::vector<Real> Lvec) {
  ConditionEvaluator c;
  c.kind = MapKind::Function;
  c.arity = 2;
  c.eval = [partition = std::move(partition), Lvec = std::move(Lvec)](
               const std::vector<const ExtRecord*>& a, std::vector<Real>& out) {
    const auto& x = *a[0];
    const auto& y = *a[1];
    const Real lin = y.f - x.f + y.g.dot(x.x - y.x);
    const Vec dg = x.g - y.g;
    for (size_t m = 0; m < partition.size(); ++m) {
      Real q = 0;
      for (int coord : partition[m]) q += dg[coord] * dg[coord];
      out.push_back(lin + q / (2 * Lvec[m]));
    }
  };
  return c;
}

}  // namespace interp
