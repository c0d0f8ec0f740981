#include "interp/psd.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace interp {

Mat PsdFeasibilityProblem::assemble(int block, const Vec& theta) const {
  const auto& t = blocks.at(block);
  Mat m = Mat::Zero(t.dim, t.dim);
  for (const auto& e : t.entries) {
    Real v = e.c;
    if (!e.fixed()) v += e.coeffs.dot(theta);
    m(e.i, e.j) = v;
    m(e.j, e.i) = v;
  }
  return m;
}

namespace {

/// Smallest eigenvalue and its unit eigenvector.
std::pair<Real, Vec> min_eig(const Mat& m) {
  if (m.rows() == 1) return {m(0, 0), Vec::Ones(1)};
  if (m.rows() == 2) {
    const Real a = m(0, 0), b = m(0, 1), c = m(1, 1);
    const Real mean = (a + c) / 2;
    const Real rad = std::sqrt(((a - c) / 2) * ((a - c) / 2) + b * b);
    const Real lam = mean - rad;
    Vec v(2);
    if (std::abs(b) > 1e-300) {
      v << b, lam - a;
    } else if (a <= c) {
      v << 1, 0;
    } else {
      v << 0, 1;
    }
    const Real n = v.norm();
    if (n > 0) v /= n;
    return {lam, v};
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

/// Precompiled affine structure for fast repeated evaluation.
struct CompiledProblem {
  struct Term {
    int block, i, j, p;
    Real coeff;
  };
  std::vector<Mat> base;
  std::vector<Term> terms;
  int theta_dim;

  explicit CompiledProblem(const PsdFeasibilityProblem& p) : theta_dim(p.theta_dim) {
    for (const auto& b : p.blocks) {
      Mat m = Mat::Zero(b.dim, b.dim);
      for (const auto& e : b.entries) {
        m(e.i, e.j) = e.c;
        m(e.j, e.i) = e.c;
      }
      base.push_back(std::move(m));
      const int bi = static_cast<int>(base.size()) - 1;
      for (const auto& e : b.entries)
        if (!e.fixed())
          for (int q = 0; q < e.coeffs.size(); ++q)
            if (e.coeffs[q] != 0) terms.push_back({bi, e.i, e.j, q, e.coeffs[q]});
    }
  }

  void materialize(const Vec& theta, std::vector<Mat>& out) const {
    out = base;
    for (const auto& t : terms) {
      const Real add = t.coeff * theta[t.p];
      out[t.block](t.i, t.j) += add;
      if (t.i != t.j) out[t.block](t.j, t.i) += add;
    }
  }

  /// phi and a supergradient (from the active block's eigenvector).
  std::pair<Real, Vec> value_and_grad(const Vec& theta, std::vector<Mat>& work) const {
    materialize(theta, work);
    Real phi = kInf;
    int active = 0;
    Vec active_vec;
    for (size_t b = 0; b < work.size(); ++b) {
      auto [lam, v] = min_eig(work[b]);
      if (lam < phi) {
        phi = lam;
        active = static_cast<int>(b);
        active_vec = std::move(v);
      }
    }
    Vec grad = Vec::Zero(theta_dim);
    for (const auto& t : terms) {
      if (t.block != active) continue;
      const Real w = active_vec[t.i] * active_vec[t.j] * (t.i == t.j ? 1.0 : 2.0);
      grad[t.p] += t.coeff * w;
    }
    return {phi, grad};
  }
};

}  // namespace

PsdVerdict solve_psd_feasibility(const PsdFeasibilityProblem& p, PsdSolveOptions opt) {
  PsdVerdict out;
  const CompiledProblem cp(p);
  std::vector<Mat> work;

  Real data_scale = 1;
  for (const auto& b : p.blocks)
    for (const auto& e : b.entries) data_scale = std::max(data_scale, std::abs(e.c));

  if (p.theta_dim == 0) {
    Vec theta(0);
    Real phi = kInf;
    cp.materialize(theta, work);
    for (const auto& m : work) phi = std::min(phi, min_eig(m).first);
    out.best_min_eig = phi;
    out.feasible = phi >= -opt.eps_psd;
    out.theta = theta;
    out.matrices = work;
    return out;
  }

  Vec theta = Vec::Zero(p.theta_dim);
  auto [phi, grad] = cp.value_and_grad(theta, work);
  Vec best_theta = theta;
  Real best_phi = phi;
  int used = 1;

  const int stage_len = std::max(60, opt.max_iter / 36);
  Real c = data_scale;
  Real prev_stage_best = best_phi;
  int stalled = 0;

  while (used < opt.max_iter && best_phi < -0.5 * opt.eps_psd) {
    theta = best_theta;
    for (int k = 1; k <= stage_len && used < opt.max_iter; ++k, ++used) {
      std::tie(phi, grad) = cp.value_and_grad(theta, work);
      if (phi > best_phi) {
        best_phi = phi;
        best_theta = theta;
        if (best_phi >= -0.5 * opt.eps_psd) break;
      }
      const Real gn = grad.norm();
      if (gn < 1e-300) break;  // flat: the active eigenvalue ignores theta
      theta += (c / std::sqrt(static_cast<Real>(k))) * grad / gn;
    }
    if (best_phi - prev_stage_best < 0.05 * opt.eps_psd) {
      ++stalled;
    } else {
      stalled = 0;
    }
    prev_stage_best = best_phi;
    c /= 2;
    // Stop once the step resolution is far below the remaining gap.
    if (stalled >= 2 && c <= 1e-3 * std::max(opt.eps_psd, std::abs(best_phi))) break;
    if (c < 1e-13 * data_scale) break;
  }

  out.best_min_eig = best_phi;
  out.feasible = best_phi >= -opt.eps_psd;
  out.theta = best_theta;
  cp.materialize(best_theta, out.matrices);
  out.iterations = used;
  return out;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

AffineEntry fixed_entry(int i, int j, Real v) { return AffineEntry{i, j, Vec(), v}; }

AffineEntry affine_entry(int i, int j, int theta_dim, std::initializer_list<std::pair<int, Real>> cs,
                         Real c) {
  AffineEntry e{i, j, Vec::Zero(theta_dim), c};
  for (const auto& [p, v] : cs) e.coeffs[p] = v;
  return e;
}

}  // namespace

PsdFeasibilityProblem build_loja_sos(const LojaPairCoefficients& c, Real mu, Real L) {
  if (!(mu > 0)) throw ValidationError("the interval certificate needs mu > 0");
  const Real R = 2 * mu / (2 * L + mu);
  const Real mbar11 = -c.A * (2 * L + mu);
  // The interval endpoint couples the fixed entry to the constant cubic
  // coefficient; a mismatch means the coefficients were not built together.
  if (std::abs(R * mbar11 + c.a0) > 1e-9 * (1 + std::abs(c.a0) + std::abs(mbar11)))
    throw ValidationError("inconsistent cubic coefficients for the interval certificate");

  PsdFeasibilityProblem p;
  p.theta_dim = 2;  // (Mbar12, Mbar22)
  MatrixTemplate M{2, {}};
  M.entries.push_back(affine_entry(0, 0, 2, {{0, -2 * R}}, -c.a1 + mbar11));
  M.entries.push_back(affine_entry(0, 1, 2, {{0, 1.0}, {1, -R / 2}}, -c.a2 / 2));
  M.entries.push_back(affine_entry(1, 1, 2, {{1, 1.0}}, -c.a3));
  MatrixTemplate Mbar{2, {}};
  Mbar.entries.push_back(fixed_entry(0, 0, mbar11));
  Mbar.entries.push_back(affine_entry(0, 1, 2, {{0, 1.0}}, 0));
  Mbar.entries.push_back(affine_entry(1, 1, 2, {{1, 1.0}}, 0));
  p.blocks = {std::move(M), std::move(Mbar)};
  return p;
}

PsdFeasibilityProblem build_blockwise_sos(const BlockTripleCoefficients& c) {
  PsdFeasibilityProblem p;
  p.theta_dim = 1;  // K
  MatrixTemplate M{2, {}};
  M.entries.push_back(fixed_entry(0, 0, -c.A_ijm));
  M.entries.push_back(affine_entry(0, 1, 1, {{0, -0.5}}, (c.A_ijm - c.A_ikm - c.B_jkm) / 2));
  M.entries.push_back(affine_entry(1, 1, 1, {{0, 1.0}}, c.B_jkm));
  MatrixTemplate K{1, {affine_entry(0, 0, 1, {{0, 1.0}}, 0)}};
  p.blocks = {std::move(M), std::move(K)};
  return p;
}

namespace {

/// 7x7 template in the monomial basis (a^2 t, a^2 g, a t^2, a g^2, a t g,
/// t^2 g, t g^2) for a terwise operator polynomial with pair coefficients
/// alpha, beta and the stated trace right-hand side. Free parameters occupy
/// theta[offset .. offset+8].
MatrixTemplate op_block(Real a_ik, Real a_jk, Real b_ij, Real b_ik, Real b_jk, Real trace_rhs,
                        int offset, int theta_dim) {
  MatrixTemplate t{7, {}};
  auto fix = [&](int i, int j, Real v) { t.entries.push_back(fixed_entry(i, j, v)); };
  auto one = [&](int i, int j, int p, Real s) {
    t.entries.push_back(affine_entry(i, j, theta_dim, {{offset + p, s}}, 0));
  };
  // Fixed diagonal pattern.
  fix(0, 0, -b_ij);
  fix(1, 1, -a_jk);
  fix(2, 2, -b_ij);
  fix(3, 3, -b_jk);
  fix(5, 5, -a_ik);
  fix(6, 6, -b_ik);
  // Monomial pairs with no counterpart in the polynomial.
  fix(0, 1, 0);
  fix(0, 2, 0);
  fix(1, 3, 0);
  fix(2, 5, 0);
  fix(3, 6, 0);
  fix(5, 6, 0);
  // Free entries p0..p8 = M14, M15, M16, M17, M26, M27, M34, M37, M46.
  one(0, 3, 0, 1);
  one(0, 4, 1, 1);
  one(0, 5, 2, 1);
  one(0, 6, 3, 1);
  one(1, 5, 4, 1);
  one(1, 6, 5, 1);
  one(2, 3, 6, 1);
  one(2, 6, 7, 1);
  one(3, 5, 8, 1);
  // Antisymmetric couplings.
  one(1, 4, 0, -1);  // M25 = -M14
  one(1, 2, 1, -1);  // M23 = -M15
  one(2, 4, 2, -1);  // M35 = -M16
  one(3, 4, 5, -1);  // M45 = -M27
  one(4, 5, 7, -1);  // M56 = -M37
  one(4, 6, 8, -1);  // M57 = -M46
  // Trace coupling determines M55.
  t.entries.push_back(affine_entry(4, 4, theta_dim,
                                   {{offset + 3, -2.0}, {offset + 4, -2.0}, {offset + 6, -2.0}},
                                   trace_rhs));
  return t;
}

}  // namespace

PsdFeasibilityProblem build_op_monotone_sos(const OpTripleCoefficients& c, Real mu, Real L) {
  if (!(L > 0) || !(mu >= 0) || !(mu <= L)) throw ValidationError("need 0 <= mu <= L");
  PsdFeasibilityProblem p;
  p.theta_dim = 18;
  p.blocks.push_back(op_block(c.A_ik, c.A_jk, c.B_ij, c.B_ik, c.B_jk,
                              c.A_ij + 2 * mu * c.B_ij - c.A_jk - c.A_ik, 0, 18));
  p.blocks.push_back(op_block(c.B_ik, c.B_jk, c.A_ij, c.A_ik, c.A_jk,
                              c.B_ij + 2 * mu * c.A_ij - c.B_jk - c.B_ik, 9, 18));
  return p;
}

PsdFeasibilityProblem build_op_cocoercive_sos(const OpTripleCoefficients& c, Real mu, Real beta) {
  if (!(beta > 0) || !(mu >= 0)) throw ValidationError("need beta > 0 and mu >= 0");
  PsdFeasibilityProblem p;
  p.theta_dim = 18;
  const Real f = 2 - 4 * beta * mu;
  p.blocks.push_back(op_block(c.A_ik, c.A_jk, c.B_ij, c.B_ik, c.B_jk,
                              c.A_ij - c.A_jk - c.A_ik - f * c.B_ij, 0, 18));
  p.blocks.push_back(op_block(c.B_ik, c.B_jk, c.A_ij, c.A_ik, c.A_jk,
                              c.B_ij - c.B_jk - c.B_ik - f * c.A_ij, 9, 18));
  return p;
}

// ---------------------------------------------------------------------------
// JSON

std::string psd_problem_to_json(const PsdFeasibilityProblem& p) {
  nlohmann::json j;
  j["theta_dim"] = p.theta_dim;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : p.blocks) {
    nlohmann::json jb;
    jb["dim"] = b.dim;
    jb["fixed"] = nlohmann::json::array();
    jb["affine"] = nlohmann::json::array();
    for (const auto& e : b.entries) {
      if (e.fixed()) {
        jb["fixed"].push_back({e.i, e.j, e.c});
      } else {
        nlohmann::json coeffs = nlohmann::json::array();
        for (int q = 0; q < e.coeffs.size(); ++q) coeffs.push_back(e.coeffs[q]);
        jb["affine"].push_back({e.i, e.j, coeffs, e.c});
      }
    }
    j["blocks"].push_back(std::move(jb));
  }
  return j.dump(2) + "\n";
}

PsdFeasibilityProblem psd_problem_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  PsdFeasibilityProblem p;
  try {
    p.theta_dim = j.at("theta_dim").get<int>();
    for (const auto& jb : j.at("blocks")) {
      MatrixTemplate t;
      t.dim = jb.at("dim").get<int>();
      for (const auto& je : jb.at("fixed"))
        t.entries.push_back(fixed_entry(je.at(0).get<int>(), je.at(1).get<int>(),
                                        je.at(2).get<Real>()));
      for (const auto& je : jb.at("affine")) {
        AffineEntry e;
        e.i = je.at(0).get<int>();
        e.j = je.at(1).get<int>();
        const auto& jc = je.at(2);
        e.coeffs = Vec::Zero(p.theta_dim);
        for (size_t q = 0; q < jc.size(); ++q)
          e.coeffs[static_cast<Eigen::Index>(q)] = jc[q].get<Real>();
        e.c = je.at(3).get<Real>();
        t.entries.push_back(std::move(e));
      }
      p.blocks.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad problem schema: ") + e.what());
  }
  return p;
}

}  // namespace interp
