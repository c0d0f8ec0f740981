#include "interp/dispatch.hpp"

#include "interp/conditions.hpp"

#include <sstream>

namespace interp {

Verdict run_check(const AnyDataset& any, const ClassSpec& spec, bool strengthened,
                  const CheckOptions& opt) {
  if (const auto* fds = std::get_if<FuncDataset>(&any)) {
    const auto& ds = *fds;
    if (const auto* s = std::get_if<SmoothConvex>(&spec)) {
      if (strengthened)
        return check_smooth_convex(ds, s->L, SmoothConvexVariant::Pdoubleprime, opt.tol);
      return check_smooth_convex(ds, s->L, s->variant, opt.tol);
    }
    if (const auto* s = std::get_if<SmoothConvexAlpha>(&spec)) {
      const Real a = strengthened ? (1 + s->alpha) / 2 : s->alpha;
      return check_smooth_convex_alpha(ds, s->L, a, opt.tol);
    }
    if (const auto* s = std::get_if<Lojasiewicz>(&spec)) {
      if (strengthened) return check_loja_strengthened(ds, s->mu, s->L, s->f_star, opt.tol);
      return check_lojasiewicz(ds, s->mu, s->L, s->f_star, opt.tol);
    }
    if (const auto* s = std::get_if<BlockwiseSmooth>(&spec)) {
      if (strengthened) return check_blockwise_strengthened(ds, s->partition, s->L, opt.tol);
      return check_blockwise(ds, s->partition, s->L, opt.tol);
    }
    if (const auto* s = std::get_if<UniformlyConvex>(&spec)) {
      if (strengthened)
        return check_unif_convex_strengthened(ds, s->mu, s->q, opt.tol, opt.line);
      return check_uniformly_convex(ds, s->mu, s->q, opt.tol);
    }
    if (const auto* s = std::get_if<ConstrainedSmoothConvex>(&spec)) {
      if (strengthened) return check_constrained_smooth_convex(ds, s->L, s->domain, opt.tol);
      validate(ds, spec);
      return check_smooth_convex(ds, s->L, SmoothConvexVariant::P, opt.tol);
    }
    throw ValidationError("operator class given a function dataset");
  }

  const auto& ds = std::get<OpDataset>(any);
  if (const auto* s = std::get_if<MonotoneLipschitzOp>(&spec)) {
    if (strengthened)
      return check_op_monotone_strengthened(ds, s->mu, s->L, opt.tol, opt.simplex);
    return check_operator_monotone_lipschitz(ds, s->mu, s->L, opt.tol);
  }
  if (const auto* s = std::get_if<CocoerciveOp>(&spec)) {
    if (strengthened)
      return check_op_cocoercive_strengthened(ds, s->mu, s->beta, opt.tol, opt.simplex);
    return check_operator_cocoercive(ds, s->mu, s->beta, opt.tol);
  }
  if (const auto* s = std::get_if<LipschitzOp>(&spec)) {
    // Stable under strengthening: the pairwise check is already exact.
    return check_operator_lipschitz(ds, s->L, opt.tol);
  }
  throw ValidationError("function class given an operator dataset");
}

std::vector<std::vector<int>> parse_blocks(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::istringstream all(text);
  std::string part;
  while (std::getline(all, part, ';')) {
    std::vector<int> block;
    std::istringstream bs(part);
    std::string tok;
    while (std::getline(bs, tok, ',')) {
      if (tok.empty()) continue;
      const int one_based = std::stoi(tok);
      if (one_based < 1) throw ValidationError("block coordinates are 1-based");
      block.push_back(one_based - 1);
    }
    if (!block.empty()) blocks.push_back(std::move(block));
  }
  if (blocks.empty()) throw ValidationError("empty partition");
  return blocks;
}

std::vector<Real> parse_reals(const std::string& text) {
  std::vector<Real> vals;
  std::istringstream all(text);
  std::string tok;
  while (std::getline(all, tok, ',')) {
    if (tok.empty()) continue;
    vals.push_back(std::stod(tok));
  }
  if (vals.empty()) throw ValidationError("empty list");
  return vals;
}

}  // namespace interp
