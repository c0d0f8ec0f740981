#include "interp/cli.hpp"

#include "interp/conditions.hpp"
#include "interp/dispatch.hpp"
#include "interp/engine.hpp"
#include "interp/psd.hpp"
#include "interp/region.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <random>

namespace interp {

namespace {

using nlohmann::json;

struct ClassFlags {
  std::string cls;
  std::string variant = "Pdoubleprime";
  Real mu = 0, L = 1, beta = 1, q = 2, alpha = 0, fstar = 0;
  std::string blocks, Lvec;
  std::string ball;
  std::vector<std::string> halfspaces;

  void attach(CLI::App* app, bool required) {
    auto* o = app->add_option("--class", cls,
                              "smooth-convex|smooth-convex-alpha|loja|blockwise|op-monotone|"
                              "op-cocoercive|unif-convex|op-lipschitz|constrained");
    if (required) o->required();
    app->add_option("--variant", variant, "P|Pprime|Pdoubleprime (smooth-convex)");
    app->add_option("--mu", mu);
    app->add_option("--L", L);
    app->add_option("--beta", beta);
    app->add_option("--q", q);
    app->add_option("--alpha", alpha);
    app->add_option("--fstar", fstar);
    app->add_option("--blocks", blocks, "1-based partition, e.g. \"1,2;3\"");
    app->add_option("--Lvec", Lvec, "per-block constants, e.g. \"1,1\"");
    app->add_option("--ball", ball, "domain ball \"c1,c2;r\"");
    app->add_option("--halfspace", halfspaces, "open halfspace \"a1,a2;b\" (repeatable)");
  }

  Domain domain() const {
    if (!ball.empty()) {
      const auto semi = ball.find(';');
      if (semi == std::string::npos) throw ValidationError("--ball expects \"c1,..;r\"");
      const auto c = parse_reals(ball.substr(0, semi));
      Ball b;
      b.center = Vec(c.size());
      for (size_t i = 0; i < c.size(); ++i) b.center[static_cast<Eigen::Index>(i)] = c[i];
      b.radius = std::stod(ball.substr(semi + 1));
      return b;
    }
    std::vector<Halfspace> hs;
    for (const auto& text : halfspaces) {
      const auto semi = text.find(';');
      if (semi == std::string::npos) throw ValidationError("--halfspace expects \"a1,..;b\"");
      const auto a = parse_reals(text.substr(0, semi));
      Halfspace h;
      h.a = Vec(a.size());
      for (size_t i = 0; i < a.size(); ++i) h.a[static_cast<Eigen::Index>(i)] = a[i];
      h.b = std::stod(text.substr(semi + 1));
      hs.push_back(std::move(h));
    }
    if (hs.empty()) throw ValidationError("constrained class needs --ball or --halfspace");
    return hs;
  }

  ClassSpec spec() const {
    if (cls == "smooth-convex") {
      SmoothConvexVariant v;
      if (variant == "P")
        v = SmoothConvexVariant::P;
      else if (variant == "Pprime")
        v = SmoothConvexVariant::Pprime;
      else if (variant == "Pdoubleprime")
        v = SmoothConvexVariant::Pdoubleprime;
      else
        throw ValidationError("unknown variant " + variant);
      return SmoothConvex{L, v};
    }
    if (cls == "smooth-convex-alpha") return SmoothConvexAlpha{L, alpha};
    if (cls == "loja") return Lojasiewicz{mu, L, fstar};
    if (cls == "blockwise") return BlockwiseSmooth{parse_blocks(blocks), parse_reals(Lvec)};
    if (cls == "op-monotone") return MonotoneLipschitzOp{mu, L};
    if (cls == "op-cocoercive") return CocoerciveOp{mu, beta};
    if (cls == "unif-convex") return UniformlyConvex{mu, q};
    if (cls == "op-lipschitz") return LipschitzOp{L};
    if (cls == "constrained") return ConstrainedSmoothConvex{L, domain()};
    throw ValidationError("unknown class " + cls);
  }
};

json witness_json(const Witness& w) {
  json j;
  j["indices"] = w.indices;
  j["constraint"] = w.constraint;
  json mult = json::object();
  for (const auto& [k, v] : w.multipliers) mult[k] = v;
  j["multipliers"] = mult;
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["satisfied"] = v.satisfied;
  if (std::isfinite(v.worst_margin)) {
    j["worst_margin"] = v.worst_margin;
  } else {
    j["worst_margin"] = nullptr;
    j["vacuous"] = true;
  }
  j["threshold"] = v.threshold;
  j["scale"] = v.scale;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  return j;
}

int run_check_cmd(const std::string& path, const ClassFlags& flags, bool strengthened, Real tol,
                  int grid) {
  const AnyDataset ds = load_dataset(path);
  CheckOptions opt;
  if (tol > 0) opt.tol = {tol, tol};
  if (grid > 0) {
    opt.simplex.subdivisions = grid;
    opt.line.grid = std::max(grid, 8);
  }
  const Verdict v = run_check(ds, flags.spec(), strengthened, opt);
  std::cout << verdict_json(v).dump(2) << "\n";
  return v.satisfied ? 0 : 1;
}

int run_sdp_cmd(const std::string& path, const ClassFlags& flags, Real eps, int max_iter) {
  const AnyDataset any = load_dataset(path);
  PsdSolveOptions sopt;
  if (eps > 0) sopt.eps_psd = eps;
  if (max_iter > 0) sopt.max_iter = max_iter;

  json out;
  out["problems"] = json::array();
  bool all_feasible = true;
  auto record = [&](json meta, const PsdFeasibilityProblem& prob) {
    const PsdVerdict v = solve_psd_feasibility(prob, sopt);
    meta["feasible"] = v.feasible;
    meta["best_min_eig"] = v.best_min_eig;
    meta["iterations"] = v.iterations;
    out["problems"].push_back(std::move(meta));
    all_feasible = all_feasible && v.feasible;
  };

  if (flags.cls == "loja") {
    const auto& ds = std::get<FuncDataset>(any);
    const int n = ds.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto c =
            loja_pair_coefficients(ds.samples[i], ds.samples[j], flags.mu, flags.L, flags.fstar);
        record({{"pair", {i, j}}}, build_loja_sos(c, flags.mu, flags.L));
      }
  } else if (flags.cls == "blockwise") {
    const auto& ds = std::get<FuncDataset>(any);
    const auto partition = parse_blocks(flags.blocks);
    const auto Lv = parse_reals(flags.Lvec);
    const int n = ds.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          for (size_t m = 0; m < partition.size(); ++m)
            record({{"triple", {i, j, k}}, {"block", m}},
                   build_blockwise_sos(block_triple_coefficients(
                       ds.samples[i], ds.samples[j], ds.samples[k], partition, Lv,
                       static_cast<int>(m))));
        }
      }
  } else if (flags.cls == "op-monotone" || flags.cls == "op-cocoercive") {
    const auto& ds = std::get<OpDataset>(any);
    const int n = ds.size();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        for (int j = i + 1; j < n; ++j) {
          if (j == k) continue;
          if (flags.cls == "op-monotone")
            record({{"triple", {i, j, k}}},
                   build_op_monotone_sos(op_monotone_coefficients(ds, i, j, k, flags.mu, flags.L),
                                         flags.mu, flags.L));
          else
            record({{"triple", {i, j, k}}},
                   build_op_cocoercive_sos(
                       op_cocoercive_coefficients(ds, i, j, k, flags.mu, flags.beta), flags.mu,
                       flags.beta));
        }
      }
  } else {
    throw ValidationError("sdp supports loja, blockwise, op-monotone, op-cocoercive");
  }

  out["all_feasible"] = all_feasible;
  std::cout << out.dump(2) << "\n";
  return all_feasible ? 0 : 1;
}

int run_oracle_cmd(const std::string& cls, int trials, std::uint64_t seed, Real L) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> u(-1, 1);
  int agree = 0, banded = 0, mismatches = 0;
  EngineOptions eopt;
  eopt.inner_iters = 1500;
  eopt.grid_per_axis = 9;
  eopt.L_like = L;

  for (int t = 0; t < trials; ++t) {
    if (cls == "op-lipschitz") {
      OpDataset ds;
      ds.d = 1 + (rng() % 2);
      for (int s = 0; s < 3; ++s) {
        OpSample smp;
        smp.x = Vec(ds.d);
        smp.t = Vec(ds.d);
        for (Eigen::Index c = 0; c < ds.d; ++c) {
          smp.x[c] = u(rng);
          smp.t[c] = u(rng);
        }
        ds.samples.push_back(std::move(smp));
      }
      const Verdict pairwise = check_operator_lipschitz(ds, L);
      const Real band = 1e-3 * pairwise.scale;
      if (std::abs(pairwise.worst_margin) <= band) {
        ++banded;
        continue;
      }
      const auto recs = records_of(ds);
      const auto [lo, hi] = default_box(recs, ds.d, eopt);
      const bool ext =
          verify_one_point_extensible(recs, ds.d, cond_op_lipschitz(L), lo, hi, band / 2, eopt);
      if (ext == pairwise.satisfied)
        ++agree;
      else
        ++mismatches;
    } else if (cls == "smooth-convex") {
      FuncDataset ds;
      ds.d = 1;
      for (int s = 0; s < 2; ++s) {
        FuncSample smp;
        smp.x = Vec(1);
        smp.g = Vec(1);
        smp.x[0] = u(rng);
        smp.g[0] = u(rng);
        smp.f = u(rng);
        ds.samples.push_back(std::move(smp));
      }
      const Verdict p2 = check_smooth_convex(ds, L, SmoothConvexVariant::Pdoubleprime);
      const Real band = 1e-3 * p2.scale;
      if (std::abs(p2.worst_margin) <= band) {
        ++banded;
        continue;
      }
      const auto recs = records_of(ds);
      const auto [lo, hi] = default_box(recs, ds.d, eopt);
      const auto sv = strengthening_value(recs, ds.d, cond_smooth_convex_pprime(L), lo, hi, eopt);
      const bool ext = sv.value <= band / 2;
      if (ext == p2.satisfied)
        ++agree;
      else
        ++mismatches;
    } else {
      throw ValidationError("oracle supports op-lipschitz and smooth-convex");
    }
  }

  json out;
  out["class"] = cls;
  out["trials"] = trials;
  out["agree"] = agree;
  out["in_band_skipped"] = banded;
  out["mismatches"] = mismatches;
  std::cout << out.dump(2) << "\n";
  return mismatches == 0 ? 0 : 1;
}

Vec vec_from_flag(const std::string& text) {
  const auto vals = parse_reals(text);
  Vec v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Finite-dataset interpolation/extension condition checker"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "Evaluate a condition on a dataset file");
  std::string check_path;
  check->add_option("dataset", check_path, "dataset JSON file")->required();
  ClassFlags check_flags;
  check_flags.attach(check, true);
  bool strengthened = false;
  check->add_flag("--strengthened", strengthened, "use the strengthened description");
  Real check_tol = -1;
  int check_grid = -1;
  check->add_option("--tol", check_tol, "absolute and relative tolerance");
  check->add_option("--grid", check_grid, "scan resolution for terwise conditions");

  // region
  auto* region = app.add_subcommand("region", "Classify a 2-D sweep from a spec file");
  std::string region_spec_path, region_out = "region.csv", region_format = "csv";
  region->add_option("spec", region_spec_path, "region spec JSON file")->required();
  region->add_option("--out", region_out, "output path");
  region->add_option("--format", region_format, "csv|svg|json");

  // figure
  auto* figure = app.add_subcommand("figure", "Reproduce a built-in region figure");
  int figure_index = 1;
  int figure_grid = -1;
  std::string figure_out, figure_format = "svg";
  figure->add_option("index", figure_index, "figure 1..6")->required();
  figure->add_option("--out", figure_out, "output path (default figure<k>.<ext>)");
  figure->add_option("--format", figure_format, "csv|svg|json");
  figure->add_option("--grid", figure_grid, "resolution override");

  // sdp
  auto* sdp = app.add_subcommand("sdp", "Solve the PSD certificates for a dataset");
  std::string sdp_path;
  sdp->add_option("dataset", sdp_path, "dataset JSON file")->required();
  ClassFlags sdp_flags;
  sdp_flags.attach(sdp, true);
  Real sdp_eps = -1;
  int sdp_iter = -1;
  sdp->add_option("--eps", sdp_eps, "PSD tolerance");
  sdp->add_option("--max-iter", sdp_iter, "solver iteration budget");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Engine vs closed-form comparison");
  std::string oracle_class = "op-lipschitz";
  int oracle_trials = 100;
  std::uint64_t oracle_seed = 1;
  Real oracle_L = 1;
  oracle->add_option("--class", oracle_class, "op-lipschitz|smooth-convex");
  oracle->add_option("--trials", oracle_trials);
  oracle->add_option("--seed", oracle_seed);
  oracle->add_option("--L", oracle_L);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Two-point value bounds on a constrained domain");
  int bounds_N = 1;
  std::string bx = "0", bgx = "0", by = "1", bgy = "0";
  Real bfx = 0, bounds_L = 1;
  std::uint64_t bounds_seed = 20240801;
  bounds->add_option("--N", bounds_N, "1 or 2")->required();
  bounds->add_option("--x", bx);
  bounds->add_option("--gx", bgx);
  bounds->add_option("--fx", bfx);
  bounds->add_option("--y", by);
  bounds->add_option("--gy", bgy);
  bounds->add_option("--L", bounds_L);
  bounds->add_option("--seed", bounds_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed())
      return run_check_cmd(check_path, check_flags, strengthened, check_tol, check_grid);
    if (region->parsed()) {
      const RegionGrid g = region_scan(load_region_spec(region_spec_path));
      if (region_format == "csv")
        emit_csv(g, region_out);
      else if (region_format == "svg")
        emit_svg(g, region_out);
      else if (region_format == "json")
        emit_json(g, region_out);
      else
        throw ValidationError("unknown format " + region_format);
      std::cout << region_out << "\n";
      return 0;
    }
    if (figure->parsed()) {
      const RegionGrid g = region_scan(builtin_figure(figure_index, figure_grid));
      std::string out = figure_out;
      if (out.empty()) out = "figure" + std::to_string(figure_index) + "." + figure_format;
      if (figure_format == "csv")
        emit_csv(g, out);
      else if (figure_format == "svg")
        emit_svg(g, out);
      else if (figure_format == "json")
        emit_json(g, out);
      else
        throw ValidationError("unknown format " + figure_format);
      std::cout << out << "\n";
      return 0;
    }
    if (sdp->parsed()) return run_sdp_cmd(sdp_path, sdp_flags, sdp_eps, sdp_iter);
    if (oracle->parsed())
      return run_oracle_cmd(oracle_class, oracle_trials, oracle_seed, oracle_L);
    if (bounds->parsed()) {
      const BoundsBU r = bounds_BU(vec_from_flag(bx), vec_from_flag(bgx), bfx,
                                   vec_from_flag(by), vec_from_flag(bgy), bounds_L, bounds_N,
                                   bounds_seed);
      json out;
      out["N"] = bounds_N;
      out["B"] = r.B;
      out["U"] = r.U;
      out["certified"] = r.certified;
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace interp
