#include "interp/region.hpp"

#include "interp/strengthened.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace interp {

long RegionGrid::satisfied_count(int condition) const {
  long n = 0;
  const std::uint32_t mask = 1u << condition;
  for (std::uint32_t b : bits)
    if (b & mask) ++n;
  return n;
}

RegionGrid region_scan(const RegionSpec& spec) {
  if (spec.names.empty() || spec.names.size() > 32)
    throw ValidationError("between 1 and 32 conditions required");
  RegionGrid g;
  g.n1 = spec.n1;
  g.n2 = spec.n2;
  g.range1 = spec.range1;
  g.range2 = spec.range2;
  g.names = spec.names;
  g.bits.assign(size_t(spec.n1) * spec.n2, 0);
  for (int i2 = 0; i2 < spec.n2; ++i2)
    for (int i1 = 0; i1 < spec.n1; ++i1)
      g.bits[size_t(i2) * spec.n1 + i1] = spec.classify(g.coord1(i1), g.coord2(i2));
  return g;
}

namespace {

std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace

std::string region_csv(const RegionGrid& grid) {
  std::ostringstream out;
  out << "coord1,coord2";
  for (const auto& n : grid.names) out << ',' << n;
  out << '\n';
  for (int i1 = 0; i1 < grid.n1; ++i1)
    for (int i2 = 0; i2 < grid.n2; ++i2) {
      out << fmt(grid.coord1(i1)) << ',' << fmt(grid.coord2(i2));
      const std::uint32_t b = grid.at(i1, i2);
      for (size_t c = 0; c < grid.names.size(); ++c) out << ',' << ((b >> c) & 1u);
      out << '\n';
    }
  return out.str();
}

void emit_csv(const RegionGrid& grid, const std::string& path) {
  write_file(path, region_csv(grid));
}

std::string region_svg(const RegionGrid& grid) {
  const int W = 840, H = 840, M = 20;
  const Real cw = Real(W - 2 * M) / grid.n1;
  const Real ch = Real(H - 2 * M) / grid.n2;
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  for (size_t c = 0; c < grid.names.size(); ++c) {
    out << "  <g fill=\"" << palette[c % 8] << "\" fill-opacity=\"0.45\" data-condition=\""
        << grid.names[c] << "\">\n";
    for (int i2 = 0; i2 < grid.n2; ++i2)
      for (int i1 = 0; i1 < grid.n1; ++i1) {
        if (!((grid.at(i1, i2) >> c) & 1u)) continue;
        const Real x = M + i1 * cw;
        const Real y = H - M - (i2 + 1) * ch;  // coord2 grows upward
        out << "    <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw + 0.5
            << "\" height=\"" << ch + 0.5 << "\"/>\n";
      }
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg(const RegionGrid& grid, const std::string& path) {
  write_file(path, region_svg(grid));
}

void emit_json(const RegionGrid& grid, const std::string& path) {
  nlohmann::json j;
  j["n1"] = grid.n1;
  j["n2"] = grid.n2;
  j["range1"] = {grid.range1[0], grid.range1[1]};
  j["range2"] = {grid.range2[0], grid.range2[1]};
  j["conditions"] = grid.names;
  j["bits"] = grid.bits;
  write_file(path, j.dump() + "\n");
}

// ---------------------------------------------------------------------------
// Dataset-driven sweeps

namespace {

void set_coord(AnyDataset& ds, const FreeCoord& fc, Real v) {
  if (auto* f = std::get_if<FuncDataset>(&ds)) {
    auto& s = f->samples.at(fc.sample);
    if (fc.field == 'f')
      s.f = v;
    else if (fc.field == 'g')
      s.g[fc.comp] = v;
    else
      s.x[fc.comp] = v;
    return;
  }
  auto& s = std::get<OpDataset>(ds).samples.at(fc.sample);
  if (fc.field == 't')
    s.t[fc.comp] = v;
  else
    s.x[fc.comp] = v;
}

}  // namespace

RegionSpec make_dataset_region(AnyDataset base, std::vector<FreeCoord> free,
                               std::array<Real, 2> range1, std::array<Real, 2> range2, int n1,
                               int n2, std::vector<ConditionSetup> conditions, CheckOptions opt) {
  if (free.empty() || free.size() > 2)
    throw ValidationError("a region sweep needs one or two free coordinates");
  RegionSpec spec;
  for (const auto& c : conditions) spec.names.push_back(c.name);
  spec.range1 = range1;
  spec.range2 = range2;
  spec.n1 = n1;
  spec.n2 = free.size() == 2 ? n2 : 1;
  spec.classify = [base = std::move(base), free = std::move(free),
                   conditions = std::move(conditions), opt](Real c1, Real c2) {
    AnyDataset ds = base;
    set_coord(ds, free[0], c1);
    if (free.size() == 2) set_coord(ds, free[1], c2);
    std::uint32_t bits = 0;
    for (size_t c = 0; c < conditions.size(); ++c)
      if (run_check(ds, conditions[c].spec, conditions[c].strengthened, opt).satisfied)
        bits |= 1u << c;
    return bits;
  };
  return spec;
}

// ---------------------------------------------------------------------------
// Built-in figures

namespace {

FuncSample fs(std::initializer_list<Real> x, Real f, std::initializer_list<Real> g) {
  FuncSample s;
  s.x = Vec(x.size());
  int i = 0;
  for (Real v : x) s.x[i++] = v;
  s.f = f;
  s.g = Vec(g.size());
  i = 0;
  for (Real v : g) s.g[i++] = v;
  return s;
}

OpSample os(std::initializer_list<Real> x, std::initializer_list<Real> t) {
  OpSample s;
  s.x = Vec(x.size());
  int i = 0;
  for (Real v : x) s.x[i++] = v;
  s.t = Vec(t.size());
  i = 0;
  for (Real v : t) s.t[i++] = v;
  return s;
}

RegionSpec figure1(int res) {
  FuncDataset ds;
  ds.d = 1;
  ds.samples = {fs({0}, 0, {1}), fs({1}, 0, {0})};
  std::vector<ConditionSetup> conds;
  for (int k = 0; k <= 4; ++k)
    conds.push_back({"alpha" + std::to_string(k), SmoothConvexAlpha{1, alpha_iterate(k)}, false});
  conds.push_back({"alpha_inf", SmoothConvexAlpha{1, 1}, false});
  const int n = res > 0 ? res : 400;
  return make_dataset_region(ds, {{1, 'g', 0}, {1, 'f', 0}}, {-0.5, 2.5}, {0.5, 2.5}, n, n,
                             std::move(conds));
}

RegionSpec figure2(int res) {
  FuncDataset ds;
  ds.d = 1;
  ds.samples = {fs({0}, 0, {0}), fs({1}, 0.25, {0.5}), fs({0.375}, 0, {0})};
  std::vector<ConditionSetup> conds = {
      {"classical", Lojasiewicz{0.5, 1, 0}, false},
      {"strengthened", Lojasiewicz{0.5, 1, 0}, true},
  };
  const int n = res > 0 ? res : 200;
  return make_dataset_region(ds, {{2, 'g', 0}, {2, 'f', 0}}, {0.0, 0.5}, {-0.02, 0.1}, n, n,
                             std::move(conds));
}

RegionSpec figure3(int res) {
  FuncDataset ds;
  ds.d = 2;
  ds.samples = {fs({-1, 0}, 0.5, {-1, 0}), fs({1, 0}, 0.5, {1, 0}), fs({0, 1}, 0, {0, 0})};
  const BlockwiseSmooth cls{{{0}, {1}}, {1, 1}};
  std::vector<ConditionSetup> conds = {
      {"classical", cls, false},
      {"strengthened", cls, true},
  };
  const int n = res > 0 ? res : 300;
  return make_dataset_region(ds, {{2, 'g', 1}, {2, 'f', 0}}, {-2.5, 2.5}, {-1.2, 2.0}, n, n,
                             std::move(conds));
}

RegionSpec figure4(int res) {
  OpDataset ds;
  ds.d = 2;
  ds.samples = {os({0, 0}, {0, 0}), os({1, 0}, {0, -0.5}), os({0.5, 0.5}, {0, 0})};
  std::vector<ConditionSetup> conds = {
      {"classical", MonotoneLipschitzOp{0, 1}, false},
      {"strengthened", MonotoneLipschitzOp{0, 1}, true},
  };
  CheckOptions opt;
  opt.simplex = {60, 4, 25};  // per-cell scans stay sub-millisecond
  const int n = res > 0 ? res : 150;
  return make_dataset_region(ds, {{2, 't', 0}, {2, 't', 1}}, {-1.5, 1.5}, {-1.5, 1.5}, n, n,
                             std::move(conds), opt);
}

RegionSpec figure5(int res) {
  RegionSpec spec;
  spec.names = {"one_hop", "two_hop"};
  spec.range1 = {-0.70, 0.70};  // <g_y, y> with |g_y|^2 = 1/2
  spec.range2 = {-1.0, 1.2};
  const int n = res > 0 ? res : 120;
  spec.n1 = n;
  spec.n2 = n;
  struct Bounds {
    Real B1, U1, B2, U2;
    bool two_ok;
  };
  auto column = std::make_shared<std::map<Real, Bounds>>();
  spec.classify = [column](Real s, Real fy) {
    auto it = column->find(s);
    if (it == column->end()) {
      Vec x = Vec::Zero(2), gx = Vec::Zero(2);
      Vec y(2), gy(2);
      y << 1, 0;
      const Real rest = std::max(0.0, 0.5 - s * s);
      gy << s, std::sqrt(rest);
      Bounds b{};
      const BoundsBU one = bounds_BU(x, gx, 0, y, gy, 1, 1);
      b.B1 = one.B;
      b.U1 = one.U;
      b.two_ok = false;
      try {
        const BoundsBU two = bounds_BU(x, gx, 0, y, gy, 1, 2);
        b.B2 = two.B;
        b.U2 = two.U;
        b.two_ok = true;
      } catch (const std::runtime_error&) {
        // no feasible two-hop chain at this abscissa
      }
      it = column->emplace(s, b).first;
    }
    const Bounds& b = it->second;
    std::uint32_t bits = 0;
    if (b.B1 <= b.U1 && b.B1 <= fy && fy <= b.U1) bits |= 1u;
    if (b.two_ok && b.B2 <= b.U2 && b.B2 <= fy && fy <= b.U2) bits |= 2u;
    return bits;
  };
  return spec;
}

RegionSpec figure6(int res) {
  OpDataset ds;
  ds.d = 2;
  ds.samples = {os({0, 0}, {0, 0}), os({1, -0.5}, {1, 0}), os({0.5, 0.5}, {0, 0})};
  std::vector<ConditionSetup> conds = {
      {"classical", CocoerciveOp{0.5, 1}, false},
      {"strengthened", CocoerciveOp{0.5, 1}, true},
  };
  CheckOptions opt;
  opt.simplex = {60, 4, 25};
  const int n = res > 0 ? res : 150;
  return make_dataset_region(ds, {{2, 't', 0}, {2, 't', 1}}, {-1.5, 1.5}, {-1.5, 1.5}, n, n,
                             std::move(conds), opt);
}

}  // namespace

RegionSpec builtin_figure(int index, int resolution) {
  switch (index) {
    case 1:
      return figure1(resolution);
    case 2:
      return figure2(resolution);
    case 3:
      return figure3(resolution);
    case 4:
      return figure4(resolution);
    case 5:
      return figure5(resolution);
    case 6:
      return figure6(resolution);
    default:
      throw ValidationError("figure index must be in 1..6");
  }
}

// ---------------------------------------------------------------------------
// Region spec files

namespace {

using nlohmann::json;

ClassSpec class_spec_from_json(const json& j) {
  const std::string cls = j.at("class").get<std::string>();
  auto num = [&](const char* key, Real dflt) {
    return j.contains(key) ? j.at(key).get<Real>() : dflt;
  };
  if (cls == "smooth-convex") {
    SmoothConvex s{num("L", 1), SmoothConvexVariant::Pdoubleprime};
    if (j.contains("variant")) {
      const std::string v = j.at("variant").get<std::string>();
      if (v == "P")
        s.variant = SmoothConvexVariant::P;
      else if (v == "Pprime")
        s.variant = SmoothConvexVariant::Pprime;
      else if (v == "Pdoubleprime")
        s.variant = SmoothConvexVariant::Pdoubleprime;
      else
        throw ParseError("unknown variant " + v);
    }
    return s;
  }
  if (cls == "smooth-convex-alpha") return SmoothConvexAlpha{num("L", 1), num("alpha", 0)};
  if (cls == "loja") return Lojasiewicz{num("mu", 0), num("L", 1), num("fstar", 0)};
  if (cls == "blockwise") {
    BlockwiseSmooth s;
    s.partition = parse_blocks(j.at("blocks").get<std::string>());
    if (j.at("Lvec").is_string())
      s.L = parse_reals(j.at("Lvec").get<std::string>());
    else
      for (const auto& v : j.at("Lvec")) s.L.push_back(v.get<Real>());
    return s;
  }
  if (cls == "op-monotone") return MonotoneLipschitzOp{num("mu", 0), num("L", 1)};
  if (cls == "op-cocoercive") return CocoerciveOp{num("mu", 0), num("beta", 1)};
  if (cls == "unif-convex") return UniformlyConvex{num("mu", 0), num("q", 2)};
  if (cls == "op-lipschitz") return LipschitzOp{num("L", 1)};
  if (cls == "constrained") {
    ConstrainedSmoothConvex s;
    s.L = num("L", 1);
    if (j.contains("ball")) {
      Ball b;
      const auto& jb = j.at("ball");
      const auto& jc = jb.at("center");
      b.center = Vec(jc.size());
      for (size_t i = 0; i < jc.size(); ++i)
        b.center[static_cast<Eigen::Index>(i)] = jc[i].get<Real>();
      b.radius = jb.at("radius").get<Real>();
      s.domain = b;
    } else if (j.contains("halfspaces")) {
      std::vector<Halfspace> hs;
      for (const auto& jh : j.at("halfspaces")) {
        Halfspace h;
        h.a = Vec(jh.size() - 1);
        for (size_t i = 0; i + 1 < jh.size(); ++i)
          h.a[static_cast<Eigen::Index>(i)] = jh[i].get<Real>();
        h.b = jh.back().get<Real>();
        hs.push_back(std::move(h));
      }
      s.domain = hs;
    } else {
      throw ParseError("constrained class needs \"ball\" or \"halfspaces\"");
    }
    return s;
  }
  throw ParseError("unknown class " + cls);
}

}  // namespace

RegionSpec load_region_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  std::ostringstream dsbuf;
  dsbuf << j.at("dataset").dump();
  AnyDataset base = parse_dataset(dsbuf.str());

  std::vector<FreeCoord> free;
  const auto& jsamples = j.at("dataset").at("samples");
  for (size_t si = 0; si < jsamples.size(); ++si) {
    if (!jsamples[si].contains("free")) continue;
    for (const auto& jf : jsamples[si].at("free")) {
      const std::string m = jf.get<std::string>();
      FreeCoord fc;
      fc.sample = static_cast<int>(si);
      fc.field = m[0];
      fc.comp = 0;
      const auto lb = m.find('[');
      if (lb != std::string::npos) fc.comp = std::stoi(m.substr(lb + 1));
      if (fc.field != 'f' && fc.field != 'g' && fc.field != 't')
        throw ParseError("free markers name f, g[k] or t[k]");
      free.push_back(fc);
    }
  }

  auto range_of = [&](const char* key) {
    const auto& r = j.at(key);
    return std::array<Real, 2>{r.at(0).get<Real>(), r.at(1).get<Real>()};
  };
  int n1 = 400, n2 = 400;
  if (j.contains("resolution")) {
    n1 = j.at("resolution").at(0).get<int>();
    n2 = j.at("resolution").at(1).get<int>();
  }

  std::vector<ConditionSetup> conds;
  for (const auto& jc : j.at("conditions")) {
    ConditionSetup c;
    c.spec = class_spec_from_json(jc);
    c.strengthened = jc.contains("strengthened") && jc.at("strengthened").get<bool>();
    c.name = jc.contains("name")
                 ? jc.at("name").get<std::string>()
                 : jc.at("class").get<std::string>() + (c.strengthened ? "_strengthened" : "");
    conds.push_back(std::move(c));
  }

  return make_dataset_region(std::move(base), std::move(free), range_of("range1"),
                             range_of("range2"), n1, n2, std::move(conds));
}

}  // namespace interp
