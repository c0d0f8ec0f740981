#include "interp/dataset_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace interp {

namespace {

using nlohmann::json;

Vec vec_of(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<Real>();
  }
  return v;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

AnyDataset parse(const json& j) {
  if (!j.is_object()) throw ParseError("dataset file must hold a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError("missing \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind != "function" && kind != "operator")
    throw ParseError("kind must be \"function\" or \"operator\"");
  if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty())
    throw ParseError("missing or empty \"samples\"");

  Eigen::Index d = -1;
  if (j.contains("d")) {
    if (!j["d"].is_number_integer() || j["d"].get<int>() <= 0)
      throw ParseError("\"d\" must be a positive integer");
    d = j["d"].get<int>();
  }

  auto check_d = [&](const Vec& v) {
    if (d < 0) d = v.size();  // inferred from the first sample
    if (v.size() != d) throw ParseError("sample dimension mismatch");
  };

  if (kind == "function") {
    FuncDataset ds;
    for (const auto& js : j["samples"]) {
      FuncSample s;
      s.x = vec_of(js.at("x"), "x");
      check_d(s.x);
      if (!js.contains("f") || !js["f"].is_number()) throw ParseError("sample missing \"f\"");
      s.f = js["f"].get<Real>();
      s.g = vec_of(js.at("g"), "g");
      check_d(s.g);
      ds.samples.push_back(std::move(s));
    }
    ds.d = d;
    ds.validate();
    return ds;
  }

  OpDataset ds;
  for (const auto& js : j["samples"]) {
    OpSample s;
    s.x = vec_of(js.at("x"), "x");
    check_d(s.x);
    s.t = vec_of(js.at("t"), "t");
    check_d(s.t);
    ds.samples.push_back(std::move(s));
  }
  ds.d = d;
  ds.validate();
  return ds;
}

json to_json_obj(const FuncDataset& ds) {
  json j;
  j["kind"] = "function";
  j["d"] = static_cast<int>(ds.d);
  j["samples"] = json::array();
  for (const auto& s : ds.samples)
    j["samples"].push_back({{"x", vec_json(s.x)}, {"f", s.f}, {"g", vec_json(s.g)}});
  return j;
}

json to_json_obj(const OpDataset& ds) {
  json j;
  j["kind"] = "operator";
  j["d"] = static_cast<int>(ds.d);
  j["samples"] = json::array();
  for (const auto& s : ds.samples)
    j["samples"].push_back({{"x", vec_json(s.x)}, {"t", vec_json(s.t)}});
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

AnyDataset parse_dataset(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad dataset schema: ") + e.what());
  }
}

AnyDataset load_dataset(const std::string& path) { return parse_dataset(slurp(path)); }

FuncDataset load_function_dataset(const std::string& path) {
  auto any = load_dataset(path);
  if (auto* f = std::get_if<FuncDataset>(&any)) return std::move(*f);
  throw ParseError(path + ": expected a function dataset");
}

OpDataset load_operator_dataset(const std::string& path) {
  auto any = load_dataset(path);
  if (auto* o = std::get_if<OpDataset>(&any)) return std::move(*o);
  throw ParseError(path + ": expected an operator dataset");
}

std::string dataset_to_json(const FuncDataset& ds) { return to_json_obj(ds).dump(2) + "\n"; }
std::string dataset_to_json(const OpDataset& ds) { return to_json_obj(ds).dump(2) + "\n"; }

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace

void save_dataset(const FuncDataset& ds, const std::string& path) {
  write_file(path, dataset_to_json(ds));
}

void save_dataset(const OpDataset& ds, const std::string& path) {
  write_file(path, dataset_to_json(ds));
}

}  // namespace interp
