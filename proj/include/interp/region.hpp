#pragma once

#include "interp/dispatch.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace interp {

/// One free coordinate of a region sweep: field 'f', 'g' or 't' of a sample.
struct FreeCoord {
  int sample = 0;
  char field = 'f';
  int comp = 0;
};

struct RegionSpec {
  std::vector<std::string> names;
  std::function<std::uint32_t(Real, Real)> classify;  // bit i = condition i satisfied
  std::array<Real, 2> range1{0, 1};
  std::array<Real, 2> range2{0, 1};
  int n1 = 400;
  int n2 = 400;
};

struct RegionGrid {
  int n1 = 0;
  int n2 = 0;
  std::array<Real, 2> range1{0, 1};
  std::array<Real, 2> range2{0, 1};
  std::vector<std::string> names;
  std::vector<std::uint32_t> bits;  // index = i2 * n1 + i1

  Real coord1(int i) const {
    return n1 < 2 ? range1[0] : range1[0] + (range1[1] - range1[0]) * Real(i) / (n1 - 1);
  }
  Real coord2(int i) const {
    return n2 < 2 ? range2[0] : range2[0] + (range2[1] - range2[0]) * Real(i) / (n2 - 1);
  }
  std::uint32_t at(int i1, int i2) const { return bits[size_t(i2) * n1 + i1]; }
  long satisfied_count(int condition) const;
};

RegionGrid region_scan(const RegionSpec& spec);

void emit_csv(const RegionGrid& grid, const std::string& path);
std::string region_csv(const RegionGrid& grid);
void emit_svg(const RegionGrid& grid, const std::string& path);
std::string region_svg(const RegionGrid& grid);
void emit_json(const RegionGrid& grid, const std::string& path);

/// Region spec driven by a dataset with free coordinates and a list of
/// (name, class, strengthened) conditions.
struct ConditionSetup {
  std::string name;
  ClassSpec spec;
  bool strengthened = false;
};

RegionSpec make_dataset_region(AnyDataset base, std::vector<FreeCoord> free,
                               std::array<Real, 2> range1, std::array<Real, 2> range2, int n1,
                               int n2, std::vector<ConditionSetup> conditions,
                               CheckOptions opt = {});

/// Built-in sweeps reproducing the six region figures; resolution <= 0 keeps
/// each figure's default.
RegionSpec builtin_figure(int index, int resolution = 0);

/// JSON region spec: the dataset schema plus per-sample "free" markers,
/// ranges, resolution, and a condition list.
RegionSpec load_region_spec(const std::string& path);

}  // namespace interp
