#pragma once

#include "interp/dataset_io.hpp"
#include "interp/strengthened.hpp"
#include "interp/types.hpp"

#include <string>

namespace interp {

struct CheckOptions {
  Tolerances tol;
  SimplexScanOptions simplex;
  LineScanOptions line;
};

/// Runs the classical or strengthened checker selected by the class spec.
/// For the smooth convex alpha family, "strengthened" applies one refinement
/// round (alpha -> (1 + alpha) / 2); pairwise-stable classes reuse their
/// classical checker.
Verdict run_check(const AnyDataset& ds, const ClassSpec& spec, bool strengthened,
                  const CheckOptions& opt = {});

/// "1,2;3" with 1-based coordinates -> zero-based partition blocks.
std::vector<std::vector<int>> parse_blocks(const std::string& text);
std::vector<Real> parse_reals(const std::string& text);

}  // namespace interp
