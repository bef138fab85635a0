#pragma once

#include <functional>
#include <vector>

namespace qprosumer {

struct NelderMeadOptions {
  int max_evals = 400;
  double initial_step = 0.3;     // simplex edge length around the start point
  double f_spread_tol = 1e-7;    // stop when best..worst values collapse
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
  std::vector<double> history;  // every objective value, in evaluation order
};

// Downhill simplex descent; derivative-free, deterministic for a given start.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const NelderMeadOptions& options = {});

}  // namespace qprosumer
