#include "qprosumer/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

namespace qprosumer {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const NelderMeadOptions& options) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const size_t dim = start.size();
  NelderMeadResult result;

  const auto eval = [&](const std::vector<double>& x) {
    const double fx = f(x);
    ++result.evaluations;
    result.history.push_back(fx);
    return fx;
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  for (size_t i = 0; i < dim; ++i) simplex[i + 1][i] += options.initial_step;
  for (size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

  std::vector<size_t> order(dim + 1);
  std::vector<double> centroid(dim), candidate(dim);

  while (result.evaluations < options.max_evals) {
    for (size_t i = 0; i <= dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second_worst = order[dim - 1];

    if (values[worst] - values[best] <=
        options.f_spread_tol * (1.0 + std::abs(values[best])))
      break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
    }
    for (size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(dim);

    for (size_t d = 0; d < dim; ++d)
      candidate[d] = centroid[d] + kReflect * (centroid[d] - simplex[worst][d]);
    const double f_reflect = eval(candidate);

    if (f_reflect < values[best]) {
      std::vector<double> expanded(dim);
      for (size_t d = 0; d < dim; ++d)
        expanded[d] = centroid[d] + kExpand * (candidate[d] - centroid[d]);
      const double f_expand = eval(expanded);
      if (f_expand < f_reflect) {
        simplex[worst] = std::move(expanded);
        values[worst] = f_expand;
      } else {
        simplex[worst] = candidate;
        values[worst] = f_reflect;
      }
    } else if (f_reflect < values[second_worst]) {
      simplex[worst] = candidate;
      values[worst] = f_reflect;
    } else {
      const bool outside = f_reflect < values[worst];
      std::vector<double> contracted(dim);
      for (size_t d = 0; d < dim; ++d)
        contracted[d] = outside
                            ? centroid[d] + kContract * (candidate[d] - centroid[d])
                            : centroid[d] + kContract * (simplex[worst][d] - centroid[d]);
      const double f_contract = eval(contracted);
      if (f_contract < std::min(f_reflect, values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contract;
      } else {
        for (size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (size_t d = 0; d < dim; ++d)
            simplex[i][d] = simplex[best][d] + kShrink * (simplex[i][d] - simplex[best][d]);
          values[i] = eval(simplex[i]);
          if (result.evaluations >= options.max_evals) break;
        }
      }
    }
  }

  size_t best = 0;
  for (size_t i = 1; i <= dim; ++i)
    if (values[i] < values[best]) best = i;
  result.x = simplex[best];
  result.fx = values[best];
  return result;
}

}  // namespace qprosumer
