#include "bmdl/design.hpp"

#include <cmath>
#include <numbers>

namespace bmdl {

DesignMatrices build_design_rows(const ChangepointModel& model, int n, int T,
                                 int first_row_time) {
  const std::vector<int> taus = changepoint_times(model.eta);
  const int m = static_cast<int>(taus.size());
  const int k = model.k;
  const int rows = n - first_row_time + 1;

  DesignMatrices out;
  out.first_row_time = first_row_time;
  out.Z.resize(rows, 2);
  out.D = Eigen::MatrixXd::Zero(rows, 2 * m + 2 * k);

  for (int i = 0; i < rows; ++i) {
    const int t = first_row_time + i;
    out.Z(i, 0) = 1.0;
    out.Z(i, 1) = static_cast<double>(t);

    // Regime increment pair for the regime t falls in; regime 1 has none.
    const int r = regime_index(model.eta, t);
    if (r > 1) {
      const int c = 2 * (r - 2);
      out.D(i, c) = 1.0;
      out.D(i, c + 1) = static_cast<double>(t);
    }
    for (int h = 1; h <= k; ++h) {
      const double w = 2.0 * std::numbers::pi * t * h / T;
      out.D(i, 2 * m + 2 * (h - 1)) = std::sin(w);
      out.D(i, 2 * m + 2 * (h - 1) + 1) = std::cos(w);
    }
  }
  return out;
}

DesignMatrices build_design(const ChangepointModel& model, int n, int T,
                            int p_max) {
  return build_design_rows(model, n, T, p_max + 1);
}

}  // namespace bmdl
