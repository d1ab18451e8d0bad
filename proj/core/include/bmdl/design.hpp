#pragma once

#include <Eigen/Dense>

#include "bmdl/model.hpp"

namespace bmdl {

// Regression design realizing the segmented-trend-plus-harmonics mean. Rows
// are times t = first_row_time..n. Z holds the baseline (1, t); D holds, for
// each regime r = 2..m+1, the pair (1[r(t)=r], t*1[r(t)=r]), then for each
// harmonic i = 1..k the pair (sin(2*pi*t*i/T), cos(2*pi*t*i/T)). Column order
// is fixed: regime pairs by increasing r, harmonic pairs by increasing i.
struct DesignMatrices {
  Eigen::MatrixXd Z;  // 2 columns
  Eigen::MatrixXd D;  // 2m + 2k columns
  int first_row_time = 1;
};

// Rows t = p_max+1..n, the fit window.
DesignMatrices build_design(const ChangepointModel& model, int n, int T,
                            int p_max);

// Same columns over rows t = first_row_time..n; the extra leading rows supply
// lag context consumed by AR whitening. Requires 1 <= first_row_time <= n.
DesignMatrices build_design_rows(const ChangepointModel& model, int n, int T,
                                 int first_row_time);

}  // namespace bmdl
