#pragma once

#include <span>
#include <string>
#include <vector>

#include "lirkw/common.hpp"
#include "lirkw/tableau.hpp"

namespace lirkw {

/// Dense linear map y_{n+1} = R y_n induced by one step on the split linear
/// test problem y' = L y + (J - L) y. reduced_deviation holds the max-norm
/// gap between the general assembly and the stiffly accurate short form
/// (NaN when the tableau is not stiffly accurate).
struct TransferMatrix {
    Mat R;
    int method_type = 1;
    std::string tableau_id;
    Mat hJ;
    std::vector<Mat> hL_list;
    double reduced_deviation = 0.0;
};

/// Type-1 transfer matrix: assembles the s*N stage system
///   I - (A (x) I) blkdiag(hJ - hL_i) - (Ahat (x) I) blkdiag(hL_i),
/// solves against the stacked injection of y_n and applies the output row.
/// For stiffly accurate tableaux the short form (last stage block) is also
/// evaluated and its deviation recorded. Throws SingularStageSystem.
TransferMatrix transfer_type1(const Tableau& tb, const Mat& hJ, std::span<const Mat> hL_list);

/// Type-2 transfer matrix: as above but with the constant operator hL in the
/// coupled terms plus the per-stage diagonal correction
/// blkdiag(gamma_{i,i} (hL_i - hL)).
TransferMatrix transfer_type2(const Tableau& tb, const Mat& hJ, const Mat& hL,
                              std::span<const Mat> hL_list);

/// Scalar operator configurations for stability scans.
enum class ScanConfig {
    ExactL,        // hL_i = hL = h*lambda
    GrowingStageL  // hL_i = (h*lambda)^2, hL = h*lambda
};

struct ScanPoint {
    double h_lambda = 0.0;
    double abs_R = 0.0;
};

/// Tabulates |R(h*lambda)| over a scalar grid for the given type and
/// configuration (hJ = h*lambda throughout).
std::vector<ScanPoint> stability_scan(const Tableau& tb, int type,
                                      std::span<const double> h_lambda_grid, ScanConfig config);

}  // namespace lirkw
