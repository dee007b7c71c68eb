#include "lirkw/stability.hpp"

#include <cmath>
#include <limits>

namespace lirkw {

namespace {

bool is_stiffly_accurate(const Tableau& tb, double tol = 1e-12) {
    const int s = tb.stages;
    for (int j = 0; j < s; ++j) {
        if (std::abs(tb.b[j] - tb.a(s - 1, j)) > tol) return false;
        if (std::abs(tb.g[j] - tb.gamma(s - 1, j)) > tol) return false;
    }
    return true;
}

void check_dims(const Mat& hJ, std::span<const Mat> hL_list, int s) {
    const auto n = hJ.rows();
    if (hJ.cols() != n) throw DimensionMismatch("transfer: hJ not square");
    if (static_cast<int>(hL_list.size()) != s)
        throw DimensionMismatch("transfer: need one hL per stage");
    for (const Mat& m : hL_list)
        if (m.rows() != n || m.cols() != n)
            throw DimensionMismatch("transfer: hL dimension mismatch");
}

/// Solves the stacked stage system M K = (1 (x) I) given the s*s blocks of
/// the coupling operator; returns the s*N x N stage-value map K.
Mat solve_stage_system(const Mat& coupling, int s, int n) {
    Mat system = Mat::Identity(s * n, s * n) - coupling;
    Eigen::PartialPivLU<Mat> lu(system);
    if (lu.rcond() < 1e-14)
        throw SingularStageSystem("transfer: stage system numerically singular");
    Mat injection(s * n, n);
    for (int i = 0; i < s; ++i) injection.middleRows(i * n, n) = Mat::Identity(n, n);
    return lu.solve(injection);
}

}  // namespace

TransferMatrix transfer_type1(const Tableau& tb, const Mat& hJ, std::span<const Mat> hL_list) {
    const int s = tb.stages;
    const int n = static_cast<int>(hJ.rows());
    check_dims(hJ, hL_list, s);
    const Mat ahat = tb.a_hat();

    Mat coupling = Mat::Zero(s * n, s * n);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (tb.a(i, j) == 0.0 && ahat(i, j) == 0.0) continue;
            coupling.block(i * n, j * n, n, n) =
                tb.a(i, j) * (hJ - hL_list[j]) + ahat(i, j) * hL_list[j];
        }
    const Mat K = solve_stage_system(coupling, s, n);

    const Vec bhat = tb.b_hat();
    Mat R = Mat::Identity(n, n);
    for (int j = 0; j < s; ++j) {
        if (tb.b[j] == 0.0 && bhat[j] == 0.0) continue;
        R += (tb.b[j] * (hJ - hL_list[j]) + bhat[j] * hL_list[j]) * K.middleRows(j * n, n);
    }

    TransferMatrix out;
    out.R = R;
    out.method_type = 1;
    out.tableau_id = tb.id;
    out.hJ = hJ;
    out.hL_list.assign(hL_list.begin(), hL_list.end());
    out.reduced_deviation = std::numeric_limits<double>::quiet_NaN();
    if (is_stiffly_accurate(tb)) {
        const Mat reduced = K.middleRows((s - 1) * n, n);
        out.reduced_deviation = (R - reduced).lpNorm<Eigen::Infinity>();
    }
    return out;
}

TransferMatrix transfer_type2(const Tableau& tb, const Mat& hJ, const Mat& hL,
                              std::span<const Mat> hL_list) {
    const int s = tb.stages;
    const int n = static_cast<int>(hJ.rows());
    check_dims(hJ, hL_list, s);
    if (hL.rows() != n || hL.cols() != n) throw DimensionMismatch("transfer: hL not N x N");
    const Mat ahat = tb.a_hat();

    Mat coupling = Mat::Zero(s * n, s * n);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            Mat block = Mat::Zero(n, n);
            if (tb.a(i, j) != 0.0 || ahat(i, j) != 0.0)
                block = tb.a(i, j) * (hJ - hL) + ahat(i, j) * hL;
            if (i == j && tb.gamma(i, i) != 0.0)
                block += tb.gamma(i, i) * (hL_list[i] - hL);
            coupling.block(i * n, j * n, n, n) = block;
        }
    const Mat K = solve_stage_system(coupling, s, n);

    const Vec bhat = tb.b_hat();
    Mat R = Mat::Identity(n, n);
    for (int j = 0; j < s; ++j) {
        if (tb.b[j] == 0.0 && bhat[j] == 0.0) continue;
        R += (tb.b[j] * (hJ - hL) + bhat[j] * hL) * K.middleRows(j * n, n);
    }

    TransferMatrix out;
    out.R = R;
    out.method_type = 2;
    out.tableau_id = tb.id;
    out.hJ = hJ;
    out.hL_list.assign(hL_list.begin(), hL_list.end());
    out.reduced_deviation = std::numeric_limits<double>::quiet_NaN();
    if (is_stiffly_accurate(tb)) {
        const Mat ks = K.middleRows((s - 1) * n, n);
        const Mat reduced =
            ks - tb.gamma(s - 1, s - 1) * ((hL_list[s - 1] - hL) * ks);
        out.reduced_deviation = (R - reduced).lpNorm<Eigen::Infinity>();
    }
    return out;
}

std::vector<ScanPoint> stability_scan(const Tableau& tb, int type,
                                      std::span<const double> h_lambda_grid,
                                      ScanConfig config) {
    std::vector<ScanPoint> points;
    points.reserve(h_lambda_grid.size());
    for (double hl : h_lambda_grid) {
        Mat hJ(1, 1), hL(1, 1);
        hJ(0, 0) = hl;
        hL(0, 0) = hl;
        const double stage_value = (config == ScanConfig::ExactL) ? hl : hl * hl;
        std::vector<Mat> hLs(tb.stages, Mat::Constant(1, 1, stage_value));
        TransferMatrix tm = (type == 1) ? transfer_type1(tb, hJ, hLs)
                                        : transfer_type2(tb, hJ, hL, hLs);
        points.push_back({hl, std::abs(tm.R(0, 0))});
    }
    return points;
}

}  // namespace lirkw
