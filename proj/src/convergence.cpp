#include "lirkw/convergence.hpp"

#include <cmath>
#include <limits>

namespace lirkw {

Vec fine_reference(const IVProblem& p, const Tableau& tb, long n_steps,
                   const Type3OpsFactory* type3_ops) {
    return integrate(p, tb, p.t0, p.tf, n_steps, type3_ops).y;
}

double fit_slope(std::span<const double> h, std::span<const double> err, int tail) {
    const int n = static_cast<int>(h.size());
    const int k = std::min(tail, n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = n - k; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (k * sxy - sx * sy) / denom;
}

SweepResult convergence_sweep(const IVProblem& p, const Tableau& tb,
                              std::span<const long> n_list, const Vec& reference, int tail,
                              const Type3OpsFactory* type3_ops) {
    SweepResult result;
    result.tail = tail;
    std::vector<double> hs, errs;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const long n = n_list[i];
        if (n < 1) throw std::invalid_argument("convergence_sweep: step counts must be >= 1");
        if (i > 0 && n <= n_list[i - 1])
            throw std::invalid_argument("convergence_sweep: n_list must be strictly increasing");
        const double h = (p.tf - p.t0) / static_cast<double>(n);
        const Vec y = integrate(p, tb, p.t0, p.tf, n, type3_ops).y;
        const double err = (y - reference).lpNorm<Eigen::Infinity>();

        SweepPoint pt;
        pt.n_steps = n;
        pt.h = h;
        pt.error = err;
        pt.local_slope = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) {
            const SweepPoint& prev = result.points.back();
            pt.local_slope = std::log(prev.error / err) / std::log(prev.h / h);
        }
        result.points.push_back(pt);
        hs.push_back(h);
        errs.push_back(err);
    }
    result.fitted_slope = fit_slope(hs, errs, tail);
    return result;
}

}  // namespace lirkw
