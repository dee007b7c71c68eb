#pragma once

#include <span>
#include <vector>

#include "lirkw/integrators.hpp"

namespace lirkw {

struct SweepPoint {
    long n_steps = 0;
    double h = 0.0;
    double error = 0.0;        // max-norm error at t_f against the reference
    double local_slope = 0.0;  // NaN on the first row
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double fitted_slope = 0.0;  // least-squares slope of log(error) vs log(h)
    int tail = 4;
};

/// Final state of a fine-step run used as the reference for error
/// measurements; also the self-convergence oracle for the built-ins.
Vec fine_reference(const IVProblem& p, const Tableau& tb, long n_steps,
                   const Type3OpsFactory* type3_ops = nullptr);

/// Runs the problem at every step count in n_list, measures the max-norm
/// error at p.tf against `reference`, and fits the convergence order over
/// the `tail` smallest step sizes. n_list must be strictly increasing.
SweepResult convergence_sweep(const IVProblem& p, const Tableau& tb,
                              std::span<const long> n_list, const Vec& reference,
                              int tail = 4, const Type3OpsFactory* type3_ops = nullptr);

/// Least-squares slope of log(err) vs log(h) over the last `tail` points.
double fit_slope(std::span<const double> h, std::span<const double> err, int tail);

}  // namespace lirkw
