#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lirkw/common.hpp"
#include "lirkw/linop.hpp"
#include "lirkw/tableau.hpp"

namespace lirkw {

/// Yields the operator objects a stepper needs for a stage context. The
/// stage-i operator is requested at (t_n, h, gamma_{i,i}); built-in problems
/// are autonomous, so they return one shared operator for every context, but
/// the arguments stay in the contract for time-dependent sources.
using OperatorSource = std::function<AmfPtr(double t, double h, double gamma_ii)>;

/// Autonomous initial value problem y' = F(y) with a linear-operator source.
struct IVProblem {
    int dim = 0;
    std::function<Vec(const Vec&)> rhs;  // F(y)
    OperatorSource operator_source;
    Vec y0;
    double t0 = 0.0;
    double tf = 1.0;
    std::string name;
    /// Optional closed-form solution for tests; usually empty.
    std::function<Vec(double)> reference_solution;
};

struct StepRecord {
    double t = 0.0;
    double h = 0.0;
    Vec y_before;
    Vec y_after;
    std::vector<Vec> stages;  // retained only on request
};

/// One step of the type-1 method: every appearance of the linear term uses
/// the stage operator, i.e. stage i solves (I - h*gamma_{i,i}*Ltilde) via the
/// factored product and later stages reuse the cached z_j = Ltilde_j Y_j.
Vec step_type1(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::vector<Vec>* stages_out = nullptr);

/// One step of the type-2 method: off-diagonal linear terms and the output
/// update multiply by the exact sum-form L; only the diagonal stage solve
/// uses the factored product.
Vec step_type2(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::vector<Vec>* stages_out = nullptr);

/// One step of the type-3 method with injected per-stage operators: stage i
/// solves (I - h*gamma_{i,i}*L_i) Y_i = y + h*sum_{j<i} a_{i,j} F(Y_j)
///                                        + h*L_i sum_{j<i} gamma_{i,j} Y_j,
/// and the output update multiplies by the exact L of the problem.
Vec step_type3(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::span<const PartPtr> stage_ops, std::vector<Vec>* stages_out = nullptr);

/// Per-step factory of the s injected type-3 operators.
using Type3OpsFactory =
    std::function<std::vector<PartPtr>(double t, double h, const Tableau& tb)>;

struct IntegrateResult {
    Vec y;
    std::vector<StepRecord> records;  // filled only when keep_records
};

/// Fixed-step driver: n_steps equal steps of h = (tf - t0)/n_steps with the
/// stepper selected by tb.method_type. Type 3 requires type3_ops. Stepper
/// errors are rethrown with the failing step index.
IntegrateResult integrate(const IVProblem& p, const Tableau& tb, double t0, double tf,
                          long n_steps, const Type3OpsFactory* type3_ops = nullptr,
                          bool keep_records = false);

}  // namespace lirkw
