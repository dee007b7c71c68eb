#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "lirkw/integrators.hpp"

namespace lirkw {

/// How the linear operator handed to the steppers is built.
enum class OpConfig {
    ExactL,      // the problem's own linear part (or frozen Jacobian)
    Amf2Part,    // two-part directional split (grid problems)
    ArbitraryL,  // seeded random dense matrix
    PerturbedJ,  // frozen Jacobian plus a small seeded perturbation
    ZeroL,       // all linear parts zero: steppers reduce to explicit RK
};

const char* op_config_name(OpConfig c);
std::optional<OpConfig> parse_op_config(const std::string& name);

enum class Reaction { None, Cubic };

/// Reproducible description of a built-in problem instance.
struct ProblemSpec {
    std::string name;  // linear | adr2d | brusselator | vdpol-mild
    OpConfig config = OpConfig::ExactL;
    std::uint64_t seed = 0;
    int n = 8;             // linear: dimension
    int nx = 24, ny = 24;  // adr2d: interior grid
};

/// Split linear test problem y' = L y + (J - L) y with a seeded random
/// stable J (negative-definite symmetric part). Every configuration leaves
/// the ODE itself identical; only the operator handed to the method changes.
IVProblem make_linear_split(int n, std::uint64_t seed, OpConfig config = OpConfig::ExactL);

/// Method-of-lines advection-diffusion-reaction on the unit square with
/// homogeneous Dirichlet boundaries and second-order central differences on
/// an nx-by-ny interior grid. The linear part splits into banded x- and
/// y-direction factors; the cubic reaction u(1 - u^2) stays explicit in F.
IVProblem make_adr2d(int nx, int ny, double nu = 0.1,
                     std::array<double, 2> advection = {0.4, -0.3},
                     Reaction reaction = Reaction::Cubic,
                     OpConfig config = OpConfig::Amf2Part, std::uint64_t seed = 1);

/// Small smooth autonomous systems with analytic Jacobians:
/// "brusselator" (N=2, A=1, B=3) and "vdpol-mild" (N=2, mu=2).
/// Throws UnknownProblem for other names.
IVProblem make_nonlinear_small(const std::string& name, OpConfig config = OpConfig::ExactL,
                               std::uint64_t seed = 1);

/// Instantiates a problem by spec. Throws UnknownProblem.
IVProblem make_problem(const ProblemSpec& spec);

/// Per-stage operators L_i = J + E_i with distinct seeded dense
/// perturbations of unit scale, for driving the type-3 stepper. J is the
/// problem's exact dense linear operator (frozen Jacobian for the nonlinear
/// problems).
Type3OpsFactory make_perturbed_stage_ops(const IVProblem& p, std::uint64_t seed,
                                         double magnitude = 1.0);

/// Dense matrix of the problem's configured composite operator (sum form).
Mat exact_dense_operator(const IVProblem& p);

}  // namespace lirkw
