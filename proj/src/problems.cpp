#include "lirkw/problems.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <utility>

namespace lirkw {

const char* op_config_name(OpConfig c) {
    switch (c) {
        case OpConfig::ExactL: return "exact-l";
        case OpConfig::Amf2Part: return "amf-2part";
        case OpConfig::ArbitraryL: return "arbitrary-l";
        case OpConfig::PerturbedJ: return "perturbed-j";
        case OpConfig::ZeroL: return "zero-l";
    }
    return "?";
}

std::optional<OpConfig> parse_op_config(const std::string& name) {
    std::string s;
    for (char ch : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "exact-l") return OpConfig::ExactL;
    if (s == "amf-2part") return OpConfig::Amf2Part;
    if (s == "arbitrary-l") return OpConfig::ArbitraryL;
    if (s == "perturbed-j") return OpConfig::PerturbedJ;
    if (s == "zero-l") return OpConfig::ZeroL;
    return std::nullopt;
}

namespace {

OperatorSource fixed_source(AmfPtr op) {
    return [op](double, double, double) { return op; };
}

AmfPtr single_part_op(Mat m) {
    return std::make_shared<AmfOperator>(std::vector<PartPtr>{make_dense_part(std::move(m))});
}

Mat arbitrary_matrix(int n, Rng& rng) {
    return rng.matrix(n, n) / std::sqrt(static_cast<double>(n));
}

/// Dense operator for the requested config, given the problem's exact L.
AmfPtr dense_config_op(const Mat& exact, OpConfig config, Rng& rng) {
    const int n = static_cast<int>(exact.rows());
    switch (config) {
        case OpConfig::ExactL:
            return single_part_op(exact);
        case OpConfig::ArbitraryL:
            return single_part_op(arbitrary_matrix(n, rng));
        case OpConfig::PerturbedJ:
            return single_part_op(exact + 0.1 * arbitrary_matrix(n, rng));
        case OpConfig::ZeroL:
            return single_part_op(Mat::Zero(n, n));
        case OpConfig::Amf2Part:
            throw UnknownProblem("amf-2part configuration needs a splittable problem");
    }
    throw UnknownProblem("bad operator configuration");
}

}  // namespace

IVProblem make_linear_split(int n, std::uint64_t seed, OpConfig config) {
    if (n < 1) throw std::invalid_argument("make_linear_split: n must be >= 1");
    Rng rng(seed);
    Mat a = rng.matrix(n, n);
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, a.row(i).cwiseAbs().sum());
    Mat j = a - (bound + 1.0) * Mat::Identity(n, n);

    IVProblem p;
    p.dim = n;
    p.name = "linear";
    p.y0 = rng.vector(n);
    p.t0 = 0.0;
    p.tf = 1.0;
    p.rhs = [j](const Vec& y) { return Vec(j * y); };
    p.operator_source = fixed_source(dense_config_op(j, config, rng));
    return p;
}

IVProblem make_adr2d(int nx, int ny, double nu, std::array<double, 2> advection,
                     Reaction reaction, OpConfig config, std::uint64_t seed) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("make_adr2d: grid must be at least 4x4");
    const int n = nx * ny;
    const double dx = 1.0 / (nx + 1);
    const double dy = 1.0 / (ny + 1);

    auto lx = std::make_shared<GridLinePart>(nx, ny, GridAxis::X, nu / (dx * dx) + advection[0] / (2 * dx),
                                             -2.0 * nu / (dx * dx), nu / (dx * dx) - advection[0] / (2 * dx));
    auto ly = std::make_shared<GridLinePart>(nx, ny, GridAxis::Y, nu / (dy * dy) + advection[1] / (2 * dy),
                                             -2.0 * nu / (dy * dy), nu / (dy * dy) - advection[1] / (2 * dy));

    IVProblem p;
    p.dim = n;
    p.name = "adr2d";
    p.t0 = 0.0;
    p.tf = 0.4;
    p.y0 = Vec(n);
    constexpr double pi = std::numbers::pi;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = (iy + 1) * dy;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = (ix + 1) * dx;
            p.y0[iy * nx + ix] = std::sin(pi * x) * std::sin(pi * y) +
                                 0.25 * std::sin(2 * pi * x) * std::sin(3 * pi * y);
        }
    }

    const bool cubic = (reaction == Reaction::Cubic);
    p.rhs = [lx, ly, cubic](const Vec& y) {
        Vec out = lx->apply(y) + ly->apply(y);
        if (cubic) out += y.cwiseProduct(Vec::Ones(y.size()) - y.cwiseAbs2());
        return out;
    };

    AmfPtr op;
    switch (config) {
        case OpConfig::Amf2Part:
            op = std::make_shared<AmfOperator>(std::vector<PartPtr>{lx, ly});
            break;
        case OpConfig::ExactL:
            op = single_part_op(dense_matrix(*lx) + dense_matrix(*ly));
            break;
        default: {
            Rng rng(seed);
            op = dense_config_op(dense_matrix(*lx) + dense_matrix(*ly), config, rng);
            break;
        }
    }
    p.operator_source = fixed_source(op);
    return p;
}

namespace {

struct SmallSystem {
    std::function<Vec(const Vec&)> rhs;
    std::function<Mat(const Vec&)> jacobian;
    Vec y0;
    double tf;
};

SmallSystem brusselator() {
    const double A = 1.0, B = 3.0;
    SmallSystem sys;
    sys.rhs = [A, B](const Vec& y) {
        Vec f(2);
        f[0] = A + y[0] * y[0] * y[1] - (B + 1.0) * y[0];
        f[1] = B * y[0] - y[0] * y[0] * y[1];
        return f;
    };
    sys.jacobian = [B](const Vec& y) {
        Mat j(2, 2);
        j(0, 0) = 2.0 * y[0] * y[1] - (B + 1.0);
        j(0, 1) = y[0] * y[0];
        j(1, 0) = B - 2.0 * y[0] * y[1];
        j(1, 1) = -y[0] * y[0];
        return j;
    };
    sys.y0 = Vec(2);
    sys.y0 << 1.5, 3.0;
    sys.tf = 1.2;
    return sys;
}

SmallSystem vdpol_mild() {
    const double mu = 2.0;
    SmallSystem sys;
    sys.rhs = [mu](const Vec& y) {
        Vec f(2);
        f[0] = y[1];
        f[1] = mu * (1.0 - y[0] * y[0]) * y[1] - y[0];
        return f;
    };
    sys.jacobian = [mu](const Vec& y) {
        Mat j(2, 2);
        j(0, 0) = 0.0;
        j(0, 1) = 1.0;
        j(1, 0) = -2.0 * mu * y[0] * y[1] - 1.0;
        j(1, 1) = mu * (1.0 - y[0] * y[0]);
        return j;
    };
    sys.y0 = Vec(2);
    sys.y0 << 2.0, 0.0;
    sys.tf = 2.0;
    return sys;
}

}  // namespace

IVProblem make_nonlinear_small(const std::string& name, OpConfig config, std::uint64_t seed) {
    SmallSystem sys;
    if (name == "brusselator")
        sys = brusselator();
    else if (name == "vdpol-mild")
        sys = vdpol_mild();
    else
        throw UnknownProblem("make_nonlinear_small: unknown problem '" + name + "'");

    IVProblem p;
    p.dim = static_cast<int>(sys.y0.size());
    p.name = name;
    p.y0 = sys.y0;
    p.t0 = 0.0;
    p.tf = sys.tf;
    p.rhs = sys.rhs;
    Rng rng(seed);
    // ExactL freezes the Jacobian at the initial state.
    p.operator_source = fixed_source(dense_config_op(sys.jacobian(sys.y0), config, rng));
    return p;
}

IVProblem make_problem(const ProblemSpec& spec) {
    if (spec.name == "linear") return make_linear_split(spec.n, spec.seed, spec.config);
    if (spec.name == "adr2d")
        return make_adr2d(spec.nx, spec.ny, 0.1, {0.4, -0.3}, Reaction::Cubic, spec.config,
                          spec.seed);
    if (spec.name == "brusselator" || spec.name == "vdpol-mild")
        return make_nonlinear_small(spec.name, spec.config, spec.seed);
    throw UnknownProblem("make_problem: unknown problem '" + spec.name + "'");
}

Type3OpsFactory make_perturbed_stage_ops(const IVProblem& p, std::uint64_t seed,
                                         double magnitude) {
    const Mat base = exact_dense_operator(p);
    const int n = static_cast<int>(base.rows());
    Rng rng(seed);
    auto ops = std::make_shared<std::vector<PartPtr>>();
    // fixed per-stage operators, reused every step (autonomous problems)
    for (int i = 0; i < 16; ++i)
        ops->push_back(make_dense_part(base + magnitude * rng.matrix(n, n) /
                                                  std::sqrt(static_cast<double>(n))));
    return [ops](double, double, const Tableau& tb) {
        if (tb.stages > static_cast<int>(ops->size()))
            throw DimensionMismatch("make_perturbed_stage_ops: too many stages");
        return std::vector<PartPtr>(ops->begin(), ops->begin() + tb.stages);
    };
}

Mat exact_dense_operator(const IVProblem& p) {
    const AmfPtr op = p.operator_source(p.t0, 0.0, 0.0);
    Mat sum = Mat::Zero(p.dim, p.dim);
    for (int r = 0; r < op->num_parts(); ++r) sum += dense_matrix(op->part(r));
    return sum;
}

}  // namespace lirkw
