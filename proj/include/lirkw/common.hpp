#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace lirkw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A factor (I - sigma*L^{r}) could not be inverted. part_index is the
/// offending factor (0-based), or -1 when raised outside a composite.
struct SingularFactor : std::runtime_error {
    int part_index = -1;
    explicit SingularFactor(const std::string& what, int part = -1)
        : std::runtime_error(what), part_index(part) {}
};

struct SingularStageSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A stage or step produced NaN/Inf entries. stage is 0-based;
/// step is filled in by the driver (-1 inside a single step).
struct NonfiniteState : std::runtime_error {
    int stage = -1;
    long step = -1;
    NonfiniteState(const std::string& what, int stage_idx, long step_idx = -1)
        : std::runtime_error(what), stage(stage_idx), step(step_idx) {}
};

struct FamilyMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotAMeagreTree : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownProblem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic uniform generator. Draws raw 64-bit words from mt19937_64
/// and maps them to doubles directly, so streams are identical across
/// platforms and standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    Mat matrix(Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
        Mat m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
        return m;
    }

private:
    std::mt19937_64 eng_;
};

inline double rel_err(const Vec& got, const Vec& want) {
    double scale = want.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) return got.lpNorm<Eigen::Infinity>();
    return (got - want).lpNorm<Eigen::Infinity>() / scale;
}

inline double rel_err(const Mat& got, const Mat& want) {
    double scale = want.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) return got.lpNorm<Eigen::Infinity>();
    return (got - want).lpNorm<Eigen::Infinity>() / scale;
}

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lirkw
