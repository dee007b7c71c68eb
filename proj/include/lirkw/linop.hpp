#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "lirkw/common.hpp"

namespace lirkw {

struct OperatorDescriptor {
    enum class Kind { Dense, Banded, Diagonal };
    Kind kind = Kind::Dense;
    int bandwidth = 0;  // meaningful for Banded
};

/// One split term L^{r} of the linear operator. Implementations must be
/// linear, immutable after construction and safe to share across threads.
class LinearPart {
public:
    virtual ~LinearPart() = default;
    virtual int dim() const = 0;
    virtual OperatorDescriptor descriptor() const = 0;
    /// y = P v
    virtual Vec apply(const Vec& v) const = 0;
    /// Solves (I - sigma*P) x = rhs. Throws SingularFactor.
    virtual Vec shifted_solve(double sigma, const Vec& rhs) const = 0;
};

using PartPtr = std::shared_ptr<const LinearPart>;

/// Dense part backed by an explicit matrix. shifted_solve caches one LU
/// factorization per distinct sigma; the cache is internally synchronized.
class DensePart final : public LinearPart {
public:
    explicit DensePart(Mat m);
    int dim() const override { return static_cast<int>(m_.rows()); }
    OperatorDescriptor descriptor() const override { return {OperatorDescriptor::Kind::Dense, 0}; }
    Vec apply(const Vec& v) const override;
    Vec shifted_solve(double sigma, const Vec& rhs) const override;
    const Mat& matrix() const { return m_; }

private:
    Mat m_;
    mutable std::mutex mu_;
    mutable std::map<double, std::shared_ptr<Eigen::PartialPivLU<Mat>>> lu_cache_;
};

enum class BoundaryKind { Dirichlet, Periodic };

/// Tridiagonal part with per-row diagonals. apply and shifted_solve are O(N);
/// the solve is non-pivoting elimination, with a Sherman-Morrison rank-1
/// correction in the periodic case.
class TridiagPart final : public LinearPart {
public:
    /// lower[i] couples row i to i-1, upper[i] couples row i to i+1.
    /// With Dirichlet boundaries lower[0] and upper[n-1] are ignored;
    /// with Periodic they wrap around.
    TridiagPart(std::vector<double> lower, std::vector<double> diag,
                std::vector<double> upper, BoundaryKind boundary);
    int dim() const override { return static_cast<int>(diag_.size()); }
    OperatorDescriptor descriptor() const override { return {OperatorDescriptor::Kind::Banded, 1}; }
    Vec apply(const Vec& v) const override;
    Vec shifted_solve(double sigma, const Vec& rhs) const override;

private:
    std::vector<double> lower_, diag_, upper_;
    BoundaryKind boundary_;
};

enum class GridAxis { X, Y };

/// Constant-coefficient three-point stencil applied along every x- or y-line
/// of an nx-by-ny grid stored row-major (index = iy*nx + ix), homogeneous
/// Dirichlet boundaries. This is the one-directional factor of an
/// alternating-directions split; apply and shifted_solve are O(N).
class GridLinePart final : public LinearPart {
public:
    GridLinePart(int nx, int ny, GridAxis axis, double lower, double diag, double upper);
    int dim() const override { return nx_ * ny_; }
    OperatorDescriptor descriptor() const override {
        return {OperatorDescriptor::Kind::Banded, axis_ == GridAxis::X ? 1 : nx_};
    }
    Vec apply(const Vec& v) const override;
    Vec shifted_solve(double sigma, const Vec& rhs) const override;

private:
    int nx_, ny_;
    GridAxis axis_;
    double lower_, diag_, upper_;
};

/// The composite operator L = sum_r L^{r} together with its product
/// approximation (I - sigma*Ltilde) = prod_{r=1..R} (I - sigma*L^{r}),
/// factors ordered left to right by ascending r.
class AmfOperator {
public:
    explicit AmfOperator(std::vector<PartPtr> parts);

    int dim() const { return dim_; }
    int num_parts() const { return static_cast<int>(parts_.size()); }
    const LinearPart& part(int r) const { return *parts_.at(r); }

    /// The exact L: sum of all part applications.
    Vec sum_apply(const Vec& v) const;

    /// x = prod_{r=R..1} (I - sigma*L^{r})^{-1} rhs: solves factor 1 first,
    /// then 2, ..., then R. Throws SingularFactor with the failing r.
    Vec product_solve(double sigma, const Vec& rhs) const;

    /// Ltilde v, where (I - sigma*Ltilde) is the factor product above.
    /// Evaluated by the cancellation-free recursion
    ///   d <- d + L^{r}(v - sigma*d)   for r = R, R-1, ..., 1,
    /// which is defined and stable at sigma = 0, where it reduces to L v.
    Vec tilde_apply(double sigma, const Vec& v) const;

private:
    std::vector<PartPtr> parts_;
    int dim_ = 0;
};

using AmfPtr = std::shared_ptr<const AmfOperator>;

PartPtr make_dense_part(Mat m);
PartPtr make_tridiag_part(std::vector<double> lower, std::vector<double> diag,
                          std::vector<double> upper, BoundaryKind boundary);

/// Materializes a part as a dense matrix by applying it to basis vectors.
Mat dense_matrix(const LinearPart& part);

}  // namespace lirkw
