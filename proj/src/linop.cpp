#include "lirkw/linop.hpp"

#include <cmath>
#include <utility>

namespace lirkw {

// ---------------------------------------------------------------- DensePart

DensePart::DensePart(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionMismatch("DensePart: matrix not square");
}

Vec DensePart::apply(const Vec& v) const {
    if (v.size() != m_.rows()) throw DimensionMismatch("DensePart::apply: size mismatch");
    return m_ * v;
}

Vec DensePart::shifted_solve(double sigma, const Vec& rhs) const {
    if (rhs.size() != m_.rows()) throw DimensionMismatch("DensePart::shifted_solve: size mismatch");
    if (sigma == 0.0) return rhs;
    std::shared_ptr<Eigen::PartialPivLU<Mat>> lu;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = lu_cache_.find(sigma);
        if (it == lu_cache_.end()) {
            if (lu_cache_.size() >= 64) lu_cache_.clear();
            Mat shifted = Mat::Identity(m_.rows(), m_.cols()) - sigma * m_;
            auto fresh = std::make_shared<Eigen::PartialPivLU<Mat>>(shifted);
            if (fresh->rcond() < 1e-14)
                throw SingularFactor("DensePart: shifted matrix numerically singular");
            it = lu_cache_.emplace(sigma, std::move(fresh)).first;
        }
        lu = it->second;
    }
    return lu->solve(rhs);
}

// -------------------------------------------------------------- TridiagPart

TridiagPart::TridiagPart(std::vector<double> lower, std::vector<double> diag,
                         std::vector<double> upper, BoundaryKind boundary)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)),
      boundary_(boundary) {
    if (lower_.size() != diag_.size() || upper_.size() != diag_.size())
        throw DimensionMismatch("TridiagPart: diagonal lengths differ");
    if (diag_.empty()) throw DimensionMismatch("TridiagPart: empty diagonals");
}

Vec TridiagPart::apply(const Vec& v) const {
    const int n = dim();
    if (v.size() != n) throw DimensionMismatch("TridiagPart::apply: size mismatch");
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double acc = diag_[i] * v[i];
        if (i > 0) acc += lower_[i] * v[i - 1];
        if (i + 1 < n) acc += upper_[i] * v[i + 1];
        out[i] = acc;
    }
    if (boundary_ == BoundaryKind::Periodic && n > 1) {
        out[0] += lower_[0] * v[n - 1];
        out[n - 1] += upper_[n - 1] * v[0];
    }
    return out;
}

namespace {

/// Thomas elimination for (diag, sub, sup) x = rhs; throws on tiny pivots.
Vec thomas(const std::vector<double>& sub, const std::vector<double>& diag,
           const std::vector<double>& sup, Vec rhs) {
    const int n = static_cast<int>(diag.size());
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    const double tiny = 1e-14 * scale;

    std::vector<double> c(n, 0.0);
    double piv = diag[0];
    if (std::abs(piv) <= tiny) throw SingularFactor("tridiagonal solve: zero pivot at row 0");
    if (n > 1) c[0] = sup[0] / piv;
    rhs[0] /= piv;
    for (int i = 1; i < n; ++i) {
        piv = diag[i] - sub[i] * c[i - 1];
        if (std::abs(piv) <= tiny)
            throw SingularFactor("tridiagonal solve: zero pivot at row " + std::to_string(i));
        if (i + 1 < n) c[i] = sup[i] / piv;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / piv;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

}  // namespace

Vec TridiagPart::shifted_solve(double sigma, const Vec& rhs) const {
    const int n = dim();
    if (rhs.size() != n) throw DimensionMismatch("TridiagPart::shifted_solve: size mismatch");
    if (sigma == 0.0) return rhs;

    std::vector<double> sub(n), diag(n), sup(n);
    for (int i = 0; i < n; ++i) {
        sub[i] = -sigma * lower_[i];
        diag[i] = 1.0 - sigma * diag_[i];
        sup[i] = -sigma * upper_[i];
    }
    if (boundary_ == BoundaryKind::Dirichlet || n == 1)
        return thomas(sub, diag, sup, rhs);

    // Periodic: corner entries sub[0] (row 0, col n-1) and sup[n-1]
    // (row n-1, col 0) handled by a Sherman-Morrison rank-1 update.
    const double beta = sub[0], alpha = sup[n - 1];
    const double g0 = -diag[0];
    std::vector<double> diag_mod = diag;
    diag_mod[0] -= g0;
    diag_mod[n - 1] -= alpha * beta / g0;
    Vec u = Vec::Zero(n);
    u[0] = g0;
    u[n - 1] = alpha;
    Vec x = thomas(sub, diag_mod, sup, rhs);
    Vec z = thomas(sub, diag_mod, sup, u);
    const double denom = 1.0 + z[0] + (beta / g0) * z[n - 1];
    if (std::abs(denom) < 1e-14)
        throw SingularFactor("tridiagonal solve: singular periodic correction");
    const double factor = (x[0] + (beta / g0) * x[n - 1]) / denom;
    return x - factor * z;
}

// ------------------------------------------------------------- GridLinePart

GridLinePart::GridLinePart(int nx, int ny, GridAxis axis, double lower, double diag,
                           double upper)
    : nx_(nx), ny_(ny), axis_(axis), lower_(lower), diag_(diag), upper_(upper) {
    if (nx < 1 || ny < 1) throw DimensionMismatch("GridLinePart: bad grid size");
}

Vec GridLinePart::apply(const Vec& v) const {
    if (v.size() != dim()) throw DimensionMismatch("GridLinePart::apply: size mismatch");
    Vec out(dim());
    if (axis_ == GridAxis::X) {
        for (int iy = 0; iy < ny_; ++iy) {
            const int base = iy * nx_;
            for (int ix = 0; ix < nx_; ++ix) {
                double acc = diag_ * v[base + ix];
                if (ix > 0) acc += lower_ * v[base + ix - 1];
                if (ix + 1 < nx_) acc += upper_ * v[base + ix + 1];
                out[base + ix] = acc;
            }
        }
    } else {
        for (int iy = 0; iy < ny_; ++iy) {
            for (int ix = 0; ix < nx_; ++ix) {
                const int k = iy * nx_ + ix;
                double acc = diag_ * v[k];
                if (iy > 0) acc += lower_ * v[k - nx_];
                if (iy + 1 < ny_) acc += upper_ * v[k + nx_];
                out[k] = acc;
            }
        }
    }
    return out;
}

Vec GridLinePart::shifted_solve(double sigma, const Vec& rhs) const {
    if (rhs.size() != dim()) throw DimensionMismatch("GridLinePart::shifted_solve: size mismatch");
    if (sigma == 0.0) return rhs;

    const int n = (axis_ == GridAxis::X) ? nx_ : ny_;
    const int lines = (axis_ == GridAxis::X) ? ny_ : nx_;
    const int stride = (axis_ == GridAxis::X) ? 1 : nx_;

    const double sub = -sigma * lower_;
    const double dia = 1.0 - sigma * diag_;
    const double sup = -sigma * upper_;
    const double tiny = 1e-14 * std::abs(dia);

    // One Thomas pass per line; the elimination multipliers depend only on
    // the (constant) stencil, so they are computed once.
    std::vector<double> c(n, 0.0), invp(n, 0.0);
    double piv = dia;
    if (std::abs(piv) <= tiny) throw SingularFactor("line solve: zero pivot at 0");
    invp[0] = 1.0 / piv;
    if (n > 1) c[0] = sup * invp[0];
    for (int i = 1; i < n; ++i) {
        piv = dia - sub * c[i - 1];
        if (std::abs(piv) <= tiny)
            throw SingularFactor("line solve: zero pivot at " + std::to_string(i));
        invp[i] = 1.0 / piv;
        if (i + 1 < n) c[i] = sup * invp[i];
    }

    Vec out = rhs;
    for (int line = 0; line < lines; ++line) {
        const int base = (axis_ == GridAxis::X) ? line * nx_ : line;
        double* p = out.data() + base;
        p[0] *= invp[0];
        for (int i = 1; i < n; ++i)
            p[i * stride] = (p[i * stride] - sub * p[(i - 1) * stride]) * invp[i];
        for (int i = n - 2; i >= 0; --i)
            p[i * stride] -= c[i] * p[(i + 1) * stride];
    }
    return out;
}

// -------------------------------------------------------------- AmfOperator

AmfOperator::AmfOperator(std::vector<PartPtr> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DimensionMismatch("AmfOperator: needs at least one part");
    dim_ = parts_.front()->dim();
    for (const auto& p : parts_)
        if (p->dim() != dim_) throw DimensionMismatch("AmfOperator: parts disagree on dimension");
}

Vec AmfOperator::sum_apply(const Vec& v) const {
    if (v.size() != dim_) throw DimensionMismatch("AmfOperator::sum_apply: size mismatch");
    Vec out = parts_.front()->apply(v);
    for (std::size_t r = 1; r < parts_.size(); ++r) out += parts_[r]->apply(v);
    return out;
}

Vec AmfOperator::product_solve(double sigma, const Vec& rhs) const {
    if (rhs.size() != dim_) throw DimensionMismatch("AmfOperator::product_solve: size mismatch");
    Vec x = rhs;
    for (std::size_t r = 0; r < parts_.size(); ++r) {
        try {
            x = parts_[r]->shifted_solve(sigma, x);
        } catch (const SingularFactor& e) {
            throw SingularFactor(std::string(e.what()) + " (factor " + std::to_string(r) + ")",
                                 static_cast<int>(r));
        }
    }
    return x;
}

Vec AmfOperator::tilde_apply(double sigma, const Vec& v) const {
    if (v.size() != dim_) throw DimensionMismatch("AmfOperator::tilde_apply: size mismatch");
    // Parts run in descending order so that v - sigma*d accumulates the
    // factor product with factor 1 leftmost.
    Vec d = Vec::Zero(dim_);
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
        if (sigma == 0.0)
            d += (*it)->apply(v);
        else
            d += (*it)->apply(v - sigma * d);
    }
    return d;
}

PartPtr make_dense_part(Mat m) { return std::make_shared<DensePart>(std::move(m)); }

PartPtr make_tridiag_part(std::vector<double> lower, std::vector<double> diag,
                          std::vector<double> upper, BoundaryKind boundary) {
    return std::make_shared<TridiagPart>(std::move(lower), std::move(diag), std::move(upper),
                                         boundary);
}

Mat dense_matrix(const LinearPart& part) {
    const int n = part.dim();
    Mat m(n, n);
    Vec e = Vec::Zero(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        m.col(j) = part.apply(e);
        e[j] = 0.0;
    }
    return m;
}

}  // namespace lirkw
