#include <doctest.h>

#include "lirkw/linop.hpp"

using namespace lirkw;

namespace {

// Brute-force dense expansion over all ordered index subsets; independent of
// the recursion under test.
Mat expansion_oracle(const std::vector<Mat>& parts, double sigma) {
    const int r = static_cast<int>(parts.size());
    const auto n = parts.front().rows();
    Mat acc = Mat::Zero(n, n);
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        Mat prod = Mat::Identity(n, n);
        int count = 0;
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) {
                prod = prod * parts[i];
                ++count;
            }
        acc += std::pow(-sigma, count - 1) * prod;
    }
    return acc;
}

AmfOperator random_amf(int r, int n, Rng& rng, std::vector<Mat>* dense = nullptr) {
    std::vector<PartPtr> parts;
    for (int i = 0; i < r; ++i) {
        Mat m = rng.matrix(n, n);
        if (dense) dense->push_back(m);
        parts.push_back(make_dense_part(std::move(m)));
    }
    return AmfOperator(std::move(parts));
}

}  // namespace

TEST_CASE("parts apply linearly") {
    Rng rng(11);
    const Mat m = rng.matrix(5, 5);
    const DensePart part(m);
    for (int trial = 0; trial < 16; ++trial) {
        const Vec u = rng.vector(5), v = rng.vector(5);
        const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
        const Vec lhs = part.apply(alpha * u + beta * v);
        const Vec rhs = alpha * part.apply(u) + beta * part.apply(v);
        CHECK(rel_err(lhs, rhs) < 1e-14);
    }
}

TEST_CASE("sum_apply matches dense sum") {
    Rng rng(12);
    std::vector<Mat> dense;
    const AmfOperator op = random_amf(2, 4, rng, &dense);
    const Vec v = rng.vector(4);
    CHECK(rel_err(op.sum_apply(v), Vec((dense[0] + dense[1]) * v)) < 1e-13);
    CHECK(op.sum_apply(Vec::Zero(4)).norm() == 0.0);

    const AmfOperator single(std::vector<PartPtr>{make_dense_part(dense[0])});
    CHECK(rel_err(single.sum_apply(v), single.part(0).apply(v)) == 0.0);
}

TEST_CASE("product_solve basics") {
    Rng rng(13);
    std::vector<Mat> dense;
    const AmfOperator op = random_amf(2, 5, rng, &dense);
    const Vec rhs = rng.vector(5);

    // sigma = 0: identity factors
    CHECK((op.product_solve(0.0, rhs) - rhs).norm() == 0.0);

    // single part: equals the part's shifted solve
    const AmfOperator single(std::vector<PartPtr>{make_dense_part(dense[0])});
    CHECK(rel_err(single.product_solve(0.3, rhs), single.part(0).shifted_solve(0.3, rhs)) == 0.0);

    // round trip through (I - sigma*Ltilde)
    const double sigma = 0.21;
    const Vec x = op.product_solve(sigma, rhs);
    const Vec back = x - sigma * op.tilde_apply(sigma, x);
    CHECK(rel_err(back, rhs) < 1e-12);
}

TEST_CASE("tilde_apply") {
    Rng rng(14);

    SUBCASE("sigma=0 reduces to the exact sum") {
        const AmfOperator op = random_amf(3, 4, rng);
        const Vec v = rng.vector(4);
        CHECK(rel_err(op.tilde_apply(0.0, v), op.sum_apply(v)) < 1e-15);
    }

    SUBCASE("two parts: (L1+L2)v - sigma*L1(L2 v)") {
        std::vector<Mat> dense;
        const AmfOperator op = random_amf(2, 4, rng, &dense);
        const Vec v = rng.vector(4);
        const double sigma = 0.8;
        const Vec want = (dense[0] + dense[1]) * v - sigma * (dense[0] * (dense[1] * v));
        CHECK(rel_err(op.tilde_apply(sigma, v), want) < 1e-14);
    }

    SUBCASE("three parts match the subset expansion oracle") {
        std::vector<Mat> dense;
        const AmfOperator op = random_amf(3, 4, rng, &dense);
        const Mat oracle = expansion_oracle(dense, 0.37);
        for (int trial = 0; trial < 8; ++trial) {
            const Vec v = rng.vector(4);
            CHECK(rel_err(op.tilde_apply(0.37, v), Vec(oracle * v)) < 1e-12);
        }
    }

    SUBCASE("linearity in v") {
        const AmfOperator op = random_amf(3, 4, rng);
        const Vec u = rng.vector(4), v = rng.vector(4);
        const Vec lhs = op.tilde_apply(0.5, 2.0 * u - 3.0 * v);
        const Vec rhs = 2.0 * op.tilde_apply(0.5, u) - 3.0 * op.tilde_apply(0.5, v);
        CHECK(rel_err(lhs, rhs) < 1e-13);
    }

    SUBCASE("v - sigma*tilde equals the incremental factor product") {
        std::vector<Mat> dense;
        const AmfOperator op = random_amf(3, 4, rng, &dense);
        const Vec v = rng.vector(4);
        const double sigma = 0.45;
        // ascending factor order, factor 1 leftmost: apply part 3 first
        Vec w = v;
        for (int r = 2; r >= 0; --r) w = w - sigma * (dense[r] * w);
        const Vec got = v - sigma * op.tilde_apply(sigma, v);
        CHECK((got - w).lpNorm<Eigen::Infinity>() <
              16 * std::numeric_limits<double>::epsilon() * v.lpNorm<Eigen::Infinity>());
    }

    SUBCASE("part order matters for non-commuting parts") {
        std::vector<Mat> dense;
        random_amf(2, 4, rng, &dense);
        const AmfOperator fwd({make_dense_part(dense[0]), make_dense_part(dense[1])});
        const AmfOperator rev({make_dense_part(dense[1]), make_dense_part(dense[0])});
        const Vec v = rng.vector(4);
        CHECK(rel_err(fwd.tilde_apply(0.7, v), rev.tilde_apply(0.7, v)) > 1e-6);
    }
}

TEST_CASE("amf dimension checks") {
    Rng rng(15);
    CHECK_THROWS_AS(AmfOperator(std::vector<PartPtr>{}), DimensionMismatch);
    CHECK_THROWS_AS(AmfOperator({make_dense_part(rng.matrix(3, 3)), make_dense_part(rng.matrix(4, 4))}),
                    DimensionMismatch);
    const AmfOperator op = random_amf(2, 3, rng);
    CHECK_THROWS_AS(op.sum_apply(Vec::Zero(5)), DimensionMismatch);
    CHECK_THROWS_AS(op.tilde_apply(0.1, Vec::Zero(5)), DimensionMismatch);
    CHECK_THROWS_AS(op.product_solve(0.1, Vec::Zero(5)), DimensionMismatch);
}

TEST_CASE("dense shifted solve reports singular factors") {
    Mat m = Mat::Identity(3, 3);
    const DensePart part(m);
    CHECK_THROWS_AS(part.shifted_solve(1.0, Vec::Ones(3)), SingularFactor);  // I - I = 0
    // composite annotates the failing factor index
    const AmfOperator op({make_dense_part(Mat::Zero(3, 3)), make_dense_part(m)});
    try {
        op.product_solve(1.0, Vec::Ones(3));
        FAIL("expected SingularFactor");
    } catch (const SingularFactor& e) {
        CHECK(e.part_index == 1);
    }
}

TEST_CASE("tridiagonal part: Dirichlet") {
    const int n = 12;
    const double dx = 1.0 / (n + 1);
    // second-difference stencil (1, -2, 1)/dx^2
    std::vector<double> lo(n, 1.0 / (dx * dx)), di(n, -2.0 / (dx * dx)), up(n, 1.0 / (dx * dx));
    const auto part = make_tridiag_part(lo, di, up, BoundaryKind::Dirichlet);

    SUBCASE("interior rows annihilate constants") {
        const Vec ones = Vec::Ones(n);
        const Vec out = part->apply(ones);
        for (int i = 1; i + 1 < n; ++i) CHECK(out[i] == 0.0);
        CHECK(out[0] != 0.0);  // boundary rows see the missing neighbor
    }

    SUBCASE("sigma=0 solve is the identity") {
        Rng rng(21);
        const Vec rhs = rng.vector(n);
        CHECK((part->shifted_solve(0.0, rhs) - rhs).norm() == 0.0);
    }

    SUBCASE("solve round-trips against apply") {
        Rng rng(22);
        const Vec rhs = rng.vector(n);
        const double sigma = 0.013;
        const Vec x = part->shifted_solve(sigma, rhs);
        const Vec back = x - sigma * part->apply(x);
        CHECK(rel_err(back, rhs) < 1e-12);
    }
}

TEST_CASE("tridiagonal part: periodic") {
    const int n = 9;
    Rng rng(23);
    std::vector<double> lo(n), di(n), up(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = rng.uniform(0.5, 1.5);
        di[i] = rng.uniform(-4.0, -3.0);
        up[i] = rng.uniform(0.5, 1.5);
    }
    const auto part = make_tridiag_part(lo, di, up, BoundaryKind::Periodic);

    // dense oracle with wrap-around corners
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = di[i];
        m(i, (i + n - 1) % n) += lo[i];
        m(i, (i + 1) % n) += up[i];
    }
    const Vec v = rng.vector(n);
    CHECK(rel_err(part->apply(v), Vec(m * v)) < 1e-14);

    const double sigma = 0.17;
    const Mat shifted = Mat::Identity(n, n) - sigma * m;
    const Vec want = shifted.partialPivLu().solve(v);
    CHECK(rel_err(part->shifted_solve(sigma, v), want) < 1e-12);
}

TEST_CASE("tridiagonal zero pivot raises SingularFactor") {
    // I - sigma*T singular: T = diag(2), sigma = 0.5
    std::vector<double> lo(4, 0.0), di(4, 2.0), up(4, 0.0);
    const auto part = make_tridiag_part(lo, di, up, BoundaryKind::Dirichlet);
    CHECK_THROWS_AS(part->shifted_solve(0.5, Vec::Ones(4)), SingularFactor);
}

TEST_CASE("grid line part equals its dense materialization") {
    const int nx = 5, ny = 4;
    Rng rng(24);
    for (GridAxis axis : {GridAxis::X, GridAxis::Y}) {
        const GridLinePart part(nx, ny, axis, 1.25, -2.5, 1.25 - 0.3);
        const Mat dense = dense_matrix(part);
        const Vec v = rng.vector(nx * ny);
        CHECK(rel_err(part.apply(v), Vec(dense * v)) < 1e-14);
        const double sigma = 0.07;
        const Vec x = part.shifted_solve(sigma, v);
        const Mat shifted = Mat::Identity(nx * ny, nx * ny) - sigma * dense;
        CHECK(rel_err(x, Vec(shifted.partialPivLu().solve(v))) < 1e-12);
    }
}
