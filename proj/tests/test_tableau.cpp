#include <doctest.h>

#include <sstream>

#include "lirkw/tableau.hpp"

using namespace lirkw;

namespace {

const std::vector<TableauFlag> kType1Flags = {
    TableauFlag::LowerTriangular, TableauFlag::StiffAccuracy, TableauFlag::RowSumZero,
    TableauFlag::Type1Diagonal};

const std::vector<TableauFlag> kType2Flags = {
    TableauFlag::LowerTriangular, TableauFlag::StiffAccuracy, TableauFlag::RowSumZero,
    TableauFlag::Type2Diagonal};

}  // namespace

TEST_CASE("table1 coefficients and structure") {
    const Tableau t = table1_type1();
    CHECK(t.stages == 5);
    CHECK(t.method_type == MethodType::Type1);
    CHECK(t.a(1, 0) == 0.520300000000000);
    CHECK(t.gamma(4, 4) == 1.0);
    CHECK(t.g[4] == 1.0);
    // row 3 of gamma sums to zero by construction of the coefficients
    CHECK(std::abs(t.gamma.row(2).sum()) < 1e-12);
    CHECK(all_within(validate(t, kType1Flags), 1e-12));

    // abscissae
    const Vec c = t.c();
    CHECK(c[0] == 0.0);
    CHECK(c[1] == doctest::Approx(0.5203).epsilon(1e-14));
    CHECK(c[4] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("table1 perturbed row-sum is reported, not thrown") {
    Tableau t = table1_type1();
    t.gamma(4, 1) += 1e-3;
    const auto report = validate(t, {TableauFlag::RowSumZero});
    REQUIRE(report.size() == 1);
    CHECK(report[0].max_violation == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK_FALSE(all_within(report, 1e-12));
}

TEST_CASE("table2 sample expansion") {
    const Tableau t = table2_type2(0.25, -0.5, 0.3);
    CHECK(t.method_type == MethodType::Type2);
    // b row as published
    CHECK(t.b[0] == 1.0);
    CHECK(t.b[1] == -1.5);
    CHECK(t.b[2] == 0.0);
    CHECK(t.b[3] == 1.5);
    CHECK(t.b[4] == 0.0);
    CHECK(t.a(1, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    // frozen reference expansion at (0.25, -0.5, 0.3)
    CHECK(t.a(2, 0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
    CHECK(t.a(2, 1) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(t.a(3, 0) == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
    CHECK(t.a(3, 1) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
    CHECK(t.a(3, 2) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(t.gamma(2, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t.gamma(2, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(t.gamma(3, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.gamma(3, 1) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(t.g[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.g[2] == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(t.g[3] == -0.5);
    CHECK(t.g[4] == 0.25);
    // b equals the last row of a exactly (constructed, not recomputed)
    for (int j = 0; j < 5; ++j) CHECK(t.b[j] == t.a(4, j));
    CHECK(all_within(validate(t, kType2Flags), 1e-12));
}

TEST_CASE("table2 degenerate parameters") {
    CHECK_THROWS_AS(table2_type2(0.2, -0.5, 0.3), DegenerateParameters);  // 5g + 2g54 = 0
    CHECK_THROWS_AS(table2_type2(0.0, -0.5, 0.3), DegenerateParameters);
    CHECK_NOTHROW(table2_type2(0.25, -0.5, 0.3));
}

TEST_CASE("table2 structural properties over random parameters") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const double gam = rng.uniform(0.05, 1.0);
        const double gam54 = rng.uniform(-1.0, 1.0);
        if (std::abs(5 * gam + 2 * gam54) < 1e-3) continue;
        const double a43 = rng.uniform(-1.0, 1.0);
        const Tableau t = table2_type2(gam, gam54, a43);

        double scale = 0.0;
        for (int i = 0; i < 5; ++i)
            scale = std::max(scale, t.gamma.row(i).cwiseAbs().maxCoeff());
        const double tol = 4.0 * scale * std::numeric_limits<double>::epsilon();
        for (int i = 0; i < 5; ++i) CHECK(std::abs(t.gamma.row(i).sum()) <= tol);
        CHECK(std::abs(t.g.sum()) <= tol);

        // a_hat has zero strict upper triangle and gamma's diagonal
        const Mat ah = t.a_hat();
        for (int i = 0; i < 5; ++i) {
            CHECK(ah(i, i) == t.gamma(i, i));
            for (int j = i + 1; j < 5; ++j) CHECK(ah(i, j) == 0.0);
        }
    }
}

TEST_CASE("tableau serialization round-trips bit-exactly") {
    for (const Tableau& t : {table1_type1(), table2_type2(0.25, -0.5, 0.3)}) {
        std::stringstream ss;
        write_tableau(ss, t);
        const Tableau back = read_tableau(ss);
        CHECK(back.stages == t.stages);
        CHECK(back.method_type == t.method_type);
        for (int i = 0; i < t.stages; ++i)
            for (int j = 0; j < t.stages; ++j) {
                CHECK(back.a(i, j) == t.a(i, j));
                CHECK(back.gamma(i, j) == t.gamma(i, j));
            }
        for (int j = 0; j < t.stages; ++j) {
            CHECK(back.b[j] == t.b[j]);
            CHECK(back.g[j] == t.g[j]);
        }
    }
}

TEST_CASE("tableau reader rejects malformed input") {
    auto expect_parse_error = [](const std::string& text) {
        std::istringstream is(text);
        CHECK_THROWS_AS(read_tableau(is), ParseError);
    };
    expect_parse_error("");
    expect_parse_error("not-a-tableau v1 type=1 s=5\n");
    expect_parse_error("lirkw-tableau v2 type=1 s=5\n");
    expect_parse_error("lirkw-tableau v1 type=9 s=5\n");
    expect_parse_error("lirkw-tableau v1 type=1 s=2\n0 0\n");          // truncated
    expect_parse_error("lirkw-tableau v1 type=1 s=1\n0 1\n0\n0\n0\n");  // extra field
}
