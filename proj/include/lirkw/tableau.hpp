#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lirkw/common.hpp"

namespace lirkw {

enum class MethodType { Type1 = 1, Type2 = 2, Type3 = 3 };

/// Stage coefficients of a linearly-implicit Runge-Kutta-W method.
///
/// a is strictly lower triangular (explicit coupling), gamma is lower
/// triangular including the diagonal, b and g are the output weights for the
/// nonlinear and linear terms. The implicit tableau is a_hat = a + gamma with
/// weights b_hat = b + g. Immutable by convention after construction; safe to
/// share across threads.
struct Tableau {
    int stages = 0;
    Mat a;
    Mat gamma;
    Vec b;
    Vec g;
    MethodType method_type = MethodType::Type1;
    std::string id;

    Mat a_hat() const { return a + gamma; }
    Vec b_hat() const { return b + g; }
    /// Stage abscissae c_i = sum_j a_{i,j}.
    Vec c() const { return a.rowwise().sum(); }
};

/// The published 5-stage third-order method of type 1. Coefficients are
/// embedded as exact decimal literals.
Tableau table1_type1();

/// The published 5-stage third-order family of type 2, instantiated at
/// (gam, gam54, a43). Requires 5*gam + 2*gam54 != 0 and gam != 0; throws
/// DegenerateParameters otherwise.
///
/// The printed source for this family carries a sign error in a_{4,2}; the
/// order conditions force a_{4,2} = (2/3)(1 - 3*a43), which is what this
/// constructor uses. The remaining free coefficient gamma_{4,3} does not
/// enter any order-3 condition; it is pinned to gam.
Tableau table2_type2(double gam, double gam54, double a43);

enum class TableauFlag {
    LowerTriangular,   // a strictly lower, gamma lower
    StiffAccuracy,     // b = a.row(s), g = gamma.row(s)
    RowSumZero,        // sum_j gamma_{i,j} = 0 per row and sum_i g_i = 0
    Type1Diagonal,     // gamma_{i,i} = sum_{j<i} a_{i,j}
    Type2Diagonal,     // gamma_{1,1} = 0, gamma_{i,i} constant for i >= 2
};

struct ConstraintViolation {
    TableauFlag flag;
    std::string constraint;
    double max_violation = 0.0;
};

using ValidationReport = std::vector<ConstraintViolation>;

/// Measures the maximum absolute violation of each requested constraint.
/// Violations are report entries, never exceptions.
ValidationReport validate(const Tableau& t, const std::vector<TableauFlag>& flags);

/// True iff every violation in the report is <= tol (default 1e-12).
bool all_within(const ValidationReport& report, double tol = 1e-12);

/// Plain-text serialization. Header line `lirkw-tableau v1 type=<1|2|3> s=<n>`
/// followed by the s rows of a, the s rows of gamma, then b and g, written
/// with 17 significant digits so doubles round-trip bit-exactly.
void write_tableau(std::ostream& os, const Tableau& t);

/// Parses the format produced by write_tableau. Throws ParseError.
Tableau read_tableau(std::istream& is);

}  // namespace lirkw
