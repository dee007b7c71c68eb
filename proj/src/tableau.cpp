#include "lirkw/tableau.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace lirkw {

Tableau table1_type1() {
    Tableau t;
    t.stages = 5;
    t.method_type = MethodType::Type1;
    t.id = "table1";
    t.a = Mat::Zero(5, 5);
    t.gamma = Mat::Zero(5, 5);

    t.a(1, 0) = 0.520300000000000;
    t.a(2, 0) = 0.026500000000000;
    t.a(2, 1) = 0.938000000000000;
    t.a(3, 0) = 0.122175553766880;
    t.a(3, 1) = 0.105600000000000;
    t.a(3, 2) = 0.018300000000000;
    t.a(4, 0) = -0.033950868284890;
    t.a(4, 1) = 0.218016324016351;
    t.a(4, 2) = 0.258600000000000;
    t.a(4, 3) = 0.557334544268539;

    t.gamma(1, 0) = -0.520300000000000;
    t.gamma(1, 1) = 0.520300000000000;
    t.gamma(2, 0) = 0.911500000000000;
    t.gamma(2, 1) = -1.876000000000000;
    t.gamma(2, 2) = 0.964500000000000;
    t.gamma(3, 0) = -0.401069249711528;
    t.gamma(3, 1) = 0.663393695944647;
    t.gamma(3, 2) = -0.508400000000000;
    t.gamma(3, 3) = 0.246075553766880;
    t.gamma(4, 0) = -0.155925222099085;
    t.gamma(4, 1) = -0.084089256959580;
    t.gamma(4, 2) = -1.070724285228281;
    t.gamma(4, 3) = 0.310738764286946;
    t.gamma(4, 4) = 1.0;

    // stiffly accurate: output weights are the last rows
    t.b = t.a.row(4);
    t.g = t.gamma.row(4);
    return t;
}

Tableau table2_type2(double gam, double gam54, double a43) {
    const double den = 5.0 * gam + 2.0 * gam54;
    const double scale = std::max({std::abs(gam), std::abs(gam54), 1.0});
    if (std::abs(den) < 1e-14 * scale)
        throw DegenerateParameters("table2_type2: 5*gam + 2*gam54 is (near) zero");
    if (gam == 0.0) throw DegenerateParameters("table2_type2: gam must be nonzero");

    Tableau t;
    t.stages = 5;
    t.method_type = MethodType::Type2;
    t.id = "table2";
    t.a = Mat::Zero(5, 5);
    t.gamma = Mat::Zero(5, 5);

    t.a(1, 0) = 1.0 / 6.0;
    const double a32 = (9.0 * gam + 2.0 * gam54) / (3.0 * den);
    t.a(2, 0) = 1.0 / 3.0 - a32;
    t.a(2, 1) = a32;
    const double a42 = (2.0 / 3.0) * (1.0 - 3.0 * a43);
    t.a(3, 0) = 0.5 - a42 - a43;
    t.a(3, 1) = a42;
    t.a(3, 2) = a43;
    t.a(4, 0) = 1.0;
    t.a(4, 1) = -1.5;
    t.a(4, 2) = 0.0;
    t.a(4, 3) = 1.5;

    t.gamma(1, 0) = -gam;
    t.gamma(1, 1) = gam;
    const double g32 = -2.0 * (3.0 * gam * gam + gam * gam54) / den;
    t.gamma(2, 0) = -g32 - gam;
    t.gamma(2, 1) = g32;
    t.gamma(2, 2) = gam;
    const double g43 = gam;  // free coefficient, absent from every order condition
    t.gamma(3, 0) = gam + g43;
    t.gamma(3, 1) = -2.0 * (gam + g43);
    t.gamma(3, 2) = g43;
    t.gamma(3, 3) = gam;
    t.gamma(4, 0) = 0.0;
    t.gamma(4, 1) = 4.0 * gam + gam54;
    t.gamma(4, 2) = -5.0 * gam - 2.0 * gam54;
    t.gamma(4, 3) = gam54;
    t.gamma(4, 4) = gam;

    t.b = t.a.row(4);
    t.g = t.gamma.row(4);
    return t;
}

namespace {

const char* flag_name(TableauFlag f) {
    switch (f) {
        case TableauFlag::LowerTriangular: return "lower-triangular";
        case TableauFlag::StiffAccuracy: return "stiff-accuracy";
        case TableauFlag::RowSumZero: return "row-sum-zero";
        case TableauFlag::Type1Diagonal: return "type1-diagonal";
        case TableauFlag::Type2Diagonal: return "type2-diagonal";
    }
    return "?";
}

double check_flag(const Tableau& t, TableauFlag f) {
    const int s = t.stages;
    double v = 0.0;
    switch (f) {
        case TableauFlag::LowerTriangular:
            for (int i = 0; i < s; ++i)
                for (int j = i; j < s; ++j) {
                    v = std::max(v, std::abs(t.a(i, j)));
                    if (j > i) v = std::max(v, std::abs(t.gamma(i, j)));
                }
            break;
        case TableauFlag::StiffAccuracy:
            for (int j = 0; j < s; ++j) {
                v = std::max(v, std::abs(t.b[j] - t.a(s - 1, j)));
                v = std::max(v, std::abs(t.g[j] - t.gamma(s - 1, j)));
            }
            break;
        case TableauFlag::RowSumZero:
            for (int i = 0; i < s; ++i) v = std::max(v, std::abs(t.gamma.row(i).sum()));
            v = std::max(v, std::abs(t.g.sum()));
            break;
        case TableauFlag::Type1Diagonal:
            for (int i = 0; i < s; ++i) {
                double row = 0.0;
                for (int j = 0; j < i; ++j) row += t.a(i, j);
                v = std::max(v, std::abs(t.gamma(i, i) - row));
            }
            break;
        case TableauFlag::Type2Diagonal: {
            v = std::abs(t.gamma(0, 0));
            for (int i = 2; i < s; ++i)
                v = std::max(v, std::abs(t.gamma(i, i) - t.gamma(1, 1)));
            break;
        }
    }
    return v;
}

}  // namespace

ValidationReport validate(const Tableau& t, const std::vector<TableauFlag>& flags) {
    ValidationReport report;
    report.reserve(flags.size());
    for (TableauFlag f : flags)
        report.push_back({f, flag_name(f), check_flag(t, f)});
    return report;
}

bool all_within(const ValidationReport& report, double tol) {
    for (const auto& entry : report)
        if (!(entry.max_violation <= tol)) return false;
    return true;
}

namespace {

void write_row(std::ostream& os, const double* row, int n) {
    char buf[32];
    for (int j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", row[j]);
        os << (j ? " " : "") << buf;
    }
    os << "\n";
}

}  // namespace

void write_tableau(std::ostream& os, const Tableau& t) {
    os << "lirkw-tableau v1 type=" << static_cast<int>(t.method_type)
       << " s=" << t.stages << "\n";
    std::vector<double> row(t.stages);
    for (int i = 0; i < t.stages; ++i) {
        for (int j = 0; j < t.stages; ++j) row[j] = t.a(i, j);
        write_row(os, row.data(), t.stages);
    }
    for (int i = 0; i < t.stages; ++i) {
        for (int j = 0; j < t.stages; ++j) row[j] = t.gamma(i, j);
        write_row(os, row.data(), t.stages);
    }
    for (int j = 0; j < t.stages; ++j) row[j] = t.b[j];
    write_row(os, row.data(), t.stages);
    for (int j = 0; j < t.stages; ++j) row[j] = t.g[j];
    write_row(os, row.data(), t.stages);
}

Tableau read_tableau(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw ParseError("tableau: empty input");
    std::istringstream hs(header);
    std::string magic, vers, typetok, stok;
    hs >> magic >> vers >> typetok >> stok;
    if (magic != "lirkw-tableau" || vers != "v1")
        throw ParseError("tableau: bad header '" + header + "'");
    if (typetok.rfind("type=", 0) != 0 || stok.rfind("s=", 0) != 0)
        throw ParseError("tableau: bad header fields '" + header + "'");
    int type = 0, s = 0;
    try {
        type = std::stoi(typetok.substr(5));
        s = std::stoi(stok.substr(2));
    } catch (const std::exception&) {
        throw ParseError("tableau: non-numeric header fields");
    }
    if (type < 1 || type > 3) throw ParseError("tableau: type must be 1, 2 or 3");
    if (s < 1 || s > 64) throw ParseError("tableau: unreasonable stage count");

    auto read_line = [&](double* dst, int n) {
        std::string line;
        if (!std::getline(is, line)) throw ParseError("tableau: truncated input");
        std::istringstream ls(line);
        for (int j = 0; j < n; ++j)
            if (!(ls >> dst[j])) throw ParseError("tableau: short row '" + line + "'");
        double extra;
        if (ls >> extra) throw ParseError("tableau: extra fields in row '" + line + "'");
    };

    Tableau t;
    t.stages = s;
    t.method_type = static_cast<MethodType>(type);
    t.id = "file";
    t.a = Mat::Zero(s, s);
    t.gamma = Mat::Zero(s, s);
    t.b = Vec::Zero(s);
    t.g = Vec::Zero(s);
    std::vector<double> row(s);
    for (int i = 0; i < s; ++i) {
        read_line(row.data(), s);
        for (int j = 0; j < s; ++j) t.a(i, j) = row[j];
    }
    for (int i = 0; i < s; ++i) {
        read_line(row.data(), s);
        for (int j = 0; j < s; ++j) t.gamma(i, j) = row[j];
    }
    read_line(t.b.data(), s);
    read_line(t.g.data(), s);
    if (!t.a.allFinite() || !t.gamma.allFinite() || !t.b.allFinite() || !t.g.allFinite())
        throw ParseError("tableau: non-finite coefficients");
    return t;
}

}  // namespace lirkw
