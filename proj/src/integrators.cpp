#include "lirkw/integrators.hpp"

#include <cmath>

namespace lirkw {

namespace {

void check_finite(const Vec& v, int stage) {
    if (!v.allFinite())
        throw NonfiniteState("stage " + std::to_string(stage + 1) + " produced non-finite values",
                             stage);
}

void keep(std::vector<Vec>* out, const Vec& y) {
    if (out) out->push_back(y);
}

}  // namespace

Vec step_type1(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::vector<Vec>* stages_out) {
    const int s = tb.stages;
    std::vector<Vec> fv(s), z(s);
    Vec out = y;
    for (int i = 0; i < s; ++i) {
        Vec rhs = y;
        for (int j = 0; j < i; ++j) {
            if (tb.a(i, j) != 0.0) rhs += (h * tb.a(i, j)) * fv[j];
            if (tb.gamma(i, j) != 0.0) rhs += (h * tb.gamma(i, j)) * z[j];
        }
        const AmfPtr op = p.operator_source(t, h, tb.gamma(i, i));
        const double sigma = h * tb.gamma(i, i);
        Vec yi = (tb.gamma(i, i) != 0.0) ? op->product_solve(sigma, rhs) : rhs;
        check_finite(yi, i);
        fv[i] = p.rhs(yi);
        z[i] = op->tilde_apply(sigma, yi);
        keep(stages_out, yi);
        if (tb.b[i] != 0.0) out += (h * tb.b[i]) * fv[i];
        if (tb.g[i] != 0.0) out += (h * tb.g[i]) * z[i];
    }
    check_finite(out, s - 1);
    return out;
}

Vec step_type2(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::vector<Vec>* stages_out) {
    const int s = tb.stages;
    std::vector<Vec> fv(s), yv(s);
    for (int i = 0; i < s; ++i) {
        Vec rhs = y;
        Vec w = Vec::Zero(p.dim);
        bool has_w = false;
        for (int j = 0; j < i; ++j) {
            if (tb.a(i, j) != 0.0) rhs += (h * tb.a(i, j)) * fv[j];
            if (tb.gamma(i, j) != 0.0) {
                w += tb.gamma(i, j) * yv[j];
                has_w = true;
            }
        }
        const AmfPtr op = p.operator_source(t, h, tb.gamma(i, i));
        if (has_w) rhs += h * op->sum_apply(w);
        const double sigma = h * tb.gamma(i, i);
        Vec yi = (tb.gamma(i, i) != 0.0) ? op->product_solve(sigma, rhs) : rhs;
        check_finite(yi, i);
        yv[i] = yi;
        fv[i] = p.rhs(yi);
        keep(stages_out, yi);
    }
    Vec out = y;
    Vec w = Vec::Zero(p.dim);
    for (int i = 0; i < s; ++i) {
        if (tb.b[i] != 0.0) out += (h * tb.b[i]) * fv[i];
        if (tb.g[i] != 0.0) w += tb.g[i] * yv[i];
    }
    const AmfPtr op = p.operator_source(t, h, 0.0);
    out += h * op->sum_apply(w);
    check_finite(out, s - 1);
    return out;
}

Vec step_type3(const IVProblem& p, const Tableau& tb, double t, const Vec& y, double h,
               std::span<const PartPtr> stage_ops, std::vector<Vec>* stages_out) {
    const int s = tb.stages;
    if (static_cast<int>(stage_ops.size()) != s)
        throw DimensionMismatch("step_type3: need one operator per stage");
    std::vector<Vec> fv(s), yv(s);
    for (int i = 0; i < s; ++i) {
        Vec rhs = y;
        Vec w = Vec::Zero(p.dim);
        bool has_w = false;
        for (int j = 0; j < i; ++j) {
            if (tb.a(i, j) != 0.0) rhs += (h * tb.a(i, j)) * fv[j];
            if (tb.gamma(i, j) != 0.0) {
                w += tb.gamma(i, j) * yv[j];
                has_w = true;
            }
        }
        if (has_w) rhs += h * stage_ops[i]->apply(w);
        const double sigma = h * tb.gamma(i, i);
        Vec yi = (tb.gamma(i, i) != 0.0) ? stage_ops[i]->shifted_solve(sigma, rhs) : rhs;
        check_finite(yi, i);
        yv[i] = yi;
        fv[i] = p.rhs(yi);
        keep(stages_out, yi);
    }
    Vec out = y;
    Vec w = Vec::Zero(p.dim);
    for (int i = 0; i < s; ++i) {
        if (tb.b[i] != 0.0) out += (h * tb.b[i]) * fv[i];
        if (tb.g[i] != 0.0) w += tb.g[i] * yv[i];
    }
    const AmfPtr op = p.operator_source(t, h, 0.0);
    out += h * op->sum_apply(w);
    check_finite(out, s - 1);
    return out;
}

IntegrateResult integrate(const IVProblem& p, const Tableau& tb, double t0, double tf,
                          long n_steps, const Type3OpsFactory* type3_ops, bool keep_records) {
    if (n_steps < 1) throw std::invalid_argument("integrate: n_steps must be >= 1");
    if (!(tf > t0)) throw std::invalid_argument("integrate: tf must exceed t0");
    if (tb.method_type == MethodType::Type3 && type3_ops == nullptr)
        throw std::invalid_argument("integrate: type-3 tableau needs a stage-operator factory");

    const double h = (tf - t0) / static_cast<double>(n_steps);
    IntegrateResult result;
    result.y = p.y0;
    if (keep_records) result.records.reserve(n_steps);

    for (long n = 0; n < n_steps; ++n) {
        const double t = t0 + h * static_cast<double>(n);
        StepRecord rec;
        if (keep_records) {
            rec.t = t;
            rec.h = h;
            rec.y_before = result.y;
        }
        std::vector<Vec>* stages = keep_records ? &rec.stages : nullptr;
        try {
            switch (tb.method_type) {
                case MethodType::Type1:
                    result.y = step_type1(p, tb, t, result.y, h, stages);
                    break;
                case MethodType::Type2:
                    result.y = step_type2(p, tb, t, result.y, h, stages);
                    break;
                case MethodType::Type3: {
                    auto ops = (*type3_ops)(t, h, tb);
                    result.y = step_type3(p, tb, t, result.y, h, ops, stages);
                    break;
                }
            }
        } catch (const NonfiniteState& e) {
            throw NonfiniteState(std::string(e.what()) + " at step " + std::to_string(n + 1),
                                 e.stage, n);
        } catch (const SingularFactor& e) {
            throw SingularFactor(std::string(e.what()) + " at step " + std::to_string(n + 1),
                                 e.part_index);
        }
        if (keep_records) {
            rec.y_after = result.y;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

}  // namespace lirkw
