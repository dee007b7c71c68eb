#include "lirkw/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "lirkw/convergence.hpp"
#include "lirkw/problems.hpp"
#include "lirkw/report.hpp"
#include "lirkw/stability.hpp"
#include "lirkw/trees.hpp"

namespace lirkw::cli {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kAmfTol = 1e-12;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + tok + "' in list");
        }
        if (pos != tok.size()) throw ParseError("bad number '" + tok + "' in list");
        out.push_back(v);
    }
    if (out.empty()) throw ParseError("empty number list");
    return out;
}

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    for (double v : parse_double_list(text)) {
        if (v < 1 || v != std::floor(v)) throw ParseError("step counts must be positive integers");
        out.push_back(static_cast<long>(v));
    }
    return out;
}

/// Emits text to --out (when set) or to the console stream, and writes the
/// manifest next to the output file.
void deliver(const std::string& text, const std::string& out_path, const Manifest& manifest,
             std::ostream& console) {
    if (out_path.empty()) {
        console << text;
        return;
    }
    write_file(out_path, text);
    std::ostringstream ms;
    manifest.write(ms);
    write_file(out_path + ".manifest", ms.str());
}

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "write output (and <out>.manifest) to this path");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "pretty"}));
    cmd->add_option("--seed", c.seed, "seed for randomized configurations");
}

Manifest base_manifest(const std::string& subcommand, const CommonOpts& c) {
    Manifest m;
    m.set("tool", "lirkw");
    m.set("version", kVersion);
    m.set("subcommand", subcommand);
    m.set("format", c.format);
    m.set("seed", std::to_string(c.seed));
    if (!c.out.empty()) m.set("out", c.out);
    return m;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
    CommonOpts common;
    std::string tableau;
    int type = 0;
    int order = 3;
    bool reduced = false;
    double gam = 0.25, gam54 = -0.5, a43 = 0.3;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
    const Tableau tb = tableau_by_name(o.tableau, o.gam, o.gam54, o.a43);
    const std::vector<OrderConditionRow> rows =
        o.reduced ? reduced_conditions(tb, o.type) : verify_order(tb, o.type, o.order);

    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.residual));
    const bool pass = all_pass(rows, kResidualTol);

    std::ostringstream text;
    if (o.common.format == "csv") {
        text << "label,order,target,phi,residual\n";
        for (const auto& r : rows)
            text << r.label << "," << r.tree.order() << "," << format_double(r.target) << ","
                 << format_double(r.phi) << "," << format_double(r.residual) << "\n";
    } else {
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %-16s %5s %12s %22s %14s\n", "label", "tree",
                      "order", "target", "phi", "residual");
        text << line;
        for (const auto& r : rows) {
            std::snprintf(line, sizeof line, "%-8s %-16s %5d %12.6g %22.15g %14.3e\n",
                          r.label.c_str(), r.tree.bracket_string().c_str(), r.tree.order(),
                          r.target, r.phi, r.residual);
            text << line;
        }
    }
    text << "rows=" << rows.size() << " max_residual=" << format_double(worst)
         << " status=" << (pass ? "PASS" : "FAIL") << "\n";

    Manifest m = base_manifest("verify", o.common);
    m.set("tableau", o.tableau);
    m.set("type", std::to_string(o.type));
    m.set("order", std::to_string(o.order));
    if (o.reduced) m.set("reduced", "1");
    m.set("gamma", o.gam);
    m.set("gamma54", o.gam54);
    m.set("a43", o.a43);
    deliver(text.str(), o.common.out, m, out);
    return pass ? kOk : kCheckFailed;
}

// ------------------------------------------------------------------- trees

struct TreesOpts {
    CommonOpts common;
    std::string family = "LW1";
    int order = 3;
};

int cmd_trees(const TreesOpts& o, std::ostream& out) {
    TreeFamily family;
    if (o.family == "T") family = TreeFamily::T;
    else if (o.family == "LW1") family = TreeFamily::LW1;
    else if (o.family == "LW2") family = TreeFamily::LW2;
    else if (o.family == "LW3") family = TreeFamily::LW3;
    else throw ParseError("unknown family '" + o.family + "' (T, LW1, LW2, LW3)");

    const auto trees = enumerate_trees(family, o.order);
    std::ostringstream text;
    if (o.common.format == "csv") text << "index,bracket,order,target\n";
    int idx = 0;
    for (const auto& t : trees) {
        ++idx;
        const double target = t.all_meagre() ? 1.0 / static_cast<double>(density(t)) : 0.0;
        if (o.common.format == "csv")
            text << idx << "," << t.bracket_string() << "," << t.order() << ","
                 << format_double(target) << "\n";
        else {
            char line[160];
            std::snprintf(line, sizeof line, "%4d  %-24s order=%d target=%g\n", idx,
                          t.bracket_string().c_str(), t.order(), target);
            text << line;
        }
    }
    text << "count=" << trees.size() << "\n";

    Manifest m = base_manifest("trees", o.common);
    m.set("family", o.family);
    m.set("order", std::to_string(o.order));
    deliver(text.str(), o.common.out, m, out);
    return kOk;
}

// ---------------------------------------------------------------- converge

struct ConvergeOpts {
    CommonOpts common;
    std::string problem = "brusselator";
    std::string tableau = "table1";
    int type = 0;  // 0: take the tableau's own type
    std::string lconfig = "exact-l";
    std::string n_list = "16,32,64,128,256";
    int tail = 4;
    std::string band = "2.75,3.25";
    long ref_steps = 0;  // 0: 16 * max(n)
    int nx = 24, ny = 24, dim = 8;
    double gam = 0.25, gam54 = -0.5, a43 = 0.3;
};

int cmd_converge(const ConvergeOpts& o, std::ostream& out, std::ostream& err) {
    Tableau tb = tableau_by_name(o.tableau, o.gam, o.gam54, o.a43);
    if (o.type != 0) tb.method_type = static_cast<MethodType>(o.type);

    const auto cfg = parse_op_config(o.lconfig);
    if (!cfg) throw ParseError("unknown operator configuration '" + o.lconfig + "'");

    ProblemSpec spec;
    spec.name = o.problem;
    spec.config = *cfg;
    spec.seed = o.common.seed;
    spec.n = o.dim;
    spec.nx = o.nx;
    spec.ny = o.ny;
    const IVProblem p = make_problem(spec);

    const std::vector<long> ns = parse_long_list(o.n_list);
    const std::vector<double> band = parse_double_list(o.band);
    if (band.size() != 2 || band[0] >= band[1]) throw ParseError("band must be 'lo,hi'");
    const long ref_n = o.ref_steps > 0 ? o.ref_steps : 16 * ns.back();

    std::unique_ptr<Type3OpsFactory> type3;
    if (tb.method_type == MethodType::Type3) {
        ProblemSpec exact_spec = spec;
        exact_spec.config = OpConfig::ExactL;
        const IVProblem p_exact = make_problem(exact_spec);
        if (*cfg == OpConfig::PerturbedJ) {
            type3 = std::make_unique<Type3OpsFactory>(
                make_perturbed_stage_ops(p_exact, o.common.seed));
        } else {
            auto part = make_dense_part(exact_dense_operator(p));
            type3 = std::make_unique<Type3OpsFactory>(
                [part](double, double, const Tableau& t) {
                    return std::vector<PartPtr>(t.stages, part);
                });
        }
    }

    int code = kOk;
    std::ostringstream text;
    text << "n_steps,h,error,local_slope\n";
    double slope = std::numeric_limits<double>::quiet_NaN();
    try {
        const Vec reference = fine_reference(p, tb, ref_n, type3.get());
        const SweepResult sweep = convergence_sweep(p, tb, ns, reference, o.tail, type3.get());
        for (const auto& pt : sweep.points)
            text << pt.n_steps << "," << format_double(pt.h) << "," << format_double(pt.error)
                 << "," << format_double(pt.local_slope) << "\n";
        slope = sweep.fitted_slope;
        if (!(slope >= band[0] && slope <= band[1])) code = kCheckFailed;
    } catch (const NonfiniteState& e) {
        err << "error: " << e.what() << "\n";
        code = kNonfinite;
    }

    Manifest m = base_manifest("converge", o.common);
    m.set("problem", o.problem);
    m.set("tableau", o.tableau);
    if (o.type != 0) m.set("type", std::to_string(o.type));
    m.set("lconfig", o.lconfig);
    m.set("n", o.n_list);
    m.set("tail", std::to_string(o.tail));
    m.set("band", o.band);
    m.set("ref-steps", ref_n);
    m.set("nx", std::to_string(o.nx));
    m.set("ny", std::to_string(o.ny));
    m.set("dim", std::to_string(o.dim));
    m.set("gamma", o.gam);
    m.set("gamma54", o.gam54);
    m.set("a43", o.a43);
    deliver(text.str(), o.common.out, m, out);
    out << "slope=" << format_double(slope) << " tail=" << o.tail << " band=[" << o.band
        << "] status=" << (code == kOk ? "PASS" : "FAIL") << "\n";
    return code;
}

// --------------------------------------------------------------- stability

struct StabilityOpts {
    CommonOpts common;
    std::string tableau = "table1";
    int type = 1;
    std::string config = "exact-l";
    std::string grid = "0,-1,-10,-100,-1000,-10000,-100000,-1000000,-10000000,-100000000";
    double gam = 0.25, gam54 = -0.5, a43 = 0.3;
};

int cmd_stability(const StabilityOpts& o, std::ostream& out) {
    const Tableau tb = tableau_by_name(o.tableau, o.gam, o.gam54, o.a43);
    ScanConfig cfg;
    if (o.config == "exact-l") cfg = ScanConfig::ExactL;
    else if (o.config == "growing-li") cfg = ScanConfig::GrowingStageL;
    else throw ParseError("unknown scan configuration '" + o.config + "' (exact-l, growing-li)");

    const std::vector<double> grid = parse_double_list(o.grid);
    const auto points = stability_scan(tb, o.type, grid, cfg);

    std::ostringstream text;
    text << "h_lambda,abs_R\n";
    for (const auto& pt : points)
        text << format_double(pt.h_lambda) << "," << format_double(pt.abs_R) << "\n";

    Manifest m = base_manifest("stability", o.common);
    m.set("tableau", o.tableau);
    m.set("type", std::to_string(o.type));
    m.set("config", o.config);
    m.set("grid", o.grid);
    m.set("gamma", o.gam);
    m.set("gamma54", o.gam54);
    m.set("a43", o.a43);
    deliver(text.str(), o.common.out, m, out);
    return kOk;
}

// --------------------------------------------------------------- amf-check

struct AmfCheckOpts {
    CommonOpts common;
    int parts = 2;
    int dim = 4;
    double sigma = 0.37;
};

/// Brute-force dense expansion of Ltilde over all ordered index subsets.
Mat subset_expansion(const std::vector<Mat>& parts, double sigma) {
    const int r = static_cast<int>(parts.size());
    const auto n = parts.front().rows();
    Mat acc = Mat::Zero(n, n);
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        Mat prod = Mat::Identity(n, n);
        int k = 0;
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) {
                prod = prod * parts[i];
                ++k;
            }
        acc += std::pow(-sigma, k - 1) * prod;
    }
    return acc;
}

int cmd_amf_check(const AmfCheckOpts& o, std::ostream& out) {
    if (o.parts < 1 || o.parts > 8) throw ParseError("--parts must be in [1, 8]");
    if (o.dim < 1) throw ParseError("--dim must be positive");
    Rng rng(o.common.seed);
    std::vector<Mat> dense;
    std::vector<PartPtr> parts;
    for (int r = 0; r < o.parts; ++r) {
        dense.push_back(rng.matrix(o.dim, o.dim));
        parts.push_back(make_dense_part(dense.back()));
    }
    const AmfOperator op(parts);
    const Mat expansion = subset_expansion(dense, o.sigma);

    double tilde_err = 0.0, solve_err = 0.0, sum_err = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const Vec v = rng.vector(o.dim);
        tilde_err = std::max(tilde_err, rel_err(op.tilde_apply(o.sigma, v), Vec(expansion * v)));
        const Vec x = op.product_solve(o.sigma, v);
        const Vec back = x - o.sigma * op.tilde_apply(o.sigma, x);
        solve_err = std::max(solve_err, rel_err(back, v));
        Mat sum = Mat::Zero(o.dim, o.dim);
        for (const Mat& m : dense) sum += m;
        sum_err = std::max(sum_err, rel_err(op.sum_apply(v), Vec(sum * v)));
    }
    const bool pass = tilde_err <= kAmfTol && solve_err <= kAmfTol && sum_err <= kAmfTol;

    std::ostringstream text;
    if (o.common.format == "csv") {
        text << "check,value,tol,status\n";
        auto row = [&](const char* name, double v) {
            text << name << "," << format_double(v) << "," << format_double(kAmfTol) << ","
                 << (v <= kAmfTol ? "PASS" : "FAIL") << "\n";
        };
        row("tilde_vs_expansion", tilde_err);
        row("product_solve_roundtrip", solve_err);
        row("sum_apply_vs_dense", sum_err);
    } else {
        text << "parts=" << o.parts << " dim=" << o.dim << " sigma=" << o.sigma << "\n";
        text << "tilde_vs_expansion      rel_err=" << format_double(tilde_err) << "\n";
        text << "product_solve_roundtrip rel_err=" << format_double(solve_err) << "\n";
        text << "sum_apply_vs_dense      rel_err=" << format_double(sum_err) << "\n";
        text << "status=" << (pass ? "PASS" : "FAIL") << "\n";
    }

    Manifest m = base_manifest("amf-check", o.common);
    m.set("parts", std::to_string(o.parts));
    m.set("dim", std::to_string(o.dim));
    m.set("sigma", o.sigma);
    deliver(text.str(), o.common.out, m, out);
    return pass ? kOk : kCheckFailed;
}

// ------------------------------------------------------------------- rerun

int cmd_rerun(const std::string& manifest_path, const std::string& out_override,
              std::ostream& out, std::ostream& err) {
    std::ifstream is(manifest_path);
    if (!is) throw ParseError("cannot open manifest '" + manifest_path + "'");
    const Manifest m = Manifest::parse(is);
    const std::string* sub = m.find("subcommand");
    if (!sub) throw ParseError("manifest lacks a subcommand entry");

    std::vector<std::string> args{*sub};
    for (const auto& [key, value] : m.entries()) {
        if (key == "tool" || key == "version" || key == "subcommand" || key == "out") continue;
        args.push_back("--" + key);
        args.push_back(value);
    }
    std::string target = out_override;
    if (target.empty())
        if (const std::string* orig = m.find("out")) target = *orig;
    if (!target.empty()) {
        args.push_back("--out");
        args.push_back(target);
    }
    return run(args, out, err);
}

}  // namespace

Tableau tableau_by_name(const std::string& name, double gam, double gam54, double a43) {
    if (name == "table1") return table1_type1();
    if (name == "table2") return table2_type2(gam, gam54, a43);
    if (name == "table1-broken") {
        Tableau t = table1_type1();
        t.b *= 1.1;
        t.id = "table1-broken";
        return t;
    }
    std::ifstream is(name);
    if (!is) throw ParseError("unknown tableau '" + name + "' and no such file");
    return read_tableau(is);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LIRK-W integrators: order-condition verification, convergence and stability studies"};
    app.require_subcommand(1);

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "check order conditions for a tableau");
    add_common(verify, vo.common);
    verify->add_option("--tableau", vo.tableau, "table1 | table2 | table1-broken | file path")
        ->required();
    verify->add_option("--type", vo.type, "method type (1, 2 or 3)")
        ->required()
        ->check(CLI::Range(1, 3));
    verify->add_option("--order", vo.order, "verify conditions up to this order")
        ->check(CLI::Range(1, 6));
    verify->add_flag("--reduced", vo.reduced, "use the curated reduced condition set");
    verify->add_option("--gamma", vo.gam, "table2 parameter");
    verify->add_option("--gamma54", vo.gam54, "table2 parameter");
    verify->add_option("--a43", vo.a43, "table2 parameter");

    TreesOpts to;
    auto* trees = app.add_subcommand("trees", "enumerate tree families");
    add_common(trees, to.common);
    trees->add_option("--family", to.family, "T | LW1 | LW2 | LW3");
    trees->add_option("--order", to.order, "maximum vertex count")->check(CLI::Range(1, 6));

    ConvergeOpts co;
    auto* converge = app.add_subcommand("converge", "fixed-step convergence sweep");
    add_common(converge, co.common);
    converge->add_option("--problem", co.problem, "linear | adr2d | brusselator | vdpol-mild");
    converge->add_option("--tableau", co.tableau, "tableau name or file");
    converge->add_option("--type", co.type, "override the stepper type")->check(CLI::Range(1, 3));
    converge->add_option("--lconfig", co.lconfig,
                         "exact-l | amf-2part | arbitrary-l | perturbed-j | zero-l");
    converge->add_option("--n", co.n_list, "comma-separated step counts, increasing");
    converge->add_option("--tail", co.tail, "points used in the slope fit")->check(CLI::Range(2, 32));
    converge->add_option("--band", co.band, "accepted slope band 'lo,hi'");
    converge->add_option("--ref-steps", co.ref_steps, "reference step count (default 16*max n)");
    converge->add_option("--nx", co.nx, "adr2d grid");
    converge->add_option("--ny", co.ny, "adr2d grid");
    converge->add_option("--dim", co.dim, "linear problem dimension");
    converge->add_option("--gamma", co.gam, "table2 parameter");
    converge->add_option("--gamma54", co.gam54, "table2 parameter");
    converge->add_option("--a43", co.a43, "table2 parameter");

    StabilityOpts so;
    auto* stability = app.add_subcommand("stability", "scalar |R(h*lambda)| scan");
    add_common(stability, so.common);
    stability->add_option("--tableau", so.tableau, "tableau name or file");
    stability->add_option("--type", so.type, "method type (1 or 2)")->check(CLI::Range(1, 2));
    stability->add_option("--config", so.config, "exact-l | growing-li");
    stability->add_option("--grid", so.grid, "comma-separated h*lambda values");
    stability->add_option("--gamma", so.gam, "table2 parameter");
    stability->add_option("--gamma54", so.gam54, "table2 parameter");
    stability->add_option("--a43", so.a43, "table2 parameter");

    AmfCheckOpts ao;
    auto* amf = app.add_subcommand("amf-check", "factored-operator algebra checks");
    add_common(amf, ao.common);
    amf->add_option("--parts", ao.parts, "number of split parts");
    amf->add_option("--dim", ao.dim, "operator dimension");
    amf->add_option("--sigma", ao.sigma, "shift used in the checks");

    std::string rerun_path, rerun_out;
    auto* rerun = app.add_subcommand("rerun", "re-execute a recorded manifest");
    rerun->add_option("manifest", rerun_path, "path to a .manifest file")->required();
    rerun->add_option("--out", rerun_out, "redirect output to this path");

    std::vector<const char*> argv;
    argv.push_back("lirkw");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (app.got_subcommand(verify)) return cmd_verify(vo, out);
        if (app.got_subcommand(trees)) return cmd_trees(to, out);
        if (app.got_subcommand(converge)) return cmd_converge(co, out, err);
        if (app.got_subcommand(stability)) return cmd_stability(so, out);
        if (app.got_subcommand(amf)) return cmd_amf_check(ao, out);
        if (app.got_subcommand(rerun)) return cmd_rerun(rerun_path, rerun_out, out, err);
    } catch (const NonfiniteState& e) {
        err << "error: " << e.what() << "\n";
        return kNonfinite;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownProblem& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    err << "error: no subcommand\n";
    return kUsage;
}

}  // namespace lirkw::cli
