// hardy: batch front end. Every run writes manifest.json into --output-dir.
// Config files (TOML/INI, via --config) are read first; flags override them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hardy/bessel.hpp"
#include "hardy/ensemble.hpp"
#include "hardy/field_io.hpp"
#include "hardy/fourier.hpp"
#include "hardy/green.hpp"
#include "hardy/hardy_weight.hpp"
#include "hardy/rellich.hpp"
#include "hardy/report.hpp"
#include "hardy/spectrum.hpp"
#include "hardy/statistics.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hardy;

namespace {

struct FieldOptions {
    int dim = 3;
    int radius = 16;
    std::string field = "free";
    std::string field_file;
    double value = 1.0;
    double delta = 0.2;
    std::string dist = "rademacher";
    std::uint64_t seed = 1;
    double tol = 1e-10;
    int max_iter = 0;
    unsigned threads = 1;
    std::string output_dir = ".";

    json to_json() const {
        json j;
        j["dim"] = dim;
        j["radius"] = radius;
        j["field"] = field;
        if (!field_file.empty()) j["field-file"] = field_file;
        if (field == "constant") j["value"] = value;
        if (field == "iid") {
            j["delta"] = delta;
            j["dist"] = dist;
            j["seed"] = seed;
        }
        j["tol"] = tol;
        j["max-iter"] = max_iter;
        j["threads"] = threads;
        return j;
    }

    SolverOptions solver() const {
        SolverOptions s;
        s.tol = tol;
        s.max_iter = max_iter;
        return s;
    }

    std::shared_ptr<const CoefficientField> build(int r) const {
        const BoxDomain box(dim, r);
        if (!field_file.empty()) return std::make_shared<const CoefficientField>(load_field(field_file));
        if (field == "free") return std::make_shared<const CoefficientField>(build_constant_field(box, 1.0));
        if (field == "constant")
            return std::make_shared<const CoefficientField>(
                build_constant_field(box, value, std::min(value, 1.0 / value)));
        return std::make_shared<const CoefficientField>(
            build_iid_field(box, delta, parse_distribution(dist), seed));
    }
};

void add_field_options(CLI::App* app, FieldOptions& o) {
    app->add_option("--dim", o.dim, "lattice dimension")->check(CLI::Range(3, kMaxDim))->capture_default_str();
    app->add_option("--radius", o.radius, "box radius R_box")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--field", o.field, "coefficient field")
        ->check(CLI::IsMember({"free", "constant", "iid"}))
        ->capture_default_str();
    app->add_option("--field-file", o.field_file, "read the field from a hardy-field file")->check(CLI::ExistingFile);
    app->add_option("--value", o.value, "conductance of a constant field")->capture_default_str();
    app->add_option("--delta", o.delta, "iid perturbation strength in (0, 1)")->capture_default_str();
    app->add_option("--dist", o.dist, "iid variate law")
        ->check(CLI::IsMember({"rademacher", "uniform"}))
        ->capture_default_str();
    app->add_option("--seed", o.seed, "field seed")->capture_default_str();
    app->add_option("--tol", o.tol, "CG relative residual")->capture_default_str();
    app->add_option("--max-iter", o.max_iter, "CG iteration cap (0: 50 (2R+1))")->capture_default_str();
    app->add_option("--threads", o.threads, "worker threads; does not change outputs")->capture_default_str();
    app->add_option("--output-dir", o.output_dir, "directory for all outputs")->capture_default_str();
}

/// Collects files, stages and failures, and writes the manifest at the end.
class Run {
public:
    Run(std::string subcommand, const FieldOptions& o) : dir_(o.output_dir) {
        manifest_.subcommand = std::move(subcommand);
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        manifest_.outputs.push_back(name);
        std::ofstream os(dir_ / name, std::ios::binary);
        require(os.good(), "cannot write " + (dir_ / name).string());
        return os;
    }

    void write(const std::string& name, const std::string& text) { open(name) << text << '\n'; }

    void stage(const std::string& name, double residual, double tolerance, bool passed) {
        manifest_.stages.push_back({name, residual, tolerance, passed});
        if (!passed) fail(name + ": residual " + format_number(residual) + " vs tolerance " + format_number(tolerance));
    }

    void fail(const std::string& what) { manifest_.failures.push_back(what); }
    void seed(std::uint64_t s) { manifest_.seeds.push_back(s); }
    void config(const json& j) { manifest_.config_json = j.dump(); }

    int finish() {
        if (manifest_.config_json.empty()) manifest_.config_json = "{}";
        manifest_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream(dir_ / "manifest.json", std::ios::binary) << manifest_.to_json() << '\n';
        for (const auto& f : manifest_.failures) std::cerr << "FAILED " << f << '\n';
        return manifest_.failures.empty() ? 0 : 1;
    }

private:
    fs::path dir_;
    RunManifest manifest_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<int> extrapolation_radii(int r) { return {r, r + (r + 3) / 4, r + (r + 1) / 2}; }

/// Sitewise truncation-extrapolated G on the box of radius o.radius.
GreenField extrapolated_green(const FieldOptions& o, Run& run) {
    std::vector<GreenField> family;
    for (int r : extrapolation_radii(o.radius)) {
        family.push_back(solve_green(o.build(r), Point::origin(o.dim), o.solver()));
        run.stage("solve R=" + std::to_string(r), family.back().residual(), o.tol, family.back().residual() <= o.tol);
    }
    return GreenField(family.front().field_ptr(), Point::origin(o.dim), extrapolate_field(family),
                      family.front().residual(), family.front().iterations());
}

Point parse_point(const std::vector<int>& v) {
    Point p(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
    return p;
}

/// Shell means of f over r - 1/2 <= |x| < r + 1/2, r = lo..hi.
std::pair<std::vector<double>, std::vector<double>> shell_means(const LatticeFunction& f, int lo, int hi) {
    std::vector<double> radii, means;
    const BoxDomain& box = f.domain();
    std::vector<double> sum(static_cast<std::size_t>(hi + 1), 0.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(hi + 1), 0);
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        const auto r = static_cast<long>(std::floor(x.norm() + 0.5));
        if (r < lo || r > hi || !box.is_interior(x)) continue;
        sum[static_cast<std::size_t>(r)] += f[k];
        ++cnt[static_cast<std::size_t>(r)];
    }
    for (int r = lo; r <= hi; ++r)
        if (cnt[static_cast<std::size_t>(r)]) {
            radii.push_back(r);
            means.push_back(sum[static_cast<std::size_t>(r)] / static_cast<double>(cnt[static_cast<std::size_t>(r)]));
        }
    return {radii, means};
}

// ---------------------------------------------------------------- green

struct GreenOptions {
    std::string oracle = "cg";
    std::vector<int> x;
    std::uint64_t walkers = 100000;
    std::vector<double> shells;
    std::vector<int> extrapolate;
};

int cmd_green(const FieldOptions& o, const GreenOptions& g) {
    Run run("green", o);
    json cfg = o.to_json();
    cfg["oracle"] = g.oracle;
    if (!g.x.empty()) cfg["x"] = g.x;
    if (g.oracle == "walk") cfg["walkers"] = g.walkers;
    cfg["aronson-shells"] = g.shells;
    cfg["extrapolate"] = g.extrapolate;
    run.config(cfg);

    if (g.oracle == "bessel") {
        const Point x = g.x.empty() ? Point::origin(o.dim) : parse_point(g.x);
        const auto q = free_green_quadrature(x);
        json j{{"x", g.x}, {"G0", q.value}, {"error_bound", q.error_bound}, {"cutoff", q.cutoff}};
        run.write("oracle.json", j.dump(2));
        std::printf("G0(%s) = %s (error bound %s)\n", x.str().c_str(), format_number(q.value).c_str(),
                    format_number(q.error_bound).c_str());
        return run.finish();
    }

    const auto field = o.build(o.radius);
    if (field->source() == FieldSource::iid) run.seed(field->seed());
    const Point pole = Point::origin(o.dim);
    const GreenField green = g.oracle == "dense" ? dense_green_oracle(field, pole) : solve_green(field, pole, o.solver());
    run.stage("solve", green.residual(), o.tol, green.residual() <= o.tol || g.oracle == "dense");
    const auto diag = diagnose(green);
    const double tol = identity_tolerance(green);
    run.stage("pole equation", diag.pole_equation_error, tol, diag.pole_equation_error <= tol);
    run.stage("harmonicity", diag.harmonicity_error, tol, diag.harmonicity_error <= tol);
    run.stage("positivity", -diag.min_value, 0.0, diag.min_value > 0.0);
    run.stage("comparison", static_cast<double>(diag.comparison_violations), 0.0, diag.comparison_violations == 0);
    {
        auto os = run.open("green.csv");
        write_green_csv(os, green);
    }

    std::vector<double> shells = g.shells;
    if (shells.empty())
        for (int r = 2; r <= o.radius / 2; r += std::max(1, o.radius / 8)) shells.push_back(r);
    if (!shells.empty()) {
        const auto rep = aronson_report(green, shells);
        auto os = run.open("aronson.csv");
        write_aronson_csv(os, rep);
    }

    json summary{{"G_pole", green.at(pole)}, {"residual", green.residual()}, {"iterations", green.iterations()}};
    if (g.oracle == "walk") {
        const Point x = g.x.empty() ? pole : parse_point(g.x);
        const auto est = random_walk_green(*field, pole, x, g.walkers, o.seed, o.threads);
        const double cg = green.at(x);
        summary["walk"] = {{"x", g.x}, {"estimate", est.estimate}, {"stderr", est.stderr_}, {"cg", cg}};
        const double z = est.stderr_ > 0 ? std::abs(est.estimate - cg) / est.stderr_ : 0.0;
        run.stage("walk vs cg (stderr units)", z, 4.0, z <= 4.0);
        std::printf("walk G(%s) = %s +- %s, CG %s\n", x.str().c_str(), format_number(est.estimate).c_str(),
                    format_number(est.stderr_).c_str(), format_number(cg).c_str());
    }
    if (!g.extrapolate.empty()) {
        const Point x = g.x.empty() ? pole : parse_point(g.x);
        const auto e = truncation_extrapolate([&](const BoxDomain& b) { return *o.build(b.radius()); }, o.dim,
                                              g.extrapolate, pole, x, o.solver());
        summary["extrapolation"] = {{"radii", e.radii}, {"values", e.values}, {"G_inf", e.g_inf},
                                    {"slope", e.slope}, {"fit_residual", e.fit_residual}, {"monotone", e.monotone}};
    }
    run.write("green.json", summary.dump(2));
    std::printf("G(o) = %s, residual %s, %d iterations\n", format_number(green.at(pole)).c_str(),
                format_number(green.residual()).c_str(), green.iterations());
    return run.finish();
}

// ---------------------------------------------------------------- hardy

struct HardyOptions {
    std::string report = "annuli";
    double ell = 2.0;
    double alpha_sector = 0.5;
    int axis = 1;
    std::vector<double> region_radii;
    bool extrapolate = true;
    bool certify = false;
    double weight_scale = 1.0;
    int certify_radius = 16;
};

int cmd_hardy(const FieldOptions& o, const HardyOptions& h) {
    Run run("hardy", o);
    json cfg = o.to_json();
    cfg["report"] = h.report;
    cfg["ell"] = h.ell;
    if (h.report == "sectors") {
        cfg["alpha-sector"] = h.alpha_sector;
        cfg["axis"] = h.axis;
    }
    cfg["region-radii"] = h.region_radii;
    cfg["extrapolate"] = h.extrapolate;
    cfg["certify"] = h.certify;
    if (h.certify) {
        cfg["weight-scale"] = h.weight_scale;
        cfg["certify-radius"] = h.certify_radius;
    }
    run.config(cfg);
    if (o.field == "iid") run.seed(o.seed);
    require(!(h.extrapolate && !o.field_file.empty()), "hardy: --extrapolate needs a generated field");

    const GreenField green =
        h.extrapolate ? extrapolated_green(o, run) : solve_green(o.build(o.radius), Point::origin(o.dim), o.solver());
    const auto w = hardy_weight(green);
    {
        auto os = run.open("weight.csv");
        write_weight_csv(os, w);
    }

    std::vector<double> radii = h.region_radii;
    if (radii.empty())
        for (double r = 2.0; r * h.ell <= 0.5 * o.radius + 1e-9; r *= std::sqrt(2.0)) radii.push_back(std::round(r));
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<RegionRow> rows;
    std::vector<double> rs, vals;
    for (double r : radii) {
        RegionRow row;
        row.R = r;
        row.ell = h.ell;
        if (h.report == "annuli") {
            const auto spec = RegionSpec::annulus(r, h.ell);
            const auto avg = region_average(w, spec);
            row.kind = "annulus";
            row.count = avg.count;
            row.normalized_sum = avg.normalized_sum;
            row.scaled = avg.normalized_sum * r * r;
        } else {
            const auto spec = RegionSpec::sector(r, h.ell, h.axis - 1, h.alpha_sector);
            row.kind = "sector";
            row.count = enumerate_region(spec, o.dim).size();
            row.normalized_sum = sector_gradient_energy(green, spec);
            row.scaled = row.normalized_sum * std::pow(r, 2.0 * o.dim - 2.0);
        }
        rows.push_back(row);
        rs.push_back(r);
        vals.push_back(row.normalized_sum);
    }
    {
        auto os = run.open("regions.csv");
        write_region_csv(os, rows);
    }
    json summary{{"report", h.report}, {"radii", radii}};
    if (rs.size() >= 2) {
        const auto fit = fit_loglog(rs, vals);
        summary["slope"] = fit.slope;
        summary["slope_stderr"] = fit.slope_stderr;
        std::printf("%s: log-log slope %s (stderr %s)\n", h.report.c_str(), format_number(fit.slope).c_str(),
                    format_number(fit.slope_stderr).c_str());
    }
    run.write("regions.json", summary.dump(2));

    if (h.certify) {
        // the certificate concerns the Dirichlet problem on its own box
        FieldOptions co = o;
        co.radius = h.certify_radius;
        const auto field = co.build(co.radius);
        const auto gc = solve_green(field, Point::origin(o.dim), o.solver());
        const auto wc = hardy_weight(gc).scaled(h.weight_scale);
        const auto cert = certify_hardy(*field, wc.w(), 1e-8);
        run.write("certificate.json", certificate_json(cert, co.radius, h.weight_scale));
        run.stage("hardy certificate", -cert.bracket_lo, 1e-8, cert.certified);
        std::printf("certificate R=%d scale %s: min eigenvalue %s, certified=%s\n", co.radius,
                    format_number(h.weight_scale).c_str(), format_number(cert.min_eigenvalue).c_str(),
                    cert.certified ? "true" : "false");
    }
    return run.finish();
}

// ---------------------------------------------------------------- ensemble

struct EnsembleOptions {
    std::size_t realizations = 64;
    std::vector<double> shells{6, 9, 12, 16};
    std::vector<double> moments{1, 2};
    double floor_constant = 0.1;
    bool correction = true;
    double eps = 0.3;
    int spot_radius = 0;
};

int cmd_ensemble(const FieldOptions& o, const EnsembleOptions& e) {
    Run run("ensemble", o);
    EnsembleSpec spec;
    spec.dim = o.dim;
    spec.box_radius = o.radius;
    spec.delta = o.field == "free" ? 0.0 : o.delta;
    spec.dist = parse_distribution(o.dist);
    spec.realizations = e.realizations;
    spec.master_seed = o.seed;
    spec.shells = e.shells;
    spec.moments = e.moments;
    spec.floor_constant = e.floor_constant;
    spec.truncation_correction = e.correction;
    spec.solver = o.solver();
    spec.threads = o.threads;
    require(o.field != "constant" && o.field_file.empty(), "ensemble: --field must be iid or free");

    json cfg = json::parse(ensemble_spec_json(spec));
    cfg["threads"] = o.threads;
    cfg["eps"] = e.eps;
    cfg["spot-radius"] = e.spot_radius;
    run.config(cfg);

    const auto stats = run_ensemble(spec);
    for (auto s : stats.seeds) run.seed(s);
    {
        auto os = run.open("ensemble.csv");
        write_ensemble_csv(os, stats);
    }
    run.stage("max CG residual", stats.max_residual, o.tol, stats.max_residual <= o.tol);

    json summary;
    summary["low_confidence"] = stats.low_confidence;
    summary["fits"] = json::array();
    for (const auto& f : stats.fits)
        summary["fits"].push_back({{"quantity", f.quantity}, {"p", f.p}, {"slope", f.slope}, {"stderr", f.stderr_},
                                   {"ci", {f.ci.lo, f.ci.hi}}});
    summary["paley_zygmund"] = json::array();
    bool pz_ok = true;
    for (const auto& r : paley_zygmund_check(stats)) {
        summary["paley_zygmund"].push_back({{"x", r.x.str()}, {"empirical", r.empirical}, {"floor", r.floor},
                                            {"stderr", r.binomial_stderr}, {"holds", r.holds}});
        pz_ok = pz_ok && r.holds;
    }
    if (!pz_ok) run.fail("Paley-Zygmund floor");
    try {
        const auto q = estimate_effective_q(stats);
        summary["effective_q"] = {{"q", q.q}, {"stderr", q.stderr_}, {"ci", {q.ci.lo, q.ci.hi}}, {"finite", q.finite}};
        if (!q.finite) run.fail("effective q is not finite");
    } catch (const InvalidArgument& ex) {
        summary["effective_q"] = ex.what();
    }
    const auto conc = concentration_check(stats, e.eps);
    summary["concentration"] = {{"slope", conc.slope}, {"eps", conc.eps}, {"degenerate", conc.degenerate},
                                {"holds", conc.holds}};
    if (e.spot_radius > 0) {
        const auto spot = truncation_spot_check(spec, e.spot_radius);
        summary["truncation_spot_check"] = {{"radius", spot.radius}, {"larger_radius", spot.larger_radius},
                                            {"count", spot.count}, {"max_rel_raw", spot.max_rel_raw},
                                            {"max_rel_corrected", spot.max_rel_corrected}};
    }
    run.write("ensemble.json", summary.dump(2));
    for (const auto& f : stats.fits)
        std::printf("slope %s%s = %s  CI [%s, %s]%s\n", f.quantity.c_str(),
                    f.quantity == "G" ? "" : (" p=" + format_number(f.p)).c_str(), format_number(f.slope).c_str(),
                    format_number(f.ci.lo).c_str(), format_number(f.ci.hi).c_str(),
                    stats.low_confidence ? " (low confidence)" : "");
    return run.finish();
}

// ---------------------------------------------------------------- rellich

struct RellichOptions {
    double alpha = 2.0;
    double alpha_inequality = 0.5;
    std::size_t test_functions = 20;
    bool extrapolate = true;
};

int cmd_rellich(const FieldOptions& o, const RellichOptions& r) {
    Run run("rellich", o);
    json cfg = o.to_json();
    cfg["alpha-rellich"] = r.alpha;
    cfg["alpha-inequality"] = r.alpha_inequality;
    cfg["test-functions"] = r.test_functions;
    cfg["extrapolate"] = r.extrapolate;
    run.config(cfg);
    if (o.field == "iid") run.seed(o.seed);

    const GreenField green =
        r.extrapolate ? extrapolated_green(o, run) : solve_green(o.build(o.radius), Point::origin(o.dim), o.solver());
    const auto w = hardy_weight(green);
    const auto rw = rellich_weights(green, w, r.alpha);
    const int lo = std::max(2, o.radius / 4), hi = o.radius / 2;
    const auto [radii, rhs] = shell_means(rw.rhs, lo, hi);
    const auto [radii_l, lhs] = shell_means(rw.lhs, lo, hi);
    {
        auto os = run.open("rellich.csv");
        os << "shell,mean_rhs_weight,mean_lhs_weight\n";
        for (std::size_t i = 0; i < radii.size(); ++i)
            os << format_number(radii[i]) << ',' << format_number(rhs[i]) << ',' << format_number(lhs[i]) << '\n';
    }
    json summary;
    summary["zero_sites"] = rw.zero_sites;
    if (radii.size() >= 2) {
        const auto fit = fit_loglog(radii, rhs);
        summary["rhs_slope"] = fit.slope;
        summary["rhs_slope_stderr"] = fit.slope_stderr;
        std::printf("rhs weight G^%s w: log-log slope %s over shells %d..%d\n", format_number(r.alpha).c_str(),
                    format_number(fit.slope).c_str(), lo, hi);
    }

    // inequality residuals, both operator readings, on the box solution itself
    const auto box_field = o.build(o.radius);
    const auto gb = solve_green(box_field, Point::origin(o.dim), o.solver());
    const auto wb = hardy_weight(gb);
    const auto params = rellich_params(box_field->lambda(), o.dim, r.alpha_inequality);
    summary["gamma"] = params.gamma;
    summary["checks"] = json::array();
    double worst = 1e300;
    for (const auto& phi : rellich_test_functions(wb, r.test_functions, o.seed)) {
        const auto el = rellich_check(gb, wb, params, phi, RellichOperator::elliptic);
        const auto fr = rellich_check(gb, wb, params, phi, RellichOperator::free_laplacian);
        summary["checks"].push_back({{"elliptic", {el.lhs_norm, el.rhs_norm, el.residual}},
                                     {"free", {fr.lhs_norm, fr.rhs_norm, fr.residual}}});
        worst = std::min({worst, el.residual, fr.residual});
    }
    run.stage("rellich residual", -worst, 0.0, worst >= 0.0);
    run.write("rellich.json", summary.dump(2));
    return run.finish();
}

// ---------------------------------------------------------------- fourier

struct FourierOptions {
    std::string kernel = "zero";
    bool probe_t = false;
    int probe_radius = 3;
    int cs_grid = 0;
    std::string model;
    std::vector<int> x;
};

int cmd_fourier(const FieldOptions& o, const FourierOptions& f) {
    Run run("fourier", o);
    json cfg{{"dim", o.dim}, {"kernel", f.kernel}, {"probe-T", f.probe_t}, {"probe-radius", f.probe_radius},
             {"cs-grid", f.cs_grid}, {"model", f.model}, {"x", f.x}};
    run.config(cfg);

    int dim = o.dim;
    std::vector<KernelEntry> kernel;
    if (f.kernel != "zero") {
        std::ifstream is(f.kernel);
        require(is.good(), "fourier: cannot read kernel file " + f.kernel);
        std::stringstream ss;
        ss << is.rdbuf();
        kernel = parse_kernel_json(ss.str(), &dim);
    }
    const auto T = build_T(dim, kernel);
    json summary;
    summary["dim"] = dim;
    summary["total"] = T.total;
    summary["first_moment"] = T.first_moment;
    summary["second_moment"] = T.second_moment_matrix();
    run.stage("normalization", std::abs(T.total - 1.0), 1e-12, std::abs(T.total - 1.0) <= 1e-12);
    double m1 = 0.0;
    for (double v : T.first_moment) m1 = std::max(m1, std::abs(v));
    run.stage("zero mean", m1, 1e-12, m1 <= 1e-12);
    if (f.probe_t) {
        {
            auto os = run.open("kernel.csv");
            write_kernel_csv(os, T);
        }
        const auto p = positivity_probe(T, f.probe_radius);
        json neg = json::array();
        for (const auto& x : p.negative_sites) neg.push_back(x.str());
        summary["positivity"] = {{"radius", f.probe_radius}, {"min", p.min_value}, {"negative_sites", neg}};
        std::printf("T: min over |x| <= %d is %s, %zu negative sites\n", f.probe_radius,
                    format_number(p.min_value).c_str(), p.negative_sites.size());
    }
    if (f.cs_grid > 0) {
        const auto cs = cs_positivity(T, f.cs_grid);
        summary["cs"] = {{"grid", f.cs_grid}, {"points", cs.grid_points}, {"min_c2s2", cs.min_c2s2},
                         {"argmin", cs.argmin}, {"q_min_eigenvalue", cs.q_min_eigenvalue}};
        run.stage("c^2+s^2 > 0", -cs.min_c2s2, 0.0, cs.min_c2s2 > 0.0);
        std::printf("min c^2+s^2 on %d^%d grid: %s\n", f.cs_grid, dim, format_number(cs.min_c2s2).c_str());
    }
    AsymptoticModel model = build_model(std::max(dim, 3));
    if (!f.model.empty()) {
        std::ifstream is(f.model);
        require(is.good(), "fourier: cannot read model file " + f.model);
        std::stringstream ss;
        ss << is.rdbuf();
        model = parse_model_json(ss.str());
    }
    summary["model"] = json::parse(model_json(model));
    if (!f.x.empty()) {
        const Point x = parse_point(f.x);
        json grads = json::array();
        for (int j = 0; j < model.dim; ++j) grads.push_back(gradient_leading(model, x, j, 1));
        summary["asymptotics"] = {{"x", f.x}, {"leading", leading_asymptotic(model, x)}, {"gradient", grads}};
        std::printf("leading term at %s: %s\n", x.str().c_str(), format_number(leading_asymptotic(model, x)).c_str());
    }
    run.write("fourier.json", summary.dump(2));
    return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green's functions, optimal Hardy weights and random-conductance ensembles on Z^d"};
    app.set_config("--config", "", "TOML/INI config file; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    FieldOptions fo;
    GreenOptions go;
    HardyOptions ho;
    EnsembleOptions eo;
    RellichOptions ro;
    FourierOptions ffo;

    auto* green = app.add_subcommand("green", "solve for G and check its structural identities");
    add_field_options(green, fo);
    green->add_option("--oracle", go.oracle, "solver or oracle")
        ->check(CLI::IsMember({"cg", "dense", "walk", "bessel"}))
        ->capture_default_str();
    green->add_option("--x", go.x, "site for the oracle / walk / extrapolation")->expected(3, kMaxDim);
    green->add_option("--walkers", go.walkers, "random walkers")->capture_default_str();
    green->add_option("--aronson-shells", go.shells, "shell radii of the Aronson report");
    green->add_option("--extrapolate", go.extrapolate, "box radii for truncation extrapolation at --x");

    auto* hardy = app.add_subcommand("hardy", "optimal Hardy weight, region averages, spectral certificate");
    add_field_options(hardy, fo);
    hardy->add_option("--report", ho.report, "region family")
        ->check(CLI::IsMember({"annuli", "sectors"}))
        ->capture_default_str();
    hardy->add_option("--ell", ho.ell, "outer/inner radius ratio")->capture_default_str();
    hardy->add_option("--alpha-sector", ho.alpha_sector, "sector opening")->capture_default_str();
    hardy->add_option("--axis", ho.axis, "sector axis (1-based)")->capture_default_str();
    hardy->add_option("--region-radii", ho.region_radii, "inner radii R");
    hardy->add_flag("--extrapolate,!--no-extrapolate", ho.extrapolate, "truncation-extrapolate G sitewise")
        ->capture_default_str();
    hardy->add_flag("--certify", ho.certify, "Lanczos certificate of 2L - diag(scale w)");
    hardy->add_option("--weight-scale", ho.weight_scale, "factor applied to w before certifying")
        ->capture_default_str();
    hardy->add_option("--certify-radius", ho.certify_radius, "box radius of the certificate")->capture_default_str();

    auto* ens = app.add_subcommand("ensemble", "i.i.d. ensemble statistics at probe sites");
    add_field_options(ens, fo);
    ens->add_option("--realizations", eo.realizations, "number of realizations")->capture_default_str();
    ens->add_option("--probe-shells", eo.shells, "probe shell radii")->capture_default_str();
    ens->add_option("--moments", eo.moments, "moment orders p")->capture_default_str();
    ens->add_option("--floor-constant", eo.floor_constant, "c in P(w > c (1+|x|)^-2)")->capture_default_str();
    ens->add_flag("!--no-correction", eo.correction, "disable the free-field truncation correction");
    ens->add_option("--eps", eo.eps, "concentration slope tolerance")->capture_default_str();
    ens->add_option("--spot-radius", eo.spot_radius, "larger radius for the truncation spot check (0: skip)");

    auto* rel = app.add_subcommand("rellich", "Rellich weights and inequality residuals");
    add_field_options(rel, fo);
    rel->add_option("--alpha,--alpha-rellich", ro.alpha, "exponent alpha of the weights G^alpha w")
        ->capture_default_str();
    rel->add_option("--alpha-inequality", ro.alpha_inequality, "alpha in (0, 1) for the inequality check")
        ->capture_default_str();
    rel->add_option("--test-functions", ro.test_functions, "number of test functions")->capture_default_str();
    rel->add_flag("--extrapolate,!--no-extrapolate", ro.extrapolate, "truncation-extrapolate G sitewise")
        ->capture_default_str();

    auto* four = app.add_subcommand("fourier", "transition kernel T, c/s positivity, leading asymptotics");
    add_field_options(four, fo);
    four->add_option("--kernel", ffo.kernel, "'zero' or a kernel JSON file")->capture_default_str();
    four->add_flag("--probe-T", ffo.probe_t, "write the T table and probe its sign");
    four->add_option("--probe-radius", ffo.probe_radius, "ball radius of the sign probe")->capture_default_str();
    four->add_option("--cs-grid", ffo.cs_grid, "torus grid size for c^2+s^2 (0: skip)");
    four->add_option("--model", ffo.model, "model JSON with K0_hat");
    four->add_option("--x", ffo.x, "site for leading asymptotics")->expected(3, kMaxDim);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*green) return cmd_green(fo, go);
        if (*hardy) return cmd_hardy(fo, ho);
        if (*ens) return cmd_ensemble(fo, eo);
        if (*rel) return cmd_rellich(fo, ro);
        return cmd_fourier(fo, ffo);
    } catch (const RealizationError& e) {
        std::cerr << "error: " << e.what() << " (replay with seed " << e.seed() << ")\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
