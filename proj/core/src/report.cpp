#include "hardy/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include <json.hpp>

namespace hardy {
namespace {

using json = nlohmann::ordered_json;

void point_header(std::ostream& os, int d) {
    for (int i = 1; i <= d; ++i) os << "x_" << i << ',';
}

void point_cells(std::ostream& os, const Point& x) {
    for (int i = 0; i < x.dim(); ++i) os << x[i] << ',';
}

json point_json(const Point& x) {
    json a = json::array();
    for (int i = 0; i < x.dim(); ++i) a.push_back(x[i]);
    return a;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
    require(j.is_object(), what + ": expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw InvalidArgument(what + ": unknown key '" + key + "'");
}

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(what + ": " + e.what());
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_green_csv(std::ostream& os, const GreenField& green) {
    const BoxDomain& box = green.domain();
    point_header(os, box.dim());
    os << "G,shell\n";
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        point_cells(os, x);
        os << format_number(green.values()[k]) << ',' << std::lround(x.norm()) << '\n';
    }
}

void write_aronson_csv(std::ostream& os, const AronsonReport& report) {
    os << "radius,count,ratio_min,ratio_max\n";
    for (const auto& s : report.shells)
        os << format_number(s.radius) << ',' << s.count << ',' << format_number(s.ratio_min) << ','
           << format_number(s.ratio_max) << '\n';
}

void write_weight_csv(std::ostream& os, const HardyWeightField& w) {
    const BoxDomain& box = w.domain();
    point_header(os, box.dim());
    os << "w,w_lower,w_upper\n";
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        if (!box.is_interior(x)) continue;
        point_cells(os, x);
        os << format_number(w.w()[k]) << ',' << format_number(w.lower()[k]) << ','
           << format_number(w.upper()[k]) << '\n';
    }
}

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows) {
    os << "kind,R,ell,count,normalized_sum,scaled\n";
    for (const auto& r : rows)
        os << r.kind << ',' << format_number(r.R) << ',' << format_number(r.ell) << ',' << r.count << ','
           << format_number(r.normalized_sum) << ',' << format_number(r.scaled) << '\n';
}

void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats) {
    os << "site,shell,p,moment,CI_lo,CI_hi\n";
    auto site = [](const Point& x) {
        std::string s;
        for (int i = 0; i < x.dim(); ++i) s += (i ? " " : "") + std::to_string(x[i]);
        return s;
    };
    for (const auto& st : stats.sites)
        for (const auto& m : st.moments)
            os << site(st.x) << ',' << format_number(st.shell) << ',' << format_number(m.p) << ','
               << format_number(m.value) << ',' << format_number(m.ci.lo) << ',' << format_number(m.ci.hi) << '\n';
    for (const auto& st : stats.sites)
        os << site(st.x) << ',' << format_number(st.shell) << ",G," << format_number(st.mean_g) << ','
           << format_number(st.g_ci.lo) << ',' << format_number(st.g_ci.hi) << '\n';
    for (const auto& f : stats.fits)
        os << "fit,all,"
           << (f.quantity == "G" ? std::string("G") : format_number(f.p)) << ',' << format_number(f.slope) << ','
           << format_number(f.ci.lo) << ',' << format_number(f.ci.hi) << '\n';
}

void write_kernel_csv(std::ostream& os, const TransitionKernel& T) {
    point_header(os, T.dim);
    os << "T\n";
    for (const auto& t : T.support) {
        point_cells(os, t.x);
        os << format_number(t.value) << '\n';
    }
}

std::string certificate_json(const HardyCertificate& cert, int radius, double weight_scale) {
    json j;
    j["schema"] = kSchema;
    j["radius"] = radius;
    j["weight_scale"] = weight_scale;
    j["min_eigenvalue"] = cert.min_eigenvalue;
    j["bracket"] = {cert.bracket_lo, cert.bracket_hi};
    j["ritz_residual"] = cert.residual;
    j["iterations"] = cert.iterations;
    j["converged"] = cert.converged;
    j["tol"] = cert.tol;
    j["certified"] = cert.certified;
    return j.dump(2);
}

std::string model_json(const AsymptoticModel& model) {
    const auto d = static_cast<std::size_t>(model.dim);
    auto rows = [d](const std::vector<double>& m) {
        json a = json::array();
        for (std::size_t i = 0; i < d; ++i)
            a.push_back(std::vector<double>(m.begin() + static_cast<std::ptrdiff_t>(i * d),
                                            m.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)));
        return a;
    };
    json j;
    j["dim"] = model.dim;
    j["K0_hat"] = rows(model.K0_hat);
    j["Q"] = rows(model.Q);
    j["sigma"] = model.sigma;
    j["kappa"] = model.kappa;
    return j.dump(2);
}

AsymptoticModel parse_model_json(const std::string& text) {
    const json j = parse(text, "model");
    reject_unknown(j, {"dim", "K0_hat", "Q", "sigma", "kappa"}, "model");
    const int d = j.at("dim").get<int>();
    std::vector<double> k;
    if (j.contains("K0_hat")) {
        const auto& rows = j.at("K0_hat");
        require(rows.is_array() && static_cast<int>(rows.size()) == d, "model: K0_hat must have d rows");
        for (const auto& row : rows) {
            require(row.is_array() && static_cast<int>(row.size()) == d, "model: K0_hat rows must have d entries");
            for (const auto& v : row) k.push_back(v.get<double>());
        }
    }
    return build_model(d, std::move(k));
}

std::string kernel_json(int dim, const std::vector<KernelEntry>& kernel) {
    json j;
    j["dim"] = dim;
    j["kernel"] = json::array();
    for (const auto& e : kernel)
        j["kernel"].push_back({{"x", point_json(e.x)}, {"j", e.j}, {"k", e.k}, {"value", e.value}});
    return j.dump(2);
}

std::vector<KernelEntry> parse_kernel_json(const std::string& text, int* dim) {
    const json j = parse(text, "kernel");
    reject_unknown(j, {"dim", "kernel"}, "kernel");
    const int d = j.at("dim").get<int>();
    require(d >= 1 && d <= kMaxDim, "kernel: dim out of range");
    if (dim) *dim = d;
    std::vector<KernelEntry> out;
    if (!j.contains("kernel")) return out;
    for (const auto& e : j.at("kernel")) {
        reject_unknown(e, {"x", "j", "k", "value"}, "kernel entry");
        KernelEntry k;
        const auto& x = e.at("x");
        require(x.is_array() && static_cast<int>(x.size()) == d, "kernel entry: x must have d coordinates");
        k.x = Point(d);
        for (int i = 0; i < d; ++i) k.x[i] = x[static_cast<std::size_t>(i)].get<int>();
        k.j = e.at("j").get<int>();
        k.k = e.at("k").get<int>();
        k.value = e.at("value").get<double>();
        out.push_back(k);
    }
    return out;
}

std::string ensemble_spec_json(const EnsembleSpec& spec) {
    json j;
    j["dim"] = spec.dim;
    j["box_radius"] = spec.box_radius;
    j["delta"] = spec.delta;
    j["dist"] = to_string(spec.dist);
    j["realizations"] = spec.realizations;
    j["master_seed"] = spec.master_seed;
    j["shells"] = spec.shells;
    j["moments"] = spec.moments;
    j["floor_constant"] = spec.floor_constant;
    j["truncation_correction"] = spec.truncation_correction;
    j["tol"] = spec.solver.tol;
    j["max_iter"] = spec.solver.max_iter;
    return j.dump(2);
}

EnsembleSpec parse_ensemble_spec(const std::string& text) {
    const json j = parse(text, "ensemble spec");
    reject_unknown(j,
                   {"dim", "box_radius", "delta", "dist", "realizations", "master_seed", "shells", "moments",
                    "floor_constant", "truncation_correction", "tol", "max_iter"},
                   "ensemble spec");
    EnsembleSpec s;
    try {
        if (j.contains("dim")) s.dim = j["dim"].get<int>();
        if (j.contains("box_radius")) s.box_radius = j["box_radius"].get<int>();
        if (j.contains("delta")) s.delta = j["delta"].get<double>();
        if (j.contains("dist")) s.dist = parse_distribution(j["dist"].get<std::string>());
        if (j.contains("realizations")) s.realizations = j["realizations"].get<std::size_t>();
        if (j.contains("master_seed")) s.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("shells")) s.shells = j["shells"].get<std::vector<double>>();
        if (j.contains("moments")) s.moments = j["moments"].get<std::vector<double>>();
        if (j.contains("floor_constant")) s.floor_constant = j["floor_constant"].get<double>();
        if (j.contains("truncation_correction")) s.truncation_correction = j["truncation_correction"].get<bool>();
        if (j.contains("tol")) s.solver.tol = j["tol"].get<double>();
        if (j.contains("max_iter")) s.solver.max_iter = j["max_iter"].get<int>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("ensemble spec: ") + e.what());
    }
    s.validate();
    return s;
}

std::string RunManifest::to_json() const {
    json j;
    j["schema"] = kSchema;
    j["tool_version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = json::parse(config_json);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash()));
    j["config_hash"] = hash;
    j["seeds"] = seeds;
    j["wall_seconds"] = wall_seconds;
    j["stages"] = json::array();
    for (const auto& s : stages)
        j["stages"].push_back(
            {{"name", s.name}, {"residual", s.residual}, {"tolerance", s.tolerance}, {"passed", s.passed}});
    j["outputs"] = outputs;
    j["failures"] = failures;
    return j.dump(2);
}

}  // namespace hardy
