#include "hardy/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include "hardy/bessel.hpp"
#include "hardy/fourier.hpp"
#include "hardy/hardy_weight.hpp"
#include "hardy/rng.hpp"

namespace hardy {
namespace {

constexpr std::uint64_t kBootstrapTag = 0xb0075;

struct PointLess {
    bool operator()(const Point& a, const Point& b) const {
        for (int i = 0; i < a.dim(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

using Corrections = std::map<Point, double, PointLess>;

struct LocalWeight {
    double w = 0.0, lower = 0.0, upper = 0.0, g = 0.0;
};

/// w_G and its sandwich at x from corrected Green's values.
LocalWeight local_weight(const GreenField& green, const Corrections& corr, const Point& x) {
    const int d = green.domain().dim();
    const auto& field = green.field();
    auto g = [&](const Point& y) { return green.at(y) * corr.at(y); };
    LocalWeight out;
    out.g = g(x);
    const double sx = std::sqrt(out.g);
    double root = 0.0, grad = 0.0;
    for (int j = 0; j < d; ++j)
        for (int s : {1, -1}) {
            const Point y = x + Point::unit(d, j, s);
            const double gy = g(y);
            const double b = field.bond(x, y);
            root += b * (sx - std::sqrt(gy)) * (sx - std::sqrt(gy));
            grad += b * (out.g - gy) * (out.g - gy);
        }
    const double ind = x == green.pole() ? 1.0 : 0.0;
    const double s = grad / (out.g * out.g);
    out.w = ind + root / out.g;
    out.upper = ind + s;
    const double f = 1.0 + 1.0 / std::sqrt(field.ellipticity());
    out.lower = ind + s / (f * f);
    return out;
}

/// delta = 0 is the degenerate ensemble: every realization is the free field.
CoefficientField ensemble_field(const BoxDomain& box, double delta, Distribution dist, std::uint64_t seed) {
    return delta == 0.0 ? build_constant_field(box, 1.0) : build_iid_field(box, delta, dist, seed);
}

std::vector<Point> with_neighbours(const std::vector<Point>& sites) {
    std::vector<Point> pts;
    for (const auto& x : sites) {
        pts.push_back(x);
        for (int j = 0; j < x.dim(); ++j)
            for (int s : {1, -1}) pts.push_back(x + Point::unit(x.dim(), j, s));
    }
    return pts;
}

/// G_0(x) / G_0^{box}(x) at every probe site and neighbour.
Corrections free_corrections(int dim, int radius, const std::vector<Point>& sites, bool enabled,
                             const SolverOptions& opts) {
    Corrections corr;
    const auto pts = with_neighbours(sites);
    if (!enabled) {
        for (const auto& p : pts) corr[p] = 1.0;
        return corr;
    }
    const BoxDomain box(dim, radius);
    auto free = std::make_shared<const CoefficientField>(build_constant_field(box, 1.0));
    const GreenField g0 = solve_green(free, Point::origin(dim), opts);
    for (const auto& p : pts) {
        if (corr.count(p)) continue;
        corr[p] = free_green_quadrature(p).value / g0.at(p);
    }
    return corr;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += threads) fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double moment_of(std::span<const double> v, double p, std::span<const std::size_t> idx = {}) {
    std::vector<double> t;
    if (idx.empty())
        for (double x : v) t.push_back(std::pow(x, p));
    else
        for (auto i : idx) t.push_back(std::pow(v[i], p));
    return mean(t);
}

LinearFit site_fit(const std::vector<SiteStats>& sites, const std::vector<double>& values) {
    std::vector<double> r, y;
    for (std::size_t s = 0; s < sites.size(); ++s) {
        r.push_back(sites[s].norm);
        y.push_back(values[s]);
    }
    return fit_loglog(r, y);
}

}  // namespace

void EnsembleSpec::validate() const {
    require(dim >= 3 && dim <= kMaxDim, "ensemble: dim must lie in [3, 8]");
    require(box_radius >= 2, "ensemble: box_radius must be at least 2");
    require(delta >= 0.0 && delta < 1.0, "ensemble: delta must lie in [0, 1)");
    require(realizations >= 2, "ensemble: at least 2 realizations are required");
    require(!shells.empty(), "ensemble: probe shells must be nonempty");
    require(!moments.empty(), "ensemble: moments must be nonempty");
    for (double p : moments) require(p > 0.5, "ensemble: moment orders must exceed 1/2");
    require(floor_constant > 0.0, "ensemble: floor_constant must be positive");
    for (const auto& x : probe_sites()) {
        require(!x.is_origin(), "ensemble: probe shells must be positive");
        require(x.norm() <= 0.5 * box_radius, "ensemble: probe site " + x.str() + " outside the inner half box");
    }
}

std::vector<Point> EnsembleSpec::probe_sites() const {
    std::vector<Point> out;
    for (double r : shells) {
        const int ri = static_cast<int>(std::lround(r));
        for (int j = 0; j < dim; ++j) out.push_back(Point::unit(dim, j) * ri);
        Point diag(dim);
        const int c = static_cast<int>(std::lround(r / std::sqrt(static_cast<double>(dim))));
        for (int j = 0; j < dim; ++j) diag[j] = c;
        out.push_back(diag);
    }
    return out;
}

std::uint64_t EnsembleSpec::realization_seed(std::size_t i) const {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(i)});
}

EnsembleStats run_ensemble(const EnsembleSpec& spec) {
    spec.validate();
    const auto sites = spec.probe_sites();
    const Corrections corr =
        free_corrections(spec.dim, spec.box_radius, sites, spec.truncation_correction, spec.solver);
    const BoxDomain box(spec.dim, spec.box_radius);
    const std::size_t n = spec.realizations;

    struct Realization {
        std::vector<LocalWeight> values;
        int iterations = 0;
        double residual = 0.0;
    };
    std::vector<Realization> runs(n);
    parallel_for(n, spec.threads, [&](std::size_t i) {
        const std::uint64_t seed = spec.realization_seed(i);
        try {
            auto field = std::make_shared<const CoefficientField>(ensemble_field(box, spec.delta, spec.dist, seed));
            const GreenField g = solve_green(field, Point::origin(spec.dim), spec.solver);
            Realization r;
            r.iterations = g.iterations();
            r.residual = g.residual();
            for (const auto& x : sites) r.values.push_back(local_weight(g, corr, x));
            runs[i] = std::move(r);
        } catch (const Error& e) {
            throw RealizationError("realization " + std::to_string(i) + " (seed " + std::to_string(seed) +
                                       "): " + e.what(),
                                   i, seed);
        }
    });

    EnsembleStats stats;
    stats.spec = spec;
    stats.low_confidence = n < 16;
    for (std::size_t i = 0; i < n; ++i) {
        stats.seeds.push_back(spec.realization_seed(i));
        stats.solver_iterations.push_back(runs[i].iterations);
        stats.max_residual = std::max(stats.max_residual, runs[i].residual);
    }

    const std::size_t per_shell = static_cast<std::size_t>(spec.dim) + 1;
    for (std::size_t s = 0; s < sites.size(); ++s) {
        SiteStats st;
        st.x = sites[s];
        st.shell = spec.shells[s / per_shell];
        st.norm = st.x.norm();
        st.correction = corr.at(st.x);
        for (const auto& r : runs) {
            st.w.push_back(r.values[s].w);
            st.g.push_back(r.values[s].g);
            st.lower.push_back(r.values[s].lower);
            st.upper.push_back(r.values[s].upper);
        }
        st.mean_g = mean(st.g);
        st.var_g = sample_variance(st.g);
        st.g_ci = bootstrap_mean_ci(st.g, derive_seed(spec.master_seed, {kBootstrapTag, s, 0}));
        for (std::size_t k = 0; k < spec.moments.size(); ++k) {
            const double p = spec.moments[k];
            MomentEstimate m;
            m.p = p;
            m.value = moment_of(st.w, p);
            m.lower_value = moment_of(st.lower, p);
            m.upper_value = moment_of(st.upper, p);
            m.ci = bootstrap_ci(
                n, [&](std::span<const std::size_t> idx) { return moment_of(st.w, p, idx); },
                derive_seed(spec.master_seed, {kBootstrapTag, s, k + 1}));
            st.moments.push_back(m);
        }
        const double thr = spec.floor_constant / std::pow(1.0 + st.norm, 2.0);
        st.prob_floor =
            static_cast<double>(std::count_if(st.w.begin(), st.w.end(), [&](double v) { return v > thr; })) / n;
        stats.sites.push_back(std::move(st));
    }

    // Exponent fits over probe sites, with bootstrap intervals over realizations.
    auto add_fit = [&](const std::string& quantity, double p, auto&& site_value, std::uint64_t tag) {
        std::vector<double> vals;
        for (const auto& st : stats.sites) vals.push_back(site_value(st, std::span<const std::size_t>{}));
        ExponentFit f;
        f.quantity = quantity;
        f.p = p;
        const LinearFit lf = site_fit(stats.sites, vals);
        f.slope = lf.slope;
        f.stderr_ = lf.slope_stderr;
        f.ci = bootstrap_ci(
            n,
            [&](std::span<const std::size_t> idx) {
                std::vector<double> v;
                for (const auto& st : stats.sites) v.push_back(site_value(st, idx));
                return site_fit(stats.sites, v).slope;
            },
            derive_seed(spec.master_seed, {kBootstrapTag, tag}));
        stats.fits.push_back(f);
    };
    for (std::size_t k = 0; k < spec.moments.size(); ++k) {
        const double p = spec.moments[k];
        add_fit("w^p", p,
                [p](const SiteStats& st, std::span<const std::size_t> idx) { return moment_of(st.w, p, idx); },
                0x1000 + k);
    }
    add_fit("G", 1.0,
            [](const SiteStats& st, std::span<const std::size_t> idx) { return moment_of(st.g, 1.0, idx); },
            0x2000);
    return stats;
}

std::vector<PaleyZygmundRow> paley_zygmund_check(const EnsembleStats& stats) {
    std::vector<PaleyZygmundRow> rows;
    for (const auto& st : stats.sites) {
        PaleyZygmundRow r;
        r.x = st.x;
        r.shell = st.shell;
        const double m1 = moment_of(st.w, 1.0);
        const double m2 = moment_of(st.w, 2.0);
        const auto n = static_cast<double>(st.w.size());
        r.empirical = static_cast<double>(std::count_if(st.w.begin(), st.w.end(),
                                                        [&](double v) { return v > 0.5 * m1; })) / n;
        r.floor = m2 > 0.0 ? 0.25 * m1 * m1 / m2 : 0.0;
        r.binomial_stderr = std::sqrt(r.empirical * (1.0 - r.empirical) / n);
        r.holds = r.empirical >= r.floor - 2.0 * r.binomial_stderr;
        rows.push_back(r);
    }
    return rows;
}

EffectiveQ estimate_effective_q(const EnsembleStats& stats) {
    const int d = stats.spec.dim;
    std::vector<std::size_t> use;
    std::vector<double> shells;
    for (std::size_t s = 0; s < stats.sites.size(); ++s)
        if (stats.sites[s].norm >= 6.0) {
            use.push_back(s);
            if (std::find(shells.begin(), shells.end(), stats.sites[s].shell) == shells.end())
                shells.push_back(stats.sites[s].shell);
        }
    require(shells.size() >= 3, "estimate_effective_q: need at least 3 probe shells with |x| >= 6");
    const double kap = kappa(d);
    const auto n = stats.sites.front().g.size();

    auto fit = [&](std::span<const std::size_t> idx, std::vector<double>* per_site, double* stderr_) {
        std::vector<double> q, var;
        for (auto s : use) {
            const auto& st = stats.sites[s];
            const double mg = moment_of(st.g, 1.0, idx);
            const double qh = kap * std::pow(st.norm, 2.0 - d) / (2.0 * mg);
            q.push_back(qh);
            var.push_back(qh * qh * st.var_g / (mg * mg * static_cast<double>(n)));
        }
        if (per_site) *per_site = q;
        const bool weighted = std::all_of(var.begin(), var.end(), [](double v) { return v > 0.0; });
        double sw = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double w = weighted ? 1.0 / var[i] : 1.0;
            sw += w;
            sq += w * q[i];
        }
        const double qbar = sq / sw;
        if (stderr_) {
            double scatter = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double w = weighted ? 1.0 / var[i] : 1.0;
                scatter += w * (q[i] - qbar) * (q[i] - qbar);
            }
            scatter /= sw * static_cast<double>(q.size() - 1);
            *stderr_ = std::sqrt(std::max(weighted ? 1.0 / sw : 0.0, scatter));
        }
        return qbar;
    };

    EffectiveQ out;
    out.q = fit({}, &out.per_site, &out.stderr_);
    out.ci = bootstrap_ci(
        n, [&](std::span<const std::size_t> idx) { return fit(idx, nullptr, nullptr); },
        derive_seed(stats.spec.master_seed, {kBootstrapTag, 0x3000}));
    out.finite = std::isfinite(out.q) && std::isfinite(out.stderr_);
    return out;
}

ConcentrationReport concentration_check(const EnsembleStats& stats, double eps) {
    const int d = stats.spec.dim;
    ConcentrationReport out;
    out.eps = eps;
    for (double shell : stats.spec.shells) {
        ConcentrationRow row;
        row.shell = shell;
        std::size_t count = 0;
        for (const auto& st : stats.sites) {
            if (st.shell != shell) continue;
            row.fluctuation += std::sqrt(st.var_g) * std::pow(1.0 + st.norm, d - 1.0);
            row.norm += st.norm;
            ++count;
        }
        row.fluctuation /= static_cast<double>(count);
        row.norm /= static_cast<double>(count);
        out.shells.push_back(row);
    }
    out.degenerate = std::all_of(out.shells.begin(), out.shells.end(),
                                 [](const ConcentrationRow& r) { return r.fluctuation == 0.0; });
    if (out.degenerate) {
        out.holds = true;
        return out;
    }
    std::vector<double> r, f;
    for (const auto& row : out.shells) {
        r.push_back(row.norm);
        f.push_back(row.fluctuation);
    }
    out.slope = fit_loglog(r, f).slope;
    out.holds = out.slope <= eps;
    return out;
}

TruncationSpotCheck truncation_spot_check(const EnsembleSpec& spec, int larger_radius, std::size_t count) {
    spec.validate();
    require(larger_radius > spec.box_radius, "truncation_spot_check: larger radius must exceed box_radius");
    const auto sites = spec.probe_sites();
    const Corrections c_small = free_corrections(spec.dim, spec.box_radius, sites, true, spec.solver);
    const Corrections c_large = free_corrections(spec.dim, larger_radius, sites, true, spec.solver);
    TruncationSpotCheck out;
    out.radius = spec.box_radius;
    out.larger_radius = larger_radius;
    out.count = std::min(count, spec.realizations);
    for (std::size_t i = 0; i < out.count; ++i) {
        const std::uint64_t seed = spec.realization_seed(i);
        auto solve = [&](int radius) {
            auto f = std::make_shared<const CoefficientField>(
                ensemble_field(BoxDomain(spec.dim, radius), spec.delta, spec.dist, seed));
            return solve_green(f, Point::origin(spec.dim), spec.solver);
        };
        const GreenField small = solve(spec.box_radius);
        const GreenField large = solve(larger_radius);
        for (const auto& x : sites) {
            const double gs = small.at(x), gl = large.at(x);
            out.max_rel_raw = std::max(out.max_rel_raw, std::abs(gs - gl) / gl);
            const double cs = gs * c_small.at(x), cl = gl * c_large.at(x);
            out.max_rel_corrected = std::max(out.max_rel_corrected, std::abs(cs - cl) / cl);
        }
    }
    return out;
}

GlobalLowerProbe global_lower_probe(int dim, int radius, double delta, Distribution dist,
                                    std::size_t realizations, std::uint64_t master_seed) {
    require(realizations >= 1, "global_lower_probe: need at least one realization");
    const BoxDomain box(dim, radius);
    std::vector<double> sum(box.site_count(), 0.0);
    for (std::size_t i = 0; i < realizations; ++i) {
        const std::uint64_t seed = derive_seed(master_seed, {static_cast<std::uint64_t>(i)});
        auto f = std::make_shared<const CoefficientField>(ensemble_field(box, delta, dist, seed));
        const HardyWeightField w = hardy_weight(solve_green(f, Point::origin(dim)));
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += w.w()[k];
    }
    GlobalLowerProbe out;
    out.dim = dim;
    out.radius = radius;
    out.realizations = realizations;
    out.min_mean_w = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sum.size(); ++k) {
        const Point x = box.point(k);
        if (!box.is_interior(x)) continue;
        const double m = sum[k] / static_cast<double>(realizations);
        if (m < out.min_mean_w) {
            out.min_mean_w = m;
            out.argmin = x;
        }
    }
    return out;
}

}  // namespace hardy
