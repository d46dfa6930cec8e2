#include "hardy/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "hardy/rng.hpp"

namespace hardy {

GreenField::GreenField(std::shared_ptr<const CoefficientField> field, Point pole,
                       LatticeFunction values, double residual, int iterations)
    : field_(std::move(field)),
      pole_(pole),
      values_(std::move(values)),
      residual_(residual),
      iterations_(iterations) {}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

GreenField solve_green(std::shared_ptr<const CoefficientField> field, const Point& pole,
                       const SolverOptions& opts) {
    require(field != nullptr, "solve_green: null field");
    const BoxDomain& box = field->domain();
    require(box.contains(pole), "solve_green: pole " + pole.str() + " outside the box");
    require(opts.tol > 0.0, "solve_green: tol must be positive");
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 50 * box.side();

    const DirichletOperator op(*field);
    const std::size_t np = op.padded_size();
    const auto map = op.box_to_padded();
    const auto deg = op.degrees();

    // Work in padded coordinates; padding entries stay zero throughout.
    std::vector<double> x(np, 0.0), r(np, 0.0), z(np, 0.0), p(np, 0.0), ap(np, 0.0);
    const std::size_t src = map[box.index(pole)];
    r[src] = 1.0;

    auto precondition = [&] {
        for (std::size_t k = 0; k < map.size(); ++k) {
            const std::size_t i = map[k];
            z[i] = opts.jacobi ? r[i] / deg[k] : r[i];
        }
    };

    precondition();
    p = z;
    double rz = dot(r, z);
    double rnorm = 1.0;
    int it = 0;
    while (rnorm > opts.tol && it < max_iter) {
        op.apply(p, ap);
        const double alpha = rz / dot(p, ap);
        for (std::size_t i = 0; i < np; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        precondition();
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < np; ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(dot(r, r));
        ++it;
    }

    // Report the true residual rather than the recursively updated one.
    op.apply(x, ap);
    ap[src] -= 1.0;
    double true_res = 0.0;
    for (std::size_t i : map) true_res += ap[i] * ap[i];
    true_res = std::sqrt(true_res);

    if (rnorm > opts.tol) {
        throw ConvergenceError("solve_green: no convergence after " + std::to_string(it) +
                                   " iterations (residual " + std::to_string(true_res) + ")",
                               true_res, it);
    }
    return GreenField(std::move(field), pole, op.from_padded(x), true_res, it);
}

GreenField dense_green_oracle(std::shared_ptr<const CoefficientField> field, const Point& pole) {
    require(field != nullptr, "dense_green_oracle: null field");
    const BoxDomain& box = field->domain();
    require(box.site_count() <= kDenseSiteCap, "dense_green_oracle: site count exceeds 10^4");
    require(box.contains(pole), "dense_green_oracle: pole outside the box");

    const auto n = static_cast<Eigen::Index>(box.site_count());
    const int d = box.dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Point x = box.point(static_cast<std::size_t>(k));
        a(k, k) = field->degree(x);
        for (int j = 0; j < d; ++j) {
            const Point y = x + Point::unit(d, j);
            if (!box.contains(y)) continue;
            const auto l = static_cast<Eigen::Index>(box.index(y));
            const double b = field->conductance(x, j);
            a(k, l) -= b;
            a(l, k) -= b;
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(static_cast<Eigen::Index>(box.index(pole))) = 1.0;
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw Error("dense_green_oracle: factorization failed");
    const Eigen::VectorXd g = llt.solve(rhs);
    const double res = (a * g - rhs).norm();
    std::vector<double> vals(g.data(), g.data() + n);
    return GreenField(std::move(field), pole, LatticeFunction(box, std::move(vals)), res, 0);
}

WalkEstimate random_walk_green(const CoefficientField& field, const Point& pole, const Point& x,
                               std::uint64_t walkers, std::uint64_t seed, unsigned threads) {
    require(walkers >= 1, "random_walk_green: need at least one walker");
    const BoxDomain& box = field.domain();
    require(box.contains(pole), "random_walk_green: pole outside the box");
    WalkEstimate out;
    out.walkers = walkers;
    if (!box.contains(x)) return out;

    const DirichletOperator op(field);
    const auto map = op.box_to_padded();
    const auto deg = op.degrees();
    const auto e = field.edges();
    const int d = field.dim();
    const auto ud = static_cast<std::size_t>(d);
    const BoxDomain& pad = field.padded();

    // padded index -> box index, or npos on the padding layer
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> to_box(pad.site_count(), npos);
    for (std::size_t k = 0; k < map.size(); ++k) to_box[map[k]] = k;

    const std::size_t start = map[box.index(pole)];
    const std::size_t target = map[box.index(x)];

    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, double& sum, double& sum2) {
        std::vector<double> rates(2 * ud);
        std::vector<std::ptrdiff_t> moves(2 * ud);
        for (std::size_t j = 0; j < ud; ++j) {
            moves[2 * j] = static_cast<std::ptrdiff_t>(pad.stride(static_cast<int>(j)));
            moves[2 * j + 1] = -static_cast<std::ptrdiff_t>(pad.stride(static_cast<int>(j)));
        }
        for (std::uint64_t w = lo; w < hi; ++w) {
            CounterRng rng(derive_seed(seed, {w}));
            std::size_t at = start;
            double visits = 0.0;
            while (true) {
                const std::size_t k = to_box[at];
                if (k == npos) break;  // killed on leaving the box
                if (at == target) visits += 1.0;
                for (std::size_t j = 0; j < ud; ++j) {
                    rates[2 * j] = e[at * ud + j];
                    rates[2 * j + 1] = e[(at - static_cast<std::size_t>(moves[2 * j])) * ud + j];
                }
                double u = rng.uniform() * deg[k];
                std::size_t choice = 2 * ud - 1;
                for (std::size_t m = 0; m < 2 * ud; ++m) {
                    if (u < rates[m]) {
                        choice = m;
                        break;
                    }
                    u -= rates[m];
                }
                at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(at) + moves[choice]);
            }
            sum += visits;
            sum2 += visits * visits;
        }
    };

    const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(walkers)));
    std::vector<double> sums(nthreads, 0.0), sums2(nthreads, 0.0);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = walkers / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = (t + 1 == nthreads) ? walkers : lo + chunk;
            pool.emplace_back([&, t, lo, hi] { run_range(lo, hi, sums[t], sums2[t]); });
        }
    }
    double s = 0.0, s2 = 0.0;
    for (unsigned t = 0; t < nthreads; ++t) {
        s += sums[t];
        s2 += sums2[t];
    }
    const double nw = static_cast<double>(walkers);
    const double mean = s / nw;
    const double var = walkers > 1 ? std::max(0.0, (s2 - nw * mean * mean) / (nw - 1.0)) : 0.0;
    const double dx = deg[box.index(x)];
    out.estimate = mean / dx;
    out.stderr_ = std::sqrt(var / nw) / dx;
    return out;
}

double identity_tolerance(const GreenField& green) {
    return std::max(10.0 * green.residual(), 1e-10);
}

GreenDiagnostics diagnose(const GreenField& green) {
    GreenDiagnostics out;
    const CoefficientField& field = green.field();
    const BoxDomain& box = green.domain();
    const LatticeFunction lg = apply_operator(field, green.values());
    const std::size_t pole = box.index(green.pole());
    const double e = field.ellipticity();
    out.min_value = std::numeric_limits<double>::infinity();
    out.comparison_slack = std::numeric_limits<double>::infinity();
    const int d = box.dim();
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        if (k == pole)
            out.pole_equation_error = std::abs(lg[k] - 1.0);
        else
            out.harmonicity_error = std::max(out.harmonicity_error, std::abs(lg[k]));
        const double g = green.values()[k];
        out.min_value = std::min(out.min_value, g);
        const Point x = box.point(k);
        if (!box.is_interior(x)) continue;
        for (int j = 0; j < d; ++j) {
            for (int s : {1, -1}) {
                const double gy = green.at(x + Point::unit(d, j, s));
                const double slack = g - e * gy;
                out.comparison_slack = std::min(out.comparison_slack, slack);
                if (slack < -identity_tolerance(green) * std::max(1.0, g)) ++out.comparison_violations;
            }
        }
    }
    return out;
}

AronsonReport aronson_report(const GreenField& green, const std::vector<double>& shell_radii) {
    require(!shell_radii.empty(), "aronson_report: no shells requested");
    const BoxDomain& box = green.domain();
    const int d = box.dim();
    AronsonReport out;
    out.ratio_min = std::numeric_limits<double>::infinity();
    out.ratio_max = 0.0;
    for (double r : shell_radii) {
        require(r + 0.5 <= box.radius() + 1e-12, "aronson_report: shell beyond the box");
        ShellRatio sh;
        sh.radius = r;
        sh.ratio_min = std::numeric_limits<double>::infinity();
        const double lo2 = (r - 0.5) * (r - 0.5);
        const double hi2 = (r + 0.5) * (r + 0.5);
        for (std::size_t k = 0; k < box.site_count(); ++k) {
            const Point x = box.point(k);
            const auto n2 = static_cast<double>(x.norm2());
            if (n2 < lo2 || n2 >= hi2) continue;
            const double ratio = green.values()[k] * std::pow(1.0 + std::sqrt(n2), d - 2);
            sh.ratio_min = std::min(sh.ratio_min, ratio);
            sh.ratio_max = std::max(sh.ratio_max, ratio);
            ++sh.count;
        }
        require(sh.count > 0, "aronson_report: empty shell at radius " + std::to_string(r));
        out.ratio_min = std::min(out.ratio_min, sh.ratio_min);
        out.ratio_max = std::max(out.ratio_max, sh.ratio_max);
        out.shells.push_back(sh);
    }
    out.constant = std::max(out.ratio_max, 1.0 / out.ratio_min);
    return out;
}

Extrapolation extrapolate_values(int dim, const std::vector<double>& radii,
                                 const std::vector<double>& values) {
    require(radii.size() == values.size(), "extrapolate_values: size mismatch");
    require(radii.size() >= 2, "extrapolate_values: need at least two radii");
    Extrapolation out;
    out.radii = radii;
    out.values = values;
    // Linear least squares in s = R^(2-d): G_R = g_inf - c s.
    const std::size_t n = radii.size();
    double ms = 0.0, mg = 0.0;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::pow(radii[i], 2.0 - dim);
        ms += s[i];
        mg += values[i];
    }
    ms /= static_cast<double>(n);
    mg /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (s[i] - ms) * (s[i] - ms);
        sxy += (s[i] - ms) * (values[i] - mg);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    out.slope = -slope;
    out.g_inf = mg - slope * ms;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = out.g_inf + slope * s[i];
        rss += (values[i] - f) * (values[i] - f);
    }
    out.fit_residual = std::sqrt(rss / static_cast<double>(n));
    // Sort by radius to test the Dirichlet monotonicity G_R1 <= G_R2.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });
    for (std::size_t i = 1; i < n; ++i)
        if (values[order[i]] < values[order[i - 1]] * (1.0 - 1e-9)) out.monotone = false;
    return out;
}

Extrapolation truncation_extrapolate(
    const std::function<CoefficientField(const BoxDomain&)>& make_field, int dim,
    const std::vector<int>& radii, const Point& pole, const Point& x, const SolverOptions& opts) {
    require(radii.size() >= 3, "truncation_extrapolate: need at least three radii");
    const int rmin = *std::min_element(radii.begin(), radii.end());
    require(BoxDomain(dim, rmin).is_interior(x), "truncation_extrapolate: x outside the smallest box interior");
    std::vector<double> rs, vals;
    for (int r : radii) {
        auto field = std::make_shared<const CoefficientField>(make_field(BoxDomain(dim, r)));
        const GreenField g = solve_green(field, pole, opts);
        rs.push_back(r);
        vals.push_back(g.at(x));
    }
    return extrapolate_values(dim, rs, vals);
}

LatticeFunction extrapolate_field(const std::vector<GreenField>& family) {
    require(family.size() >= 2, "extrapolate_field: need at least two solutions");
    const BoxDomain& small = family.front().domain();
    const int d = small.dim();
    for (const auto& g : family) require(g.domain().radius() >= small.radius(), "extrapolate_field: smallest box must come first");
    std::vector<double> radii;
    for (const auto& g : family) radii.push_back(g.domain().radius());
    LatticeFunction out(small);
    std::vector<double> vals(family.size());
    for (std::size_t k = 0; k < small.site_count(); ++k) {
        const Point x = small.point(k);
        for (std::size_t i = 0; i < family.size(); ++i) vals[i] = family[i].at(x);
        out[k] = extrapolate_values(d, radii, vals).g_inf;
    }
    return out;
}

}  // namespace hardy
