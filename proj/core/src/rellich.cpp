#include "hardy/rellich.hpp"

#include <cmath>
#include <numbers>

#include "hardy/rng.hpp"
#include "hardy/statistics.hpp"

namespace hardy {

RellichParams rellich_params(double lambda, int dim, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "rellich_params: alpha must lie in (0, 1)");
    require(lambda > 0.0 && lambda <= 1.0, "rellich_params: lambda must lie in (0, 1]");
    require(dim >= 3, "rellich_params: dimension must be at least 3");
    RellichParams p;
    p.alpha = alpha;
    p.ellipticity = lambda * lambda / (2.0 * dim);
    const double num = 1.0 - std::pow(p.ellipticity, 0.5 * alpha);
    const double den = 1.0 - std::sqrt(p.ellipticity);
    p.gamma = (num / den) * (num / den);
    return p;
}

double default_rellich_alpha(int dim) {
    require(dim >= 3, "default_rellich_alpha: dimension must be at least 3");
    return 2.0 / (dim - 2.0);
}

RellichWeights rellich_weights(const GreenField& green, const HardyWeightField& w, double alpha) {
    require(alpha > 0.0, "rellich_weights: alpha must be positive");
    const BoxDomain& box = green.domain();
    require(w.domain() == box, "rellich_weights: domain mismatch");
    RellichWeights out{LatticeFunction(box), LatticeFunction(box)};
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        if (!box.is_interior(box.point(k))) continue;
        const double wk = w.w()[k];
        if (wk <= 0.0) {
            ++out.zero_sites;
            continue;
        }
        const double ga = std::pow(green.values()[k], alpha);
        out.lhs[k] = ga / wk;
        out.rhs[k] = ga * wk;
        ++out.support;
    }
    return out;
}

RellichCheck rellich_check(const GreenField& green, const HardyWeightField& w, const RellichParams& params,
                           const LatticeFunction& phi, RellichOperator op) {
    const BoxDomain& box = green.domain();
    require(phi.domain() == box, "rellich_check: domain mismatch");
    const RellichWeights rw = rellich_weights(green, w, params.alpha);
    for (std::size_t k = 0; k < box.site_count(); ++k)
        if (phi[k] != 0.0) require(rw.rhs[k] > 0.0, "rellich_check: phi not supported in W");

    const LatticeFunction aphi = op == RellichOperator::elliptic
                                     ? apply_operator(green.field(), phi)
                                     : apply_operator(build_constant_field(box, 1.0), phi);
    std::vector<double> lhs, rhs;
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        if (phi[k] == 0.0) continue;
        lhs.push_back(rw.lhs[k] * aphi[k] * aphi[k]);
        rhs.push_back(rw.rhs[k] * phi[k] * phi[k]);
    }
    RellichCheck out;
    out.gamma = params.gamma;
    out.lhs_norm = std::sqrt(pairwise_sum(lhs));
    out.rhs_norm = std::sqrt(pairwise_sum(rhs));
    out.residual = out.lhs_norm - (1.0 - params.gamma) * out.rhs_norm;
    return out;
}

std::vector<LatticeFunction> rellich_test_functions(const HardyWeightField& w, std::size_t count,
                                                    std::uint64_t seed) {
    const BoxDomain& box = w.domain();
    const int d = box.dim();
    const int inner = box.radius() - 2;
    require(inner >= 1, "rellich_test_functions: box too small");
    auto admissible = [&](const Point& x) {
        for (int i = 0; i < d; ++i)
            if (std::abs(x[i]) > inner) return false;
        return w.at(x) > 0.0;
    };

    std::vector<LatticeFunction> out;
    for (std::size_t n = 0; n < count; ++n) {
        CounterRng rng(derive_seed(seed, {n}));
        LatticeFunction phi(box);
        if (n % 2 == 0) {
            const int h = 2 + static_cast<int>(rng() % 3);
            const int reach = std::max(0, inner - h);
            Point c(d);
            for (int i = 0; i < d; ++i)
                c[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * reach + 1)) - reach;
            const BoxDomain local(d, h);
            for (std::size_t k = 0; k < local.site_count(); ++k) {
                const Point off = local.point(k);
                const Point x = c + off;
                if (!admissible(x)) continue;
                double v = 1.0;
                for (int i = 0; i < d; ++i) {
                    const double t = std::cos(std::numbers::pi * off[i] / (2.0 * (h + 1)));
                    v *= t * t;
                }
                phi.set(x, v);
            }
        } else {
            const int sites = 5 + static_cast<int>(rng() % 26);
            for (int s = 0; s < sites; ++s) {
                Point x(d);
                for (int i = 0; i < d; ++i)
                    x[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * inner + 1)) - inner;
                if (admissible(x)) phi.set(x, 2.0 * rng.uniform() - 1.0);
            }
        }
        out.push_back(std::move(phi));
    }
    return out;
}

}  // namespace hardy
