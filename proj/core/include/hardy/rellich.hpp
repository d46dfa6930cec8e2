#pragma once

#include <cstdint>
#include <vector>

#include "hardy/green.hpp"
#include "hardy/hardy_weight.hpp"

namespace hardy {

/// gamma = ((1 - E^{alpha/2}) / (1 - E^{1/2}))^2 with E = lambda^2 / (2d).
struct RellichParams {
    double alpha = 0.0;
    double gamma = 0.0;
    double ellipticity = 0.0;
};

RellichParams rellich_params(double lambda, int dim, double alpha);
/// 2 / (d - 2); inside (0, 1) only for d >= 5.
double default_rellich_alpha(int dim);

/// G^alpha / w and G^alpha w on W = {x : w(x) > 0}, zero off W.
struct RellichWeights {
    LatticeFunction lhs;
    LatticeFunction rhs;
    std::size_t support = 0;
    std::size_t zero_sites = 0;  ///< interior sites with w = 0, excluded from W
};

RellichWeights rellich_weights(const GreenField& green, const HardyWeightField& w, double alpha);

/// The operator inside the weighted norm on the left-hand side.
enum class RellichOperator { free_laplacian, elliptic };

struct RellichCheck {
    double lhs_norm = 0.0;  ///< || 1_phi A phi ||_{G^alpha / w}
    double rhs_norm = 0.0;  ///< || phi ||_{G^alpha w}
    double gamma = 0.0;
    double residual = 0.0;  ///< lhs_norm - (1 - gamma) rhs_norm
};

RellichCheck rellich_check(const GreenField& green, const HardyWeightField& w, const RellichParams& params,
                           const LatticeFunction& phi, RellichOperator op);

/// Test functions supported in W at distance >= 2 from the box boundary:
/// alternating tensor bumps and random sparse vectors.
std::vector<LatticeFunction> rellich_test_functions(const HardyWeightField& w, std::size_t count,
                                                    std::uint64_t seed);

}  // namespace hardy
