#pragma once

#include <cstdint>

#include "hardy/lattice.hpp"

namespace hardy {

struct LanczosOptions {
    int max_iter = 800;
    double residual_tol = 1e-10;  ///< stop once the Ritz residual falls below this
    std::uint64_t seed = 0x4c414e43;
};

struct HardyCertificate {
    double min_eigenvalue = 0.0;   ///< smallest Ritz value (an upper bound)
    double bracket_lo = 0.0;       ///< min_eigenvalue - Ritz residual
    double bracket_hi = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    double tol = 0.0;
    bool certified = false;        ///< bracket_lo >= -tol
};

/// Smallest eigenvalue of 2L - diag(w) on the Dirichlet box by Lanczos with
/// full reorthogonalization. Since Q(f) = 2<f, Lf>, a nonnegative spectrum is
/// exactly the Hardy inequality Q(f) >= sum w f^2 for f supported in the box.
HardyCertificate certify_hardy(const CoefficientField& field, const LatticeFunction& w, double tol,
                               const LanczosOptions& opts = {});

/// Dense reference: all eigenvalues of 2L - diag(w), smallest returned.
/// At most kDenseEigenCap sites.
double dense_min_eigenvalue(const CoefficientField& field, const LatticeFunction& w);

inline constexpr std::size_t kDenseEigenCap = 4096;

}  // namespace hardy
