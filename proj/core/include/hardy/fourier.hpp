#pragma once

#include <cstdint>
#include <vector>

#include "hardy/lattice.hpp"

namespace hardy {

/// m_0(theta) = 2 sum_j (1 - cos theta_j).
double free_symbol(std::span<const double> theta);

/// kappa_d = (1/2) pi^{-d/2} Gamma(d/2 - 1).
double kappa(int dim);

/// Leading-order data of the averaged Green's function: Q = I + K0_hat,
/// sigma = det(Q)^{1/(2d)}, x_tilde = sigma Q^{-1/2} x. Matrices are d x d,
/// row-major.
struct AsymptoticModel {
    int dim = 0;
    std::vector<double> K0_hat;
    std::vector<double> Q;
    std::vector<double> Q_inv_sqrt;
    double sigma = 1.0;
    double kappa = 0.0;

    std::vector<double> tilde(std::span<const double> x) const;
    std::vector<double> tilde(const Point& x) const;
};

/// Rejects asymmetric K0_hat, spectral norm >= 1, or Q not positive definite.
AsymptoticModel build_model(int dim, std::vector<double> K0_hat = {});

/// kappa / (2 sigma^2) |x_tilde|^{2-d}. L counts each edge once, so with
/// Q = I this is the free decay G_0(x) ~ kappa/2 |x|^{2-d}.
double leading_asymptotic(const AsymptoticModel& model, const Point& x);

/// s (2-d)/2 kappa/sigma^2 |x_tilde|^{1-d} <x_tilde, e_tilde_j>/|x_tilde|,
/// with e_tilde_j = sigma Q^{-1/2} e_j; the leading term of
/// G(x + s e_j) - G(x). Axis j is zero-based.
double gradient_leading(const AsymptoticModel& model, const Point& x, int axis, int sign);

/// One entry K_{j,k}(x) of a finitely supported kernel; axes zero-based.
struct KernelEntry {
    Point x;
    int j = 0;
    int k = 0;
    double value = 0.0;
};

/// Same entry with an exact rational value num / den.
struct RationalKernelEntry {
    Point x;
    int j = 0;
    int k = 0;
    std::int64_t num = 0;
    std::int64_t den = 1;
};

struct KernelTerm {
    Point x;
    double value = 0.0;
};

/// T(x) = 1/2 1_{x=0} + 1/(4d) 1_{|x|=1}
///      + 1/(4d) sum_{j,k} (-K_jk(x) + K_jk(x-e_j) + K_jk(x-e_k) - K_jk(x-e_j-e_k)).
struct TransitionKernel {
    int dim = 0;
    bool free_lazy = true;
    std::vector<KernelTerm> support;   ///< nonzero values, lexicographic order
    double total = 0.0;                ///< sum_x T(x)
    std::vector<double> first_moment;  ///< sum_x x T(x)

    double at(const Point& x) const;
    /// 2d sum_x T(x) x x^T; the identity for the free kernel.
    std::vector<double> second_moment_matrix() const;
};

/// Rejects entries of the wrong dimension or out-of-range axes, and kernels
/// whose integral sum_x K_jk(x) is not symmetric in (j, k).
TransitionKernel build_T(int dim, const std::vector<KernelEntry>& kernel = {});

/// Normalization and first moment of T evaluated in exact rational arithmetic.
struct ExactMoments {
    std::int64_t total_num = 0;
    std::int64_t total_den = 1;
    bool normalized = false;
    bool zero_mean = false;
};

ExactMoments exact_T_moments(int dim, const std::vector<RationalKernelEntry>& kernel);

struct PositivityProbe {
    double min_value = 0.0;
    std::vector<Point> negative_sites;
};

/// min of T over the Euclidean ball |x| <= ball_radius (off-support sites count as 0).
PositivityProbe positivity_probe(const TransitionKernel& T, int ball_radius);

struct CsPositivity {
    double min_c2s2 = 0.0;
    std::vector<double> argmin;
    std::size_t grid_points = 0;  ///< points evaluated (outside the origin ball)
    double q_min_eigenvalue = 0.0;
};

/// c(theta) = sum T(x)(1 - cos theta.x), s(theta) = sum T(x) sin theta.x on the
/// grid theta = 2 pi k / n, k in [-n/2, n/2)^d, skipping |theta| < exclusion.
CsPositivity cs_positivity(const TransitionKernel& T, int grid, double exclusion = 0.3);

/// c(theta)^2 + s(theta)^2 at a single point.
double cs_value(const TransitionKernel& T, std::span<const double> theta);

}  // namespace hardy
