#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hardy/lattice.hpp"

namespace hardy {

struct SolverOptions {
    double tol = 1e-10;        ///< relative residual ||LG - 1_o|| / ||1_o||
    int max_iter = 0;          ///< 0 selects 50 * (2 R_box + 1)
    bool jacobi = true;
};

/// G(o, .) of the Dirichlet problem on a box.
class GreenField {
public:
    GreenField(std::shared_ptr<const CoefficientField> field, Point pole, LatticeFunction values,
               double residual, int iterations);

    const CoefficientField& field() const { return *field_; }
    std::shared_ptr<const CoefficientField> field_ptr() const { return field_; }
    const BoxDomain& domain() const { return values_.domain(); }
    const Point& pole() const { return pole_; }
    const LatticeFunction& values() const { return values_; }
    double at(const Point& x) const { return values_.at(x); }
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }
    int box_radius() const { return domain().radius(); }

private:
    std::shared_ptr<const CoefficientField> field_;
    Point pole_;
    LatticeFunction values_;
    double residual_;
    int iterations_;
};

/// Jacobi-preconditioned conjugate gradient for L G = 1_pole with zero
/// Dirichlet data. Throws ConvergenceError when max_iter is exhausted.
GreenField solve_green(std::shared_ptr<const CoefficientField> field, const Point& pole,
                       const SolverOptions& opts = {});

/// Same Dirichlet system by dense Cholesky factorization; at most 10^4 sites.
GreenField dense_green_oracle(std::shared_ptr<const CoefficientField> field, const Point& pole);

inline constexpr std::size_t kDenseSiteCap = 10000;

struct WalkEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t walkers = 0;
};

/// Occupation-time estimate of G(pole, x) for the conductance walk killed on
/// leaving the box: G(pole, x) = E_pole[#visits to x] / deg(x).
/// Walker i draws from a stream keyed by (seed, i); threads only partition
/// the walker range, so results do not depend on the thread count.
WalkEstimate random_walk_green(const CoefficientField& field, const Point& pole, const Point& x,
                               std::uint64_t walkers, std::uint64_t seed, unsigned threads = 1);

/// Checks of the structural identities every solution must satisfy.
struct GreenDiagnostics {
    double pole_equation_error = 0.0;   ///< |(LG)(o) - 1|
    double harmonicity_error = 0.0;     ///< max |(LG)(x)|, x != o
    double min_value = 0.0;
    double comparison_slack = 0.0;      ///< min over edges of G(x) - E G(y)
    std::size_t comparison_violations = 0;
};

GreenDiagnostics diagnose(const GreenField& green);
/// max(10 * residual, 1e-10): tolerance applied to the pole/harmonicity checks.
double identity_tolerance(const GreenField& green);

struct ShellRatio {
    double radius = 0.0;
    std::size_t count = 0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
};

/// Extremes of G(x) (1+|x|)^(d-2) over shells r - 1/2 <= |x| < r + 1/2.
struct AronsonReport {
    std::vector<ShellRatio> shells;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double constant = 0.0;  ///< max(ratio_max, 1/ratio_min)
};

AronsonReport aronson_report(const GreenField& green, const std::vector<double>& shell_radii);

struct Extrapolation {
    double g_inf = 0.0;
    double slope = 0.0;          ///< c in G_R = G_inf - c R^(2-d)
    double fit_residual = 0.0;   ///< RMS residual of the least-squares fit
    bool monotone = true;
    std::vector<double> radii;
    std::vector<double> values;
};

/// Least-squares fit of G_R(x) = G_inf - c R^(2-d) to values on several radii.
Extrapolation extrapolate_values(int dim, const std::vector<double>& radii,
                                 const std::vector<double>& values);

/// Builds seed-consistent fields on each radius via make_field, solves, and
/// extrapolates G(pole, x).
Extrapolation truncation_extrapolate(
    const std::function<CoefficientField(const BoxDomain&)>& make_field, int dim,
    const std::vector<int>& radii, const Point& pole, const Point& x, const SolverOptions& opts = {});

/// Sitewise extrapolation over a family of solutions (smallest box first);
/// returns values on the smallest box.
LatticeFunction extrapolate_field(const std::vector<GreenField>& family);

}  // namespace hardy
