#include "hardy/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/rational.hpp>

namespace hardy {
namespace {

struct PointLess {
    bool operator()(const Point& a, const Point& b) const {
        for (int i = 0; i < a.dim(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

using Matrix = Eigen::MatrixXd;

Matrix to_matrix(int d, const std::vector<double>& v) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = v[static_cast<std::size_t>(i * d + j)];
    return m;
}

std::vector<double> from_matrix(const Matrix& m) {
    std::vector<double> v;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

template <class Entry>
void check_entry(int dim, const Entry& e) {
    require(e.x.dim() == dim, "build_T: kernel entry dimension mismatch at " + e.x.str());
    require(e.j >= 0 && e.j < dim && e.k >= 0 && e.k < dim, "build_T: kernel axis out of range");
}

/// Accumulates T in any field of scalars; `value` maps an entry to Scalar.
template <class Scalar, class Entry, class Value>
std::map<Point, Scalar, PointLess> accumulate_T(int dim, const std::vector<Entry>& kernel, Value value) {
    std::map<Point, Scalar, PointLess> t;
    t[Point::origin(dim)] += Scalar(1) / Scalar(2);
    const Scalar nb = Scalar(1) / Scalar(4 * dim);
    for (int j = 0; j < dim; ++j)
        for (int s : {1, -1}) t[Point::unit(dim, j, s)] += nb;
    for (const auto& e : kernel) {
        check_entry(dim, e);
        const Scalar v = value(e) * nb;
        const Point ej = Point::unit(dim, e.j), ek = Point::unit(dim, e.k);
        // K(x - a) contributes at x = y + a for each stencil offset a.
        t[e.x] -= v;
        t[e.x + ej] += v;
        t[e.x + ek] += v;
        t[e.x + ej + ek] -= v;
    }
    return t;
}

}  // namespace

double free_symbol(std::span<const double> theta) {
    double m = 0.0;
    for (double t : theta) m += 2.0 * (1.0 - std::cos(t));
    return m;
}

double kappa(int dim) {
    require(dim >= 3, "kappa: dimension must be at least 3");
    return 0.5 * std::pow(std::numbers::pi, -0.5 * dim) * std::tgamma(0.5 * dim - 1.0);
}

std::vector<double> AsymptoticModel::tilde(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dim, "AsymptoticModel::tilde: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            out[static_cast<std::size_t>(i)] +=
                sigma * Q_inv_sqrt[static_cast<std::size_t>(i * dim + j)] * x[static_cast<std::size_t>(j)];
    return out;
}

std::vector<double> AsymptoticModel::tilde(const Point& x) const {
    std::vector<double> v(static_cast<std::size_t>(x.dim()));
    for (int i = 0; i < x.dim(); ++i) v[static_cast<std::size_t>(i)] = x[i];
    return tilde(v);
}

AsymptoticModel build_model(int dim, std::vector<double> K0_hat) {
    require(dim >= 3 && dim <= kMaxDim, "build_model: dimension out of range");
    const auto n = static_cast<std::size_t>(dim * dim);
    if (K0_hat.empty()) K0_hat.assign(n, 0.0);
    require(K0_hat.size() == n, "build_model: K0_hat must be d x d");
    for (double v : K0_hat) require(std::isfinite(v), "build_model: non-finite K0_hat entry");

    const Matrix k = to_matrix(dim, K0_hat);
    require((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + k.cwiseAbs().maxCoeff()),
            "build_model: K0_hat is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> ek(k);
    require(ek.eigenvalues().cwiseAbs().maxCoeff() < 1.0, "build_model: spectral norm of K0_hat must be < 1");

    const Matrix q = Matrix::Identity(dim, dim) + k;
    Eigen::SelfAdjointEigenSolver<Matrix> eq(q);
    require(eq.eigenvalues().minCoeff() > 0.0, "build_model: Q is not positive definite");

    AsymptoticModel m;
    m.dim = dim;
    m.K0_hat = std::move(K0_hat);
    m.Q = from_matrix(q);
    m.Q_inv_sqrt = from_matrix(eq.operatorInverseSqrt());
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) logdet += std::log(eq.eigenvalues()(i));
    m.sigma = std::exp(logdet / (2.0 * dim));
    m.kappa = kappa(dim);
    return m;
}

double leading_asymptotic(const AsymptoticModel& model, const Point& x) {
    require(x.dim() == model.dim, "leading_asymptotic: dimension mismatch");
    require(!x.is_origin(), "leading_asymptotic: x must be nonzero");
    const auto xt = model.tilde(x);
    double r2 = 0.0;
    for (double v : xt) r2 += v * v;
    return model.kappa / (2.0 * model.sigma * model.sigma) * std::pow(std::sqrt(r2), 2.0 - model.dim);
}

double gradient_leading(const AsymptoticModel& model, const Point& x, int axis, int sign) {
    require(x.dim() == model.dim, "gradient_leading: dimension mismatch");
    require(!x.is_origin(), "gradient_leading: x must be nonzero");
    require(axis >= 0 && axis < model.dim, "gradient_leading: axis out of range");
    require(sign == 1 || sign == -1, "gradient_leading: sign must be +1 or -1");
    const int d = model.dim;
    const auto xt = model.tilde(x);
    const auto et = model.tilde(Point::unit(d, axis));
    double r2 = 0.0, proj = 0.0;
    for (std::size_t i = 0; i < xt.size(); ++i) {
        r2 += xt[i] * xt[i];
        proj += xt[i] * et[i];
    }
    const double r = std::sqrt(r2);
    return sign * (2.0 - d) / 2.0 * model.kappa / (model.sigma * model.sigma) * std::pow(r, 1.0 - d) * proj / r;
}

double TransitionKernel::at(const Point& x) const {
    for (const auto& t : support)
        if (t.x == x) return t.value;
    return 0.0;
}

std::vector<double> TransitionKernel::second_moment_matrix() const {
    const auto d = static_cast<std::size_t>(dim);
    std::vector<double> m(d * d, 0.0);
    for (const auto& t : support)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m[i * d + j] += 2.0 * dim * t.value * t.x[static_cast<int>(i)] * t.x[static_cast<int>(j)];
    return m;
}

TransitionKernel build_T(int dim, const std::vector<KernelEntry>& kernel) {
    require(dim >= 1 && dim <= kMaxDim, "build_T: dimension out of range");
    std::vector<double> integral(static_cast<std::size_t>(dim * dim), 0.0);
    for (const auto& e : kernel) {
        check_entry(dim, e);
        require(std::isfinite(e.value), "build_T: non-finite kernel value");
        integral[static_cast<std::size_t>(e.j * dim + e.k)] += e.value;
    }
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
            const double a = integral[static_cast<std::size_t>(j * dim + k)];
            const double b = integral[static_cast<std::size_t>(k * dim + j)];
            if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)))
                throw InvalidArgument("build_T: sum_x K_{" + std::to_string(j) + "," + std::to_string(k) +
                                      "}(x) = " + std::to_string(a) + " differs from the transposed entry " +
                                      std::to_string(b));
        }

    const auto t = accumulate_T<double>(dim, kernel, [](const KernelEntry& e) { return e.value; });
    TransitionKernel out;
    out.dim = dim;
    out.free_lazy = kernel.empty();
    out.first_moment.assign(static_cast<std::size_t>(dim), 0.0);
    long double total = 0.0L;
    std::vector<long double> moment(static_cast<std::size_t>(dim), 0.0L);
    for (const auto& [x, v] : t) {
        if (v == 0.0) continue;
        out.support.push_back({x, v});
        total += v;
        for (int i = 0; i < dim; ++i) moment[static_cast<std::size_t>(i)] += static_cast<long double>(v) * x[i];
    }
    out.total = static_cast<double>(total);
    for (int i = 0; i < dim; ++i) out.first_moment[static_cast<std::size_t>(i)] = static_cast<double>(moment[static_cast<std::size_t>(i)]);
    require(std::abs(out.total - 1.0) <= 1e-12, "build_T: normalization sum_x T(x) = 1 violated");
    for (double m : out.first_moment) require(std::abs(m) <= 1e-12, "build_T: zero-mean condition violated");
    return out;
}

ExactMoments exact_T_moments(int dim, const std::vector<RationalKernelEntry>& kernel) {
    using Q = boost::rational<std::int64_t>;
    require(dim >= 1 && dim <= kMaxDim, "exact_T_moments: dimension out of range");
    for (const auto& e : kernel) require(e.den != 0, "exact_T_moments: zero denominator");
    const auto t = accumulate_T<Q>(dim, kernel, [](const RationalKernelEntry& e) { return Q(e.num, e.den); });
    Q total(0);
    std::vector<Q> moment(static_cast<std::size_t>(dim), Q(0));
    for (const auto& [x, v] : t) {
        total += v;
        for (int i = 0; i < dim; ++i) moment[static_cast<std::size_t>(i)] += v * Q(x[i]);
    }
    ExactMoments out;
    out.total_num = total.numerator();
    out.total_den = total.denominator();
    out.normalized = total == Q(1);
    out.zero_mean = std::all_of(moment.begin(), moment.end(), [](const Q& m) { return m == Q(0); });
    return out;
}

PositivityProbe positivity_probe(const TransitionKernel& T, int ball_radius) {
    require(ball_radius >= 0, "positivity_probe: radius must be nonnegative");
    PositivityProbe out;
    out.min_value = std::numeric_limits<double>::infinity();
    // The ball always contains off-support sites once it reaches past the
    // support, so the minimum is taken over every lattice point in it.
    const BoxDomain cube(T.dim, std::max(ball_radius, 1));
    const long long r2 = static_cast<long long>(ball_radius) * ball_radius;
    for (std::size_t k = 0; k < cube.site_count(); ++k) {
        const Point x = cube.point(k);
        if (x.norm2() > r2) continue;
        const double v = T.at(x);
        out.min_value = std::min(out.min_value, v);
        if (v < 0.0) out.negative_sites.push_back(x);
    }
    return out;
}

double cs_value(const TransitionKernel& T, std::span<const double> theta) {
    require(static_cast<int>(theta.size()) == T.dim, "cs_value: dimension mismatch");
    double c = 0.0, s = 0.0;
    for (const auto& t : T.support) {
        double phase = 0.0;
        for (int i = 0; i < T.dim; ++i) phase += theta[static_cast<std::size_t>(i)] * t.x[i];
        c += t.value * (1.0 - std::cos(phase));
        s += t.value * std::sin(phase);
    }
    return c * c + s * s;
}

CsPositivity cs_positivity(const TransitionKernel& T, int grid, double exclusion) {
    require(grid >= 2, "cs_positivity: grid must have at least 2 points per axis");
    require(exclusion >= 0.0, "cs_positivity: exclusion radius must be nonnegative");
    const int d = T.dim;
    CsPositivity out;
    out.min_c2s2 = std::numeric_limits<double>::infinity();

    std::vector<int> k(static_cast<std::size_t>(d), -grid / 2);
    std::vector<double> theta(static_cast<std::size_t>(d));
    const double h = 2.0 * std::numbers::pi / grid;
    while (true) {
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            theta[static_cast<std::size_t>(i)] = h * k[static_cast<std::size_t>(i)];
            r2 += theta[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(i)];
        }
        if (r2 >= exclusion * exclusion) {
            ++out.grid_points;
            const double v = cs_value(T, theta);
            if (v < out.min_c2s2) {
                out.min_c2s2 = v;
                out.argmin = theta;
            }
        }
        int i = d - 1;
        while (i >= 0 && ++k[static_cast<std::size_t>(i)] == grid - grid / 2) {
            k[static_cast<std::size_t>(i)] = -grid / 2;
            --i;
        }
        if (i < 0) break;
    }

    const Matrix q = to_matrix(d, T.second_moment_matrix());
    out.q_min_eigenvalue = Eigen::SelfAdjointEigenSolver<Matrix>(q, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    return out;
}

}  // namespace hardy
