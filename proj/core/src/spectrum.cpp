#include "hardy/spectrum.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hardy/rng.hpp"

namespace hardy {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

HardyCertificate certify_hardy(const CoefficientField& field, const LatticeFunction& w, double tol,
                               const LanczosOptions& opts) {
    require(w.domain() == field.domain(), "certify_hardy: domain mismatch");
    require(tol >= 0.0, "certify_hardy: tol must be nonnegative");
    for (double v : w.values()) require(v >= 0.0, "certify_hardy: weight must be nonnegative");

    const DirichletOperator op(field);
    const std::size_t n = op.size();
    const auto map = op.box_to_padded();
    std::vector<double> shift(n);
    for (std::size_t k = 0; k < n; ++k) shift[k] = -0.5 * w[k];
    std::vector<double> pin(op.padded_size(), 0.0), pout(op.padded_size(), 0.0);

    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t k = 0; k < n; ++k) pin[map[k]] = v[k];
        op.apply(pin, pout, shift);
        for (std::size_t k = 0; k < n; ++k) out[k] = 2.0 * pout[map[k]];
    };

    const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opts.max_iter), n));
    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<std::size_t>(m_max) + 1);
    std::vector<double> alpha, beta;

    std::vector<double> q(n);
    CounterRng rng(opts.seed);
    for (auto& v : q) v = rng.uniform() - 0.5;
    const double qn = std::sqrt(dot(q, q));
    for (auto& v : q) v /= qn;
    basis.push_back(q);

    HardyCertificate cert;
    cert.tol = tol;
    std::vector<double> r(n);
    double theta = 0.0;
    double res = std::numeric_limits<double>::infinity();

    auto ritz = [&](int m) {
        Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
        for (int i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
        for (int i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        theta = es.eigenvalues()(0);
        res = std::abs(beta[static_cast<std::size_t>(m) - 1] * es.eigenvectors()(m - 1, 0));
    };

    int m = 0;
    while (m < m_max) {
        apply(basis.back(), r);
        if (m > 0) {
            const auto& prev = basis[basis.size() - 2];
            for (std::size_t i = 0; i < n; ++i) r[i] -= beta.back() * prev[i];
        }
        const double a = dot(basis.back(), r);
        for (std::size_t i = 0; i < n; ++i) r[i] -= a * basis.back()[i];
        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) {
                const double c = dot(v, r);
                for (std::size_t i = 0; i < n; ++i) r[i] -= c * v[i];
            }
        }
        alpha.push_back(a);
        const double b = std::sqrt(dot(r, r));
        beta.push_back(b);
        ++m;
        if (m % 10 == 0 || m == m_max || b < 1e-13) {
            ritz(m);
            if (res < opts.residual_tol || b < 1e-13) break;
        }
        for (auto& v : r) v /= b;
        basis.push_back(r);
    }

    cert.iterations = m;
    cert.min_eigenvalue = theta;
    cert.residual = res;
    cert.converged = res < opts.residual_tol;
    cert.bracket_hi = theta;
    cert.bracket_lo = theta - res;
    cert.certified = cert.bracket_lo >= -tol;
    return cert;
}

double dense_min_eigenvalue(const CoefficientField& field, const LatticeFunction& w) {
    const BoxDomain& box = field.domain();
    require(box.site_count() <= kDenseEigenCap, "dense_min_eigenvalue: box too large");
    require(w.domain() == box, "dense_min_eigenvalue: domain mismatch");
    const auto n = static_cast<Eigen::Index>(box.site_count());
    const int d = box.dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Point x = box.point(static_cast<std::size_t>(k));
        a(k, k) = 2.0 * field.degree(x) - w[static_cast<std::size_t>(k)];
        for (int j = 0; j < d; ++j) {
            const Point y = x + Point::unit(d, j);
            if (!box.contains(y)) continue;
            const auto l = static_cast<Eigen::Index>(box.index(y));
            a(k, l) = a(l, k) = -2.0 * field.conductance(x, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace hardy
