#include "hardy/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hardy/rng.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// Point

Point::Point(std::initializer_list<int> coords) : dim_(static_cast<int>(coords.size())) {
    require(dim_ <= kMaxDim, "Point: dimension exceeds kMaxDim");
    std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::unit(int dim, int axis, int sign) {
    Point p(dim);
    p[axis] = sign;
    return p;
}

long long Point::norm2() const {
    long long s = 0;
    for (int i = 0; i < dim_; ++i) s += static_cast<long long>(c_[i]) * c_[i];
    return s;
}

double Point::norm() const { return std::sqrt(static_cast<double>(norm2())); }

Point Point::operator+(const Point& o) const {
    Point r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

Point Point::operator-(const Point& o) const {
    Point r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

Point Point::operator*(int s) const {
    Point r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] * s;
    return r;
}

bool Point::operator==(const Point& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

std::string Point::str() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// BoxDomain

BoxDomain::BoxDomain(int dim, int radius) : dim_(dim), radius_(radius) {
    require(dim >= 3, "BoxDomain: dimension must be at least 3 (transient setting)");
    require(dim <= kMaxDim, "BoxDomain: dimension exceeds kMaxDim");
    require(radius >= 1, "BoxDomain: radius must be at least 1");
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    std::size_t s = 1;
    for (int i = dim - 1; i >= 0; --i) {
        stride_[static_cast<std::size_t>(i)] = s;
        require(s <= std::numeric_limits<std::size_t>::max() / side, "BoxDomain: too many sites");
        s *= side;
    }
    count_ = s;
}

bool BoxDomain::contains(const Point& x) const {
    if (x.dim() != dim_) return false;
    for (int i = 0; i < dim_; ++i)
        if (x[i] < -radius_ || x[i] > radius_) return false;
    return true;
}

bool BoxDomain::is_interior(const Point& x) const {
    if (x.dim() != dim_) return false;
    for (int i = 0; i < dim_; ++i)
        if (x[i] <= -radius_ || x[i] >= radius_) return false;
    return true;
}

std::size_t BoxDomain::index(const Point& x) const {
    std::size_t k = 0;
    for (int i = 0; i < dim_; ++i)
        k += static_cast<std::size_t>(x[i] + radius_) * stride_[static_cast<std::size_t>(i)];
    return k;
}

Point BoxDomain::point(std::size_t index) const {
    Point x(dim_);
    for (int i = 0; i < dim_; ++i) {
        const auto s = stride_[static_cast<std::size_t>(i)];
        x[i] = static_cast<int>(index / s) - radius_;
        index %= s;
    }
    return x;
}

// ---------------------------------------------------------------------------
// LatticeFunction

LatticeFunction::LatticeFunction(BoxDomain domain)
    : domain_(domain), values_(domain.site_count(), 0.0) {}

LatticeFunction::LatticeFunction(BoxDomain domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
    require(values_.size() == domain_.site_count(), "LatticeFunction: value count does not match domain");
    for (double v : values_) require(std::isfinite(v), "LatticeFunction: non-finite value");
}

LatticeFunction LatticeFunction::indicator(const BoxDomain& domain, const Point& x) {
    require(domain.contains(x), "indicator: point outside box");
    LatticeFunction f(domain);
    f.set(x, 1.0);
    return f;
}

double inner_product(const LatticeFunction& f, const LatticeFunction& g) {
    require(f.domain() == g.domain(), "inner_product: domain mismatch");
    long double s = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) s += static_cast<long double>(f[i]) * g[i];
    return static_cast<double>(s);
}

// ---------------------------------------------------------------------------
// CoefficientField

Distribution parse_distribution(const std::string& name) {
    if (name == "rademacher") return Distribution::rademacher;
    if (name == "uniform") return Distribution::uniform;
    throw InvalidArgument("unknown distribution '" + name + "' (expected rademacher|uniform)");
}

std::string to_string(Distribution dist) {
    return dist == Distribution::rademacher ? "rademacher" : "uniform";
}

std::string to_string(FieldSource source) {
    switch (source) {
        case FieldSource::constant: return "constant";
        case FieldSource::iid: return "iid";
        case FieldSource::explicit_values: return "explicit";
    }
    return "explicit";
}

CoefficientField::CoefficientField(BoxDomain domain, double lambda, std::vector<double> edges,
                                   FieldSource source)
    : domain_(domain),
      padded_(domain.dim(), domain.radius() + 1),
      lambda_(lambda),
      edges_(std::move(edges)),
      source_(source) {
    require(lambda > 0.0 && lambda <= 1.0, "CoefficientField: lambda must lie in (0, 1]");
    require(edges_.size() == padded_.site_count() * static_cast<std::size_t>(domain.dim()),
            "CoefficientField: edge count does not match the padded box");
    validate_and_measure();
}

void CoefficientField::validate_and_measure() {
    const double lo = lambda_ * (1.0 - 1e-12);
    const double hi = (1.0 / lambda_) * (1.0 + 1e-12);
    for (double a : edges_) {
        require(std::isfinite(a) && a > 0.0, "CoefficientField: conductances must be positive");
        require(a >= lo && a <= hi, "CoefficientField: conductance outside [lambda, 1/lambda]");
    }
    const int d = dim();
    double e = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < domain_.site_count(); ++k) {
        const Point x = domain_.point(k);
        double deg = 0.0;
        double bmin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < d; ++j) {
            const double up = conductance(x, j);
            const double down = conductance(x - Point::unit(d, j), j);
            deg += up + down;
            bmin = std::min({bmin, up, down});
        }
        e = std::min(e, bmin / deg);
    }
    ellipticity_ = e;
}

double CoefficientField::conductance(const Point& x, int axis) const {
    require(padded_.contains(x), "conductance: vertex outside padded box");
    return edges_[padded_.index(x) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(axis)];
}

double CoefficientField::bond(const Point& x, const Point& y) const {
    const Point diff = y - x;
    if (diff.norm2() != 1) return 0.0;
    for (int j = 0; j < dim(); ++j) {
        if (diff[j] == 1) return conductance(x, j);
        if (diff[j] == -1) return conductance(y, j);
    }
    return 0.0;
}

double CoefficientField::degree(const Point& x) const {
    double deg = 0.0;
    for (int j = 0; j < dim(); ++j)
        deg += conductance(x, j) + conductance(x - Point::unit(dim(), j), j);
    return deg;
}

CoefficientField CoefficientField::with_edge(const Point& x, int axis, double value) const {
    std::vector<double> e = edges_;
    e[padded_.index(x) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(axis)] = value;
    double lam = lambda_;
    if (value < lam || value > 1.0 / lam) lam = std::min(value, 1.0 / value);
    return CoefficientField(domain_, std::min(lam, 1.0), std::move(e), FieldSource::explicit_values);
}

CoefficientField CoefficientField::scaled(double factor) const {
    require(factor > 0.0, "scaled: factor must be positive");
    std::vector<double> e = edges_;
    double amin = std::numeric_limits<double>::infinity();
    double amax = 0.0;
    for (double& a : e) {
        a *= factor;
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    const double lam = std::min({1.0, amin, 1.0 / amax});
    return CoefficientField(domain_, lam, std::move(e), FieldSource::explicit_values);
}

CoefficientField build_constant_field(const BoxDomain& domain, double value, double lambda) {
    require(value > 0.0, "build_constant_field: value must be positive");
    require(lambda > 0.0 && lambda <= 1.0, "build_constant_field: lambda must lie in (0, 1]");
    require(value >= lambda * (1 - 1e-12) && value <= (1.0 / lambda) * (1 + 1e-12),
            "build_constant_field: value outside [lambda, 1/lambda]");
    const BoxDomain padded(domain.dim(), domain.radius() + 1);
    std::vector<double> e(padded.site_count() * static_cast<std::size_t>(domain.dim()), value);
    return CoefficientField(domain, lambda, std::move(e), FieldSource::constant);
}

double vertex_variate(std::uint64_t seed, const Point& x, Distribution dist) {
    std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
    for (int i = 0; i < x.dim(); ++i)
        h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(x[i])) ^ (std::uint64_t(i) << 56));
    if (dist == Distribution::rademacher) return (h >> 63) ? 1.0 : -1.0;
    return 2.0 * to_unit(h) - 1.0;
}

CoefficientField build_iid_field(const BoxDomain& domain, double delta, Distribution dist,
                                 std::uint64_t seed) {
    require(delta > 0.0 && delta < 1.0, "build_iid_field: delta must lie in (0, 1)");
    const int d = domain.dim();
    const BoxDomain padded(d, domain.radius() + 1);
    std::vector<double> e(padded.site_count() * static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < padded.site_count(); ++k) {
        const double a = 1.0 + delta * vertex_variate(seed, padded.point(k), dist);
        for (int j = 0; j < d; ++j) e[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] = a;
    }
    CoefficientField field(domain, 1.0 - delta, std::move(e), FieldSource::iid);
    field.delta_ = delta;
    field.dist_ = dist;
    field.seed_ = seed;
    return field;
}

// ---------------------------------------------------------------------------
// DirichletOperator

DirichletOperator::DirichletOperator(const CoefficientField& field) : field_(&field) {
    const BoxDomain& box = field.domain();
    const BoxDomain& pad = field.padded();
    const int d = box.dim();
    for (int j = 0; j < d; ++j) pstride_[static_cast<std::size_t>(j)] = pad.stride(j);
    box_to_padded_.resize(box.site_count());
    degree_.resize(box.site_count());
    const auto e = field.edges();
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const std::size_t p = pad.index(box.point(k));
        box_to_padded_[k] = p;
        double deg = 0.0;
        for (std::size_t j = 0; j < ud; ++j) deg += e[p * ud + j] + e[(p - pstride_[j]) * ud + j];
        degree_[k] = deg;
    }
}

void DirichletOperator::apply(std::span<const double> v, std::span<double> out,
                              std::span<const double> diag_shift) const {
    const auto e = field_->edges();
    const auto ud = static_cast<std::size_t>(field_->dim());
    const bool shifted = !diag_shift.empty();
    const std::size_t n = box_to_padded_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = box_to_padded_[k];
        double s = (shifted ? degree_[k] + diag_shift[k] : degree_[k]) * v[p];
        for (std::size_t j = 0; j < ud; ++j) {
            const std::size_t st = pstride_[j];
            s -= e[p * ud + j] * v[p + st] + e[(p - st) * ud + j] * v[p - st];
        }
        out[p] = s;
    }
}

std::vector<double> DirichletOperator::to_padded(const LatticeFunction& f) const {
    require(f.domain() == field_->domain(), "operator: domain mismatch");
    std::vector<double> v(padded_size(), 0.0);
    for (std::size_t k = 0; k < size(); ++k) v[box_to_padded_[k]] = f[k];
    return v;
}

LatticeFunction DirichletOperator::from_padded(std::span<const double> v) const {
    std::vector<double> vals(size());
    for (std::size_t k = 0; k < size(); ++k) vals[k] = v[box_to_padded_[k]];
    return LatticeFunction(field_->domain(), std::move(vals));
}

LatticeFunction apply_operator(const CoefficientField& field, const LatticeFunction& f) {
    require(f.domain() == field.domain(), "apply_operator: domain mismatch");
    const DirichletOperator op(field);
    const auto v = op.to_padded(f);
    std::vector<double> out(v.size(), 0.0);
    op.apply(v, out);
    return op.from_padded(out);
}

double dirichlet_energy(const CoefficientField& field, const LatticeFunction& f) {
    require(f.domain() == field.domain(), "dirichlet_energy: domain mismatch");
    const DirichletOperator op(field);
    const auto v = op.to_padded(f);
    const BoxDomain& pad = field.padded();
    const auto e = field.edges();
    const auto ud = static_cast<std::size_t>(field.dim());
    long double q = 0.0L;
    for (std::size_t p = 0; p < pad.site_count(); ++p) {
        const Point x = pad.point(p);
        for (std::size_t j = 0; j < ud; ++j) {
            if (x[static_cast<int>(j)] == pad.radius()) continue;
            const double diff = v[p] - v[p + pad.stride(static_cast<int>(j))];
            q += 2.0L * e[p * ud + j] * diff * diff;
        }
    }
    return static_cast<double>(q);
}

}  // namespace hardy
