#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardy/error.hpp"

namespace hardy {

inline constexpr int kMaxDim = 8;

/// A lattice point of Z^d, d <= kMaxDim.
class Point {
public:
    Point() = default;
    explicit Point(int dim) : dim_(dim) {}
    Point(std::initializer_list<int> coords);

    static Point origin(int dim) { return Point(dim); }
    static Point unit(int dim, int axis, int sign = 1);

    int dim() const { return dim_; }
    int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    long long norm2() const;
    double norm() const;
    bool is_origin() const { return norm2() == 0; }

    Point operator+(const Point& o) const;
    Point operator-(const Point& o) const;
    Point operator*(int s) const;
    bool operator==(const Point& o) const;

    std::string str() const;

private:
    int dim_ = 0;
    std::array<int, kMaxDim> c_{};
};

/// The centered box {x : |x_i| <= radius} of Z^dim. Sites are linearized
/// row-major over (x_1, ..., x_d), so x_d varies fastest.
class BoxDomain {
public:
    BoxDomain(int dim, int radius);

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }
    std::size_t site_count() const { return count_; }

    bool contains(const Point& x) const;
    /// All 2d neighbours of x lie in the box.
    bool is_interior(const Point& x) const;
    std::size_t index(const Point& x) const;
    Point point(std::size_t index) const;
    std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

    bool operator==(const BoxDomain& o) const { return dim_ == o.dim_ && radius_ == o.radius_; }

private:
    int dim_;
    int radius_;
    std::size_t count_;
    std::array<std::size_t, kMaxDim> stride_{};
};

/// A real function on a box, extended by zero outside (Dirichlet).
class LatticeFunction {
public:
    explicit LatticeFunction(BoxDomain domain);
    LatticeFunction(BoxDomain domain, std::vector<double> values);

    const BoxDomain& domain() const { return domain_; }
    double at(const Point& x) const { return domain_.contains(x) ? values_[domain_.index(x)] : 0.0; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    void set(const Point& x, double v) { values_[domain_.index(x)] = v; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }

    static LatticeFunction indicator(const BoxDomain& domain, const Point& x);

private:
    BoxDomain domain_;
    std::vector<double> values_;
};

enum class Distribution { rademacher, uniform };
enum class FieldSource { constant, iid, explicit_values };

Distribution parse_distribution(const std::string& name);
std::string to_string(Distribution dist);
std::string to_string(FieldSource source);

/// Nearest-neighbour conductances on every edge incident to a box.
///
/// Storage covers the forward edges [x, x+e_j] of the padded box
/// {-R-1 <= x_i <= R+1}, so that edges leaving the box (towards the zero
/// Dirichlet exterior) are available to the operator. Immutable after
/// construction.
class CoefficientField {
public:
    CoefficientField(BoxDomain domain, double lambda, std::vector<double> edges,
                     FieldSource source = FieldSource::explicit_values);

    const BoxDomain& domain() const { return domain_; }
    const BoxDomain& padded() const { return padded_; }
    int dim() const { return domain_.dim(); }
    double lambda() const { return lambda_; }
    /// min over box vertices x and edges [x,y] of b(x,y) / sum_z b(x,z).
    double ellipticity() const { return ellipticity_; }

    FieldSource source() const { return source_; }
    double delta() const { return delta_; }
    Distribution distribution() const { return dist_; }
    std::uint64_t seed() const { return seed_; }

    /// a([x, x+e_axis]); x may lie on the padding layer.
    double conductance(const Point& x, int axis) const;
    /// b(x, y) for nearest neighbours, 0 otherwise.
    double bond(const Point& x, const Point& y) const;
    double degree(const Point& x) const;

    /// Raw forward-edge storage, index = padded_index * dim + axis.
    std::span<const double> edges() const { return edges_; }

    /// Returns a copy with a single edge value replaced.
    CoefficientField with_edge(const Point& x, int axis, double value) const;
    /// Returns a copy with every conductance multiplied by factor.
    CoefficientField scaled(double factor) const;

private:
    friend CoefficientField build_iid_field(const BoxDomain&, double, Distribution, std::uint64_t);

    void validate_and_measure();

    BoxDomain domain_;
    BoxDomain padded_;
    double lambda_;
    double ellipticity_ = 0.0;
    std::vector<double> edges_;
    FieldSource source_;
    double delta_ = 0.0;
    Distribution dist_ = Distribution::rademacher;
    std::uint64_t seed_ = 0;
};

CoefficientField build_constant_field(const BoxDomain& domain, double value, double lambda = 1.0);

/// a([x, x+e_j]) = 1 + delta * omega_x, one variate per vertex shared by its
/// d forward edges; omega_x is a pure function of (seed, coordinates of x) so
/// nested boxes agree on their overlap.
CoefficientField build_iid_field(const BoxDomain& domain, double delta, Distribution dist,
                                 std::uint64_t seed);

/// The per-vertex variate omega_x in [-1, 1].
double vertex_variate(std::uint64_t seed, const Point& x, Distribution dist);

/// Lf(x) = sum_y b(x,y) (f(x) - f(y)) with f = 0 outside the box.
LatticeFunction apply_operator(const CoefficientField& field, const LatticeFunction& f);

/// Q(f) = sum over ordered pairs b(x,y) (f(x) - f(y))^2.
double dirichlet_energy(const CoefficientField& field, const LatticeFunction& f);

double inner_product(const LatticeFunction& f, const LatticeFunction& g);

/// Matrix-free Dirichlet operator acting on padded vectors.
///
/// Padded vectors have one entry per site of field.padded(); entries on the
/// padding layer are read as zero and never written.
class DirichletOperator {
public:
    explicit DirichletOperator(const CoefficientField& field);

    std::size_t size() const { return box_to_padded_.size(); }
    std::size_t padded_size() const { return field_->padded().site_count(); }
    const CoefficientField& field() const { return *field_; }

    /// out = L v (+ diag_shift .* v when a shift is supplied) on box sites.
    void apply(std::span<const double> v, std::span<double> out,
               std::span<const double> diag_shift = {}) const;

    std::span<const double> degrees() const { return degree_; }
    std::span<const std::size_t> box_to_padded() const { return box_to_padded_; }

    std::vector<double> to_padded(const LatticeFunction& f) const;
    LatticeFunction from_padded(std::span<const double> v) const;

private:
    const CoefficientField* field_;
    std::vector<std::size_t> box_to_padded_;
    std::vector<double> degree_;
    std::array<std::size_t, kMaxDim> pstride_{};
};

}  // namespace hardy
