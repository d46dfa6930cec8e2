#pragma once

#include <string>
#include <vector>

#include "hardy/green.hpp"
#include "hardy/lattice.hpp"

namespace hardy {

/// The optimal Hardy weight built from a Green's function,
///   w(x) = 1_o(x) + G(x)^{-1} sum_y b(x,y) (G(x)^{1/2} - G(y)^{1/2})^2,
/// together with the pointwise sandwich
///   w_lower = 1_o + (1 + E^{-1/2})^{-2} S(x),  w_upper = 1_o + S(x),
///   S(x) = G(x)^{-2} sum_y b(x,y) (G(x) - G(y))^2.
/// Values are computed on sites whose neighbours all lie in the box and are
/// zero elsewhere.
class HardyWeightField {
public:
    HardyWeightField(LatticeFunction w, LatticeFunction lower, LatticeFunction upper, Point pole,
                     double ellipticity);

    const BoxDomain& domain() const { return w_.domain(); }
    const LatticeFunction& w() const { return w_; }
    const LatticeFunction& lower() const { return lower_; }
    const LatticeFunction& upper() const { return upper_; }
    const Point& pole() const { return pole_; }
    double ellipticity() const { return ellipticity_; }
    double at(const Point& x) const { return w_.at(x); }
    bool defined_at(const Point& x) const { return domain().is_interior(x); }

    /// w scaled by a constant factor (sandwich scaled alongside).
    HardyWeightField scaled(double factor) const;

private:
    LatticeFunction w_;
    LatticeFunction lower_;
    LatticeFunction upper_;
    Point pole_;
    double ellipticity_;
};

HardyWeightField hardy_weight(const GreenField& green);

/// Same construction from explicit Green's values (for instance extrapolated
/// ones) on the box of `field`.
HardyWeightField hardy_weight(const CoefficientField& field, const LatticeFunction& g, const Point& pole);

enum class RegionKind { annulus, sector };

/// Annulus {R <= |x| <= ell R} or sector {<x, e_j> > (1 - alpha)|x|, R <= |x| <= ell R}.
struct RegionSpec {
    RegionKind kind = RegionKind::annulus;
    double R = 1.0;
    double ell = 4.0;
    int axis = 0;         ///< j, zero-based (sector only)
    double alpha = 0.5;   ///< opening parameter (sector only)

    static RegionSpec annulus(double R, double ell = 4.0);
    static RegionSpec sector(double R, double ell = 4.0, int axis = 0, double alpha = 0.5);

    bool contains(const Point& x) const;
    double outer_radius() const { return ell * R; }
    std::string kind_name() const { return kind == RegionKind::annulus ? "annulus" : "sector"; }
};

/// Lattice points of a region, in box enumeration order.
std::vector<Point> enumerate_region(const RegionSpec& region, int dim);

struct RegionAverage {
    double normalized_sum = 0.0;  ///< R^{-d} sum_{x in region} w(x)
    std::size_t count = 0;
};

/// Requires the region to lie in the inner half box (outer radius <= R_box / 2).
RegionAverage region_average(const HardyWeightField& w, const RegionSpec& region);

/// R^{-d} sum_{x in sector} |G(x) - G(x + e_j)|^2.
double sector_gradient_energy(const GreenField& green, const RegionSpec& sector);

/// Cuboid inside a sector along axis j and the telescoping chain across it:
/// gaps G(x) - G(x + c R e_j) for x on the inner face, their sum, and the
/// Cauchy-Schwarz bound sqrt(|F_in| c R) * sqrt(sum_Cub |G(x) - G(x+e_j)|^2).
struct CuboidReport {
    int x_in = 0;
    int x_out = 0;
    int half_width = 0;
    std::size_t face_sites = 0;
    std::size_t cuboid_sites = 0;
    double min_gap = 0.0;
    double gap_sum = 0.0;
    double telescoped_sum = 0.0;
    double cauchy_schwarz_bound = 0.0;
    bool inside_sector = true;
};

CuboidReport cuboid_telescoping(const GreenField& green, const RegionSpec& sector);

}  // namespace hardy
