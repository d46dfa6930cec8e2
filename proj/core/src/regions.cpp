#include <algorithm>
#include <cmath>
#include <limits>

#include "hardy/hardy_weight.hpp"
#include "hardy/statistics.hpp"

namespace hardy {

RegionSpec RegionSpec::annulus(double R, double ell) {
    RegionSpec r;
    r.kind = RegionKind::annulus;
    r.R = R;
    r.ell = ell;
    return r;
}

RegionSpec RegionSpec::sector(double R, double ell, int axis, double alpha) {
    RegionSpec r;
    r.kind = RegionKind::sector;
    r.R = R;
    r.ell = ell;
    r.axis = axis;
    r.alpha = alpha;
    return r;
}

bool RegionSpec::contains(const Point& x) const {
    const auto n2 = static_cast<double>(x.norm2());
    const double outer = ell * R;
    if (n2 < R * R - 1e-9 || n2 > outer * outer + 1e-9) return false;
    if (kind == RegionKind::annulus) return true;
    return x[axis] > (1.0 - alpha) * std::sqrt(n2);
}

namespace {

void validate(const RegionSpec& region, int dim) {
    require(region.R >= 1.0, "region: inner radius must be at least 1");
    require(region.ell > 1.0, "region: ell must exceed 1");
    if (region.kind == RegionKind::sector) {
        require(region.alpha > 0.0 && region.alpha < 1.0, "region: sector opening alpha must lie in (0, 1)");
        require(region.axis >= 0 && region.axis < dim, "region: sector axis out of range");
    }
}

void require_inner_half(const RegionSpec& region, const BoxDomain& box) {
    require(region.outer_radius() <= 0.5 * box.radius() + 1e-9,
            "region: outer radius " + std::to_string(region.outer_radius()) +
                " exceeds half the box radius " + std::to_string(box.radius()));
}

}  // namespace

std::vector<Point> enumerate_region(const RegionSpec& region, int dim) {
    validate(region, dim);
    const BoxDomain hull(dim, static_cast<int>(std::ceil(region.outer_radius())) + 1);
    std::vector<Point> out;
    for (std::size_t k = 0; k < hull.site_count(); ++k) {
        const Point x = hull.point(k);
        if (region.contains(x)) out.push_back(x);
    }
    return out;
}

RegionAverage region_average(const HardyWeightField& w, const RegionSpec& region) {
    const BoxDomain& box = w.domain();
    require_inner_half(region, box);
    const auto pts = enumerate_region(region, box.dim());
    require(!pts.empty(), "region_average: empty region");
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const auto& x : pts) vals.push_back(w.at(x));
    RegionAverage out;
    out.count = pts.size();
    out.normalized_sum = pairwise_sum(vals) / std::pow(region.R, box.dim());
    return out;
}

double sector_gradient_energy(const GreenField& green, const RegionSpec& sector) {
    require(sector.kind == RegionKind::sector, "sector_gradient_energy: region must be a sector");
    const BoxDomain& box = green.domain();
    require_inner_half(sector, box);
    const auto pts = enumerate_region(sector, box.dim());
    require(!pts.empty(), "sector_gradient_energy: empty sector");
    const Point e = Point::unit(box.dim(), sector.axis);
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const auto& x : pts) {
        const double diff = green.at(x) - green.at(x + e);
        vals.push_back(diff * diff);
    }
    return pairwise_sum(vals) / std::pow(sector.R, box.dim());
}

CuboidReport cuboid_telescoping(const GreenField& green, const RegionSpec& sector) {
    require(sector.kind == RegionKind::sector, "cuboid_telescoping: region must be a sector");
    const BoxDomain& box = green.domain();
    const int d = box.dim();
    require_inner_half(sector, box);

    CuboidReport rep;
    rep.half_width = static_cast<int>(std::floor(sector.alpha * sector.R / std::sqrt(d - 1.0)));
    rep.x_in = static_cast<int>(std::ceil(sector.R));
    const double outer = sector.outer_radius();
    rep.x_out = static_cast<int>(
        std::floor(std::sqrt(outer * outer - (d - 1.0) * rep.half_width * rep.half_width)));
    require(rep.x_out > rep.x_in, "cuboid_telescoping: cuboid is empty");

    const int j = sector.axis;
    const Point e = Point::unit(d, j);
    const int span = rep.x_out - rep.x_in;
    // Enumerate transverse offsets |x_i| <= half_width, i != j.
    std::vector<Point> transverse;
    {
        const int w = rep.half_width;
        const int side = 2 * w + 1;
        std::size_t total = 1;
        for (int i = 0; i < d - 1; ++i) total *= static_cast<std::size_t>(side);
        for (std::size_t t = 0; t < total; ++t) {
            Point p(d);
            std::size_t rem = t;
            for (int i = 0; i < d; ++i) {
                if (i == j) continue;
                p[i] = static_cast<int>(rem % static_cast<std::size_t>(side)) - w;
                rem /= static_cast<std::size_t>(side);
            }
            transverse.push_back(p);
        }
    }

    std::vector<double> gaps, chains, squares;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& t : transverse) {
        Point x = t;
        x[j] = rep.x_in;
        const double gap = green.at(x) - green.at(x + e * span);
        gaps.push_back(gap);
        rep.min_gap = std::min(rep.min_gap, gap);
        double chain = 0.0;
        for (int n = 1; n <= span; ++n) chain += green.at(x + e * (n - 1)) - green.at(x + e * n);
        chains.push_back(chain);
        for (int xj = rep.x_in; xj <= rep.x_out; ++xj) {
            Point y = t;
            y[j] = xj;
            if (!sector.contains(y)) rep.inside_sector = false;
            const double diff = green.at(y) - green.at(y + e);
            squares.push_back(diff * diff);
        }
    }
    rep.face_sites = transverse.size();
    rep.cuboid_sites = squares.size();
    rep.gap_sum = pairwise_sum(gaps);
    rep.telescoped_sum = pairwise_sum(chains);
    rep.cauchy_schwarz_bound = std::sqrt(static_cast<double>(rep.face_sites) * span) *
                               std::sqrt(pairwise_sum(squares));
    return rep;
}

}  // namespace hardy
