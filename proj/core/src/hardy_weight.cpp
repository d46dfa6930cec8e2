#include "hardy/hardy_weight.hpp"

#include <cmath>

namespace hardy {

HardyWeightField::HardyWeightField(LatticeFunction w, LatticeFunction lower, LatticeFunction upper,
                                   Point pole, double ellipticity)
    : w_(std::move(w)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      pole_(pole),
      ellipticity_(ellipticity) {}

HardyWeightField HardyWeightField::scaled(double factor) const {
    LatticeFunction w = w_, lo = lower_, up = upper_;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] *= factor;
        lo[k] *= factor;
        up[k] *= factor;
    }
    return HardyWeightField(std::move(w), std::move(lo), std::move(up), pole_, ellipticity_);
}

HardyWeightField hardy_weight(const CoefficientField& field, const LatticeFunction& g, const Point& pole) {
    const BoxDomain& box = field.domain();
    require(g.domain() == box, "hardy_weight: domain mismatch");
    const int d = box.dim();
    const double e = field.ellipticity();
    // the comparison G(y) <= G(x) / E bounds sqrt G(x) + sqrt G(y), and the bound enters squared
    const double lower_factor = 1.0 / ((1.0 + 1.0 / std::sqrt(e)) * (1.0 + 1.0 / std::sqrt(e)));

    LatticeFunction w(box), lo(box), up(box);
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        if (!box.is_interior(x)) continue;
        const double gx = g[k];
        require(gx > 0.0, "hardy_weight: nonpositive Green's function at " + x.str());
        const double sx = std::sqrt(gx);
        double root_sum = 0.0;
        double grad_sum = 0.0;
        for (int j = 0; j < d; ++j) {
            for (int s : {1, -1}) {
                const Point y = x + Point::unit(d, j, s);
                const double gy = g.at(y);
                require(gy > 0.0, "hardy_weight: nonpositive Green's function at " + y.str());
                const double b = field.bond(x, y);
                const double dr = sx - std::sqrt(gy);
                root_sum += b * dr * dr;
                grad_sum += b * (gx - gy) * (gx - gy);
            }
        }
        const double ind = (x == pole) ? 1.0 : 0.0;
        w[k] = ind + root_sum / gx;
        up[k] = ind + grad_sum / (gx * gx);
        lo[k] = ind + lower_factor * grad_sum / (gx * gx);
    }
    return HardyWeightField(std::move(w), std::move(lo), std::move(up), pole, e);
}

HardyWeightField hardy_weight(const GreenField& green) {
    return hardy_weight(green.field(), green.values(), green.pole());
}

}  // namespace hardy
