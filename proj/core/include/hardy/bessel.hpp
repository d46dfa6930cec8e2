#pragma once

#include "hardy/lattice.hpp"

namespace hardy {

/// e^{-z} I_n(z) for integer n >= 0 and z >= 0.
double scaled_bessel_i(int n, double z);

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;  ///< quadrature estimate + truncated tail bound
    double cutoff = 0.0;       ///< split point between quadrature and tail expansion
};

/// Free Green's function of Z^d through the heat-kernel representation
///   G_0(x) = int_0^inf prod_j e^{-2t} I_{x_j}(2t) dt,
/// quadrature on [0, T] and an asymptotic expansion of the tail on [T, inf).
QuadratureResult free_green_quadrature(const Point& x, double eps = 1e-9);

}  // namespace hardy
