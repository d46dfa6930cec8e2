#pragma once

#include <iosfwd>
#include <string>

#include "hardy/lattice.hpp"

namespace hardy {

/// Text container for coefficient fields (layout in docs/formats.md):
///
///   hardy-field v1
///   dim <d>
///   radius <R>
///   lambda <lambda>
///   source <constant|iid|explicit>
///   delta <delta>          (iid only)
///   dist <rademacher|uniform>  (iid only)
///   seed <u64>             (iid only)
///   edges <count>
///   <one value per line, %.17g>
///
/// Edge values follow the padded box {-R-1..R+1}^d in row-major order with
/// the axis index varying fastest. Round trips are bit-exact.
void write_field(std::ostream& os, const CoefficientField& field);
CoefficientField read_field(std::istream& is);

void save_field(const std::string& path, const CoefficientField& field);
CoefficientField load_field(const std::string& path);

}  // namespace hardy
