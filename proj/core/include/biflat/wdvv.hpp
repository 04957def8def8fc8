#pragma once

#include <biflat/multipoly.hpp>

namespace biflat {

struct WdvvReport {
	bool associativity = false;
	bool unit = false;
	bool homogeneity = false;
	std::string witness;
	bool pass() const { return associativity && unit && homogeneity; }
};

// Generalized WDVV checks on a vector potential in the unit-last convention:
//  (1) oriented associativity of c^i_{jk} = d_j d_k A^i
//  (2) d_n d_i A^j = delta_i^j
//  (3) (E/d_n)(A^i) = (1 + d_i/d_n) A^i up to affine terms
WdvvReport wdvv_check(std::span<const MultiPoly> a,
                      std::span<const long> degrees);

} // namespace biflat
