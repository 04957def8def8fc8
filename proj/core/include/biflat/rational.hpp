#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace biflat {

// exact arbitrary-precision rational scalar
using Rat = mpq_class;

inline Rat rat(long num, long den = 1)
{
	Rat r(num, den);
	r.canonicalize();
	return r;
}

inline bool is_zero(const Rat &r) { return sgn(r) == 0; }

inline std::string to_string(const Rat &r) { return r.get_str(); }

inline std::size_t hash_value(const Rat &r)
{
	std::size_t h = 1469598103934665603ull;
	auto mix = [&h](const mpz_class &z) {
		h ^= static_cast<std::size_t>(mpz_fdiv_ui(z.get_mpz_t(), 0x7fffffffu));
		h *= 1099511628211ull;
	};
	mix(r.get_num());
	mix(r.get_den());
	return h;
}

} // namespace biflat
