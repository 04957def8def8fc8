#pragma once

#include <biflat/numberfield.hpp>

#include <cstring>
#include <functional>
#include <optional>
#include <span>

namespace biflat {

inline constexpr int kMaxVars = 16;

// Variable table: a leading block of coordinate variables ("main", e.g.
// p1..pn or u1..un) followed by parameter symbols (ansatz constants, the
// family parameter lambda). Shared by all polynomials of one computation.
struct VarTable {
	std::vector<std::string> names;
	int n_main = 0;

	std::optional<int> index(const std::string &name) const
	{
		for (int i = 0; i < int(names.size()); i++)
			if (names[i] == name)
				return i;
		return std::nullopt;
	}
	int size() const { return int(names.size()); }
};
using VarsPtr = std::shared_ptr<const VarTable>;

VarsPtr make_vars(std::vector<std::string> main_vars,
                  std::vector<std::string> params = {});

struct Monomial {
	std::array<std::uint16_t, kMaxVars> e{};
	std::uint32_t deg = 0;

	static Monomial one() { return {}; }
	static Monomial var(int i, int exp = 1)
	{
		Monomial m;
		m.e[i] = std::uint16_t(exp);
		m.deg = exp;
		return m;
	}
	friend Monomial operator*(const Monomial &a, const Monomial &b)
	{
		Monomial r;
		for (int i = 0; i < kMaxVars; i++)
			r.e[i] = std::uint16_t(a.e[i] + b.e[i]);
		r.deg = a.deg + b.deg;
		return r;
	}
	// divides: b | a
	friend bool divides(const Monomial &b, const Monomial &a)
	{
		for (int i = 0; i < kMaxVars; i++)
			if (b.e[i] > a.e[i])
				return false;
		return true;
	}
	friend Monomial operator/(const Monomial &a, const Monomial &b)
	{
		Monomial r;
		for (int i = 0; i < kMaxVars; i++)
			r.e[i] = std::uint16_t(a.e[i] - b.e[i]);
		r.deg = a.deg - b.deg;
		return r;
	}
	friend bool operator==(const Monomial &a, const Monomial &b)
	{
		return a.deg == b.deg && a.e == b.e;
	}
	// graded lexicographic
	friend bool operator<(const Monomial &a, const Monomial &b)
	{
		if (a.deg != b.deg)
			return a.deg < b.deg;
		for (int i = 0; i < kMaxVars; i++)
			if (a.e[i] != b.e[i])
				return a.e[i] < b.e[i];
		return false;
	}
	std::size_t hash() const
	{
		std::size_t h = 1469598103934665603ull;
		for (int i = 0; i < kMaxVars; i++) {
			h ^= a_shift(e[i], i);
			h *= 1099511628211ull;
		}
		return h;
	}

private:
	static std::size_t a_shift(std::uint16_t v, int i)
	{
		return (std::size_t(v) << (i & 7)) + i;
	}
};

struct MonHash {
	std::size_t operator()(const Monomial &m) const { return m.hash(); }
};

// Sparse polynomial over a number field; terms sorted descending graded-lex.
class MultiPoly {
public:
	using Term = std::pair<Monomial, NfElem>;

	MultiPoly() = default;
	MultiPoly(VarsPtr vars, NfElem c);
	MultiPoly(VarsPtr vars, std::vector<Term> terms); // normalizes

	static MultiPoly variable(const VarsPtr &vars, int idx, int exp = 1);

	bool is_zero() const { return terms_.empty(); }
	bool is_constant() const
	{
		return terms_.empty() || (terms_.size() == 1 && terms_[0].first.deg == 0);
	}
	NfElem constant_value() const;
	const VarsPtr &vars() const { return vars_; }
	const std::vector<Term> &terms() const { return terms_; }
	int n_terms() const { return int(terms_.size()); }
	std::uint32_t total_degree() const
	{
		return terms_.empty() ? 0 : terms_[0].first.deg;
	}
	const Term &leading() const;

	friend MultiPoly operator+(const MultiPoly &a, const MultiPoly &b);
	friend MultiPoly operator-(const MultiPoly &a, const MultiPoly &b);
	friend MultiPoly operator*(const MultiPoly &a, const MultiPoly &b);
	MultiPoly operator-() const;
	MultiPoly &operator+=(const MultiPoly &b) { return *this = *this + b; }
	MultiPoly &operator-=(const MultiPoly &b) { return *this = *this - b; }
	MultiPoly &operator*=(const MultiPoly &b) { return *this = *this * b; }
	friend MultiPoly operator*(const NfElem &c, const MultiPoly &a);
	friend bool operator==(const MultiPoly &a, const MultiPoly &b);
	friend bool operator!=(const MultiPoly &a, const MultiPoly &b)
	{
		return !(a == b);
	}

	MultiPoly pow(unsigned e) const;
	MultiPoly derivative(int var) const;
	// substitute variables simultaneously; vars not in the map stay
	MultiPoly substitute(const std::map<int, MultiPoly> &sub) const;

	NfElem evaluate(std::span<const NfElem> point) const;
	// bind the main variables only; the result lives on the same table with
	// vanishing main exponents (a polynomial in the parameters)
	MultiPoly eval_main(std::span<const NfElem> main_point) const;

	// coefficient of the given main-part monomial, as a parameter polynomial
	std::map<Monomial, MultiPoly> group_by_main() const;

	bool depends_on(int var) const;
	bool main_free() const; // no main variable appears

	// weighted degree over the main variables; nullopt when not isobaric
	std::optional<long> isobaric_degree(std::span<const long> weights) const;

	// leading-coefficient-one form; returns the former leading coefficient
	NfElem make_monic();

	std::string repr() const; // debug only

	std::size_t hash() const;

private:
	VarsPtr vars_;
	std::vector<Term> terms_;

	void normalize();
};

// exact division; nullopt when b does not divide a
std::optional<MultiPoly> exact_divide(const MultiPoly &a, const MultiPoly &b);

const VarsPtr &join_vars(const MultiPoly &a, const MultiPoly &b);

} // namespace biflat
