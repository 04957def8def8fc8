#pragma once

#include <biflat/errors.hpp>
#include <biflat/rational.hpp>

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace biflat {

// A generator monomial: exponent of generator k sits in byte k.
// Towers never need more than 8 generators in practice (4 is the realistic
// maximum across the registered groups).
using GenPack = std::uint64_t;

inline constexpr int kMaxGenerators = 8;

inline int gen_exp(GenPack p, int k) { return int((p >> (8 * k)) & 0xff); }
inline GenPack with_gen_exp(GenPack p, int k, int e)
{
	return (p & ~(GenPack(0xff) << (8 * k))) | (GenPack(e & 0xff) << (8 * k));
}

class FieldTower;
using FieldPtr = std::shared_ptr<const FieldTower>;

// Exact scalar: rational vector over reduced generator monomials.
// field_ == nullptr means a plain rational (compatible with every tower).
class NfElem {
public:
	NfElem() = default;
	explicit NfElem(Rat r);
	NfElem(long n) : NfElem(Rat(n)) {}
	NfElem(FieldPtr field, std::map<GenPack, Rat> coords);

	static NfElem generator(const FieldPtr &field, int k);

	bool is_zero() const { return c_.empty(); }
	bool is_rational() const;
	bool is_one() const;
	// throws if not rational
	Rat rat_value() const;

	const FieldPtr &field() const { return field_; }
	const std::map<GenPack, Rat> &coords() const { return c_; }

	friend NfElem operator+(const NfElem &a, const NfElem &b);
	friend NfElem operator-(const NfElem &a, const NfElem &b);
	friend NfElem operator*(const NfElem &a, const NfElem &b);
	NfElem operator-() const;
	NfElem &operator+=(const NfElem &b) { return *this = *this + b; }
	NfElem &operator-=(const NfElem &b) { return *this = *this - b; }
	NfElem &operator*=(const NfElem &b) { return *this = *this * b; }

	friend bool operator==(const NfElem &a, const NfElem &b);
	friend bool operator!=(const NfElem &a, const NfElem &b)
	{
		return !(a == b);
	}

	NfElem pow(unsigned long e) const;

	// debugging form; user-facing rendering lives in exprparse
	std::string repr() const;

	std::size_t hash() const;

private:
	FieldPtr field_;
	std::map<GenPack, Rat> c_;

	friend class FieldTower;
};

NfElem inverse(const NfElem &a);
inline NfElem operator/(const NfElem &a, const NfElem &b)
{
	return a * inverse(b);
}
NfElem conjugate(const NfElem &a);

struct AlgebraicGenerator {
	std::string name;
	// monic, non-constant; coefficient k belongs to the subfield of earlier
	// generators; size() == degree + 1
	std::vector<NfElem> minpoly;
	std::optional<NfElem> conj_image;
	int degree() const { return int(minpoly.size()) - 1; }
};

class FieldTower : public std::enable_shared_from_this<FieldTower> {
public:
	static std::shared_ptr<FieldTower> make() /* the rationals */
	{
		return std::shared_ptr<FieldTower>(new FieldTower());
	}

	// minpoly coefficients may only use generators already present
	int add_generator(const std::string &name, std::vector<NfElem> minpoly);
	void set_conj_image(int k, NfElem img);

	// checks that the declared images define an involutive automorphism
	void validate_conjugation() const;

	int size() const { return int(gens_.size()); }
	const AlgebraicGenerator &gen(int k) const { return gens_.at(k); }
	std::optional<int> find(const std::string &name) const;

	// dimension of the tower as a Q-vector space
	long q_dimension() const;

private:
	FieldTower() = default;
	std::vector<AlgebraicGenerator> gens_;

	void reduce(std::map<GenPack, Rat> &c) const;
	static void add_term(std::map<GenPack, Rat> &c, GenPack p, const Rat &q);

	friend class NfElem;
	friend NfElem operator+(const NfElem &a, const NfElem &b);
	friend NfElem operator*(const NfElem &a, const NfElem &b);
	friend NfElem inverse(const NfElem &a);
	friend NfElem conjugate(const NfElem &a);
};

// true when a and b may be combined (equal towers or one side rational)
bool compatible(const NfElem &a, const NfElem &b);

} // namespace biflat
