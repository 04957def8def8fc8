#include <biflat/numberfield.hpp>

#include <algorithm>
#include <sstream>

namespace biflat {

NfElem::NfElem(Rat r)
{
	r.canonicalize();
	if (sgn(r) != 0)
		c_.emplace(GenPack(0), std::move(r));
}

NfElem::NfElem(FieldPtr field, std::map<GenPack, Rat> coords)
    : field_(std::move(field)), c_(std::move(coords))
{
	for (auto it = c_.begin(); it != c_.end();)
		it = sgn(it->second) == 0 ? c_.erase(it) : std::next(it);
	if (field_)
		field_->reduce(c_);
	if (c_.empty())
		field_.reset();
	else if (c_.size() == 1 && c_.begin()->first == 0)
		field_.reset();
	else if (!field_)
		throw FieldMismatchError("generator monomials without a field tower");
}

NfElem NfElem::generator(const FieldPtr &field, int k)
{
	if (!field || k < 0 || k >= field->size())
		throw ConfigError("no such generator");
	std::map<GenPack, Rat> c;
	c.emplace(with_gen_exp(0, k, 1), Rat(1));
	return NfElem(field, std::move(c));
}

bool NfElem::is_rational() const
{
	return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0);
}

bool NfElem::is_one() const
{
	return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second == 1;
}

Rat NfElem::rat_value() const
{
	if (c_.empty())
		return Rat(0);
	if (!is_rational())
		throw FieldMismatchError("element is not rational: " + repr());
	return c_.begin()->second;
}

bool compatible(const NfElem &a, const NfElem &b)
{
	return !a.field() || !b.field() || a.field() == b.field();
}

static const FieldPtr &join_field(const NfElem &a, const NfElem &b)
{
	if (!compatible(a, b))
		throw FieldMismatchError("elements of different field towers");
	return a.field() ? a.field() : b.field();
}

NfElem operator+(const NfElem &a, const NfElem &b)
{
	FieldPtr f = join_field(a, b);
	std::map<GenPack, Rat> c = a.c_;
	for (const auto &[p, q] : b.c_)
		FieldTower::add_term(c, p, q);
	if (c.empty())
		return NfElem();
	return NfElem(std::move(f), std::move(c));
}

NfElem operator-(const NfElem &a, const NfElem &b) { return a + (-b); }

NfElem NfElem::operator-() const
{
	NfElem r = *this;
	for (auto &[p, q] : r.c_)
		q = -q;
	return r;
}

NfElem operator*(const NfElem &a, const NfElem &b)
{
	if (a.is_zero() || b.is_zero())
		return NfElem();
	FieldPtr f = join_field(a, b);
	std::map<GenPack, Rat> c;
	for (const auto &[pa, qa] : a.c_)
		for (const auto &[pb, qb] : b.c_)
			FieldTower::add_term(c, pa + pb, qa * qb);
	return NfElem(std::move(f), std::move(c));
}

bool operator==(const NfElem &a, const NfElem &b)
{
	if (!compatible(a, b))
		return false;
	return a.c_ == b.c_;
}

NfElem NfElem::pow(unsigned long e) const
{
	NfElem r(Rat(1));
	NfElem base = *this;
	while (e) {
		if (e & 1)
			r = r * base;
		base = base * base;
		e >>= 1;
	}
	return r;
}

std::string NfElem::repr() const
{
	if (c_.empty())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (const auto &[p, q] : c_) {
		if (!first)
			os << " + ";
		first = false;
		os << to_string(q);
		for (int k = 0; k < kMaxGenerators; k++)
			if (int e = gen_exp(p, k); e > 0) {
				os << "*" << (field_ ? field_->gen(k).name : "?");
				if (e > 1)
					os << "^" << e;
			}
	}
	return os.str();
}

std::size_t NfElem::hash() const
{
	std::size_t h = 14695981039346656037ull;
	for (const auto &[p, q] : c_) {
		h ^= std::hash<GenPack>()(p);
		h *= 1099511628211ull;
		h ^= hash_value(q);
		h *= 1099511628211ull;
	}
	return h;
}

// ---------------------------------------------------------------------------

void FieldTower::add_term(std::map<GenPack, Rat> &c, GenPack p, const Rat &q)
{
	auto it = c.find(p);
	if (it == c.end()) {
		if (sgn(q) != 0)
			c.emplace(p, q);
		return;
	}
	it->second += q;
	if (is_zero(it->second))
		c.erase(it);
}

void FieldTower::reduce(std::map<GenPack, Rat> &c) const
{
	for (;;) {
		// find a monomial with an overflowing exponent, top generator first
		int k = -1;
		GenPack pack = 0;
		for (int g = int(gens_.size()) - 1; g >= 0 && k < 0; g--)
			for (const auto &[p, q] : c)
				if (gen_exp(p, g) >= gens_[g].degree()) {
					k = g;
					pack = p;
					break;
				}
		if (k < 0)
			return;

		Rat q = c.at(pack);
		c.erase(pack);
		const auto &gen = gens_[k];
		int d = gen.degree();
		GenPack base = with_gen_exp(pack, k, gen_exp(pack, k) - d);
		// x_k^d = -(c_{d-1} x^{d-1} + ... + c_0)
		for (int j = 0; j < d; j++) {
			const NfElem &cj = gen.minpoly[j];
			for (const auto &[pc, qc] : cj.c_) {
				GenPack p2 = base + pc + with_gen_exp(0, k, j);
				add_term(c, p2, -(q * qc));
			}
		}
	}
}

int FieldTower::add_generator(const std::string &name,
                              std::vector<NfElem> minpoly)
{
	if (int(gens_.size()) >= kMaxGenerators)
		throw ConfigError("too many generators in field tower");
	if (minpoly.size() < 2)
		throw ConfigError("minimal polynomial of " + name +
		                  " must be non-constant");
	if (!minpoly.back().is_one())
		throw ConfigError("minimal polynomial of " + name + " must be monic");
	for (const auto &c : minpoly)
		for (const auto &[p, q] : c.c_)
			if (gen_exp(p, int(gens_.size())) != 0)
				throw ConfigError("minimal polynomial of " + name +
				                  " uses later generators");
	if (find(name))
		throw ConfigError("duplicate generator " + name);
	gens_.push_back(AlgebraicGenerator{name, std::move(minpoly), {}});
	return int(gens_.size()) - 1;
}

void FieldTower::set_conj_image(int k, NfElem img)
{
	gens_.at(k).conj_image = std::move(img);
}

std::optional<int> FieldTower::find(const std::string &name) const
{
	for (int k = 0; k < int(gens_.size()); k++)
		if (gens_[k].name == name)
			return k;
	return std::nullopt;
}

long FieldTower::q_dimension() const
{
	long d = 1;
	for (const auto &g : gens_)
		d *= g.degree();
	return d;
}

void FieldTower::validate_conjugation() const
{
	for (int k = 0; k < int(gens_.size()); k++) {
		const auto &g = gens_[k];
		if (!g.conj_image)
			continue;
		// conj must map each root of the minimal polynomial to a root of the
		// conjugated minimal polynomial
		NfElem acc;
		NfElem pw(Rat(1));
		for (int j = 0; j <= g.degree(); j++) {
			acc += conjugate(g.minpoly[j]) * pw;
			if (j < g.degree())
				pw = pw * *g.conj_image;
		}
		if (!acc.is_zero())
			throw ConfigError("conjugation image of " + g.name +
			                  " is not a root of the conjugated minimal "
			                  "polynomial");
		if (conjugate(*g.conj_image) != NfElem::generator(shared_from_this(), k))
			throw ConfigError("conjugation is not an involution on " + g.name);
	}
}

// ---------------------------------------------------------------------------
// inversion: extended Euclid in the top generator, recursing into subfields

namespace {

using Poly = std::vector<NfElem>; // dense, coefficients avoid generator >= lvl

void trim(Poly &p)
{
	while (!p.empty() && p.back().is_zero())
		p.pop_back();
}

NfElem inv_level(const NfElem &a, int level);

// divide a by b (b nonzero), coefficients restricted below `level`
std::pair<Poly, Poly> poldiv(Poly a, const Poly &b, int level)
{
	NfElem lead_inv = inv_level(b.back(), level);
	Poly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0);
	while (a.size() >= b.size()) {
		NfElem f = a.back() * lead_inv;
		int shift = int(a.size() - b.size());
		q[shift] = f;
		for (int i = 0; i < int(b.size()); i++)
			a[i + shift] -= f * b[i];
		trim(a);
	}
	trim(q);
	return {std::move(q), std::move(a)};
}

NfElem inv_level(const NfElem &a, int level)
{
	if (a.is_zero())
		throw DivisionByZeroError("division by zero in field tower");
	if (level == 0 || a.is_rational()) {
		if (!a.is_rational())
			throw InternalError("non-rational element at tower bottom");
		return NfElem(Rat(1) / a.rat_value());
	}
	const FieldPtr &f = a.field();
	int k = level - 1;
	const auto &gen = f->gen(k);
	int d = gen.degree();

	// split into a dense polynomial in generator k
	Poly av(d);
	for (const auto &[p, q] : a.coords()) {
		int e = gen_exp(p, k);
		std::map<GenPack, Rat> c{{with_gen_exp(p, k, 0), q}};
		av[e] += NfElem(f, std::move(c));
	}
	trim(av);
	if (av.size() <= 1)
		return inv_level(av.empty() ? NfElem() : av[0], level - 1);

	Poly r0 = gen.minpoly, r1 = av;
	Poly s0, s1{NfElem(Rat(1))};
	while (r1.size() > 1) {
		auto [q, r2] = poldiv(r0, r1, level - 1);
		// s2 = s0 - q*s1
		Poly s2 = s0;
		s2.resize(std::max(s2.size(), q.size() + s1.size()));
		for (int i = 0; i < int(q.size()); i++)
			for (int j = 0; j < int(s1.size()); j++)
				s2[i + j] -= q[i] * s1[j];
		trim(s2);
		r0 = std::move(r1);
		r1 = std::move(r2);
		s0 = std::move(s1);
		s1 = std::move(s2);
	}
	if (r1.empty())
		throw ConfigError("minimal polynomial of " + gen.name +
		                  " is not irreducible over its subfield");
	NfElem c_inv = inv_level(r1[0], level - 1);
	// result = s1 * c_inv, reassembled as an element
	NfElem res;
	NfElem xk = NfElem::generator(f, k);
	NfElem pw(Rat(1));
	for (int i = 0; i < int(s1.size()); i++) {
		res += s1[i] * c_inv * pw;
		if (i + 1 < int(s1.size()))
			pw = pw * xk;
	}
	return res;
}

} // namespace

NfElem inverse(const NfElem &a)
{
	if (a.is_zero())
		throw DivisionByZeroError("division by zero");
	if (a.is_rational())
		return NfElem(Rat(1) / a.rat_value());
	return inv_level(a, a.field()->size());
}

NfElem conjugate(const NfElem &a)
{
	if (a.is_rational())
		return a;
	const FieldPtr &f = a.field();
	NfElem res;
	for (const auto &[p, q] : a.coords()) {
		NfElem term{Rat(q)};
		for (int k = 0; k < f->size(); k++)
			if (int e = gen_exp(p, k); e > 0) {
				const auto &img = f->gen(k).conj_image;
				if (!img)
					throw ConfigError("generator " + f->gen(k).name +
					                  " has no declared conjugation image");
				term = term * img->pow(e);
			}
		res += term;
	}
	return res;
}

} // namespace biflat
