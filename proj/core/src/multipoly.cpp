#include <biflat/multipoly.hpp>

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace biflat {

VarsPtr make_vars(std::vector<std::string> main_vars,
                  std::vector<std::string> params)
{
	auto t = std::make_shared<VarTable>();
	t->n_main = int(main_vars.size());
	t->names = std::move(main_vars);
	for (auto &p : params)
		t->names.push_back(std::move(p));
	if (t->size() > kMaxVars)
		throw ConfigError("too many variables");
	return t;
}

MultiPoly::MultiPoly(VarsPtr vars, NfElem c) : vars_(std::move(vars))
{
	if (!c.is_zero())
		terms_.emplace_back(Monomial::one(), std::move(c));
}

MultiPoly::MultiPoly(VarsPtr vars, std::vector<Term> terms)
    : vars_(std::move(vars)), terms_(std::move(terms))
{
	normalize();
}

MultiPoly MultiPoly::variable(const VarsPtr &vars, int idx, int exp)
{
	if (idx < 0 || idx >= vars->size())
		throw VariableMismatchError("variable index out of range");
	if (exp == 0)
		return MultiPoly(vars, NfElem(Rat(1)));
	std::vector<Term> t{{Monomial::var(idx, exp), NfElem(Rat(1))}};
	return MultiPoly(vars, std::move(t));
}

void MultiPoly::normalize()
{
	std::sort(terms_.begin(), terms_.end(),
	          [](const Term &a, const Term &b) { return b.first < a.first; });
	std::vector<Term> out;
	out.reserve(terms_.size());
	for (auto &t : terms_) {
		if (!out.empty() && out.back().first == t.first)
			out.back().second += t.second;
		else
			out.push_back(std::move(t));
		if (!out.empty() && out.back().second.is_zero())
			out.pop_back();
	}
	terms_ = std::move(out);
}

NfElem MultiPoly::constant_value() const
{
	if (terms_.empty())
		return NfElem();
	if (!is_constant())
		throw VariableMismatchError("polynomial is not constant: " + repr());
	return terms_[0].second;
}

const MultiPoly::Term &MultiPoly::leading() const
{
	if (terms_.empty())
		throw InternalError("leading term of zero polynomial");
	return terms_[0];
}

const VarsPtr &join_vars(const MultiPoly &a, const MultiPoly &b)
{
	if (a.vars() && b.vars() && a.vars() != b.vars())
		throw VariableMismatchError("polynomials over different variable sets");
	return a.vars() ? a.vars() : b.vars();
}

MultiPoly operator+(const MultiPoly &a, const MultiPoly &b)
{
	VarsPtr v = join_vars(a, b);
	// merge of two descending term lists
	std::vector<MultiPoly::Term> out;
	out.reserve(a.terms().size() + b.terms().size());
	auto ia = a.terms().begin(), ea = a.terms().end();
	auto ib = b.terms().begin(), eb = b.terms().end();
	while (ia != ea || ib != eb) {
		if (ib == eb || (ia != ea && ib->first < ia->first))
			out.push_back(*ia++);
		else if (ia == ea || ia->first < ib->first)
			out.push_back(*ib++);
		else {
			NfElem c = ia->second + ib->second;
			if (!c.is_zero())
				out.emplace_back(ia->first, std::move(c));
			++ia, ++ib;
		}
	}
	MultiPoly r;
	r.vars_ = std::move(v);
	r.terms_ = std::move(out);
	return r;
}

MultiPoly MultiPoly::operator-() const
{
	MultiPoly r = *this;
	for (auto &t : r.terms_)
		t.second = -t.second;
	return r;
}

MultiPoly operator-(const MultiPoly &a, const MultiPoly &b) { return a + (-b); }

MultiPoly operator*(const MultiPoly &a, const MultiPoly &b)
{
	VarsPtr v = join_vars(a, b);
	MultiPoly r;
	r.vars_ = std::move(v);
	if (a.is_zero() || b.is_zero())
		return r;
	std::unordered_map<Monomial, NfElem, MonHash> acc;
	acc.reserve(a.terms().size() * 2);
	for (const auto &[ma, ca] : a.terms())
		for (const auto &[mb, cb] : b.terms()) {
			Monomial m = ma * mb;
			auto it = acc.find(m);
			if (it == acc.end())
				acc.emplace(m, ca * cb);
			else
				it->second += ca * cb;
		}
	r.terms_.reserve(acc.size());
	for (auto &[m, c] : acc)
		if (!c.is_zero())
			r.terms_.emplace_back(m, std::move(c));
	std::sort(r.terms_.begin(), r.terms_.end(),
	          [](const auto &x, const auto &y) { return y.first < x.first; });
	return r;
}

MultiPoly operator*(const NfElem &c, const MultiPoly &a)
{
	if (c.is_zero())
		return MultiPoly(a.vars(), NfElem());
	MultiPoly r = a;
	for (auto &t : r.terms_)
		t.second *= c;
	return r;
}

bool operator==(const MultiPoly &a, const MultiPoly &b)
{
	if (a.vars() && b.vars() && a.vars() != b.vars())
		return false;
	return a.terms() == b.terms();
}

MultiPoly MultiPoly::pow(unsigned e) const
{
	MultiPoly r(vars_, NfElem(Rat(1)));
	MultiPoly base = *this;
	while (e) {
		if (e & 1)
			r = r * base;
		if (e >>= 1)
			base = base * base;
	}
	return r;
}

MultiPoly MultiPoly::derivative(int var) const
{
	std::vector<Term> out;
	out.reserve(terms_.size());
	for (const auto &[m, c] : terms_) {
		int e = m.e[var];
		if (e == 0)
			continue;
		Monomial m2 = m;
		m2.e[var] = std::uint16_t(e - 1);
		m2.deg -= 1;
		out.emplace_back(m2, NfElem(Rat(e)) * c);
	}
	// dropping one fixed exponent everywhere preserves the term order
	MultiPoly r;
	r.vars_ = vars_;
	r.terms_ = std::move(out);
	return r;
}

MultiPoly MultiPoly::substitute(const std::map<int, MultiPoly> &sub) const
{
	MultiPoly res;
	// power cache per substituted variable
	std::map<int, std::vector<MultiPoly>> pows;
	for (const auto &[m, c] : terms_) {
		MultiPoly term;
		bool first = true;
		Monomial rest;
		for (int i = 0; i < kMaxVars; i++) {
			if (m.e[i] == 0)
				continue;
			auto it = sub.find(i);
			if (it == sub.end()) {
				rest.e[i] = m.e[i];
				rest.deg += m.e[i];
				continue;
			}
			auto &cache = pows[i];
			if (cache.empty())
				cache.push_back(MultiPoly(it->second.vars(), NfElem(Rat(1))));
			while (int(cache.size()) <= m.e[i])
				cache.push_back(cache.back() * it->second);
			term = first ? cache[m.e[i]] : term * cache[m.e[i]];
			first = false;
		}
		MultiPoly base(vars_, std::vector<Term>{{rest, c}});
		res += first ? base : base * term;
	}
	return res;
}

NfElem MultiPoly::evaluate(std::span<const NfElem> point) const
{
	if (vars_ && int(point.size()) < vars_->size())
		throw VariableMismatchError("evaluation point has too few coordinates");
	NfElem acc;
	for (const auto &[m, c] : terms_) {
		NfElem t = c;
		for (int i = 0; i < kMaxVars; i++)
			if (m.e[i])
				t *= point[i].pow(m.e[i]);
		acc += t;
	}
	return acc;
}

MultiPoly MultiPoly::eval_main(std::span<const NfElem> main_point) const
{
	int nm = vars_ ? vars_->n_main : 0;
	if (int(main_point.size()) < nm)
		throw VariableMismatchError("point has too few coordinates");
	std::vector<Term> out;
	for (const auto &[m, c] : terms_) {
		NfElem t = c;
		Monomial rest = m;
		for (int i = 0; i < nm; i++)
			if (m.e[i]) {
				t *= main_point[i].pow(m.e[i]);
				rest.deg -= m.e[i];
				rest.e[i] = 0;
			}
		if (!t.is_zero())
			out.emplace_back(rest, std::move(t));
	}
	MultiPoly r(vars_, std::move(out));
	return r;
}

std::map<Monomial, MultiPoly> MultiPoly::group_by_main() const
{
	int nm = vars_ ? vars_->n_main : 0;
	std::map<Monomial, std::vector<Term>> buckets;
	for (const auto &[m, c] : terms_) {
		Monomial main, param;
		for (int i = 0; i < kMaxVars; i++) {
			if (i < nm) {
				main.e[i] = m.e[i];
				main.deg += m.e[i];
			} else {
				param.e[i] = m.e[i];
				param.deg += m.e[i];
			}
		}
		buckets[main].emplace_back(param, c);
	}
	std::map<Monomial, MultiPoly> out;
	for (auto &[m, ts] : buckets)
		out.emplace(m, MultiPoly(vars_, std::move(ts)));
	return out;
}

bool MultiPoly::depends_on(int var) const
{
	for (const auto &[m, c] : terms_)
		if (m.e[var])
			return true;
	return false;
}

bool MultiPoly::main_free() const
{
	int nm = vars_ ? vars_->n_main : 0;
	for (const auto &[m, c] : terms_)
		for (int i = 0; i < nm; i++)
			if (m.e[i])
				return false;
	return true;
}

std::optional<long> MultiPoly::isobaric_degree(std::span<const long> weights) const
{
	std::optional<long> deg;
	for (const auto &[m, c] : terms_) {
		long d = 0;
		for (int i = 0; i < int(weights.size()); i++)
			d += long(m.e[i]) * weights[i];
		if (deg && *deg != d)
			return std::nullopt;
		deg = d;
	}
	return deg ? deg : std::optional<long>(0);
}

NfElem MultiPoly::make_monic()
{
	if (terms_.empty())
		return NfElem(Rat(1));
	NfElem lead = terms_[0].second;
	NfElem inv = inverse(lead);
	for (auto &t : terms_)
		t.second *= inv;
	return lead;
}

std::optional<MultiPoly> exact_divide(const MultiPoly &a, const MultiPoly &b)
{
	if (b.is_zero())
		throw DivisionByZeroError("polynomial division by zero");
	VarsPtr v = join_vars(a, b);
	MultiPoly r = a;
	std::vector<MultiPoly::Term> q;
	NfElem lead_inv = inverse(b.leading().second);
	const Monomial &mb = b.leading().first;
	while (!r.is_zero()) {
		const auto &[mr, cr] = r.leading();
		if (!divides(mb, mr))
			return std::nullopt;
		Monomial m = mr / mb;
		NfElem c = cr * lead_inv;
		q.emplace_back(m, c);
		MultiPoly factor(v, std::vector<MultiPoly::Term>{{m, std::move(c)}});
		r = r - factor * b;
	}
	return MultiPoly(v, std::move(q));
}

std::string MultiPoly::repr() const
{
	if (terms_.empty())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (const auto &[m, c] : terms_) {
		if (!first)
			os << " + ";
		first = false;
		os << "(" << c.repr() << ")";
		for (int i = 0; i < kMaxVars; i++)
			if (m.e[i]) {
				os << "*" << (vars_ ? vars_->names[i] : "x" + std::to_string(i));
				if (m.e[i] > 1)
					os << "^" << m.e[i];
			}
	}
	return os.str();
}

std::size_t MultiPoly::hash() const
{
	std::size_t h = 0x9e3779b97f4a7c15ull;
	for (const auto &[m, c] : terms_) {
		h ^= m.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
		h ^= c.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
	}
	return h;
}

} // namespace biflat
