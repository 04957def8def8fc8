#include <biflat/constsolver.hpp>

#include <biflat/exprparse.hpp>

#include <algorithm>
#include <set>

namespace biflat {

void ConditionSystem::add(MultiPoly eq)
{
	if (!eq.is_zero())
		equations.push_back(std::move(eq));
}

void ConditionSystem::add_all(std::vector<MultiPoly> eqs)
{
	for (auto &e : eqs)
		add(std::move(e));
}

void ConditionSystem::dedupe()
{
	std::set<std::size_t> seen;
	std::vector<MultiPoly> out;
	for (auto &e : equations) {
		if (e.is_zero())
			continue;
		MultiPoly m = e;
		m.make_monic();
		if (seen.insert(m.hash()).second)
			out.push_back(std::move(m));
	}
	equations = std::move(out);
}

namespace {

// dense univariate view of a main-free polynomial in variable `var`;
// fails when any other unknown appears
std::optional<std::vector<NfElem>>
univariate_in(const MultiPoly &p, int var, const std::vector<int> &unknowns)
{
	std::vector<NfElem> coeffs;
	for (const auto &[m, c] : p.terms()) {
		for (int u : unknowns)
			if (u != var && m.e[u])
				return std::nullopt;
		int e = m.e[var];
		if (int(coeffs.size()) <= e)
			coeffs.resize(e + 1);
		coeffs[e] += c;
	}
	while (!coeffs.empty() && coeffs.back().is_zero())
		coeffs.pop_back();
	return coeffs;
}

void trimv(std::vector<NfElem> &p)
{
	while (!p.empty() && p.back().is_zero())
		p.pop_back();
}

std::vector<NfElem> poly_mod(std::vector<NfElem> a,
                             const std::vector<NfElem> &b)
{
	NfElem lead = inverse(b.back());
	while (a.size() >= b.size()) {
		NfElem f = a.back() * lead;
		std::size_t shift = a.size() - b.size();
		for (std::size_t i = 0; i < b.size(); i++)
			a[i + shift] -= f * b[i];
		trimv(a);
		if (a.empty())
			break;
	}
	return a;
}

std::vector<NfElem> poly_gcd(std::vector<NfElem> a, std::vector<NfElem> b)
{
	trimv(a);
	trimv(b);
	while (!b.empty()) {
		auto r = poly_mod(a, b);
		a = std::move(b);
		b = std::move(r);
	}
	if (!a.empty()) {
		NfElem lead = inverse(a.back());
		for (auto &c : a)
			c *= lead;
	}
	return a;
}

std::vector<NfElem> poly_derivative(const std::vector<NfElem> &a)
{
	std::vector<NfElem> d;
	for (std::size_t i = 1; i < a.size(); i++)
		d.push_back(NfElem(Rat(long(i))) * a[i]);
	trimv(d);
	return d;
}

} // namespace

SolutionSet solve_constants(const ConditionSystem &sys0)
{
	ConditionSystem sys = sys0;
	sys.dedupe();
	std::vector<int> unknown_vars;
	for (const auto &u : sys.unknowns)
		unknown_vars.push_back(*sys.vars->index(u));

	SolutionSet sol;
	std::map<int, MultiPoly> assigned; // var index -> expression

	auto substitute_all = [&](const std::map<int, MultiPoly> &sub) {
		for (auto &e : sys.equations)
			e = e.substitute(sub);
		for (auto &[v, expr] : assigned)
			expr = expr.substitute(sub);
		sys.dedupe();
	};

	bool progress = true;
	while (progress) {
		progress = false;
		// constant inconsistency
		for (const auto &e : sys.equations)
			if (e.is_constant() && !e.is_zero()) {
				sol.kind = SolutionSet::Kind::Empty;
				return sol;
			}

		// equations linear in some unassigned unknown with constant leading
		// coefficient: x = -B / A; prefer eliminating later unknowns so the
		// leading constant stays as the free family parameter
		std::vector<int> preference(unknown_vars.rbegin(),
		                            unknown_vars.rend());
		for (const auto &e : sys.equations) {
			int found_var = -1;
			MultiPoly a_coeff, b_part;
			for (int v : preference) {
				if (assigned.count(v) || !e.depends_on(v))
					continue;
				// split e = A*x + B with A free of x
				std::vector<MultiPoly::Term> at, bt;
				bool linear = true;
				for (const auto &[m, c] : e.terms()) {
					if (m.e[v] == 0)
						bt.emplace_back(m, c);
					else if (m.e[v] == 1) {
						Monomial m2 = m;
						m2.e[v] = 0;
						m2.deg -= 1;
						at.emplace_back(m2, c);
					} else {
						linear = false;
						break;
					}
				}
				if (!linear)
					continue;
				MultiPoly a(e.vars(), std::move(at));
				if (!a.is_constant() || a.is_zero())
					continue;
				found_var = v;
				a_coeff = std::move(a);
				b_part = MultiPoly(e.vars(), std::move(bt));
				break;
			}
			if (found_var >= 0) {
				NfElem inv_a = inverse(a_coeff.constant_value());
				MultiPoly expr = (-inv_a) * b_part;
				std::map<int, MultiPoly> sub{{found_var, expr}};
				assigned.emplace(found_var, std::move(expr));
				substitute_all(sub);
				progress = true;
				break;
			}
		}
		if (progress)
			continue;

		// univariate subsystems: reduce by gcd, then square-free part
		for (int v : unknown_vars) {
			if (assigned.count(v))
				continue;
			std::vector<std::vector<NfElem>> uni;
			for (const auto &e : sys.equations)
				if (e.depends_on(v))
					if (auto u = univariate_in(e, v, unknown_vars))
						uni.push_back(std::move(*u));
			if (uni.empty())
				continue;
			std::vector<NfElem> g = uni[0];
			for (std::size_t i = 1; i + 0 < uni.size(); i++)
				g = poly_gcd(std::move(g), uni[i]);
			if (g.empty())
				continue;
			if (g.size() == 1) { // nonzero constant: inconsistent
				sol.kind = SolutionSet::Kind::Empty;
				return sol;
			}
			if (g.size() > 2) {
				auto sf = poly_gcd(g, poly_derivative(g));
				if (sf.size() > 1) {
					// divide out the repeated part
					std::vector<NfElem> q;
					std::vector<NfElem> r = g;
					NfElem lead = inverse(sf.back());
					while (r.size() >= sf.size()) {
						NfElem f = r.back() * lead;
						std::size_t shift = r.size() - sf.size();
						if (q.size() < shift + 1)
							q.resize(shift + 1);
						q[shift] = f;
						for (std::size_t i = 0; i < sf.size(); i++)
							r[i + shift] -= f * sf[i];
						trimv(r);
					}
					if (r.empty())
						g = q;
				}
			}
			if (g.size() == 2) {
				// x = -g0 / g1
				NfElem root = -(g[0] * inverse(g[1]));
				MultiPoly expr(sys.vars, root);
				std::map<int, MultiPoly> sub{{v, expr}};
				assigned.emplace(v, std::move(expr));
				substitute_all(sub);
				progress = true;
				break;
			}
		}
	}

	if (!sys.equations.empty()) {
		sol.kind = SolutionSet::Kind::Unresolved;
		sol.residual = sys.equations;
	} else
		sol.kind = SolutionSet::Kind::Solved;
	for (std::size_t i = 0; i < sys.unknowns.size(); i++) {
		int v = unknown_vars[i];
		auto it = assigned.find(v);
		if (it != assigned.end())
			sol.assignments.emplace(sys.unknowns[i], it->second);
		else
			sol.free_unknowns.push_back(sys.unknowns[i]);
	}
	return sol;
}

VerifyOutcome verify_constants(const ConditionSystem &sys,
                               const std::map<std::string, NfElem> &values)
{
	for (const auto &u : sys.unknowns)
		if (!values.count(u))
			throw ConfigError("verify_constants: no value for " + u);
	std::map<int, MultiPoly> sub;
	for (const auto &[name, v] : values)
		if (auto idx = sys.vars->index(name))
			sub.emplace(*idx, MultiPoly(sys.vars, v));
	VerifyOutcome out;
	out.pass = true;
	for (const auto &e : sys.equations) {
		MultiPoly r = e.substitute(sub);
		if (!r.is_zero()) {
			out.pass = false;
			out.witness = render_expression(e) + " = " +
			              render_expression(r) + " != 0";
			return out;
		}
	}
	return out;
}

} // namespace biflat
