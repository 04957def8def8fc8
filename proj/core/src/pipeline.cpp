#include <biflat/pipeline.hpp>

#include <biflat/exprparse.hpp>

#include <algorithm>
#include <set>

namespace biflat {

Mode mode_from_string(const std::string &s)
{
	if (s == "standard")
		return Mode::Standard;
	if (s == "family")
		return Mode::Family;
	if (s == "pencil")
		return Mode::Pencil;
	if (s == "dunkl")
		return Mode::Dunkl;
	if (s == "wdvv")
		return Mode::Wdvv;
	if (s == "sample-flatness")
		return Mode::SampleFlatness;
	if (s == "all")
		return Mode::All;
	throw ConfigError("unknown mode " + s);
}

std::string to_string(Mode m)
{
	switch (m) {
	case Mode::Standard: return "standard";
	case Mode::Family: return "family";
	case Mode::Pencil: return "pencil";
	case Mode::Dunkl: return "dunkl";
	case Mode::Wdvv: return "wdvv";
	case Mode::SampleFlatness: return "sample-flatness";
	case Mode::All: return "all";
	}
	return "?";
}

// ---------------------------------------------------------------------------
// sampling

PointSampler::PointSampler(const GroupSpec &g, unsigned long seed)
    : g_(g), rng_(seed)
{}

std::vector<NfElem> PointSampler::next(std::span<const MultiPoly> u)
{
	std::uniform_int_distribution<int> num(-40, 40);
	std::uniform_int_distribution<int> den(1, 9);
	int n = g_.rank;
	std::vector<NfElem> zero_params(g_.pvars->size(), NfElem());
	for (int attempt = 0; attempt < 1000; attempt++) {
		std::vector<NfElem> pt;
		bool ok = true;
		for (int i = 0; i < n; i++) {
			int a = num(rng_);
			if (a == 0)
				a = 1 + i;
			pt.push_back(NfElem(Rat(a, den(rng_))));
		}
		// stay off every mirror
		for (const auto &m : g_.mirrors) {
			NfElem ax;
			for (int i = 0; i < n; i++)
				ax += m.covector[i] * pt[i];
			if (ax.is_zero()) {
				ok = false;
				break;
			}
		}
		if (!ok)
			continue;
		// det J must not vanish (it is constant-independent; bind c = 0)
		std::vector<NfElem> full = pt;
		full.resize(g_.pvars->size());
		Mat<NfElem> j(n, n);
		for (int l = 0; l < n; l++)
			for (int c = 0; c < n; c++)
				j(l, c) = u[l].derivative(c).evaluate(full);
		if (determinant(j).is_zero())
			continue;
		return pt;
	}
	throw InternalError("could not sample a generic point");
}

// ---------------------------------------------------------------------------
// small helpers

namespace {

std::map<std::string, NfElem> reported_values(const GroupSpec &g)
{
	std::map<std::string, NfElem> out;
	ExprContext ctx = g.ccontext();
	for (const auto &[k, v] : g.reported.constants)
		out.emplace(k, parse_constant(v, ctx));
	return out;
}

std::vector<NfElem> ordered_values(const GroupSpec &g,
                                   const std::map<std::string, NfElem> &vals)
{
	std::vector<NfElem> out;
	for (const auto &c : g.constants)
		out.push_back(vals.at(c));
	return out;
}

std::vector<MultiPoly> bound_ansatz(const GroupSpec &g,
                                    std::span<const NfElem> values)
{
	std::vector<MultiPoly> u;
	for (const auto &p : g.ansatz)
		u.push_back(g.bind_constants(p, values));
	return u;
}

// rebuild a main-variable-free polynomial on another table with the same
// parameter block
MultiPoly retable(const MultiPoly &p, const VarsPtr &to)
{
	std::vector<MultiPoly::Term> terms = p.terms();
	return MultiPoly(to, std::move(terms));
}

RatFun retable(const RatFun &f, const VarsPtr &to)
{
	std::vector<RatFun::Factor> den;
	for (const auto &fac : f.den())
		den.push_back(RatFun::Factor{retable(fac.poly, to), fac.power});
	return RatFun(retable(f.num(), to), std::move(den));
}

// compose a u-chart polynomial with p-chart values for the main variables
MultiPoly compose_main(const MultiPoly &p, std::span<const MultiPoly> values,
                       const VarsPtr &to)
{
	MultiPoly res(to, NfElem());
	std::vector<std::vector<MultiPoly>> pows(values.size());
	for (const auto &[m, c] : p.terms()) {
		MultiPoly term(to, c);
		Monomial rest;
		int nm = p.vars()->n_main;
		for (int i = nm; i < kMaxVars; i++) {
			rest.e[i] = m.e[i];
			rest.deg += m.e[i];
		}
		term *= MultiPoly(to, std::vector<MultiPoly::Term>{
		                          {rest, NfElem(Rat(1))}});
		for (int i = 0; i < nm; i++) {
			if (!m.e[i])
				continue;
			auto &cache = pows[i];
			if (cache.empty())
				cache.push_back(MultiPoly(to, NfElem(Rat(1))));
			while (int(cache.size()) <= m.e[i])
				cache.push_back(cache.back() * values[i]);
			term *= cache[m.e[i]];
		}
		res += term;
	}
	return res;
}

std::string fmt_const(const NfElem &c) { return render_constant(c, nullptr); }

Ten3<SymScalar> negate(const Ten3<SymScalar> &t)
{
	Ten3<SymScalar> r(t.n);
	for (std::size_t i = 0; i < t.a.size(); i++)
		r.a[i] = -t.a[i];
	return r;
}
Ten3<JetScalar> negate(const Ten3<JetScalar> &t)
{
	Ten3<JetScalar> r(t.n);
	for (std::size_t i = 0; i < t.a.size(); i++)
		r.a[i] = -t.a[i];
	return r;
}

bool is_heavy(const GroupSpec &g)
{
	return g.name == "G27" || g.name == "G33";
}

bool dk_identity_symbolic(const GroupSpec &g)
{
	static const std::set<std::string> s{"G4",  "G5",  "G6", "G8",
	                                     "G24", "G25", "G26"};
	return g.rank <= 2 ? s.count(g.name) > 0 : s.count(g.name) > 0 ||
	                                               g.name == "A3";
}

bool product_checks_symbolic(const GroupSpec &g)
{
	// the natural product needs (e*)^{-1}; affordable symbolically for rank 2
	// and the small rank-3 charts
	return g.rank <= 2 || g.name == "A3" || g.name == "G23";
}

std::vector<NfElem> family_weight_elems(const GroupSpec &g)
{
	std::vector<NfElem> w;
	for (const auto &q : g.reported.family_weights)
		w.push_back(NfElem(q));
	return w;
}

MultiPoly parse_lambda(const GroupSpec &g)
{
	if (!g.reported.family_lambda)
		throw ConfigError(g.name + ": no reported family lambda");
	return parse_expression(*g.reported.family_lambda, g.ccontext());
}

// family constraint substitution c_j -> polynomial in the free constant
std::map<int, MultiPoly> family_substitution(const GroupSpec &g)
{
	std::map<int, MultiPoly> sub;
	ExprContext ctx = g.ccontext();
	for (const auto &[name, expr] : g.reported.family_constraints) {
		auto idx = g.pvars->index(name);
		if (!idx)
			throw ConfigError(g.name + ": unknown family constraint " + name);
		sub.emplace(*idx, parse_expression(expr, ctx));
	}
	return sub;
}

} // namespace

// ---------------------------------------------------------------------------
// potential extraction by undetermined coefficients at sample points

namespace {

std::vector<Monomial> potential_monomials(const GroupSpec &g, int index)
{
	std::vector<Monomial> out;
	long target = g.degrees[index] + g.degrees[g.rank - 1];
	Monomial cur;
	auto rec = [&](auto &&self, int i, long rem) -> void {
		if (i == g.rank) {
			if (rem == 0)
				out.push_back(cur);
			return;
		}
		for (int e = 0; e * g.degrees[i] <= rem; e++) {
			cur.e[i] = std::uint16_t(e);
			cur.deg += e;
			self(self, i + 1, rem - e * g.degrees[i]);
			cur.deg -= e;
		}
		cur.e[i] = 0;
	};
	rec(rec, 0, target);
	return out;
}

struct ProductSample {
	std::vector<RatFun> u_vals;  // invariants at the point (parameter polys)
	Ten3<RatFun> cu;             // u-chart structure constants at the point
};

// evaluate the natural product in the u-chart at one point; the product may
// come from the invariant formula (standard) or the Dunkl-Kohno sum (family)
ProductSample sample_product(const GroupSpec &g, const ChartDerivs &cd,
                             std::span<const MultiPoly> u,
                             std::span<const NfElem> pt, bool dunkl_side,
                             std::span<const NfElem> dk_weights)
{
	Frame<JetScalar> f = jet_frame(g, cd, pt);
	Product<JetScalar> cstar =
	    dunkl_side ? dk_product(f, Arrangement::of(g), dk_weights)
	               : cstar_from_frame(f);
	std::vector<JetScalar> e = unit_field_p(f);
	Product<JetScalar> ctil =
	    natural_from_dual(cstar.c, e, f.coords, f.one);
	Ten3<JetScalar> cu = push_tensor(ctil.c, f.J, f.Jinv);
	ProductSample s;
	s.cu = Ten3<RatFun>(g.rank);
	for (std::size_t i = 0; i < cu.a.size(); i++)
		s.cu.a[i] = cu.a[i].v;
	for (const auto &ui : u)
		s.u_vals.push_back(RatFun(ui.eval_main(pt)));
	return s;
}

} // namespace

std::vector<MultiPoly> potential_from_samples(
    const GroupSpec &g, std::span<const MultiPoly> u,
    const std::vector<NfElem> &dk_weights, bool dunkl_side, int points,
    unsigned long seed)
{
	ChartDerivs cd = chart_derivs(u, g.rank);
	PointSampler sampler(g, seed);
	std::vector<ProductSample> samples;
	for (int q = 0; q < points; q++) {
		for (int attempt = 0; attempt < 50; attempt++) {
			try {
				samples.push_back(sample_product(
				    g, cd, u, sampler.next(u), dunkl_side, dk_weights));
				break;
			} catch (const SingularMatrixError &) {
			} catch (const DivisionByZeroError &) {
			}
		}
	}
	if (int(samples.size()) < points)
		throw InternalError(g.name + ": not enough regular sample points");

	std::vector<MultiPoly> a;
	for (int i = 0; i < g.rank; i++) {
		auto monos = potential_monomials(g, i);
		std::vector<std::vector<RatFun>> rows;
		std::vector<RatFun> rhs;
		for (const auto &s : samples) {
			std::map<int, MultiPoly> usub;
			for (int v = 0; v < g.rank; v++)
				usub.emplace(v, retable(s.u_vals[v].as_poly(), g.uvars));
			for (int j = 0; j < g.rank; j++)
				for (int k = j; k < g.rank; k++) {
					std::vector<RatFun> row;
					for (const auto &m : monos) {
						MultiPoly mono(g.uvars,
						               std::vector<MultiPoly::Term>{
						                   {m, NfElem(Rat(1))}});
						MultiPoly dd =
						    mono.derivative(j).derivative(k).substitute(usub);
						row.push_back(RatFun(dd));
					}
					rows.push_back(std::move(row));
					rhs.push_back(retable(s.cu(i, j, k), g.uvars));
				}
		}
		Mat<RatFun> m(int(rows.size()), int(monos.size()));
		for (int r = 0; r < int(rows.size()); r++)
			for (int c = 0; c < int(monos.size()); c++)
				m(r, c) = std::move(rows[r][c]);
		auto sol = solve_linear(std::move(m), std::move(rhs));
		if (sol.kind == SolveKind::Infeasible)
			throw IntegrabilityError(
			    g.name + ": no vector potential matches the product (A^" +
			    std::to_string(i + 1) + ")");
		if (sol.kind == SolveKind::Family)
			throw InternalError(g.name +
			                    ": potential underdetermined; add points");
		MultiPoly ai(g.uvars, NfElem());
		for (std::size_t mi = 0; mi < monos.size(); mi++) {
			if (sol.particular[mi].is_zero())
				continue;
			const MultiPoly &coeff = sol.particular[mi].as_poly();
			std::vector<MultiPoly::Term> terms;
			for (const auto &[pm, pc] : coeff.terms())
				terms.emplace_back(monos[mi] * pm, pc);
			ai += MultiPoly(g.uvars, std::move(terms));
		}
		a.push_back(std::move(ai));
	}
	return a;
}

// ---------------------------------------------------------------------------
// condition collection

namespace {

void collect_standard_conditions(const GroupSpec &g, Level level, int points,
                                 unsigned long seed, ConditionSystem &sys)
{
	bool sampled = level == Level::Sampled ||
	               (level == Level::Default && is_heavy(g));
	if (!sampled) {
		Frame<SymScalar> f = symbolic_frame(g, g.ansatz);
		Product<SymScalar> cstar = cstar_from_frame(f);
		Ten3<SymScalar> gamma2 = negate(cstar.c);
		collect_equations_all(curvature_tensor(gamma2), sys.equations);
		if (g.rank <= 2) {
			Connection<SymScalar> g1 = natural_connection_p(f);
			auto e = unit_field_p(f);
			Product<SymScalar> ctil =
			    natural_from_dual(cstar.c, e, f.coords, f.one);
			collect_equations_all(compat_residual(g1.gamma, ctil.c),
			                      sys.equations);
		}
		return;
	}
	ChartDerivs cd = chart_derivs(g.ansatz, g.rank);
	PointSampler sampler(g, seed);
	for (int q = 0; q < points; q++) {
		Frame<JetScalar> f = jet_frame(g, cd, sampler.next(g.ansatz));
		Product<JetScalar> cstar = cstar_from_frame(f);
		Ten3<JetScalar> gamma2 = negate(cstar.c);
		collect_equations_all(curvature_tensor(gamma2), sys.equations);
	}
}

} // namespace

SolutionSet solve_standard_constants(const GroupSpec &g, Level level,
                                     int points, unsigned long seed)
{
	ConditionSystem sys;
	sys.vars = g.pvars;
	sys.unknowns = g.constants;
	collect_standard_conditions(g, level, points, seed, sys);
	return solve_constants(sys);
}

SolutionSet solve_family_relations(const GroupSpec &g, Level level, int points,
                                   unsigned long seed)
{
	ConditionSystem sys;
	sys.vars = g.pvars;
	sys.unknowns = g.constants;
	sys.unknowns.push_back("lam");
	int lam_var = *g.pvars->index("lam");

	std::vector<NfElem> std_weights = default_weights(Arrangement::of(g));
	std::vector<NfElem> fam_weights = family_weight_elems(g);
	Arrangement arr = Arrangement::of(g);

	bool sampled = level == Level::Sampled ||
	               (level == Level::Default && g.rank >= 3);
	auto collect_frame = [&](auto &f) {
		auto cstar = dk_product(f, arr, std_weights);
		auto corr = family_correction(f, arr, fam_weights);
		auto lam = [&] {
			// scalar for the table variable lam
			if constexpr (std::is_same_v<std::decay_t<decltype(f)>,
			                             Frame<SymScalar>>) {
				return SymScalar(MultiPoly::variable(g.pvars, lam_var));
			} else {
				JetScalar j(RatFun(MultiPoly::variable(g.pvars, lam_var)));
				j.g.assign(f.n, RatFun());
				return j;
			}
		}();
		auto gamma2 = negate(cstar.c);
		for (std::size_t i = 0; i < gamma2.a.size(); i++)
			gamma2.a[i] += lam * corr.a[i];
		// dual flatness, identically in the family parameter
		collect_equations_all(curvature_tensor(gamma2), sys.equations);
		// compatibility of the natural connection with the product
		auto g1 = natural_connection_p(f);
		auto e = unit_field_p(f);
		auto ctil = natural_from_dual(cstar.c, e, f.coords, f.one);
		collect_equations_all(compat_residual(g1.gamma, ctil.c),
		                      sys.equations);
		// almost hydrodynamic equivalence ties lambda to the constants
		collect_equations_all(hydro_residual(g1.gamma, gamma2, cstar.c),
		                      sys.equations);
	};
	if (!sampled) {
		Frame<SymScalar> f = symbolic_frame(g, g.ansatz);
		collect_frame(f);
	} else {
		ChartDerivs cd = chart_derivs(g.ansatz, g.rank);
		PointSampler sampler(g, seed);
		for (int q = 0; q < points; q++) {
			Frame<JetScalar> f = jet_frame(g, cd, sampler.next(g.ansatz));
			collect_frame(f);
		}
	}
	return solve_constants(sys);
}

// ---------------------------------------------------------------------------
// scaling equivalence (criterion: Shephard vs Coxeter families)

ScalingReport scaling_equivalence(std::span<const MultiPoly> pot_a,
                                  std::span<const MultiPoly> pot_b,
                                  std::span<const long> degrees)
{
	int n = int(pot_a.size());
	ScalingReport rep;

	// collect non-affine monomial coefficients as univariate polys in the
	// family parameter (the first parameter variable of each table)
	auto coeff_table = [n](std::span<const MultiPoly> pot) {
		std::vector<std::map<Monomial, MultiPoly>> t;
		for (const auto &p : pot) {
			std::map<Monomial, MultiPoly> m;
			for (const auto &[mono, c] : p.terms()) {
				Monomial main, param;
				long mdeg = 0;
				for (int v = 0; v < kMaxVars; v++) {
					if (v < p.vars()->n_main) {
						main.e[v] = mono.e[v];
						main.deg += mono.e[v];
						mdeg += mono.e[v];
					} else {
						param.e[v] = mono.e[v];
						param.deg += mono.e[v];
					}
				}
				if (mdeg < 2)
					continue; // affine terms are inessential
				auto it = m.find(main);
				MultiPoly add(p.vars(), std::vector<MultiPoly::Term>{
				                            {param, c}});
				if (it == m.end())
					m.emplace(main, add);
				else
					it->second += add;
			}
			t.push_back(std::move(m));
		}
		return t;
	};
	auto ta = coeff_table(pot_a);
	auto tb = coeff_table(pot_b);

	// table for the matching unknowns: main variable c (the parameter),
	// parameters a, b and one T per (index, monomial)
	std::vector<std::pair<int, Monomial>> slots;
	for (int i = 0; i < n; i++) {
		std::set<Monomial> monos;
		for (const auto &[m, c] : ta[i])
			monos.insert(m);
		for (const auto &[m, c] : tb[i])
			monos.insert(m);
		for (const auto &m : monos)
			slots.emplace_back(i, m);
	}
	std::vector<std::string> params{"a", "b"};
	for (std::size_t s = 0; s < slots.size(); s++)
		params.push_back("T" + std::to_string(s));
	VarsPtr vars = make_vars({"c"}, params);
	auto var = [&](const std::string &name) {
		return MultiPoly::variable(vars, *vars->index(name));
	};

	// rebase a parameter polynomial in the source family constant onto the
	// matching table (c or a*c + b)
	auto rebase = [&](const MultiPoly &coeff, int cvar_index,
	                  const MultiPoly &image) {
		MultiPoly out(vars, NfElem());
		for (const auto &[mono, q] : coeff.terms()) {
			int e = mono.e[cvar_index];
			for (int v = 0; v < kMaxVars; v++)
				if (v != cvar_index && mono.e[v])
					throw InternalError("family potential uses several "
					                    "parameters");
			out += q * image.pow(e);
		}
		return out;
	};

	ConditionSystem sys;
	sys.vars = vars;
	sys.unknowns = params;
	int ca = pot_a[0].vars()->n_main; // first parameter of A's table
	int cb = pot_b[0].vars()->n_main;
	MultiPoly c_of_a = var("c");
	MultiPoly c_image = var("a") * var("c") + var("b");
	for (std::size_t s = 0; s < slots.size(); s++) {
		auto [i, m] = slots[s];
		auto ia = ta[i].find(m);
		auto ib = tb[i].find(m);
		MultiPoly lhs = ib == tb[i].end()
		                    ? MultiPoly(vars, NfElem())
		                    : rebase(ib->second, cb, c_image);
		MultiPoly rhs = ia == ta[i].end()
		                    ? MultiPoly(vars, NfElem())
		                    : rebase(ia->second, ca, c_of_a);
		// B-coefficient = T * A-coefficient
		sys.add(lhs - var("T" + std::to_string(s)) * rhs);
	}
	auto sol = solve_constants(sys);
	if (sol.kind != SolutionSet::Kind::Solved) {
		rep.success = false;
		rep.witness = "coefficient matching system unsolved";
		return rep;
	}
	// the parameter map must be affine with a != 0
	auto geta = sol.assignments.find("a");
	auto getb = sol.assignments.find("b");
	if (geta == sol.assignments.end() || getb == sol.assignments.end() ||
	    !geta->second.is_constant() || !getb->second.is_constant() ||
	    geta->second.is_zero()) {
		rep.success = false;
		rep.witness = "parameter map not determined";
		return rep;
	}
	rep.parameter_map = "c' = " + render_expression(geta->second) + "*c" +
	                    (getb->second.is_zero()
	                         ? ""
	                         : "+" + render_expression(getb->second));

	// consistency: T_{i,m} = lambda^m / (lambda_i lambda_n); verify every
	// integer relation among the exponent vectors on the T values
	std::vector<std::vector<long>> expo;
	std::vector<NfElem> tval;
	for (std::size_t s = 0; s < slots.size(); s++) {
		auto it = sol.assignments.find("T" + std::to_string(s));
		if (it == sol.assignments.end() || !it->second.is_constant()) {
			rep.success = false;
			rep.witness = "scale ratios not determined";
			return rep;
		}
		NfElem v = it->second.constant_value();
		auto [i, m] = slots[s];
		if (v.is_zero()) {
			// monomial absent on both sides is fine; zero ratio with a
			// nonzero A-coefficient means failure
			if (ta[i].count(m) && !ta[i].at(m).is_zero() && tb[i].count(m)) {
				continue;
			}
			continue;
		}
		std::vector<long> e(n, 0);
		for (int v2 = 0; v2 < n; v2++)
			e[v2] = m.e[v2];
		e[i] -= 1;
		e[n - 1] -= 1;
		expo.push_back(std::move(e));
		tval.push_back(v);
	}
	// integer kernel via rational elimination
	int rows = int(expo.size());
	if (rows) {
		Mat<NfElem> mt(n, rows);
		for (int r = 0; r < rows; r++)
			for (int c = 0; c < n; c++)
				mt(c, r) = NfElem(Rat(expo[r][c]));
		auto kernel = null_space(std::move(mt));
		for (const auto &k : kernel) {
			// clear denominators to integers
			long lcm = 1;
			for (const auto &x : k)
				if (!x.is_zero())
					lcm = std::lcm(lcm, x.rat_value().get_den().get_si());
			NfElem prod_num(Rat(1)), prod_den(Rat(1));
			for (int r = 0; r < rows; r++) {
				if (k[r].is_zero())
					continue;
				Rat c = k[r].rat_value() * lcm;
				long e = c.get_num().get_si();
				if (e > 0)
					prod_num *= tval[r].pow(unsigned(e));
				else
					prod_den *= tval[r].pow(unsigned(-e));
			}
			if (prod_num != prod_den) {
				rep.success = false;
				rep.witness = "scale ratios violate a lattice relation";
				return rep;
			}
		}
	}
	for (std::size_t s = 0; s < slots.size(); s++) {
		auto it = sol.assignments.find("T" + std::to_string(s));
		if (it != sol.assignments.end() && !it->second.is_zero()) {
			auto [i, m] = slots[s];
			std::string mono;
			for (int v = 0; v < n; v++)
				if (m.e[v]) {
					mono += "l" + std::to_string(v + 1);
					if (m.e[v] > 1)
						mono += "^" + std::to_string(m.e[v]);
				}
			rep.scale_constraints.emplace_back(
			    mono + "/(l" + std::to_string(i + 1) + "*l" +
			        std::to_string(n) + ")",
			    render_expression(it->second));
		}
	}
	rep.success = true;
	return rep;
}

// ---------------------------------------------------------------------------
// mode implementations

namespace {

bool mirror_factorization_check(const GroupSpec &g, std::string &witness,
                                NfElem &unit_out)
{
	Mat<MultiPoly> jp = jacobian(g.base_invariants, g.rank);
	MultiPoly det = determinant_bareiss(jp);
	for (std::size_t s = 0; s < g.mirrors.size(); s++) {
		const auto &m = g.mirrors[s];
		MultiPoly alpha(g.pvars, NfElem());
		for (int i = 0; i < g.rank; i++)
			alpha += m.covector[i] * MultiPoly::variable(g.pvars, i);
		for (int rep = 0; rep < m.order - 1; rep++) {
			auto q = exact_divide(det, alpha);
			if (!q) {
				witness = "mirror " + std::to_string(s + 1) +
				          " does not divide det J with multiplicity " +
				          std::to_string(m.order - 1);
				return false;
			}
			det = std::move(*q);
		}
	}
	if (!det.is_constant()) {
		witness = "det J has extra factors beyond the declared mirrors";
		return false;
	}
	unit_out = det.constant_value();
	return true;
}

struct CheckVotes {
	std::map<std::string, bool> ok;
	std::map<std::string, std::string> why;
	void vote(const std::string &name, bool pass, const std::string &w = "")
	{
		auto it = ok.find(name);
		if (it == ok.end()) {
			ok.emplace(name, pass);
			if (!pass)
				why[name] = w;
		} else if (!pass) {
			it->second = false;
			why[name] = w;
		}
	}
	void flush(Report &rep)
	{
		for (const auto &[name, pass] : ok)
			rep.check(name, pass, pass ? "" : why[name]);
	}
};

template <class S>
void dual_side_checks(const GroupSpec &g, const Frame<S> &f, CheckVotes &votes)
{
	Product<S> cstar = cstar_from_frame(f);
	Ten3<S> gamma2 = negate(cstar.c);
	votes.vote("dual_flatness", all_zero(curvature_tensor(gamma2)),
	           "curvature of the dual connection");
	votes.vote("dual_unit",
	           [&] {
		           auto r = unit_residual(cstar.c, f.coords, f.one);
		           for (int i = 0; i < f.n; i++)
			           for (int j = 0; j < f.n; j++)
				           if (!is_scalar_zero(r(i, j)))
					           return false;
		           return true;
	           }(),
	           "c* E != Id");
	votes.vote("dual_assoc", all_zero(assoc_residual(cstar.c)),
	           "dual product is not associative");
	Connection<S> g1 = natural_connection_p(f);
	votes.vote("almost_hydro",
	           all_zero(hydro_residual(g1.gamma, gamma2, cstar.c)),
	           "connections are not almost hydrodynamically equivalent");
	votes.vote("euler_linear",
	           all_zero(nabla2_euler_residual(g1.gamma, f.coords)),
	           "nabla nabla E != 0");
	votes.vote("saito_pde", all_zero(saito_pde_residual(f, cstar.c)),
	           "invariants fail the Saito coordinate condition");
}

template <class S>
bool compat_direct(const GroupSpec &, const Frame<S> &f)
{
	Product<S> cstar = cstar_from_frame(f);
	Connection<S> g1 = natural_connection_p(f);
	auto e = unit_field_p(f);
	Product<S> ctil = natural_from_dual(cstar.c, e, f.coords, f.one);
	return all_zero(compat_residual(g1.gamma, ctil.c));
}

// u-chart polynomial checks on the potential: unit, associativity,
// Euler homogeneity, bracket
void potential_checks(const GroupSpec &g, std::span<const MultiPoly> a,
                      Report &rep, const std::string &prefix)
{
	WdvvReport w = wdvv_check(a, g.degrees);
	rep.check(prefix + "wdvv_assoc", w.associativity, w.witness);
	rep.check(prefix + "wdvv_unit", w.unit, w.witness);
	rep.check(prefix + "wdvv_homogeneity", w.homogeneity, w.witness);
}

void report_potentials(Report &rep, const GroupSpec &g,
                       std::span<const MultiPoly> a,
                       const std::string &prefix)
{
	for (int i = 0; i < int(a.size()); i++)
		rep.potentials.emplace_back(prefix + "A" + std::to_string(i + 1),
		                            render_expression(a[i]));
}

// eta/F comparison against the reported data
void frobenius_report(Report &rep, const GroupSpec &g,
                      std::span<const MultiPoly> a, const std::string &prefix,
                      bool expect_positive)
{
	Ten3<MultiPoly> cu(g.rank);
	for (int i = 0; i < g.rank; i++)
		for (int j = 0; j < g.rank; j++)
			for (int k = j; k < g.rank; k++) {
				cu(i, j, k) = a[i].derivative(j).derivative(k);
				if (k != j)
					cu(i, k, j) = cu(i, j, k);
			}
	auto cand = frobenius_detect(cu, g.degrees, g.uvars);
	if (!expect_positive) {
		rep.check(prefix + "frobenius_negative", !cand.has_value(),
		          "unexpected invariant metric found");
		return;
	}
	if (!cand) {
		rep.check(prefix + "frobenius_positive", false,
		          "no constant invertible eta");
		return;
	}
	ExprContext cctx = g.ccontext();
	std::optional<NfElem> scale;
	if (g.reported.eta) {
		// fix the free scale of eta by the first reported nonzero entry
		Mat<NfElem> expected(g.rank, g.rank);
		const auto &rows = *g.reported.eta;
		for (int i = 0; i < g.rank; i++)
			for (int j = 0; j < g.rank; j++)
				expected(i, j) = parse_constant(rows[i][j], cctx);
		for (int i = 0; i < g.rank && !scale; i++)
			for (int j = 0; j < g.rank && !scale; j++)
				if (!expected(i, j).is_zero()) {
					if (cand->eta(i, j).is_zero()) {
						rep.check(prefix + "frobenius_positive", false,
						          "eta support mismatch");
						return;
					}
					scale = expected(i, j) * inverse(cand->eta(i, j));
				}
		bool eta_ok = true;
		for (int i = 0; i < g.rank; i++)
			for (int j = 0; j < g.rank; j++)
				if (*scale * cand->eta(i, j) != expected(i, j))
					eta_ok = false;
		rep.check(prefix + "frobenius_eta", eta_ok,
		          "eta disagrees with the reported metric");
	} else if (g.reported.frobenius_potential) {
		// no printed eta: fix the scale by the leading reported coefficient
		MultiPoly expected_f = parse_expression(
		    *g.reported.frobenius_potential, g.ucontext());
		if (cand->potential.is_zero() || expected_f.is_zero()) {
			rep.check(prefix + "frobenius_positive", false,
			          "empty potential");
			return;
		}
		auto grouped = cand->potential.group_by_main();
		auto it = grouped.find(expected_f.leading().first);
		if (it == grouped.end() || it->second.is_zero()) {
			rep.check(prefix + "frobenius_positive", false,
			          "potential support mismatch");
			return;
		}
		scale = expected_f.leading().second *
		        inverse(it->second.constant_value());
	} else {
		rep.check(prefix + "frobenius_positive", true);
		return;
	}
	MultiPoly f_scaled = *scale * cand->potential;
	rep.potentials.emplace_back(prefix + "eta_scale", fmt_const(*scale));
	{
		std::string eta;
		for (int i = 0; i < g.rank; i++)
			for (int j = 0; j < g.rank; j++)
				eta += fmt_const(*scale * cand->eta(i, j)) +
				       (j + 1 < g.rank ? "," : i + 1 < g.rank ? ";" : "");
		rep.potentials.emplace_back(prefix + "eta", eta);
	}
	rep.potentials.emplace_back(prefix + "F", render_expression(f_scaled));
	if (g.reported.frobenius_potential) {
		MultiPoly expected_f = parse_expression(
		    *g.reported.frobenius_potential, g.ucontext());
		rep.check(prefix + "frobenius_potential", f_scaled == expected_f,
		          "potential disagrees with the reported one");
	}
	rep.potentials.emplace_back(prefix + "charge",
	                            fmt_const(NfElem(cand->charge)));
}

Report standard_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "standard";
	bool sampled = cfg.level == Level::Sampled ||
	               (cfg.level == Level::Default && is_heavy(g));
	rep.level = sampled ? "sampled" : "symbolic";
	rep.seed = cfg.seed;
	rep.points = cfg.points;

	// constants: solve or verify the reported ones
	std::vector<NfElem> values;
	if (cfg.solve || g.reported.constants.empty()) {
		auto sol = solve_standard_constants(g, cfg.level, cfg.points,
		                                    cfg.seed);
		bool solved = sol.kind == SolutionSet::Kind::Solved &&
		              sol.free_unknowns.empty();
		if (!g.constants.empty())
			rep.check("constants_solved", solved,
			          sol.kind == SolutionSet::Kind::Empty
			              ? "condition system inconsistent"
			              : "condition system unresolved");
		if (!solved && !g.constants.empty())
			return rep;
		for (const auto &c : g.constants) {
			NfElem v = sol.assignments.at(c).constant_value();
			values.push_back(v);
			rep.constants.emplace_back(c, fmt_const(v));
		}
		// compare with the reported table values when present
		if (!g.reported.constants.empty()) {
			auto repv = reported_values(g);
			bool match = true;
			for (std::size_t i = 0; i < g.constants.size(); i++)
				match = match && repv.at(g.constants[i]) == values[i];
			rep.check("constants_match_reported", match,
			          "solved constants differ from the reported ones");
		}
	} else {
		values = ordered_values(g, reported_values(g));
		for (std::size_t i = 0; i < g.constants.size(); i++)
			rep.constants.emplace_back(g.constants[i], fmt_const(values[i]));
	}

	std::vector<MultiPoly> u = bound_ansatz(g, values);

	// mirror factorization (Shephard-Todd) when mirrors are present
	if (!g.mirrors.empty()) {
		std::string w;
		NfElem unit;
		bool ok = mirror_factorization_check(g, w, unit);
		rep.check("mirror_factorization", ok, w);
		if (ok)
			rep.note("detJ_unit", fmt_const(unit));
	}

	CheckVotes votes;
	bool compat_ok = true;
	std::string compat_witness;
	if (!sampled) {
		Frame<SymScalar> f = symbolic_frame(g, u);
		dual_side_checks(g, f, votes);
		if (product_checks_symbolic(g))
			compat_ok = compat_direct(g, f);
		else {
			// certificate at sample points
			ChartDerivs cd = chart_derivs(u, g.rank);
			PointSampler sampler(g, cfg.seed + 1);
			for (int q = 0; q < cfg.points; q++) {
				Frame<JetScalar> jf = jet_frame(g, cd, sampler.next(u));
				compat_ok = compat_ok && compat_direct(g, jf);
			}
		}
	} else {
		ChartDerivs cd = chart_derivs(u, g.rank);
		PointSampler sampler(g, cfg.seed);
		for (int q = 0; q < cfg.points; q++) {
			Frame<JetScalar> f = jet_frame(g, cd, sampler.next(u));
			dual_side_checks(g, f, votes);
			compat_ok = compat_ok && compat_direct(g, f);
		}
	}
	votes.flush(rep);
	rep.check("product_compatibility", compat_ok,
	          "natural connection is not compatible with the product");

	if (!compat_ok)
		return rep; // no potential exists; the negative control stops here

	std::vector<MultiPoly> a = potential_from_samples(
	    g, u, {}, false, std::max(cfg.points, 4), cfg.seed + 7);
	report_potentials(rep, g, a, "");
	potential_checks(g, a, rep, "");
	frobenius_report(rep, g, a, "", g.reported.expect_standard_frobenius());
	return rep;
}

Report dunkl_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "dunkl";
	bool symbolic = cfg.level == Level::Symbolic ||
	                (cfg.level == Level::Default && dk_identity_symbolic(g));
	rep.level = symbolic ? "symbolic" : "sampled";
	rep.seed = cfg.seed;
	rep.points = cfg.points;

	if (g.mirrors.empty()) {
		rep.skip("dk_identity", "group has no mirror data");
		return rep;
	}
	std::vector<NfElem> values = g.reported.constants.empty()
	                                 ? std::vector<NfElem>()
	                                 : ordered_values(g, reported_values(g));
	if (values.empty() && !g.constants.empty())
		throw ConfigError(g.name + ": dunkl mode needs solved constants");
	std::vector<MultiPoly> u = bound_ansatz(g, values);
	Arrangement arr = Arrangement::of(g);

	// projections are idempotent with trace one
	bool proj_ok = true;
	for (const auto &m : g.mirrors) {
		Mat<NfElem> pi = projection(m.covector, g.hermitian);
		Mat<NfElem> sq = pi * pi;
		NfElem tr;
		for (int i = 0; i < g.rank; i++)
			tr += pi(i, i);
		proj_ok = proj_ok && sq == pi && tr == NfElem(Rat(1));
	}
	rep.check("projection_idempotent", proj_ok, "pi^2 != pi or trace != 1");

	// weight fit against the invariant-side dual product
	ChartDerivs cd = chart_derivs(u, g.rank);
	PointSampler sampler(g, cfg.seed);
	std::vector<std::vector<NfElem>> pts;
	std::vector<Ten3<NfElem>> targets;
	int rows_per_point = g.rank * g.rank * (g.rank + 1) / 2;
	int fitpts = int(g.mirrors.size()) / rows_per_point + 2;
	for (int q = 0; q < fitpts; q++) {
		auto pt = sampler.next(u);
		Frame<JetScalar> f = jet_frame(g, cd, pt);
		Product<JetScalar> cstar = cstar_from_frame(f);
		Ten3<NfElem> t(g.rank);
		for (std::size_t i = 0; i < cstar.c.a.size(); i++)
			t.a[i] = cstar.c.a[i].v.as_poly().constant_value();
		targets.push_back(std::move(t));
		pts.push_back(std::move(pt));
	}
	FittedWeights fitted;
	try {
		fitted = fit_weights(arr, targets, pts);
	} catch (const NoWeightsError &e) {
		rep.check("weights_fit", false, e.what());
		return rep;
	}
	rep.check("weights_fit", true);
	{
		std::string ws;
		for (const auto &w : fitted.weights)
			ws += (ws.empty() ? "" : " ") + fmt_const(w);
		rep.note("fitted_weights", ws);
		rep.note("derived_N", fmt_const(fitted.normalizer));
		// flag disagreements with the reported table, do not fail
		std::vector<NfElem> declared = default_weights(arr);
		bool same = true;
		for (std::size_t s = 0; s < declared.size(); s++)
			same = same && declared[s] == fitted.weights[s];
		if (!same)
			rep.note("weights_vs_orders", "fitted weights differ from the "
			                              "declared reflection orders");
		if (g.reported.normalizer &&
		    NfElem(*g.reported.normalizer) != fitted.normalizer)
			rep.note("normalizer_vs_reported",
			         "derived N differs from the reported table value");
	}

	// Dunkl-Kohno product equals the invariant-side dual product
	std::vector<NfElem> weights = fitted.weights;
	if (symbolic) {
		Frame<SymScalar> f = symbolic_frame(g, u);
		Product<SymScalar> inv_side = cstar_from_frame(f);
		Product<SymScalar> dk_side = dk_product(f, arr, weights);
		bool same = true;
		for (std::size_t i = 0; i < inv_side.c.a.size(); i++)
			same = same && (inv_side.c.a[i] - dk_side.c.a[i]).is_zero();
		rep.check("dk_identity", same,
		          "Dunkl-Kohno product differs from the invariant dual "
		          "product");
		// the logarithmic potential reproduces the product
		LogPotential pot = veselov_potential(arr, weights);
		Product<SymScalar> hess = hessian_of_logpotential(pot, g.pvars);
		bool hok = true;
		for (std::size_t i = 0; i < hess.c.a.size(); i++)
			hok = hok && (hess.c.a[i] - dk_side.c.a[i]).is_zero();
		rep.check("log_potential_hessian", hok,
		          "hessian of the logarithmic potential mismatch");
	} else {
		bool same = true, hok = true;
		LogPotential pot = veselov_potential(arr, weights);
		for (int q = 0; q < cfg.points; q++) {
			auto pt = sampler.next(u);
			Frame<JetScalar> f = jet_frame(g, cd, pt);
			Product<JetScalar> inv_side = cstar_from_frame(f);
			Product<JetScalar> dk_side = dk_product(f, arr, weights);
			for (std::size_t i = 0; i < inv_side.c.a.size(); i++)
				same = same &&
				       (inv_side.c.a[i].v - dk_side.c.a[i].v).is_zero();
			// hessian of each log term at the point
			Ten3<NfElem> h(g.rank);
			for (const auto &t : pot.terms) {
				NfElem ax;
				for (int i = 0; i < g.rank; i++)
					ax += t.covector[i] * pt[i];
				NfElem inv_ax = inverse(ax);
				for (int i = 0; i < g.rank; i++)
					for (int j = 0; j < g.rank; j++)
						for (int k = 0; k < g.rank; k++)
							h(i, j, k) += t.coefficient[i] * t.covector[j] *
							              t.covector[k] * inv_ax;
			}
			for (int i = 0; i < g.rank; i++)
				for (int j = 0; j < g.rank; j++)
					for (int k = 0; k < g.rank; k++)
						hok = hok &&
						      h(i, j, k) ==
						          dk_side.c(i, j, k).v.as_poly()
						              .constant_value();
		}
		rep.check("dk_identity", same,
		          "Dunkl-Kohno product differs from the invariant dual "
		          "product at a sample point");
		rep.check("log_potential_hessian", hok,
		          "hessian of the logarithmic potential mismatch");
	}

	// normalization sum with the fitted weights
	auto [sum, N] = normalization_sum(arr, weights);
	rep.check("normalization_sum", N.has_value(),
	          "sum kappa pi is not proportional to the identity");

	// Veselov condition for real arrangements
	bool real = true;
	for (const auto &m : g.mirrors)
		for (const auto &c : m.covector)
			real = real && conjugate(c) == c;
	if (real) {
		std::vector<std::vector<NfElem>> cov;
		for (const auto &m : g.mirrors)
			cov.push_back(m.covector);
		VeeReport vee = vee_system_check(cov);
		rep.check("vee_system", vee.pass, vee.witness);
	} else
		rep.skip("vee_system", "complex covectors");
	return rep;
}

Report family_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "family";
	bool sampled_p = cfg.level == Level::Sampled ||
	                 (cfg.level == Level::Default && g.rank >= 3);
	rep.level = sampled_p ? "sampled" : "symbolic";
	rep.seed = cfg.seed;
	rep.points = cfg.points;

	if (!g.reported.family_lambda || g.reported.family_weights.empty()) {
		rep.skip("family", "no family data for this group");
		return rep;
	}

	// solve the relations and compare against the reported ones
	auto sol = solve_family_relations(g, cfg.level, cfg.points, cfg.seed);
	bool solved = sol.kind == SolutionSet::Kind::Solved;
	rep.check("family_solved", solved, "family condition system unresolved");
	if (solved) {
		ExprContext ctx = g.ccontext();
		bool lam_ok = sol.assignments.count("lam") &&
		              sol.assignments.at("lam") ==
		                  parse_expression(*g.reported.family_lambda, ctx);
		rep.check("family_lambda", lam_ok,
		          "solved lambda(c) differs from the reported one");
		bool rel_ok = true;
		for (const auto &[name, expr] : g.reported.family_constraints) {
			auto it = sol.assignments.find(name);
			rel_ok = rel_ok && it != sol.assignments.end() &&
			         it->second == parse_expression(expr, ctx);
		}
		rep.check("family_relations", rel_ok,
		          "solved constraint relations differ from the reported "
		          "ones");
		for (const auto &[k, v] : sol.assignments)
			rep.constants.emplace_back(k, render_expression(v));
		for (const auto &fu : sol.free_unknowns)
			rep.constants.emplace_back(fu, "free");
	}

	// verification with the reported relations substituted, identically in
	// the family parameter
	std::map<int, MultiPoly> sub = family_substitution(g);
	std::vector<MultiPoly> u;
	for (const auto &p : g.ansatz)
		u.push_back(p.substitute(sub));
	MultiPoly lam_poly = parse_lambda(g);
	Arrangement arr = Arrangement::of(g);
	std::vector<NfElem> std_weights = default_weights(arr);
	std::vector<NfElem> fam_weights = family_weight_elems(g);

	CheckVotes votes;
	auto verify_frame = [&](auto &f) {
		using S = std::decay_t<decltype(f.one)>;
		auto cstar = dk_product(f, arr, std_weights);
		auto corr = family_correction(f, arr, fam_weights);
		S lam;
		if constexpr (std::is_same_v<S, SymScalar>)
			lam = SymScalar(lam_poly);
		else {
			lam = JetScalar(RatFun(lam_poly));
			lam.g.assign(f.n, RatFun());
		}
		Ten3<S> gamma2 = negate(cstar.c);
		for (std::size_t i = 0; i < gamma2.a.size(); i++)
			gamma2.a[i] += lam * corr.a[i];
		votes.vote("family_dual_flatness",
		           all_zero(curvature_tensor(gamma2)),
		           "family dual connection is not flat");
		// nabla^(2) E = 0: Gamma2(E) + Id = 0
		{
			bool ok = true;
			for (int i = 0; i < f.n; i++)
				for (int j = 0; j < f.n; j++) {
					S acc = (i == j) ? f.one : S{};
					for (int k = 0; k < f.n; k++)
						acc += gamma2(i, j, k) * f.coords[k];
					ok = ok && is_scalar_zero(acc);
				}
			votes.vote("family_nabla2_E", ok, "nabla^(2) E != 0");
		}
		votes.vote("family_dual_compat",
		           all_zero(compat_residual(gamma2, cstar.c)),
		           "dual connection incompatible with the dual product");
		auto g1 = natural_connection_p(f);
		votes.vote("family_hydro",
		           all_zero(hydro_residual(g1.gamma, gamma2, cstar.c)),
		           "family pair is not almost hydrodynamically equivalent");
		auto e = unit_field_p(f);
		auto ctil = natural_from_dual(cstar.c, e, f.coords, f.one);
		votes.vote("family_compat",
		           all_zero(compat_residual(g1.gamma, ctil.c)),
		           "natural connection incompatible with the product");
	};
	if (!sampled_p) {
		Frame<SymScalar> f = symbolic_frame(g, u);
		verify_frame(f);
	} else {
		ChartDerivs cd = chart_derivs(u, g.rank);
		PointSampler sampler(g, cfg.seed);
		for (int q = 0; q < cfg.points; q++) {
			Frame<JetScalar> f = jet_frame(g, cd, sampler.next(u));
			verify_frame(f);
		}
	}
	votes.flush(rep);

	// family potential, symbolic in the parameter
	std::vector<MultiPoly> a = potential_from_samples(
	    g, u, std_weights, true, std::max(cfg.points, 4), cfg.seed + 7);
	report_potentials(rep, g, a, "family_");
	potential_checks(g, a, rep, "family_");

	// at lambda = 0 the family reduces to the standard structure
	if (!g.reported.constants.empty()) {
		ExprContext ctx = g.ccontext();
		const std::string &free_name = g.constants[0];
		int cvar = *g.pvars->index(free_name);
		std::vector<NfElem> full(g.pvars->size(), NfElem());
		full[cvar] = parse_constant(g.reported.constants.at(free_name), ctx);
		rep.check("family_reduces_to_standard",
		          lam_poly.evaluate(full).is_zero(),
		          "lambda does not vanish at the standard constants");
	}

	// the Frobenius member of the family
	if (auto it = g.reported.frobenius_params.find(g.constants[0]);
	    it != g.reported.frobenius_params.end()) {
		ExprContext ctx = g.ccontext();
		NfElem c1 = parse_constant(it->second, ctx);
		rep.note("frobenius_parameter", fmt_const(c1));
		std::map<int, MultiPoly> bind{
		    {*g.pvars->index(g.constants[0]), MultiPoly(g.pvars, c1)}};
		std::vector<MultiPoly> afro;
		for (const auto &ai : a) {
			std::map<int, MultiPoly> ubind{
			    {*g.uvars->index(g.constants[0]), MultiPoly(g.uvars, c1)}};
			afro.push_back(ai.substitute(ubind));
		}
		frobenius_report(rep, g, afro, "family_", true);
	}
	return rep;
}

Report pencil_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "pencil";
	rep.level = "symbolic";
	rep.seed = cfg.seed;

	if (g.pencil.seed == PencilData::Seed::None) {
		rep.skip("pencil", "no pencil data for this group");
		return rep;
	}
	// pencil coordinates: reported standard constants, or the Frobenius
	// member of the family
	std::vector<NfElem> values;
	if (g.pencil.frobenius_constants) {
		ExprContext ctx = g.ccontext();
		NfElem c1 = parse_constant(
		    g.reported.frobenius_params.at(g.constants[0]), ctx);
		std::map<int, MultiPoly> bind{
		    {*g.pvars->index(g.constants[0]), MultiPoly(g.pvars, c1)}};
		auto sub = family_substitution(g);
		for (const auto &c : g.constants) {
			int v = *g.pvars->index(c);
			MultiPoly expr = sub.count(v) ? sub.at(v).substitute(bind)
			                              : MultiPoly::variable(g.pvars, v)
			                                    .substitute(bind);
			values.push_back(expr.constant_value());
		}
	} else
		values = ordered_values(g, reported_values(g));
	for (std::size_t i = 0; i < g.constants.size(); i++)
		rep.constants.emplace_back(g.constants[i], fmt_const(values[i]));
	std::vector<MultiPoly> u = bound_ansatz(g, values);

	MetricPencil pencil =
	    g.pencil.seed == PencilData::Seed::InverseHessian
	        ? hessian_pencil(g, u, g.base_invariants[g.pencil.hessian_of])
	        : euclidean_pencil(g, u, g.pencil.seed_matrix);
	rep.check("pencil_linear_in_top", true); // construction throws otherwise
	rep.potentials.emplace_back("pencil_F",
	                            render_expression(pencil.potential));
	{
		std::string eta;
		for (int i = 0; i < g.rank; i++)
			for (int j = 0; j < g.rank; j++)
				eta += fmt_const(pencil.eta(i, j)) +
				       (j + 1 < g.rank ? "," : i + 1 < g.rank ? ";" : "");
		rep.potentials.emplace_back("pencil_eta", eta);
	}
	// flatness of g - lambda eta at three parameter values
	bool flat = pencil_flat_at(pencil.g, pencil.eta, NfElem(), g.uvars) &&
	            pencil_flat_at(pencil.g, pencil.eta, NfElem(Rat(1)),
	                           g.uvars) &&
	            pencil_flat_at(pencil.g, pencil.eta, NfElem(Rat(7, 3)),
	                           g.uvars);
	rep.check("pencil_flat", flat, "g - lambda eta has curvature");

	if (g.reported.pencil_potential) {
		MultiPoly expected =
		    parse_expression(*g.reported.pencil_potential, g.ucontext());
		rep.check("pencil_potential", pencil.potential == expected,
		          "pencil potential disagrees with the reported one");
	}
	if (g.reported.pencil_eta) {
		ExprContext cctx = g.ccontext();
		const auto &rows = *g.reported.pencil_eta;
		bool ok = true;
		for (int i = 0; i < g.rank; i++)
			for (int j = 0; j < g.rank; j++)
				ok = ok &&
				     pencil.eta(i, j) == parse_constant(rows[i][j], cctx);
		rep.check("pencil_eta", ok,
		          "pencil eta disagrees with the reported one");
	}
	return rep;
}

Report wdvv_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "wdvv";
	rep.level = "symbolic";
	rep.seed = cfg.seed;
	std::vector<NfElem> values = g.reported.constants.empty()
	                                 ? std::vector<NfElem>()
	                                 : ordered_values(g, reported_values(g));
	std::vector<MultiPoly> u = bound_ansatz(g, values);
	std::vector<MultiPoly> a = potential_from_samples(
	    g, u, {}, false, std::max(cfg.points, 4), cfg.seed + 7);
	report_potentials(rep, g, a, "");
	potential_checks(g, a, rep, "");
	return rep;
}

Report sample_flatness_mode(const RunConfig &cfg, const GroupSpec &g)
{
	Report rep;
	rep.group = g.name;
	rep.mode = "sample-flatness";
	rep.level = "sampled";
	rep.seed = cfg.seed;
	rep.points = cfg.points;

	ConditionSystem sys;
	sys.vars = g.pvars;
	sys.unknowns = g.constants;
	ChartDerivs cd = chart_derivs(g.ansatz, g.rank);
	PointSampler sampler(g, cfg.seed);
	int solve_points = std::max(2, cfg.points / 4);
	for (int q = 0; q < solve_points; q++) {
		Frame<JetScalar> f = jet_frame(g, cd, sampler.next(g.ansatz));
		Product<JetScalar> cstar = cstar_from_frame(f);
		collect_equations_all(curvature_tensor(negate(cstar.c)),
		                      sys.equations);
	}
	auto sol = solve_constants(sys);
	bool solved = sol.kind == SolutionSet::Kind::Solved &&
	              sol.free_unknowns.empty();
	rep.check("sample_flatness_solved", solved,
	          "flatness conditions at sample points do not determine the "
	          "constants");
	if (!solved)
		return rep;
	std::vector<NfElem> values;
	for (const auto &c : g.constants) {
		NfElem v = sol.assignments.at(c).constant_value();
		values.push_back(v);
		rep.constants.emplace_back(c, fmt_const(v));
	}
	if (!g.reported.constants.empty()) {
		auto repv = reported_values(g);
		bool match = true;
		for (std::size_t i = 0; i < g.constants.size(); i++)
			match = match && repv.at(g.constants[i]) == values[i];
		rep.check("constants_match_reported", match,
		          "solved constants differ from the reported ones");
	}
	// verify flatness at fresh points with the solved constants
	std::vector<MultiPoly> u = bound_ansatz(g, values);
	ChartDerivs cdv = chart_derivs(u, g.rank);
	PointSampler verifier(g, cfg.seed + 13);
	bool flat = true;
	for (int q = 0; q < cfg.points; q++) {
		Frame<JetScalar> f = jet_frame(g, cdv, verifier.next(u));
		Product<JetScalar> cstar = cstar_from_frame(f);
		flat = flat && all_zero(curvature_tensor(negate(cstar.c)));
	}
	rep.check("sample_flatness_verify", flat,
	          "dual curvature does not vanish at verification points");
	return rep;
}

} // namespace

Report run_pipeline(const RunConfig &cfg)
{
	GroupSpec g = registry_lookup(cfg.group, cfg.family_m, cfg.data_dir);
	switch (cfg.mode) {
	case Mode::Standard: return standard_mode(cfg, g);
	case Mode::Family: return family_mode(cfg, g);
	case Mode::Pencil: return pencil_mode(cfg, g);
	case Mode::Dunkl: return dunkl_mode(cfg, g);
	case Mode::Wdvv: return wdvv_mode(cfg, g);
	case Mode::SampleFlatness: return sample_flatness_mode(cfg, g);
	case Mode::All: {
		Report rep = standard_mode(cfg, g);
		rep.mode = "all";
		auto merge = [&rep](const Report &r) {
			for (const auto &c : r.checks)
				rep.checks.push_back(c);
			for (const auto &p : r.potentials)
				rep.potentials.push_back(p);
			for (const auto &n : r.notes)
				rep.notes.push_back(n);
		};
		if (!g.mirrors.empty())
			merge(dunkl_mode(cfg, g));
		if (g.reported.family_lambda)
			merge(family_mode(cfg, g));
		if (g.pencil.seed != PencilData::Seed::None)
			merge(pencil_mode(cfg, g));
		return rep;
	}
	}
	throw ConfigError("unhandled mode");
}

} // namespace biflat
