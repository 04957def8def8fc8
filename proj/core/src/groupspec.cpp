#include <biflat/groupspec.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace biflat {

std::vector<std::vector<AnsatzTerm>>
enumerate_ansatz(std::span<const long> degrees)
{
	int n = int(degrees.size());
	std::vector<std::vector<AnsatzTerm>> out(n);
	int next_const = 1;
	for (int i = 0; i < n; i++) {
		// multisets of strictly lower-degree invariants of total degree d_i
		std::vector<std::vector<int>> found;
		std::vector<int> expo(i, 0);
		auto rec = [&](auto &&self, int j, long remaining) -> void {
			if (remaining == 0) {
				bool nontrivial = false;
				for (int e : expo)
					nontrivial |= e > 0;
				if (nontrivial)
					found.push_back(expo);
				return;
			}
			if (j >= i)
				return;
			if (degrees[j] >= degrees[i]) // only strictly lower degrees
				return;
			for (int e = 0; e * degrees[j] <= remaining; e++) {
				expo[j] = e;
				self(self, j + 1, remaining - e * degrees[j]);
			}
			expo[j] = 0;
		};
		rec(rec, 0, degrees[i]);
		std::sort(found.begin(), found.end());
		for (auto &e : found)
			out[i].push_back(
			    AnsatzTerm{"c" + std::to_string(next_const++), std::move(e)});
	}
	return out;
}

std::vector<int> GroupSpec::mirror_order_classes() const
{
	std::vector<int> orders;
	for (const auto &m : mirrors)
		if (std::find(orders.begin(), orders.end(), m.order) == orders.end())
			orders.push_back(m.order);
	std::sort(orders.begin(), orders.end());
	return orders;
}

ExprContext GroupSpec::pcontext() const
{
	ExprContext ctx;
	ctx.vars = pvars;
	ctx.field = field;
	ctx.consts = named_consts;
	ctx.named_polys = named_polys;
	for (int i = 0; i < int(base_invariants.size()); i++)
		ctx.named_polys.emplace("U" + std::to_string(i + 1),
		                        base_invariants[i]);
	return ctx;
}

ExprContext GroupSpec::ucontext() const
{
	ExprContext ctx;
	ctx.vars = uvars;
	ctx.field = field;
	ctx.consts = named_consts;
	return ctx;
}

ExprContext GroupSpec::ccontext() const
{
	ExprContext ctx;
	ctx.vars = pvars; // constants are parameter variables of the table
	ctx.field = field;
	ctx.consts = named_consts;
	return ctx;
}

MultiPoly GroupSpec::bind_constants(const MultiPoly &p,
                                    std::span<const NfElem> values) const
{
	if (values.empty())
		return p;
	std::map<int, MultiPoly> sub;
	for (int j = 0; j < int(values.size()); j++)
		sub.emplace(const_var(j), MultiPoly(p.vars(), values[j]));
	return p.substitute(sub);
}

RatFun GroupSpec::bind_constants(const RatFun &f,
                                 std::span<const NfElem> values) const
{
	MultiPoly num = bind_constants(f.num(), values);
	std::vector<RatFun::Factor> den;
	for (const auto &fac : f.den())
		den.push_back(RatFun::Factor{bind_constants(fac.poly, values),
		                             fac.power});
	return RatFun(std::move(num), std::move(den));
}

std::vector<NfElem> GroupSpec::reported_constants() const
{
	std::vector<NfElem> vals;
	ExprContext ctx = ccontext();
	for (const auto &c : constants) {
		auto it = reported.constants.find(c);
		if (it == reported.constants.end())
			throw ValidationError(name + ": no reported value for " + c);
		vals.push_back(parse_constant(it->second, ctx));
	}
	return vals;
}

// ---------------------------------------------------------------------------
// loader

namespace {

Rat rat_from_string(const std::string &s)
{
	Rat r(s);
	r.canonicalize();
	return r;
}

struct Line {
	int no;
	std::string text;
};

struct Sections {
	std::map<std::string, std::vector<Line>> by_name;
	std::string origin;

	const std::vector<Line> &get(const std::string &name) const
	{
		static const std::vector<Line> empty;
		auto it = by_name.find(name);
		return it == by_name.end() ? empty : it->second;
	}
	bool has(const std::string &name) const { return by_name.count(name); }
};

Sections split_sections(const std::string &text, const std::string &origin)
{
	Sections s;
	s.origin = origin;
	std::istringstream in(text);
	std::string raw;
	std::string current;
	int no = 0;
	while (std::getline(in, raw)) {
		no++;
		if (auto h = raw.find('#'); h != std::string::npos)
			raw.erase(h);
		while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' ||
		                        raw.back() == '\r'))
			raw.pop_back();
		std::size_t b = raw.find_first_not_of(" \t");
		if (b == std::string::npos)
			continue;
		raw = raw.substr(b);
		if (raw.front() == '[' && raw.back() == ']') {
			current = raw.substr(1, raw.size() - 2);
			if (s.by_name.count(current))
				throw ValidationError(origin + ": duplicate section [" +
				                      current + "]");
			s.by_name[current];
			continue;
		}
		if (current.empty())
			throw ValidationError(origin + ": content before first section");
		s.by_name[current].push_back(Line{no, raw});
	}
	return s;
}

std::pair<std::string, std::string> split_kv(const Line &l,
                                             const std::string &origin)
{
	auto eq = l.text.find('=');
	if (eq == std::string::npos)
		throw ValidationError(origin + ":" + std::to_string(l.no) +
		                      ": expected key = value");
	auto trim = [](std::string t) {
		std::size_t a = t.find_first_not_of(" \t");
		std::size_t b = t.find_last_not_of(" \t");
		return a == std::string::npos ? std::string()
		                              : t.substr(a, b - a + 1);
	};
	return {trim(l.text.substr(0, eq)), trim(l.text.substr(eq + 1))};
}

std::vector<std::string> split_list(const std::string &s, char sep)
{
	std::vector<std::string> out;
	std::string cur;
	int depth = 0;
	for (char c : s) {
		if (c == '(')
			depth++;
		if (c == ')')
			depth--;
		if (c == sep && depth == 0) {
			out.push_back(cur);
			cur.clear();
		} else
			cur += c;
	}
	out.push_back(cur);
	for (auto &t : out) {
		std::size_t a = t.find_first_not_of(" \t");
		std::size_t b = t.find_last_not_of(" \t");
		t = a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
	}
	return out;
}

} // namespace

GroupSpec load_group_text(const std::string &text, const std::string &origin)
{
	Sections sec = split_sections(text, origin);
	GroupSpec g;

	// --- meta
	for (const auto &l : sec.get("meta")) {
		auto [k, v] = split_kv(l, origin);
		if (k == "name")
			g.name = v;
		else if (k == "rank")
			g.rank = std::stoi(v);
		else if (k == "degrees") {
			for (const auto &d : split_list(v, ' '))
				if (!d.empty())
					g.degrees.push_back(std::stol(d));
		} else
			throw ValidationError(origin + ": unknown meta key " + k);
	}
	if (g.name.empty() || g.rank <= 0 ||
	    int(g.degrees.size()) != g.rank)
		throw ValidationError(origin +
		                      ": [meta] must declare name, rank and one "
		                      "degree per invariant");

	// --- variable tables, canonical ansatz constants
	g.ansatz_terms = enumerate_ansatz(g.degrees);
	for (const auto &terms : g.ansatz_terms)
		for (const auto &t : terms)
			g.constants.push_back(t.constant);
	std::vector<std::string> pnames, unames;
	for (int i = 1; i <= g.rank; i++) {
		pnames.push_back("p" + std::to_string(i));
		unames.push_back("u" + std::to_string(i));
	}
	std::vector<std::string> params = g.constants;
	params.push_back("lam"); // family parameter of the dual-connection pencil
	g.pvars = make_vars(pnames, params);
	g.uvars = make_vars(unames, params);

	// --- generators
	auto tower = FieldTower::make();
	FieldPtr field = tower;
	std::map<std::string, NfElem> consts;
	ExprContext genctx; // for minimal polynomials, variable z
	for (const auto &l : sec.get("generators")) {
		auto parts = split_list(l.text, '|');
		genctx.vars = make_vars({"z"});
		genctx.field = field;
		genctx.consts = consts;
		std::string name;
		std::vector<NfElem> minpoly;
		std::optional<std::string> conj_expr;
		if (parts.size() == 1) {
			// shorthands: "I" and "sqrt <d>"
			auto words = split_list(parts[0], ' ');
			words.erase(std::remove_if(words.begin(), words.end(),
			                           [](const std::string &w) {
				                           return w.empty();
			                           }),
			            words.end());
			if (words.size() == 1 && words[0] == "I") {
				name = "I";
				minpoly = {NfElem(Rat(1)), NfElem(), NfElem(Rat(1))};
				conj_expr = "-I";
			} else if (words.size() == 2 && words[0] == "sqrt") {
				long d = std::stol(words[1]);
				name = "sqrt" + words[1];
				minpoly = {NfElem(Rat(-d)), NfElem(), NfElem(Rat(1))};
				conj_expr = name; // real radical, fixed by conjugation
			} else
				throw ValidationError(origin + ":" + std::to_string(l.no) +
				                      ": bad generator shorthand");
		} else if (parts.size() == 3) {
			name = parts[0];
			MultiPoly mp = parse_expression(parts[1], genctx, l.no);
			int deg = int(mp.total_degree());
			minpoly.assign(deg + 1, NfElem());
			for (const auto &[m, c] : mp.terms())
				minpoly[m.e[0]] = c;
			conj_expr = parts[2];
		} else
			throw ValidationError(origin + ":" + std::to_string(l.no) +
			                      ": generator needs name|minpoly|conj");
		int k = tower->add_generator(name, std::move(minpoly));
		NfElem gen = NfElem::generator(field, k);
		consts.emplace(name, gen);
		if (conj_expr) {
			ExprContext cctx;
			cctx.field = field;
			cctx.consts = consts;
			tower->set_conj_image(k, parse_constant(*conj_expr, cctx, l.no));
		}
	}
	tower->validate_conjugation();
	g.field = field;

	// --- defines (field constants)
	for (const auto &l : sec.get("defines")) {
		auto [k, v] = split_kv(l, origin);
		ExprContext cctx;
		cctx.field = field;
		cctx.consts = consts;
		consts.emplace(k, parse_constant(v, cctx, l.no));
	}
	g.named_consts = consts;

	// --- polynomial defines and invariants
	ExprContext pctx;
	pctx.vars = g.pvars;
	pctx.field = field;
	pctx.consts = consts;
	for (const auto &l : sec.get("polydefs")) {
		auto [k, v] = split_kv(l, origin);
		pctx.named_polys.emplace(k, parse_expression(v, pctx, l.no));
	}
	g.named_polys = pctx.named_polys;
	for (const auto &l : sec.get("invariants")) {
		auto [k, v] = split_kv(l, origin);
		std::string expect = "U" + std::to_string(g.base_invariants.size() + 1);
		if (k != expect)
			throw ValidationError(origin + ":" + std::to_string(l.no) +
			                      ": invariants must be declared in order; "
			                      "expected " + expect);
		MultiPoly u = parse_expression(v, pctx, l.no);
		pctx.named_polys.emplace(k, u);
		g.base_invariants.push_back(std::move(u));
	}

	// --- expanded ansatz u_i = U_i + sum c * prod U^e
	for (int i = 0; i < g.rank && i < int(g.base_invariants.size()); i++) {
		MultiPoly u = g.base_invariants[i];
		for (const auto &t : g.ansatz_terms[i]) {
			MultiPoly corr =
			    MultiPoly::variable(g.pvars, *g.pvars->index(t.constant));
			for (int j = 0; j < int(t.exponents.size()); j++)
				if (t.exponents[j])
					corr *= g.base_invariants[j].pow(unsigned(t.exponents[j]));
			u += corr;
		}
		g.ansatz.push_back(std::move(u));
	}

	// --- mirrors
	ExprContext cctx;
	cctx.field = field;
	cctx.consts = consts;
	for (const auto &l : sec.get("mirrors")) {
		auto colon = l.text.find(':');
		if (colon == std::string::npos)
			throw ValidationError(origin + ":" + std::to_string(l.no) +
			                      ": mirror line needs 'order: components'");
		Mirror m;
		m.order = std::stoi(l.text.substr(0, colon));
		for (const auto &comp : split_list(l.text.substr(colon + 1), ','))
			m.covector.push_back(parse_constant(comp, cctx, l.no));
		if (int(m.covector.size()) != g.rank)
			throw ValidationError(origin + ":" + std::to_string(l.no) +
			                      ": covector has wrong length");
		g.mirrors.push_back(std::move(m));
	}

	// --- hermitian raising form
	g.hermitian = Mat<NfElem>::identity(g.rank, NfElem(Rat(1)));
	{
		const auto &lines = sec.get("hermitian");
		if (!lines.empty() &&
		    !(lines.size() == 1 && lines[0].text == "identity")) {
			if (int(lines.size()) != g.rank)
				throw ValidationError(origin + ": [hermitian] needs " +
				                      std::to_string(g.rank) + " rows");
			for (int i = 0; i < g.rank; i++) {
				auto row = split_list(lines[i].text, ',');
				if (int(row.size()) != g.rank)
					throw ValidationError(origin + ": bad hermitian row");
				for (int j = 0; j < g.rank; j++)
					g.hermitian(i, j) =
					    parse_constant(row[j], cctx, lines[i].no);
			}
		}
	}

	// --- pencil
	for (const auto &l : sec.get("pencil")) {
		auto [k, v] = split_kv(l, origin);
		if (k == "seed") {
			auto words = split_list(v, ' ');
			if (words[0] == "inverse_hessian") {
				g.pencil.seed = PencilData::Seed::InverseHessian;
				g.pencil.hessian_of = std::stoi(words.at(1).substr(1)) - 1;
			} else if (words[0] == "explicit")
				g.pencil.seed = PencilData::Seed::Matrix;
			else
				throw ValidationError(origin + ": bad pencil seed " + v);
		} else if (k == "row") {
			if (g.pencil.seed_matrix.rows() == 0)
				g.pencil.seed_matrix = Mat<NfElem>(g.rank, g.rank);
			// rows are given in order; the next one is the first empty row
			int r = 0;
			for (; r < g.rank; r++) {
				bool empty = true;
				for (int j = 0; j < g.rank; j++)
					empty &= g.pencil.seed_matrix(r, j).is_zero();
				if (empty)
					break;
			}
			auto row = split_list(v, ',');
			for (int j = 0; j < g.rank && j < int(row.size()); j++)
				g.pencil.seed_matrix(r, j) = parse_constant(row[j], cctx, l.no);
		} else if (k == "constants")
			g.pencil.frobenius_constants = (v == "frobenius");
		else
			throw ValidationError(origin + ": unknown pencil key " + k);
	}

	// --- reported table data
	for (const auto &l : sec.get("reported")) {
		auto [k, v] = split_kv(l, origin);
		if (k == "mirrors")
			g.reported.n_mirrors = std::stoi(v);
		else if (k == "normalizer")
			g.reported.normalizer = rat_from_string(v);
		else if (k == "kappa") {
			for (const auto &cls : split_list(v, ' ')) {
				if (cls.empty())
					continue;
				auto star = cls.find('*');
				g.reported.kappa_classes.emplace_back(
				    std::stoi(cls.substr(0, star)),
				    std::stoi(cls.substr(star + 1)));
			}
		} else if (k == "eta") {
			std::vector<std::vector<std::string>> rows;
			for (const auto &row : split_list(v, ';'))
				rows.push_back(split_list(row, ','));
			g.reported.eta = std::move(rows);
		} else if (k == "frobenius_potential")
			g.reported.frobenius_potential = v;
		else if (k == "pencil_potential")
			g.reported.pencil_potential = v;
		else if (k == "pencil_eta") {
			std::vector<std::vector<std::string>> rows;
			for (const auto &row : split_list(v, ';'))
				rows.push_back(split_list(row, ','));
			g.reported.pencil_eta = std::move(rows);
		}
		else if (k == "family_lambda")
			g.reported.family_lambda = v;
		else if (k == "family_weights") {
			// weight*count runs in mirror-list order
			for (const auto &w : split_list(v, ' ')) {
				if (w.empty())
					continue;
				auto star = w.find('*');
				Rat weight = rat_from_string(
				    star == std::string::npos ? w : w.substr(0, star));
				int count = star == std::string::npos
				                ? 1
				                : std::stoi(w.substr(star + 1));
				for (int c = 0; c < count; c++)
					g.reported.family_weights.push_back(weight);
			}
		} else if (k == "standard_frobenius")
			g.reported.standard_frobenius = (v == "yes");
		else if (k.rfind("family_", 0) == 0)
			g.reported.family_constraints.emplace(k.substr(7), v);
		else if (k.rfind("frobenius_", 0) == 0)
			g.reported.frobenius_params.emplace(k.substr(10), v);
		else if (!k.empty() && k[0] == 'c')
			g.reported.constants.emplace(k, v);
		else
			throw ValidationError(origin + ": unknown reported key " + k);
	}

	validate_spec(g);
	return g;
}

GroupSpec load_group_file(const std::string &path)
{
	std::ifstream f(path);
	if (!f)
		throw ConfigError("cannot open group file " + path);
	std::stringstream buf;
	buf << f.rdbuf();
	return load_group_text(buf.str(), path);
}

void validate_spec(const GroupSpec &g)
{
	auto fail = [&](const std::string &m) {
		throw ValidationError(g.name + ": " + m);
	};
	if (int(g.base_invariants.size()) != g.rank)
		fail("expected " + std::to_string(g.rank) + " basic invariants");
	for (int i = 0; i + 1 < g.rank; i++)
		if (g.degrees[i] > g.degrees[i + 1])
			fail("degrees must be non-decreasing");
	std::vector<long> ones(g.rank, 1);
	for (int i = 0; i < g.rank; i++) {
		if (g.base_invariants[i].is_zero())
			fail("invariant U" + std::to_string(i + 1) + " is zero");
		auto d = g.base_invariants[i].isobaric_degree(ones);
		if (!d || *d != g.degrees[i])
			fail("invariant U" + std::to_string(i + 1) +
			     " is not homogeneous of degree " +
			     std::to_string(g.degrees[i]));
	}
	if (g.reported.n_mirrors && !g.mirrors.empty() &&
	    int(g.mirrors.size()) != *g.reported.n_mirrors)
		fail("mirror count disagrees with the reported M");
	if (!g.reported.kappa_classes.empty() && !g.mirrors.empty()) {
		// table kappa values may disagree with the reflection orders (that
		// discrepancy is reported, not failed) but the pattern must cover
		// exactly the mirror list
		std::size_t total = 0;
		for (const auto &[kappa, count] : g.reported.kappa_classes)
			total += count;
		if (total != g.mirrors.size())
			fail("kappa pattern does not cover all mirrors");
	}
	for (const auto &m : g.mirrors) {
		bool nonzero = false;
		for (const auto &c : m.covector)
			nonzero |= !c.is_zero();
		if (!nonzero)
			fail("zero mirror covector");
	}
	// pairwise non-proportional
	for (std::size_t a = 0; a < g.mirrors.size(); a++)
		for (std::size_t b = a + 1; b < g.mirrors.size(); b++) {
			const auto &x = g.mirrors[a].covector, &y = g.mirrors[b].covector;
			bool prop = true;
			for (int i = 0; i < g.rank && prop; i++)
				for (int j = i + 1; j < g.rank && prop; j++)
					prop = (x[i] * y[j] == x[j] * y[i]);
			if (prop)
				fail("mirrors " + std::to_string(a + 1) + " and " +
				     std::to_string(b + 1) + " are proportional");
		}
	// hermitian form: invertible and equal to its conjugate transpose
	Mat<NfElem> h = g.hermitian;
	if (determinant(h).is_zero())
		fail("hermitian form is singular");
	for (int i = 0; i < g.rank; i++)
		for (int j = 0; j < g.rank; j++)
			if (conjugate(h(j, i)) != h(i, j))
				fail("raising form is not hermitian");
}

} // namespace biflat
