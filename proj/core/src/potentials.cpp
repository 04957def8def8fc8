#include <biflat/potentials.hpp>

#include <algorithm>
#include <set>

namespace biflat {

namespace {

// u-monomials of the given weighted degree
std::vector<Monomial> weighted_monomials(std::span<const long> weights,
                                         long degree)
{
	std::vector<Monomial> out;
	Monomial cur;
	int n = int(weights.size());
	auto rec = [&](auto &&self, int i, long rem) -> void {
		if (i == n) {
			if (rem == 0)
				out.push_back(cur);
			return;
		}
		for (int e = 0; e * weights[i] <= rem; e++) {
			cur.e[i] = std::uint16_t(e);
			cur.deg += e;
			self(self, i + 1, rem - e * weights[i]);
			cur.deg -= e;
		}
		cur.e[i] = 0;
	};
	rec(rec, 0, degree);
	return out;
}

long main_degree(const MultiPoly &f)
{
	std::optional<long> deg;
	int nm = f.vars() ? f.vars()->n_main : 0;
	for (const auto &[m, c] : f.terms()) {
		long d = 0;
		for (int i = 0; i < nm; i++)
			d += m.e[i];
		if (deg && *deg != d)
			throw NotInvariantError("polynomial is not homogeneous");
		deg = d;
	}
	return deg.value_or(0);
}

// solve sum_m a_m * cand[b][m] = target[b] for every block b, with
// coefficients in the parameter ring
LinearSolution<RatFun>
match_linear(const std::vector<std::vector<MultiPoly>> &cand_blocks,
             const std::vector<MultiPoly> &targets)
{
	int ncand = cand_blocks.empty() ? 0 : int(cand_blocks[0].size());
	std::vector<std::vector<RatFun>> rows;
	std::vector<RatFun> rhs;
	for (std::size_t b = 0; b < cand_blocks.size(); b++) {
		std::vector<std::map<Monomial, MultiPoly>> grouped;
		for (const auto &c : cand_blocks[b])
			grouped.push_back(c.group_by_main());
		auto tgt = targets[b].group_by_main();
		std::set<Monomial> keys;
		for (const auto &g : grouped)
			for (const auto &[m, c] : g)
				keys.insert(m);
		for (const auto &[m, c] : tgt)
			keys.insert(m);
		for (const auto &key : keys) {
			std::vector<RatFun> row(ncand);
			for (int m = 0; m < ncand; m++) {
				auto it = grouped[m].find(key);
				row[m] = it == grouped[m].end() ? RatFun()
				                                : RatFun(it->second);
			}
			auto it = tgt.find(key);
			rows.push_back(std::move(row));
			rhs.push_back(it == tgt.end() ? RatFun() : RatFun(it->second));
		}
	}
	Mat<RatFun> a(int(rows.size()), ncand);
	for (int r = 0; r < int(rows.size()); r++)
		for (int m = 0; m < ncand; m++)
			a(r, m) = std::move(rows[r][m]);
	return solve_linear(std::move(a), std::move(rhs));
}

// assemble sum_m coeff_m * mono_m over the u table
MultiPoly assemble(const std::vector<Monomial> &monos,
                   const std::vector<RatFun> &coeffs, const VarsPtr &uvars)
{
	MultiPoly res(uvars, NfElem());
	for (std::size_t m = 0; m < monos.size(); m++) {
		if (coeffs[m].is_zero())
			continue;
		const MultiPoly &c = coeffs[m].as_poly(); // parameter polynomial
		std::vector<MultiPoly::Term> terms;
		for (const auto &[pm, pc] : c.terms())
			terms.emplace_back(monos[m] * pm, pc);
		res += MultiPoly(uvars, std::move(terms));
	}
	return res;
}

} // namespace

MultiPoly express_in_invariants(const MultiPoly &f,
                                std::span<const MultiPoly> basis,
                                std::span<const long> degrees,
                                const VarsPtr &uvars)
{
	if (f.is_zero())
		return MultiPoly(uvars, NfElem());
	long w = main_degree(f);
	auto monos = weighted_monomials(degrees, w);
	if (monos.empty())
		throw NotInvariantError("no invariant monomials of weight " +
		                        std::to_string(w));
	std::vector<MultiPoly> cands;
	for (const auto &m : monos) {
		MultiPoly p(f.vars(), NfElem(Rat(1)));
		for (int i = 0; i < int(basis.size()); i++)
			if (m.e[i])
				p *= basis[i].pow(m.e[i]);
		cands.push_back(std::move(p));
	}
	auto sol = match_linear({cands}, {f});
	if (sol.kind == SolveKind::Infeasible)
		throw NotInvariantError("polynomial is not in the invariant ring");
	if (sol.kind == SolveKind::Family)
		throw AlgebraicDependenceError(
		    "invariant monomials are dependent at weight " +
		    std::to_string(w));
	return assemble(monos, sol.particular, uvars);
}

std::vector<MultiPoly> integrate_structure_constants(
    const Ten3<MultiPoly> &c, std::span<const long> degrees,
    const VarsPtr &uvars)
{
	int n = c.n;
	long dn = degrees[n - 1];
	std::vector<MultiPoly> a;
	for (int i = 0; i < n; i++) {
		auto monos = weighted_monomials(degrees, degrees[i] + dn);
		std::vector<std::vector<MultiPoly>> blocks;
		std::vector<MultiPoly> targets;
		for (int j = 0; j < n; j++)
			for (int k = j; k < n; k++) {
				std::vector<MultiPoly> cand;
				for (const auto &m : monos) {
					MultiPoly p(uvars, std::vector<MultiPoly::Term>{
					                       {m, NfElem(Rat(1))}});
					cand.push_back(p.derivative(j).derivative(k));
				}
				blocks.push_back(std::move(cand));
				targets.push_back(c(i, j, k));
			}
		auto sol = match_linear(blocks, targets);
		if (sol.kind == SolveKind::Infeasible)
			throw IntegrabilityError(
			    "structure constants are not integrable at index " +
			    std::to_string(i + 1));
		if (sol.kind == SolveKind::Family)
			throw AlgebraicDependenceError(
			    "potential is not unique beyond affine terms");
		a.push_back(assemble(monos, sol.particular, uvars));
	}
	return a;
}

std::optional<FrobeniusCandidate>
frobenius_detect(const Ten3<MultiPoly> &c, std::span<const long> degrees,
                 const VarsPtr &uvars)
{
	int n = c.n;
	// unknowns: eta_{il}, i <= l
	std::vector<std::pair<int, int>> slots;
	for (int i = 0; i < n; i++)
		for (int l = i; l < n; l++)
			slots.emplace_back(i, l);
	auto eta_at = [&](const std::vector<NfElem> &v, int i, int l) {
		for (std::size_t s = 0; s < slots.size(); s++)
			if ((slots[s].first == std::min(i, l)) &&
			    (slots[s].second == std::max(i, l)))
				return v[s];
		return NfElem();
	};
	// condition: sum_l eta_{il} c^l_{jk} - eta_{jl} c^l_{ik} = 0
	std::vector<std::vector<NfElem>> rows;
	for (int i = 0; i < n; i++)
		for (int j = i + 1; j < n; j++)
			for (int k = 0; k < n; k++) {
				// collect coefficients per u-monomial
				std::map<Monomial, std::vector<NfElem>> acc;
				for (std::size_t s = 0; s < slots.size(); s++) {
					auto add = [&](const MultiPoly &p, bool negate) {
						for (const auto &[m, q] : p.terms()) {
							auto &row = acc[m];
							row.resize(slots.size());
							row[s] += negate ? -q : q;
						}
					};
					auto [si, sl] = slots[s];
					// eta_{si,sl} multiplies c^{sl}_{jk} in slot i = si, and
					// c^{si}_{jk} when i = sl (symmetry)
					if (si == i || sl == i)
						add(c(si == i ? sl : si, j, k), false);
					if (si == j || sl == j)
						add(c(si == j ? sl : si, i, k), true);
				}
				for (auto &[m, row] : acc) {
					row.resize(slots.size());
					rows.push_back(row);
				}
			}
	Mat<NfElem> sys(int(rows.size()), int(slots.size()));
	for (int r = 0; r < int(rows.size()); r++)
		for (int s = 0; s < int(slots.size()); s++)
			sys(r, s) = rows[r][s];
	auto kernel = null_space(std::move(sys));
	if (kernel.empty())
		return std::nullopt;

	auto build = [&](const std::vector<NfElem> &v) {
		Mat<NfElem> eta(n, n);
		for (int i = 0; i < n; i++)
			for (int l = 0; l < n; l++)
				eta(i, l) = eta_at(v, i, l);
		return eta;
	};
	std::optional<Mat<NfElem>> eta;
	for (const auto &v : kernel) {
		Mat<NfElem> cand = build(v);
		if (!determinant(cand).is_zero()) {
			eta = cand;
			break;
		}
	}
	if (!eta && kernel.size() > 1) {
		// small deterministic combinations
		for (std::size_t a = 0; a < kernel.size() && !eta; a++)
			for (std::size_t b = a + 1; b < kernel.size() && !eta; b++) {
				std::vector<NfElem> v(kernel[a].size());
				for (std::size_t s = 0; s < v.size(); s++)
					v[s] = kernel[a][s] + kernel[b][s];
				Mat<NfElem> cand = build(v);
				if (!determinant(cand).is_zero())
					eta = cand;
			}
	}
	if (!eta)
		return std::nullopt;

	// weight of the potential: d_i + d_l + d_n on the eta support
	std::optional<long> support;
	for (int i = 0; i < n; i++)
		for (int l = 0; l < n; l++)
			if (!(*eta)(i, l).is_zero()) {
				long w = degrees[i] + degrees[l];
				if (support && *support != w)
					return std::nullopt;
				support = w;
			}
	long wf = *support + degrees[n - 1];

	// lowered tensor c_{ijk} = eta_{il} c^l_{jk}; integrate three times
	auto monos = weighted_monomials(degrees, wf);
	std::vector<std::vector<MultiPoly>> blocks;
	std::vector<MultiPoly> targets;
	for (int i = 0; i < n; i++)
		for (int j = i; j < n; j++)
			for (int k = j; k < n; k++) {
				std::vector<MultiPoly> cand;
				for (const auto &m : monos) {
					MultiPoly p(uvars, std::vector<MultiPoly::Term>{
					                       {m, NfElem(Rat(1))}});
					cand.push_back(
					    p.derivative(i).derivative(j).derivative(k));
				}
				MultiPoly low(uvars, NfElem());
				for (int l = 0; l < n; l++)
					low += (*eta)(i, l) * c(l, j, k);
				blocks.push_back(std::move(cand));
				targets.push_back(std::move(low));
			}
	auto sol = match_linear(blocks, targets);
	if (sol.kind != SolveKind::Unique)
		return std::nullopt;

	FrobeniusCandidate out;
	out.eta = *eta;
	out.potential = assemble(monos, sol.particular, uvars);
	out.charge = Rat(*support, degrees[n - 1]);
	out.charge.canonicalize();
	return out;
}

// ---------------------------------------------------------------------------

namespace {

MetricPencil pencil_from_gu(const GroupSpec &spec, Mat<MultiPoly> gu)
{
	int n = spec.rank;
	const VarsPtr &uvars = spec.uvars;
	int un = n - 1;
	MetricPencil out;
	out.g = gu;
	out.eta = Mat<NfElem>(n, n);
	for (int a = 0; a < n; a++)
		for (int b = 0; b < n; b++) {
			MultiPoly d = gu(a, b).derivative(un);
			if (!d.is_constant())
				throw NotAPencilError(
				    spec.name + ": metric is not linear in the top invariant");
			out.eta(a, b) = d.constant_value();
		}
	Mat<NfElem> eta_cov = out.eta; // invert the contravariant eta
	if (determinant(eta_cov).is_zero())
		throw NotAPencilError(spec.name + ": eta = Lie_e g is singular");
	// eta^{-1} with exact scalars
	Mat<NfElem> etai(n, n);
	{
		Mat<NfElem> id = Mat<NfElem>::identity(n, NfElem(Rat(1)));
		Mat<NfElem> m = eta_cov;
		// Gauss-Jordan
		for (int col = 0; col < n; col++) {
			int piv = -1;
			for (int i = col; i < n && piv < 0; i++)
				if (!m(i, col).is_zero())
					piv = i;
			if (piv < 0)
				throw NotAPencilError("eta singular");
			if (piv != col)
				for (int j = 0; j < n; j++) {
					std::swap(m(col, j), m(piv, j));
					std::swap(id(col, j), id(piv, j));
				}
			NfElem d = inverse(m(col, col));
			for (int j = 0; j < n; j++) {
				m(col, j) *= d;
				id(col, j) *= d;
			}
			for (int i = 0; i < n; i++) {
				if (i == col || m(i, col).is_zero())
					continue;
				NfElem f = m(i, col);
				for (int j = 0; j < n; j++) {
					m(i, j) -= f * m(col, j);
					id(i, j) -= f * id(col, j);
				}
			}
		}
		etai = id;
	}

	// dd F_{lm} = etai_{li} etai_{mj} g^{ij} / deg(g^{ij})
	std::vector<long> w = spec.degrees;
	Mat<MultiPoly> rhs(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++) {
			if (gu(i, j).is_zero())
				continue;
			auto deg = gu(i, j).isobaric_degree(w);
			if (!deg || *deg == 0)
				throw NotAPencilError("metric entry is not isobaric");
			rhs(i, j) = NfElem(Rat(1, *deg)) * gu(i, j);
		}
	Mat<MultiPoly> ddf(n, n);
	for (int l = 0; l < n; l++)
		for (int m = 0; m < n; m++) {
			MultiPoly acc(uvars, NfElem());
			for (int i = 0; i < n; i++)
				for (int j = 0; j < n; j++)
					if (!rhs(i, j).is_zero())
						acc += etai(l, i) * etai(m, j) * rhs(i, j);
			ddf(l, m) = std::move(acc);
		}
	// integrate: F isobaric of weight deg(ddf_{lm}) + d_l + d_m
	std::optional<long> wf;
	for (int l = 0; l < n; l++)
		for (int m = 0; m < n; m++)
			if (!ddf(l, m).is_zero()) {
				auto d = ddf(l, m).isobaric_degree(w);
				if (!d)
					throw NotAPencilError("potential system not isobaric");
				long cand = *d + w[l] + w[m];
				if (wf && *wf != cand)
					throw NotAPencilError("potential weight inconsistent");
				wf = cand;
			}
	auto monos = weighted_monomials(w, wf.value_or(0));
	std::vector<std::vector<MultiPoly>> blocks;
	std::vector<MultiPoly> targets;
	for (int l = 0; l < n; l++)
		for (int m = l; m < n; m++) {
			std::vector<MultiPoly> cand;
			for (const auto &mo : monos) {
				MultiPoly p(uvars, std::vector<MultiPoly::Term>{
				                       {mo, NfElem(Rat(1))}});
				cand.push_back(p.derivative(l).derivative(m));
			}
			blocks.push_back(std::move(cand));
			targets.push_back(ddf(l, m));
		}
	auto sol = match_linear(blocks, targets);
	if (sol.kind != SolveKind::Unique)
		throw NotAPencilError(spec.name +
		                      ": potential system has no unique solution");
	out.potential = assemble(monos, sol.particular, uvars);
	return out;
}

} // namespace

MetricPencil euclidean_pencil(const GroupSpec &spec,
                              std::span<const MultiPoly> u,
                              const Mat<NfElem> &seed)
{
	int n = spec.rank;
	Mat<MultiPoly> jp = jacobian(u, n);
	Mat<MultiPoly> gu(n, n);
	for (int a = 0; a < n; a++)
		for (int b = a; b < n; b++) {
			MultiPoly acc(spec.pvars, NfElem());
			for (int i = 0; i < n; i++)
				for (int j = 0; j < n; j++)
					if (!seed(i, j).is_zero())
						acc += seed(i, j) * jp(a, i) * jp(b, j);
			gu(a, b) = express_in_invariants(acc, u, spec.degrees, spec.uvars);
			if (b != a)
				gu(b, a) = gu(a, b);
		}
	return pencil_from_gu(spec, std::move(gu));
}

MetricPencil hessian_pencil(const GroupSpec &spec, std::span<const MultiPoly> u,
                            const MultiPoly &lowest)
{
	int n = spec.rank;
	Mat<MultiPoly> hess(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			hess(i, j) = lowest.derivative(i).derivative(j);
	MultiPoly det = determinant_bareiss(hess);
	if (det.is_zero())
		throw NotAPencilError(spec.name + ": Hessian is singular");
	Mat<MultiPoly> adj = adjugate(hess);
	Mat<MultiPoly> jp = jacobian(u, n);
	Mat<MultiPoly> gu(n, n);
	for (int a = 0; a < n; a++)
		for (int b = a; b < n; b++) {
			MultiPoly acc(spec.pvars, NfElem());
			for (int i = 0; i < n; i++)
				for (int j = 0; j < n; j++)
					acc += jp(a, i) * adj(i, j) * jp(b, j);
			auto q = exact_divide(acc, det);
			if (!q)
				throw NotAPencilError(
				    spec.name +
				    ": inverse Hessian metric is not polynomial in the "
				    "invariants");
			gu(a, b) = express_in_invariants(*q, u, spec.degrees, spec.uvars);
			if (b != a)
				gu(b, a) = gu(a, b);
		}
	return pencil_from_gu(spec, std::move(gu));
}

bool pencil_flat_at(const Mat<MultiPoly> &g, const Mat<NfElem> &eta,
                    const NfElem &lambda, const VarsPtr &uvars)
{
	int n = g.rows();
	Mat<RatFun> contr(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			contr(i, j) = RatFun(g(i, j) - MultiPoly(uvars, lambda * eta(i, j)));
	Mat<RatFun> cov = inverse(contr);
	Ten3<RatFun> gamma(n);
	for (int k = 0; k < n; k++)
		for (int i = 0; i < n; i++)
			for (int j = i; j < n; j++) {
				RatFun acc;
				for (int l = 0; l < n; l++)
					acc += contr(k, l) *
					       (cov(l, j).derivative(i) +
					        cov(l, i).derivative(j) -
					        cov(i, j).derivative(l));
				acc = NfElem(Rat(1, 2)) * acc;
				gamma(k, i, j) = acc;
				if (i != j)
					gamma(k, j, i) = gamma(k, i, j);
			}
	return all_zero(curvature_tensor(gamma));
}

} // namespace biflat
