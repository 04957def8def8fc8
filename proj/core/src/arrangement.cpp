#include <biflat/arrangement.hpp>

#include <sstream>

namespace biflat {

std::vector<NfElem> raised_covector(const std::vector<NfElem> &alpha,
                                    const Mat<NfElem> &h)
{
	int n = int(alpha.size());
	std::vector<NfElem> r(n);
	for (int i = 0; i < n; i++) {
		NfElem acc;
		for (int m = 0; m < n; m++)
			acc += h(i, m) * conjugate(alpha[m]);
		r[i] = acc;
	}
	return r;
}

NfElem covector_norm(const std::vector<NfElem> &alpha, const Mat<NfElem> &h)
{
	std::vector<NfElem> raised = raised_covector(alpha, h);
	NfElem acc;
	for (std::size_t i = 0; i < alpha.size(); i++)
		acc += alpha[i] * raised[i];
	if (acc.is_zero())
		throw IsotropicCovectorError("covector is isotropic for the form");
	return acc;
}

Mat<NfElem> projection(const std::vector<NfElem> &alpha, const Mat<NfElem> &h)
{
	int n = int(alpha.size());
	std::vector<NfElem> raised = raised_covector(alpha, h);
	NfElem inv_norm = inverse(covector_norm(alpha, h));
	Mat<NfElem> p(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			p(i, j) = raised[i] * alpha[j] * inv_norm;
	return p;
}

std::vector<NfElem> default_weights(const Arrangement &arr)
{
	std::vector<NfElem> w;
	for (const auto &m : arr.mirrors)
		w.push_back(m.weight ? *m.weight : NfElem(Rat(m.order)));
	return w;
}

std::pair<Mat<NfElem>, std::optional<NfElem>>
normalization_sum(const Arrangement &arr, std::span<const NfElem> weights)
{
	int n = arr.rank;
	Mat<NfElem> sum(n, n);
	for (std::size_t s = 0; s < arr.mirrors.size(); s++) {
		Mat<NfElem> pi = projection(arr.mirrors[s].covector, arr.h);
		for (int i = 0; i < n; i++)
			for (int j = 0; j < n; j++)
				sum(i, j) += weights[s] * pi(i, j);
	}
	NfElem diag = sum(0, 0);
	bool proportional = true;
	for (int i = 0; i < n && proportional; i++)
		for (int j = 0; j < n && proportional; j++)
			proportional = (i == j) ? sum(i, j) == diag : sum(i, j).is_zero();
	if (proportional)
		return {sum, diag};
	return {sum, std::nullopt};
}

Ten3<NfElem> dk_term_at(const Arrangement &arr, int s,
                        std::span<const NfElem> point)
{
	const auto &alpha = arr.mirrors[s].covector;
	int n = arr.rank;
	std::vector<NfElem> raised = raised_covector(alpha, arr.h);
	NfElem inv_norm = inverse(covector_norm(alpha, arr.h));
	NfElem ap;
	for (int i = 0; i < n; i++)
		ap += alpha[i] * point[i];
	if (ap.is_zero())
		throw DivisionByZeroError("sample point lies on a mirror");
	NfElem inv_ap = inverse(ap);
	Ten3<NfElem> t(n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = 0; k < n; k++)
				t(i, j, k) = alpha[j] * alpha[k] * raised[i] * inv_norm *
				             inv_ap;
	return t;
}

namespace {

// c(i,j,k) += w * a_j a_k raised^i / (|a|^2 a(x))
template <class S>
void add_dk_term(Ten3<S> &c, const Frame<S> &f, const Arrangement &arr, int s,
                 const NfElem &scale)
{
	const auto &alpha = arr.mirrors[s].covector;
	int n = f.n;
	std::vector<NfElem> raised = raised_covector(alpha, arr.h);
	NfElem inv_norm = inverse(covector_norm(alpha, arr.h));
	S ax{};
	for (int i = 0; i < n; i++)
		ax += f.embed(alpha[i]) * f.coords[i];
	S inv_ax = scalar_inv(ax);
	for (int i = 0; i < n; i++) {
		if ((raised[i] * scale).is_zero())
			continue;
		for (int j = 0; j < n; j++)
			for (int k = j; k < n; k++) {
				NfElem coeff = scale * inv_norm * raised[i] * alpha[j] *
				               alpha[k];
				if (coeff.is_zero())
					continue;
				S term = f.embed(coeff) * inv_ax;
				c(i, j, k) += term;
				if (k != j)
					c(i, k, j) += term;
			}
	}
	(void)arr;
}

} // namespace

template <class S>
Product<S> dk_product(const Frame<S> &f, const Arrangement &arr,
                      std::span<const NfElem> weights)
{
	auto [sum, N] = normalization_sum(arr, weights);
	if (!N || N->is_zero())
		throw InvalidFamilyError(
		    "weights do not normalize: sum kappa pi is not c * Id");
	NfElem inv_n = inverse(*N);
	Product<S> p;
	p.chart = Chart::P;
	p.c = Ten3<S>(f.n);
	for (std::size_t s = 0; s < arr.mirrors.size(); s++)
		add_dk_term(p.c, f, arr, int(s), weights[s] * inv_n);
	return p;
}

template Product<SymScalar> dk_product(const Frame<SymScalar> &,
                                       const Arrangement &,
                                       std::span<const NfElem>);
template Product<JetScalar> dk_product(const Frame<JetScalar> &,
                                       const Arrangement &,
                                       std::span<const NfElem>);

template <class S>
Ten3<S> family_correction(const Frame<S> &f, const Arrangement &arr,
                          std::span<const NfElem> weights)
{
	auto [sum, N] = normalization_sum(arr, weights);
	bool zero = true;
	for (int i = 0; i < arr.rank && zero; i++)
		for (int j = 0; j < arr.rank && zero; j++)
			zero = sum(i, j).is_zero();
	if (!zero)
		throw InvalidFamilyError(
		    "family weights must satisfy sum kappa pi = 0");
	Ten3<S> c(f.n);
	for (std::size_t s = 0; s < arr.mirrors.size(); s++)
		add_dk_term(c, f, arr, int(s), weights[s]);
	return c;
}

template Ten3<SymScalar> family_correction(const Frame<SymScalar> &,
                                           const Arrangement &,
                                           std::span<const NfElem>);
template Ten3<JetScalar> family_correction(const Frame<JetScalar> &,
                                           const Arrangement &,
                                           std::span<const NfElem>);

FittedWeights fit_weights(const Arrangement &arr,
                          const std::vector<Ten3<NfElem>> &targets,
                          const std::vector<std::vector<NfElem>> &points)
{
	int n = arr.rank;
	int m = int(arr.mirrors.size());
	std::vector<std::vector<NfElem>> rows;
	for (std::size_t q = 0; q < points.size(); q++) {
		std::vector<Ten3<NfElem>> terms;
		for (int s = 0; s < m; s++)
			terms.push_back(dk_term_at(arr, s, points[q]));
		for (int i = 0; i < n; i++)
			for (int j = 0; j < n; j++)
				for (int k = j; k < n; k++) {
					std::vector<NfElem> row(m);
					bool nontrivial = false;
					for (int s = 0; s < m; s++) {
						// n * T_s - target: coefficient of kappa_s
						row[s] = NfElem(Rat(n)) * terms[s](i, j, k) -
						         targets[q](i, j, k);
						nontrivial |= !row[s].is_zero();
					}
					if (nontrivial)
						rows.push_back(std::move(row));
				}
	}
	Mat<NfElem> a(int(rows.size()), m);
	for (int r = 0; r < int(rows.size()); r++)
		for (int s = 0; s < m; s++)
			a(r, s) = rows[r][s];
	auto kernel = null_space(std::move(a));
	if (kernel.empty())
		throw NoWeightsError("no Dunkl-Kohno weights fit the target product");
	if (kernel.size() > 1)
		throw NoWeightsError("weight fit is not unique up to scale");
	std::vector<NfElem> w = kernel[0];
	if (w[0].is_zero())
		throw NoWeightsError("degenerate weight fit");
	NfElem scale = NfElem(Rat(arr.mirrors[0].order)) * inverse(w[0]);
	for (auto &x : w)
		x *= scale;
	auto [sum, N] = normalization_sum(arr, w);
	if (!N)
		throw NoWeightsError("fitted weights do not normalize");
	return FittedWeights{std::move(w), *N};
}

LogPotential veselov_potential(const Arrangement &arr,
                               std::span<const NfElem> weights)
{
	auto [sum, N] = normalization_sum(arr, weights);
	if (!N || N->is_zero())
		throw InvalidFamilyError("weights do not normalize");
	NfElem inv_n = inverse(*N);
	LogPotential pot;
	for (std::size_t s = 0; s < arr.mirrors.size(); s++) {
		const auto &alpha = arr.mirrors[s].covector;
		std::vector<NfElem> coeff = raised_covector(alpha, arr.h);
		NfElem f = weights[s] * inv_n * inverse(covector_norm(alpha, arr.h));
		for (auto &c : coeff)
			c *= f;
		pot.terms.push_back(LogPotential::Term{std::move(coeff), alpha});
	}
	return pot;
}

Product<SymScalar> hessian_of_logpotential(const LogPotential &pot,
                                           const VarsPtr &pvars)
{
	int n = pvars->n_main;
	Product<SymScalar> p;
	p.chart = Chart::P;
	p.c = Ten3<SymScalar>(n);
	for (const auto &t : pot.terms) {
		// d_j d_k of a(p) ln a(p) = a_j a_k / a(p)
		MultiPoly ax(pvars, NfElem());
		for (int i = 0; i < n; i++)
			ax += t.covector[i] * MultiPoly::variable(pvars, i);
		RatFun inv_ax = RatFun(MultiPoly(pvars, NfElem(Rat(1)))) / RatFun(ax);
		for (int i = 0; i < n; i++)
			for (int j = 0; j < n; j++)
				for (int k = 0; k < n; k++) {
					NfElem c = t.coefficient[i] * t.covector[j] *
					           t.covector[k];
					if (!c.is_zero())
						p.c(i, j, k) += c * inv_ax;
				}
	}
	return p;
}

// ---------------------------------------------------------------------------

VeeReport vee_system_check(const std::vector<std::vector<NfElem>> &covectors,
                           bool check_planes)
{
	VeeReport rep;
	int n = int(covectors.at(0).size());

	// covariant bilinear form g = sum a (x) a and its inverse as raising form
	Mat<NfElem> g(n, n);
	for (const auto &a : covectors)
		for (int i = 0; i < n; i++)
			for (int j = 0; j < n; j++)
				g(i, j) += a[i] * a[j];
	NfElem det = determinant(g);
	if (det.is_zero())
		throw SingularMatrixError("bilinear form of the covectors is "
		                          "degenerate");
	Mat<NfElem> adj = n == 1 ? Mat<NfElem>::identity(1, NfElem(Rat(1)))
	                         : adjugate(g);
	Mat<NfElem> graise(n, n);
	NfElem inv_det = inverse(det);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			graise(i, j) = adj(i, j) * inv_det;

	// flatness of nabla - lambda sum (da/a) pi for every lambda:
	// Gamma^i_{jk} = lambda sum_s a_j pi^i_k / a(p), symmetric by the pi form
	auto pvars = make_vars(
	    [n] {
		    std::vector<std::string> v;
		    for (int i = 1; i <= n; i++)
			    v.push_back("p" + std::to_string(i));
		    return v;
	    }(),
	    {"lambda"});
	RatFun lambda(MultiPoly::variable(pvars, n));
	Ten3<SymScalar> gamma(n);
	Arrangement arr;
	arr.rank = n;
	arr.h = graise;
	for (const auto &a : covectors)
		arr.mirrors.push_back(Mirror{a, 1, NfElem(Rat(1))});
	// real covectors assumed conjugation-free for the bilinear setting
	for (const auto &a : covectors) {
		std::vector<NfElem> raised(n);
		for (int i = 0; i < n; i++)
			for (int m = 0; m < n; m++)
				raised[i] += graise(i, m) * a[m];
		NfElem norm;
		for (int i = 0; i < n; i++)
			norm += a[i] * raised[i];
		if (norm.is_zero())
			throw IsotropicCovectorError("covector isotropic for sum a(x)a");
		NfElem inv_norm = inverse(norm);
		MultiPoly ax(pvars, NfElem());
		for (int i = 0; i < n; i++)
			ax += a[i] * MultiPoly::variable(pvars, i);
		RatFun inv_ax = RatFun(MultiPoly(pvars, NfElem(Rat(1)))) / RatFun(ax);
		for (int i = 0; i < n; i++)
			for (int j = 0; j < n; j++)
				for (int k = 0; k < n; k++)
					gamma(i, j, k) += (a[j] * a[k] * raised[i] * inv_norm) *
					                  inv_ax;
	}
	for (auto &s : gamma.a)
		s = lambda * s;
	Ten4<SymScalar> curv = curvature_tensor(gamma);
	rep.pass = all_zero(curv);
	if (!rep.pass) {
		for (int i = 0; i < n && rep.witness.empty(); i++)
			for (int j = 0; j < n && rep.witness.empty(); j++)
				for (int k = 0; k < n && rep.witness.empty(); k++)
					for (int l = 0; l < n && rep.witness.empty(); l++)
						if (!curv(i, j, k, l).is_zero()) {
							std::ostringstream os;
							os << "curvature[" << i << "," << j << "," << k
							   << "," << l << "] != 0";
							rep.witness = os.str();
						}
	}

	if (check_planes) {
		// plane condition over spans of covector pairs
		auto in_span = [&](const std::vector<NfElem> &x,
		                   const std::vector<NfElem> &a,
		                   const std::vector<NfElem> &b) {
			// rank of {a, b, x} stays 2; a, b independent
			for (int i = 0; i < n; i++)
				for (int j = i + 1; j < n; j++)
					for (int k = j + 1; k < n; k++) {
						// 3x3 minor over rows (a,b,x), columns (i,j,k)
						NfElem m =
						    a[i] * (b[j] * x[k] - b[k] * x[j]) -
						    a[j] * (b[i] * x[k] - b[k] * x[i]) +
						    a[k] * (b[i] * x[j] - b[j] * x[i]);
						if (!m.is_zero())
							return false;
					}
			return true;
		};
		auto raise = [&](const std::vector<NfElem> &a) {
			std::vector<NfElem> r(n);
			for (int i = 0; i < n; i++)
				for (int m = 0; m < n; m++)
					r[i] += graise(i, m) * a[m];
			return r;
		};
		int M = int(covectors.size());
		for (int s = 0; s < M && rep.plane_condition; s++)
			for (int t = s + 1; t < M && rep.plane_condition; t++) {
				// skip pairs that are proportional
				bool indep = false;
				for (int i = 0; i < n && !indep; i++)
					for (int j = i + 1; j < n && !indep; j++)
						indep = !(covectors[s][i] * covectors[t][j] -
						          covectors[s][j] * covectors[t][i])
						             .is_zero();
				if (!indep)
					continue;
				std::vector<int> members;
				for (int x = 0; x < M; x++)
					if (in_span(covectors[x], covectors[s], covectors[t]))
						members.push_back(x);
				for (int x : members) {
					std::vector<NfElem> ca = raise(covectors[x]);
					std::vector<NfElem> lhs(n);
					for (int b : members) {
						std::vector<NfElem> cb = raise(covectors[b]);
						NfElem ba;
						for (int i = 0; i < n; i++)
							ba += covectors[b][i] * ca[i];
						for (int i = 0; i < n; i++)
							lhs[i] += ba * cb[i];
					}
					// lhs must be proportional to ca
					for (int i = 0; i < n && rep.plane_condition; i++)
						for (int j = i + 1; j < n && rep.plane_condition; j++)
							rep.plane_condition =
							    (lhs[i] * ca[j] - lhs[j] * ca[i]).is_zero();
				}
			}
		rep.pass = rep.pass && rep.plane_condition;
	}
	return rep;
}

} // namespace biflat
