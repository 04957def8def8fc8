#pragma once

#include <biflat/groupspec.hpp>
#include <biflat/jets.hpp>

namespace biflat {

enum class Chart { P, U };

template <class S> struct Ten3 {
	int n = 0;
	std::vector<S> a;
	Ten3() = default;
	explicit Ten3(int nn) : n(nn), a(nn * nn * nn) {}
	S &operator()(int i, int j, int k) { return a[(i * n + j) * n + k]; }
	const S &operator()(int i, int j, int k) const
	{
		return a[(i * n + j) * n + k];
	}
};

template <class S> struct Ten4 {
	int n = 0;
	std::vector<S> a;
	Ten4() = default;
	explicit Ten4(int nn) : n(nn), a(nn * nn * nn * nn) {}
	S &operator()(int i, int j, int k, int l)
	{
		return a[((i * n + j) * n + k) * n + l];
	}
	const S &operator()(int i, int j, int k, int l) const
	{
		return a[((i * n + j) * n + k) * n + l];
	}
};

template <class S> struct Connection {
	Chart chart = Chart::P;
	Ten3<S> gamma; // symmetric in the two lower indices
};
template <class S> struct Product {
	Chart chart = Chart::P;
	Ten3<S> c;
};
template <class S> struct VecField {
	Chart chart = Chart::P;
	std::vector<S> v;
};

// Everything a chart computation needs, independent of whether the scalars
// are symbolic rational functions or exact jets at a sample point.
template <class S> struct Frame {
	int n = 0;
	std::vector<long> degrees;
	std::vector<S> coords; // the p-coordinates as scalars
	Mat<S> J, Jinv;        // J(l, j) = d u^l / d p^j
	Ten3<S> d2u;           // (l, j, k)
	S detJ;
	S one;

	S embed(const NfElem &c) const; // constant -> scalar
};

using SymScalar = RatFun;
using JetScalar = Jet<RatFun>;

// symbolic frame over the (p, constants) polynomial ring
Frame<SymScalar> symbolic_frame(const GroupSpec &g,
                                std::span<const MultiPoly> u);

// third-order derivative data of the chart map, reusable across points
struct ChartDerivs {
	int n = 0;
	std::vector<MultiPoly> u;
	std::vector<std::vector<MultiPoly>> d1;              // [l][j]
	std::vector<std::vector<std::vector<MultiPoly>>> d2; // [l][j][k]
	std::vector<std::vector<std::vector<std::vector<MultiPoly>>>> d3;
};
ChartDerivs chart_derivs(std::span<const MultiPoly> u, int n);

// exact jet frame at a rational sample point; constants stay symbolic
// (throws DivisionByZeroError when J is singular at the point)
Frame<JetScalar> jet_frame(const GroupSpec &g, const ChartDerivs &cd,
                           std::span<const NfElem> point);

template <> inline SymScalar Frame<SymScalar>::embed(const NfElem &c) const
{
	return RatFun(MultiPoly(nullptr, c));
}
template <> inline JetScalar Frame<JetScalar>::embed(const NfElem &c) const
{
	JetScalar j(RatFun(MultiPoly(nullptr, c)));
	j.g.assign(n, RatFun());
	return j;
}

// ---------------------------------------------------------------------------
// tensor formulas, generic over the scalar backend

// R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj}
template <class S> Ten4<S> curvature_tensor(const Ten3<S> &g)
{
	int n = g.n;
	Ten4<S> r(n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = 0; k < n; k++)
				for (int l = k + 1; l < n; l++) {
					S acc = deriv(g(i, l, j), k) - deriv(g(i, k, j), l);
					for (int m = 0; m < n; m++)
						acc += g(i, k, m) * g(m, l, j) -
						       g(i, l, m) * g(m, k, j);
					r(i, j, k, l) = acc;
					r(i, j, l, k) = -acc;
				}
	return r;
}

// nabla_k c^i_{jl} with the given connection
template <class S>
S covariant_component(const Ten3<S> &g, const Ten3<S> &c, int k, int i, int j,
                      int l)
{
	S acc = deriv(c(i, j, l), k);
	int n = g.n;
	for (int m = 0; m < n; m++)
		acc += g(i, k, m) * c(m, j, l) - g(m, k, j) * c(i, m, l) -
		       g(m, k, l) * c(i, j, m);
	return acc;
}

// nabla_k c^i_{jl} - nabla_j c^i_{kl}
template <class S>
Ten4<S> compat_residual(const Ten3<S> &g, const Ten3<S> &c)
{
	int n = g.n;
	Ten4<S> r(n);
	for (int k = 0; k < n; k++)
		for (int j = k + 1; j < n; j++)
			for (int i = 0; i < n; i++)
				for (int l = 0; l < n; l++) {
					S acc = covariant_component(g, c, k, i, j, l) -
					        covariant_component(g, c, j, i, k, l);
					r(i, j, k, l) = acc;
					r(i, k, j, l) = -acc;
				}
	return r;
}

// c^i_{jl} c^l_{km} - c^i_{kl} c^l_{jm}
template <class S> Ten4<S> assoc_residual(const Ten3<S> &c)
{
	int n = c.n;
	Ten4<S> r(n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = 0; k < n; k++)
				for (int m = 0; m < n; m++) {
					S acc{};
					for (int l = 0; l < n; l++)
						acc += c(i, j, l) * c(l, k, m) -
						       c(i, k, l) * c(l, j, m);
					r(i, j, k, m) = acc;
				}
	return r;
}

// c^i_{jk} e^k - delta^i_j
template <class S>
Mat<S> unit_residual(const Ten3<S> &c, const std::vector<S> &e, const S &one)
{
	int n = c.n;
	Mat<S> r(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++) {
			S acc{};
			for (int k = 0; k < n; k++)
				acc += c(i, j, k) * e[k];
			if (i == j)
				acc -= one;
			r(i, j) = acc;
		}
	return r;
}

// (Lie_E c) scaled by 1/d_n, minus c
template <class S>
Ten3<S> lie_euler_residual(const Ten3<S> &c, const std::vector<S> &euler,
                           const S &inv_dn)
{
	int n = c.n;
	Ten3<S> r(n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = 0; k < n; k++) {
				S acc{};
				for (int l = 0; l < n; l++)
					acc += euler[l] * deriv(c(i, j, k), l) -
					       deriv(euler[i], l) * c(l, j, k) +
					       deriv(euler[l], j) * c(i, l, k) +
					       deriv(euler[l], k) * c(i, j, l);
				r(i, j, k) = inv_dn * acc - c(i, j, k);
			}
	return r;
}

// [e, E]^i - d_n e^i
template <class S>
std::vector<S> bracket_residual(const std::vector<S> &e,
                                const std::vector<S> &euler, const S &dn)
{
	int n = int(e.size());
	std::vector<S> r(n);
	for (int i = 0; i < n; i++) {
		S acc = -(dn * e[i]);
		for (int l = 0; l < n; l++)
			acc += e[l] * deriv(euler[i], l) - euler[l] * deriv(e[i], l);
		r[i] = acc;
	}
	return r;
}

// almost hydrodynamic equivalence:
// (G1 - G2)^k_{lj} c*^l_{mi} antisymmetrized in (i, j)
template <class S>
Ten4<S> hydro_residual(const Ten3<S> &g1, const Ten3<S> &g2,
                       const Ten3<S> &cstar)
{
	int n = g1.n;
	Ten4<S> r(n);
	for (int k = 0; k < n; k++)
		for (int m = 0; m < n; m++)
			for (int i = 0; i < n; i++)
				for (int j = i + 1; j < n; j++) {
					S acc{};
					for (int l = 0; l < n; l++) {
						S d1 = g1(k, l, j) - g2(k, l, j);
						S d2 = g1(k, l, i) - g2(k, l, i);
						acc += d1 * cstar(l, m, i) - d2 * cstar(l, m, j);
					}
					r(k, m, i, j) = acc;
					r(k, m, j, i) = -acc;
				}
	return r;
}

// (nabla nabla E)^i_{kj} for the p-chart Euler field E = sum p^k d_k;
// with dE = Id this reduces to G^i_{jk} + E^l d_l G^i_{kj}
template <class S>
Ten3<S> nabla2_euler_residual(const Ten3<S> &g, const std::vector<S> &euler)
{
	int n = g.n;
	Ten3<S> r(n);
	for (int i = 0; i < n; i++)
		for (int k = 0; k < n; k++)
			for (int j = 0; j < n; j++) {
				S acc = g(i, j, k);
				for (int l = 0; l < n; l++)
					acc += euler[l] * deriv(g(i, k, j), l);
				r(i, k, j) = acc;
			}
	return r;
}

// dual product from the invariants (p-chart):
// c*^i_{jk} = sum_l 1/(d_l - 1) d2u(l,j,k) Jinv(i,l)
template <class S> Product<S> cstar_from_frame(const Frame<S> &f)
{
	std::vector<S> invd;
	for (long d : f.degrees) {
		if (d <= 1)
			throw ConfigError("dual product needs every degree >= 2");
		invd.push_back(f.embed(NfElem(Rat(1, d - 1))));
	}
	Product<S> p;
	p.chart = Chart::P;
	p.c = Ten3<S>(f.n);
	for (int i = 0; i < f.n; i++)
		for (int j = 0; j < f.n; j++)
			for (int k = j; k < f.n; k++) {
				S acc{};
				for (int l = 0; l < f.n; l++)
					acc += invd[l] * f.d2u(l, j, k) * f.Jinv(i, l);
				p.c(i, j, k) = acc;
				if (k != j)
					p.c(i, k, j) = p.c(i, j, k);
			}
	return p;
}

// natural connection in the p-chart: G^i_{jk} = sum_m d2u(m,j,k) Jinv(i,m)
template <class S> Connection<S> natural_connection_p(const Frame<S> &f)
{
	Connection<S> g;
	g.chart = Chart::P;
	g.gamma = Ten3<S>(f.n);
	for (int i = 0; i < f.n; i++)
		for (int j = 0; j < f.n; j++)
			for (int k = j; k < f.n; k++) {
				S acc{};
				for (int m = 0; m < f.n; m++)
					acc += f.d2u(m, j, k) * f.Jinv(i, m);
				g.gamma(i, j, k) = acc;
				if (k != j)
					g.gamma(i, k, j) = g.gamma(i, j, k);
			}
	return g;
}

// unit e = d/du^n expressed in the p-chart
template <class S> std::vector<S> unit_field_p(const Frame<S> &f)
{
	std::vector<S> e(f.n);
	for (int i = 0; i < f.n; i++)
		e[i] = f.Jinv(i, f.n - 1);
	return e;
}

// matrix inverse by Gaussian elimination over the scalar backend
template <class S> Mat<S> invert_matrix(Mat<S> m, const S &one)
{
	int n = m.rows();
	Mat<S> inv(n, n);
	for (int i = 0; i < n; i++)
		inv(i, i) = one;
	for (int col = 0; col < n; col++) {
		int piv = -1;
		for (int i = col; i < n && piv < 0; i++)
			if (!is_scalar_zero(m(i, col)))
				piv = i;
		if (piv < 0)
			throw SingularMatrixError("matrix inversion failed");
		if (piv != col)
			for (int j = 0; j < n; j++) {
				std::swap(m(col, j), m(piv, j));
				std::swap(inv(col, j), inv(piv, j));
			}
		S d = scalar_inv(m(col, col));
		for (int j = 0; j < n; j++) {
			m(col, j) = d * m(col, j);
			inv(col, j) = d * inv(col, j);
		}
		for (int i = 0; i < n; i++) {
			if (i == col || is_scalar_zero(m(i, col)))
				continue;
			S fct = m(i, col);
			for (int j = 0; j < n; j++) {
				m(i, j) = m(i, j) - fct * m(col, j);
				inv(i, j) = inv(i, j) - fct * inv(col, j);
			}
		}
	}
	return inv;
}

// natural product from the dual one: c^i_{jk} = c*^i_{jl} c*^l_{km} h^m
// where h is the *-inverse of e, h = (e*)^{-1} E
template <class S>
Product<S> natural_from_dual(const Ten3<S> &cstar, const std::vector<S> &e,
                             const std::vector<S> &euler, const S &one)
{
	int n = cstar.n;
	Mat<S> estar(n, n);
	for (int i = 0; i < n; i++)
		for (int k = 0; k < n; k++) {
			S acc{};
			for (int j = 0; j < n; j++)
				acc += cstar(i, j, k) * e[j];
			estar(i, k) = acc;
		}
	Mat<S> inv = invert_matrix(std::move(estar), one);
	std::vector<S> h(n);
	for (int i = 0; i < n; i++) {
		S acc{};
		for (int j = 0; j < n; j++)
			acc += inv(i, j) * euler[j];
		h[i] = acc;
	}
	Product<S> p;
	p.chart = Chart::P;
	p.c = Ten3<S>(n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = j; k < n; k++) {
				S acc{};
				for (int l = 0; l < n; l++)
					for (int m = 0; m < n; m++)
						acc += cstar(i, j, l) * cstar(l, k, m) * h[m];
				p.c(i, j, k) = acc;
				if (k != j)
					p.c(i, k, j) = p.c(i, j, k);
			}
	return p;
}

// push a (1,2)-tensor between charts: out^a_{bc} = J^a_i T^i_{jk} Ji^j_b Ji^k_c
template <class S>
Ten3<S> push_tensor(const Ten3<S> &t, const Mat<S> &j_fwd, const Mat<S> &j_inv)
{
	int n = t.n;
	Ten3<S> r(n);
	for (int a = 0; a < n; a++)
		for (int b = 0; b < n; b++)
			for (int c = b; c < n; c++) {
				S acc{};
				for (int i = 0; i < n; i++)
					for (int jj = 0; jj < n; jj++)
						for (int k = 0; k < n; k++)
							acc += j_fwd(a, i) * t(i, jj, k) *
							       j_inv(jj, b) * j_inv(k, c);
				r(a, b, c) = acc;
				if (b != c)
					r(a, c, b) = r(a, b, c);
			}
	return r;
}

// standard Saito condition: d2u(l,j,k) - (d_l - 1) c*^s_{jk} J(l,s)
template <class S>
Ten3<S> saito_pde_residual(const Frame<S> &f, const Ten3<S> &cstar)
{
	std::vector<S> dm1;
	for (long d : f.degrees)
		dm1.push_back(f.embed(NfElem(Rat(d - 1))));
	Ten3<S> r(f.n);
	for (int l = 0; l < f.n; l++)
		for (int j = 0; j < f.n; j++)
			for (int k = 0; k < f.n; k++) {
				S acc = f.d2u(l, j, k);
				for (int s = 0; s < f.n; s++)
					acc -= dm1[l] * cstar(s, j, k) * f.J(l, s);
				r(l, j, k) = acc;
			}
	return r;
}

// equations in the ansatz constants implied by vanishing of a residual
void collect_equations(const RatFun &r, std::vector<MultiPoly> &out);
inline void collect_equations(const JetScalar &r, std::vector<MultiPoly> &out)
{
	collect_equations(r.v, out);
}
template <class C>
void collect_equations_all(const C &tensor, std::vector<MultiPoly> &out)
{
	for (const auto &s : tensor.a)
		collect_equations(s, out);
}

bool all_zero(const Ten3<SymScalar> &t);
bool all_zero(const Ten4<SymScalar> &t);
bool all_zero(const Ten3<JetScalar> &t);
bool all_zero(const Ten4<JetScalar> &t);

} // namespace biflat
