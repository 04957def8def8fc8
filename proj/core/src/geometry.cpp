#include <biflat/geometry.hpp>

namespace biflat {

Frame<SymScalar> symbolic_frame(const GroupSpec &g,
                                std::span<const MultiPoly> u)
{
	Frame<SymScalar> f;
	f.n = g.rank;
	f.degrees = g.degrees;
	f.one = RatFun(MultiPoly(g.pvars, NfElem(Rat(1))));
	for (int i = 0; i < f.n; i++)
		f.coords.push_back(RatFun(MultiPoly::variable(g.pvars, i)));

	Mat<MultiPoly> jp = jacobian(u, f.n);
	MultiPoly det = determinant_bareiss(jp);
	if (det.is_zero())
		throw SingularMatrixError(g.name + ": singular Jacobian");
	f.J = Mat<SymScalar>(f.n, f.n);
	for (int i = 0; i < f.n; i++)
		for (int j = 0; j < f.n; j++)
			f.J(i, j) = RatFun(jp(i, j));
	f.Jinv = Mat<SymScalar>(f.n, f.n);
	if (f.n == 1) {
		f.Jinv(0, 0) = RatFun::over(MultiPoly(g.pvars, NfElem(Rat(1))), det);
	} else {
		Mat<MultiPoly> adj = adjugate(jp);
		for (int i = 0; i < f.n; i++)
			for (int j = 0; j < f.n; j++)
				f.Jinv(i, j) = RatFun::over(adj(i, j), det);
	}
	f.detJ = RatFun(det);
	f.d2u = Ten3<SymScalar>(f.n);
	for (int l = 0; l < f.n; l++)
		for (int j = 0; j < f.n; j++) {
			MultiPoly dj = u[l].derivative(j);
			for (int k = j; k < f.n; k++) {
				f.d2u(l, j, k) = RatFun(dj.derivative(k));
				if (k != j)
					f.d2u(l, k, j) = f.d2u(l, j, k);
			}
		}
	return f;
}

ChartDerivs chart_derivs(std::span<const MultiPoly> u, int n)
{
	ChartDerivs cd;
	cd.n = n;
	cd.u.assign(u.begin(), u.end());
	cd.d1.assign(u.size(), {});
	cd.d2.assign(u.size(), {});
	cd.d3.assign(u.size(), {});
	for (std::size_t l = 0; l < u.size(); l++) {
		cd.d1[l].resize(n);
		cd.d2[l].assign(n, std::vector<MultiPoly>(n));
		cd.d3[l].assign(n, std::vector<std::vector<MultiPoly>>(
		                       n, std::vector<MultiPoly>(n)));
		for (int j = 0; j < n; j++) {
			cd.d1[l][j] = u[l].derivative(j);
			for (int k = j; k < n; k++) {
				cd.d2[l][j][k] = cd.d1[l][j].derivative(k);
				cd.d2[l][k][j] = cd.d2[l][j][k];
				for (int m = k; m < n; m++) {
					MultiPoly d = cd.d2[l][j][k].derivative(m);
					cd.d3[l][j][k][m] = d;
					cd.d3[l][j][m][k] = d;
					cd.d3[l][k][j][m] = d;
					cd.d3[l][k][m][j] = d;
					cd.d3[l][m][j][k] = d;
					cd.d3[l][m][k][j] = d;
				}
			}
		}
	}
	return cd;
}

Frame<JetScalar> jet_frame(const GroupSpec &g, const ChartDerivs &cd,
                           std::span<const NfElem> point)
{
	int n = cd.n;
	Frame<JetScalar> f;
	f.n = n;
	f.degrees = g.degrees;

	auto lift = [&](const MultiPoly &p) {
		return RatFun(p.eval_main(point));
	};
	f.one = JetScalar(RatFun(MultiPoly(nullptr, NfElem(Rat(1)))));
	f.one.g.assign(n, RatFun());

	for (int i = 0; i < n; i++) {
		JetScalar x(RatFun(MultiPoly(nullptr, point[i])));
		x.g.assign(n, RatFun());
		x.g[i] = RatFun(MultiPoly(nullptr, NfElem(Rat(1))));
		f.coords.push_back(std::move(x));
	}

	f.J = Mat<JetScalar>(n, n);
	for (int l = 0; l < n; l++)
		for (int j = 0; j < n; j++) {
			JetScalar s(lift(cd.d1[l][j]));
			s.g.resize(n);
			for (int k = 0; k < n; k++)
				s.g[k] = lift(cd.d2[l][j][k]);
			f.J(l, j) = std::move(s);
		}
	f.d2u = Ten3<JetScalar>(n);
	for (int l = 0; l < n; l++)
		for (int j = 0; j < n; j++)
			for (int k = j; k < n; k++) {
				JetScalar s(lift(cd.d2[l][j][k]));
				s.g.resize(n);
				for (int m = 0; m < n; m++)
					s.g[m] = lift(cd.d3[l][j][k][m]);
				f.d2u(l, j, k) = s;
				if (k != j)
					f.d2u(l, k, j) = std::move(s);
			}
	f.Jinv = invert_matrix(f.J, f.one);
	f.detJ = f.one; // unused in the jet backend
	return f;
}

void collect_equations(const RatFun &r, std::vector<MultiPoly> &out)
{
	if (r.is_zero())
		return;
	for (auto &[mono, coeff] : r.num().group_by_main())
		out.push_back(std::move(coeff));
}

bool all_zero(const Ten3<SymScalar> &t)
{
	for (const auto &s : t.a)
		if (!s.is_zero())
			return false;
	return true;
}
bool all_zero(const Ten4<SymScalar> &t)
{
	for (const auto &s : t.a)
		if (!s.is_zero())
			return false;
	return true;
}
bool all_zero(const Ten3<JetScalar> &t)
{
	for (const auto &s : t.a)
		if (!s.v.is_zero())
			return false;
	return true;
}
bool all_zero(const Ten4<JetScalar> &t)
{
	for (const auto &s : t.a)
		if (!s.v.is_zero())
			return false;
	return true;
}

} // namespace biflat
