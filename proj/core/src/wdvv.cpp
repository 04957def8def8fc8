#include <biflat/wdvv.hpp>

#include <sstream>

namespace biflat {

WdvvReport wdvv_check(std::span<const MultiPoly> a,
                      std::span<const long> degrees)
{
	int n = int(a.size());
	WdvvReport rep;
	std::vector<std::vector<std::vector<MultiPoly>>> c(
	    n, std::vector<std::vector<MultiPoly>>(n, std::vector<MultiPoly>(n)));
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			for (int k = j; k < n; k++) {
				c[i][j][k] = a[i].derivative(j).derivative(k);
				c[i][k][j] = c[i][j][k];
			}

	rep.associativity = true;
	for (int i = 0; i < n && rep.associativity; i++)
		for (int j = 0; j < n && rep.associativity; j++)
			for (int k = j + 1; k < n && rep.associativity; k++)
				for (int m = 0; m < n && rep.associativity; m++) {
					MultiPoly acc;
					for (int l = 0; l < n; l++)
						acc += c[i][j][l] * c[l][k][m] -
						       c[i][k][l] * c[l][j][m];
					if (!acc.is_zero()) {
						rep.associativity = false;
						std::ostringstream os;
						os << "associativity fails at (" << i + 1 << ","
						   << j + 1 << "," << k + 1 << "," << m + 1 << ")";
						rep.witness = os.str();
					}
				}

	rep.unit = true;
	for (int i = 0; i < n && rep.unit; i++)
		for (int j = 0; j < n && rep.unit; j++) {
			MultiPoly expect =
			    i == j ? MultiPoly(a[0].vars(), NfElem(Rat(1))) : MultiPoly();
			if (c[j][n - 1][i] != expect) {
				rep.unit = false;
				std::ostringstream os;
				os << "unit normalization fails at d_n d_" << i + 1 << " A^"
				   << j + 1;
				rep.witness = os.str();
			}
		}

	rep.homogeneity = true;
	long dn = degrees[n - 1];
	for (int i = 0; i < n && rep.homogeneity; i++) {
		// (1/dn) E(A^i) - (1 + d_i/dn) A^i, affine terms dropped
		MultiPoly r;
		for (int k = 0; k < n; k++) {
			MultiPoly v = MultiPoly::variable(a[i].vars(), k);
			r += NfElem(Rat(degrees[k], dn)) * v * a[i].derivative(k);
		}
		r -= NfElem(Rat(dn + degrees[i], dn)) * a[i];
		// drop affine terms in the main variables
		std::vector<MultiPoly::Term> keep;
		for (const auto &[m, q] : r.terms()) {
			long mdeg = 0;
			for (int v = 0; v < r.vars()->n_main; v++)
				mdeg += m.e[v];
			if (mdeg >= 2)
				keep.emplace_back(m, q);
		}
		MultiPoly essential(r.vars(), std::move(keep));
		if (!essential.is_zero()) {
			rep.homogeneity = false;
			rep.witness = "homogeneity fails for A^" + std::to_string(i + 1);
		}
	}
	return rep;
}

} // namespace biflat
