#pragma once

#include <biflat/geometry.hpp>

namespace biflat {

struct Arrangement {
	int rank = 0;
	std::vector<Mirror> mirrors;
	Mat<NfElem> h; // contravariant raising form

	static Arrangement of(const GroupSpec &g)
	{
		return Arrangement{g.rank, g.mirrors, g.hermitian};
	}
};

// raised conjugated covector: (h alpha-bar)^i
std::vector<NfElem> raised_covector(const std::vector<NfElem> &alpha,
                                    const Mat<NfElem> &h);

// |alpha|^2 = alpha_i h^{im} conj(alpha)_m; throws on isotropic covectors
NfElem covector_norm(const std::vector<NfElem> &alpha, const Mat<NfElem> &h);

// idempotent trace-one projection onto the raised covector direction
Mat<NfElem> projection(const std::vector<NfElem> &alpha, const Mat<NfElem> &h);

// sum of kappa_s pi_s; N when the sum is a multiple of the identity
std::pair<Mat<NfElem>, std::optional<NfElem>>
normalization_sum(const Arrangement &arr, std::span<const NfElem> weights);

std::vector<NfElem> default_weights(const Arrangement &arr); // orders

// per-mirror tensor T_s^i_{jk}(p) = alpha_j alpha_k (h conj(alpha))^i /
// (|alpha|^2 alpha(p)), evaluated exactly at a point
Ten3<NfElem> dk_term_at(const Arrangement &arr, int s,
                        std::span<const NfElem> point);

// Dunkl-Kohno dual product c* = (1/N) sum_s kappa_s T_s with derived N;
// throws InvalidFamilyError when sum kappa pi is not a multiple of Id
template <class S>
Product<S> dk_product(const Frame<S> &f, const Arrangement &arr,
                      std::span<const NfElem> weights);

// correction tensor C = sum_s kappa_s T_s for weights with sum kappa pi = 0
template <class S>
Ten3<S> family_correction(const Frame<S> &f, const Arrangement &arr,
                          std::span<const NfElem> weights);

// weight fit: solve n sum_s k_s T_s = (sum_s k_s) target at sample points;
// returns the kernel direction normalized so the first mirror weight is its
// declared order, along with the implied N
struct FittedWeights {
	std::vector<NfElem> weights;
	NfElem normalizer;
};
FittedWeights fit_weights(const Arrangement &arr,
                          const std::vector<Ten3<NfElem>> &targets,
                          const std::vector<std::vector<NfElem>> &points);

// logarithmic vector potential: F^i = (1/N) sum_s kappa_s/|a|^2 a(p) ln a(p)
// (h conj a)^i; term list representation
struct LogPotential {
	struct Term {
		std::vector<NfElem> coefficient; // kappa/(N |a|^2) * raised covector
		std::vector<NfElem> covector;
	};
	std::vector<Term> terms;
};
LogPotential veselov_potential(const Arrangement &arr,
                               std::span<const NfElem> weights);
// second derivative of each term a(p) ln a(p) contributes a_j a_k / a(p)
Product<SymScalar> hessian_of_logpotential(const LogPotential &pot,
                                           const VarsPtr &pvars);

// Veselov condition: the one-parameter logarithmic connection built from the
// bilinear form sum a (x) a is flat for every value of the parameter
struct VeeReport {
	bool pass = false;
	bool plane_condition = true;
	std::string witness;
};
VeeReport vee_system_check(const std::vector<std::vector<NfElem>> &covectors,
                           bool check_planes = true);

} // namespace biflat
