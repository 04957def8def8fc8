#pragma once

#include <biflat/geometry.hpp>

namespace biflat {

// Rewrites an isobaric p-polynomial as a polynomial in the given basic
// invariants by undetermined coefficients over the u-monomials of matching
// weighted degree. Coefficients may involve the ansatz constants.
// Throws NotInvariantError / AlgebraicDependenceError.
MultiPoly express_in_invariants(const MultiPoly &f,
                                std::span<const MultiPoly> basis,
                                std::span<const long> degrees,
                                const VarsPtr &uvars);

// A^i with d_j d_k A^i = c(i,j,k), isobaric of weight d_i + d_n; affine
// terms are excluded by the weight. Throws IntegrabilityError.
std::vector<MultiPoly> integrate_structure_constants(
    const Ten3<MultiPoly> &c, std::span<const long> degrees,
    const VarsPtr &uvars);

struct FrobeniusCandidate {
	Mat<NfElem> eta; // constant invariant metric, one scale fixed
	MultiPoly potential;
	Rat charge; // D with Lie_{E/d_n} eta = D eta
};

// Searches a constant symmetric invertible eta making the lowered structure
// constants totally symmetric; integrates to the Frobenius potential.
// Returns nullopt when no invertible eta exists.
std::optional<FrobeniusCandidate>
frobenius_detect(const Ten3<MultiPoly> &c, std::span<const long> degrees,
                 const VarsPtr &uvars);

struct MetricPencil {
	Mat<MultiPoly> g;   // contravariant metric in the u-chart, polynomial
	Mat<NfElem> eta;    // Lie_e g, constant
	MultiPoly potential; // Frobenius potential from the pencil
};

// Dubrovin-Saito pencil: push the seed metric to the invariant chart, check
// linearity in u^n, shift by e, and solve for the potential entrywise.
MetricPencil euclidean_pencil(const GroupSpec &g,
                              std::span<const MultiPoly> u,
                              const Mat<NfElem> &seed_contravariant);
MetricPencil hessian_pencil(const GroupSpec &g, std::span<const MultiPoly> u,
                            const MultiPoly &lowest_invariant);

// flatness of g - lambda eta via the Levi-Civita connection
bool pencil_flat_at(const Mat<MultiPoly> &g, const Mat<NfElem> &eta,
                    const NfElem &lambda, const VarsPtr &uvars);

} // namespace biflat
