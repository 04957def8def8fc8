#pragma once

#include <biflat/exprparse.hpp>
#include <biflat/ratfun.hpp>

#include <optional>

namespace biflat {

struct Mirror {
	std::vector<NfElem> covector;
	int order = 2;                 // order of the pseudo-reflection
	std::optional<NfElem> weight;  // defaults to the order
};

// paper-reported table values; metadata only, never consumed as ground truth
struct ReportedData {
	std::optional<int> n_mirrors;
	std::optional<Rat> normalizer; // N of the Dunkl-Kohno normalization
	std::vector<std::pair<int, int>> kappa_classes; // (kappa, count)
	std::map<std::string, std::string> constants;   // solved ansatz constants
	std::optional<std::vector<std::vector<std::string>>> eta;
	std::optional<std::string> frobenius_potential;
	std::optional<std::string> family_lambda; // expression in the free constant
	std::vector<Rat> family_weights;          // per order class, for C
	std::map<std::string, std::string> family_constraints;
	std::map<std::string, std::string> frobenius_params;
	std::optional<std::string> pencil_potential;
	std::optional<std::vector<std::vector<std::string>>> pencil_eta;
	std::optional<bool> standard_frobenius;

	// whether the standard-pipeline potential is expected to carry a
	// Frobenius metric
	bool expect_standard_frobenius() const
	{
		if (standard_frobenius)
			return *standard_frobenius;
		return (eta.has_value() || frobenius_potential.has_value()) &&
		       !family_lambda.has_value();
	}
};

struct PencilData {
	enum class Seed { None, Matrix, InverseHessian };
	Seed seed = Seed::None;
	Mat<NfElem> seed_matrix;      // contravariant metric in the p-chart
	int hessian_of = 0;           // invariant index for Seed::InverseHessian
	bool frobenius_constants = false; // pencil coordinates use the Frobenius
	                                  // member of the family
};

struct AnsatzTerm {
	std::string constant;          // parameter name
	std::vector<int> exponents;    // exponents of U_1..U_{i-1}
};

struct GroupSpec {
	std::string name;
	int rank = 0;
	std::vector<long> degrees;

	FieldPtr field;
	VarsPtr pvars; // p1..pn plus the ansatz constants as parameters
	VarsPtr uvars; // u1..un plus the same parameters

	std::vector<MultiPoly> base_invariants; // U_i(p)
	// u_i = U_i + sum_j c_j * prod U_k^e: represented expanded over pvars
	std::vector<MultiPoly> ansatz;
	std::vector<std::string> constants;          // canonical names c1..ck
	std::vector<std::vector<AnsatzTerm>> ansatz_terms; // per invariant

	std::vector<Mirror> mirrors;
	Mat<NfElem> hermitian; // contravariant raising form (identity if absent)

	ReportedData reported;
	PencilData pencil;

	std::map<std::string, NfElem> named_consts; // generators and defines
	std::map<std::string, MultiPoly> named_polys;

	int n_constants() const { return int(constants.size()); }
	// index of constant j inside the variable tables
	int const_var(int j) const { return rank + j; }
	std::vector<int> mirror_order_classes() const; // distinct orders, sorted

	ExprContext pcontext() const;
	ExprContext ucontext() const;
	// context for constant expressions in the ansatz parameters
	ExprContext ccontext() const;

	// substitute solved constants into a polynomial over pvars/uvars
	MultiPoly bind_constants(const MultiPoly &p,
	                         std::span<const NfElem> values) const;
	RatFun bind_constants(const RatFun &f, std::span<const NfElem> values) const;

	// reported solved constants, parsed; throws when absent
	std::vector<NfElem> reported_constants() const;
};

// Builds the canonical ansatz for the given degrees: every isobaric
// correction of u_i by products of strictly lower-degree base invariants, a
// fresh constant each, ordered by ascending exponent tuple.
std::vector<std::vector<AnsatzTerm>>
enumerate_ansatz(std::span<const long> degrees);

GroupSpec load_group_text(const std::string &text, const std::string &origin);
GroupSpec load_group_file(const std::string &path);

// structural checks: invariant degrees, mirror sanity, hermitian shape
void validate_spec(const GroupSpec &spec);

} // namespace biflat
