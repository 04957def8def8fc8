#pragma once

#include <biflat/multipoly.hpp>

namespace biflat {

// Polynomial conditions on the ansatz constants, produced by coefficient
// extraction from residual tensors. Equations are main-variable-free
// polynomials over the shared (p..., c...) table.
struct ConditionSystem {
	VarsPtr vars;
	std::vector<std::string> unknowns;
	std::vector<MultiPoly> equations;

	void add(MultiPoly eq);
	void add_all(std::vector<MultiPoly> eqs);
	void dedupe();
};

struct SolutionSet {
	enum class Kind { Empty, Solved, Unresolved };
	Kind kind = Kind::Empty;
	// solved unknowns as polynomials in the free ones
	std::map<std::string, MultiPoly> assignments;
	std::vector<std::string> free_unknowns;
	std::vector<MultiPoly> residual; // nonempty when unresolved
};

SolutionSet solve_constants(const ConditionSystem &sys);

struct VerifyOutcome {
	bool pass = false;
	std::string witness; // first nonvanishing equation, rendered
};
VerifyOutcome verify_constants(const ConditionSystem &sys,
                               const std::map<std::string, NfElem> &values);

} // namespace biflat
