#pragma once

#include <biflat/arrangement.hpp>
#include <biflat/constsolver.hpp>
#include <biflat/potentials.hpp>
#include <biflat/registry.hpp>
#include <biflat/report.hpp>
#include <biflat/wdvv.hpp>

#include <random>

namespace biflat {

enum class Mode { Standard, Family, Pencil, Dunkl, Wdvv, SampleFlatness, All };
enum class Level { Default, Symbolic, Sampled };

Mode mode_from_string(const std::string &s);
std::string to_string(Mode m);

struct RunConfig {
	std::string group;
	Mode mode = Mode::Standard;
	Level level = Level::Default;
	bool solve = false; // derive the constants instead of verifying reported
	int points = 8;
	unsigned long seed = 20260809;
	std::string data_dir = default_data_dir();
	std::optional<long> family_m;
};

Report run_pipeline(const RunConfig &cfg);

// deterministic off-mirror sample points with small rational coordinates
class PointSampler {
public:
	PointSampler(const GroupSpec &g, unsigned long seed);
	// a point where det J and every mirror form are nonzero
	std::vector<NfElem> next(std::span<const MultiPoly> u);

private:
	const GroupSpec &g_;
	std::mt19937_64 rng_;
};

// --- building blocks shared with the tests --------------------------------

// vector potential A with dd A^i = the natural product, by undetermined
// coefficients matched at sample points (exact); family constants may stay
// symbolic
// dk_weights nonempty selects the Dunkl-Kohno dual product as the source
std::vector<MultiPoly> potential_from_samples(
    const GroupSpec &g, std::span<const MultiPoly> u,
    const std::vector<NfElem> &dk_weights, bool dunkl_side, int points,
    unsigned long seed);

// standard-mode artifacts at bound constants
struct StandardRun {
	std::vector<MultiPoly> u;      // invariants with constants bound
	std::vector<MultiPoly> a;      // vector potential in the u-chart
	std::optional<FrobeniusCandidate> frobenius;
};

// solve the standard constants from dual flatness (rank >= 3) plus
// product compatibility (rank 2); returns the solved values
SolutionSet solve_standard_constants(const GroupSpec &g, Level level,
                                     int points, unsigned long seed);

// family relations: compatibility + almost-hydro with Gamma2 = -c* + lam C
SolutionSet solve_family_relations(const GroupSpec &g, Level level, int points,
                                   unsigned long seed);

// scaling equivalence between two one-parameter potential families:
// B^i(u; a c + b) == A^i(lambda u; c) / (lambda_i lambda_n) up to affine
struct ScalingReport {
	bool success = false;
	std::string parameter_map;                        // c' = a*c + b
	std::vector<std::pair<std::string, std::string>> scale_constraints;
	std::string witness;
};
ScalingReport scaling_equivalence(std::span<const MultiPoly> pot_a,
                                  std::span<const MultiPoly> pot_b,
                                  std::span<const long> degrees);

} // namespace biflat
