#pragma once

#include <biflat/groupspec.hpp>

namespace biflat {

// data directory resolution: explicit flag > BIFLAT_DATA_DIR > compiled-in
std::string default_data_dir();

struct RegistryEntry {
	std::string name;
	bool parametric = false;
};

// registered group names (files plus the two parametric families)
std::vector<RegistryEntry> registry_names();

// "G26", "H3" (alias of G23), "I2(8)", "G(m,1,2)" with m, or "G(4,1,2)"
GroupSpec registry_lookup(const std::string &name,
                          std::optional<long> m = std::nullopt,
                          const std::string &data_dir = default_data_dir());

// generated file text for the infinite families (k = 2 or 3)
std::string family_group_text(long m, int k);

// cyclotomic polynomial, integer coefficients, index 0 = constant term
std::vector<long> cyclotomic(long m);

struct GroupInfo {
	std::string name;
	int rank;
	std::vector<long> degrees;
	int n_mirrors;
};
std::vector<GroupInfo> list_groups(const std::string &data_dir =
                                       default_data_dir());

} // namespace biflat
