#pragma once

#include <string>
#include <vector>

namespace biflat {

struct CheckResult {
	std::string name;
	std::string status; // pass | fail | skipped
	std::string witness;
};

struct Report {
	std::string group;
	std::string mode;
	std::string level; // symbolic | sampled
	unsigned long seed = 0;
	int points = 0;
	std::vector<std::pair<std::string, std::string>> constants;
	std::vector<CheckResult> checks;
	std::vector<std::pair<std::string, std::string>> potentials;
	std::vector<std::pair<std::string, std::string>> notes;

	bool pass() const;
	void check(const std::string &name, bool ok, const std::string &witness =
	                                                 std::string());
	void skip(const std::string &name, const std::string &why);
	void note(const std::string &key, const std::string &value);

	std::string to_json() const; // deterministic, machine-readable
	std::string to_text() const;
};

} // namespace biflat
