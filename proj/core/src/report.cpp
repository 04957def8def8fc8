#include <biflat/report.hpp>

#include <json.hpp>

#include <sstream>

namespace biflat {

bool Report::pass() const
{
	for (const auto &c : checks)
		if (c.status == "fail")
			return false;
	return true;
}

void Report::check(const std::string &name, bool ok, const std::string &w)
{
	checks.push_back(CheckResult{name, ok ? "pass" : "fail", ok ? "" : w});
}

void Report::skip(const std::string &name, const std::string &why)
{
	checks.push_back(CheckResult{name, "skipped", why});
}

void Report::note(const std::string &key, const std::string &value)
{
	notes.emplace_back(key, value);
}

std::string Report::to_json() const
{
	nlohmann::ordered_json j;
	j["group"] = group;
	j["mode"] = mode;
	j["level"] = level;
	j["seed"] = seed;
	j["points"] = points;
	nlohmann::ordered_json cj = nlohmann::ordered_json::object();
	for (const auto &[k, v] : constants)
		cj[k] = v;
	j["constants"] = cj;
	j["checks"] = nlohmann::ordered_json::array();
	for (const auto &c : checks) {
		nlohmann::ordered_json e;
		e["name"] = c.name;
		e["status"] = c.status;
		if (!c.witness.empty())
			e["witness"] = c.witness;
		j["checks"].push_back(e);
	}
	nlohmann::ordered_json pj = nlohmann::ordered_json::object();
	for (const auto &[k, v] : potentials)
		pj[k] = v;
	j["potentials"] = pj;
	nlohmann::ordered_json nj = nlohmann::ordered_json::object();
	for (const auto &[k, v] : notes)
		nj[k] = v;
	j["notes"] = nj;
	return j.dump(2) + "\n";
}

std::string Report::to_text() const
{
	std::ostringstream os;
	os << "group " << group << "  mode " << mode << "  level " << level;
	if (level == "sampled")
		os << " (points " << points << ", seed " << seed << ")";
	os << "\n";
	if (!constants.empty()) {
		os << "constants:\n";
		for (const auto &[k, v] : constants)
			os << "  " << k << " = " << v << "\n";
	}
	for (const auto &c : checks) {
		os << "  [" << (c.status == "pass"   ? "PASS"
		                : c.status == "fail" ? "FAIL"
		                                     : "SKIP")
		   << "] " << c.name;
		if (!c.witness.empty())
			os << "  (" << c.witness << ")";
		os << "\n";
	}
	for (const auto &[k, v] : potentials)
		os << "  " << k << " = " << v << "\n";
	for (const auto &[k, v] : notes)
		os << "  note " << k << ": " << v << "\n";
	return os.str();
}

} // namespace biflat
