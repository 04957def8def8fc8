#include <biflat/registry.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace biflat {

std::string default_data_dir()
{
	if (const char *env = std::getenv("BIFLAT_DATA_DIR"))
		return env;
#ifdef BIFLAT_DEFAULT_DATA_DIR
	return BIFLAT_DEFAULT_DATA_DIR;
#else
	return "data/groups";
#endif
}

static const char *kFileGroups[] = {
    "A3",  "I2(6)", "I2(8)", "I2(10)", "G4",  "G5",  "G6",  "G7",
    "G8",  "G9",    "G10",   "G14",    "G16", "G17", "G18", "G20",
    "G21", "G23",   "G24",   "G25",    "G26", "G27", "G33",
};

std::vector<RegistryEntry> registry_names()
{
	std::vector<RegistryEntry> out;
	out.push_back({"B2", false});
	out.push_back({"B3", false});
	for (const char *n : kFileGroups)
		out.push_back({n, false});
	out.push_back({"G(m,1,2)", true});
	out.push_back({"G(m,1,3)", true});
	return out;
}

static std::string file_for(const std::string &name)
{
	std::string f;
	for (char c : name) {
		if (c == '(')
			f += '_';
		else if (c == ')' || c == ',')
			;
		else
			f += c;
	}
	return f + ".grp";
}

std::vector<long> cyclotomic(long m)
{
	// Phi_m = (z^m - 1) / prod_{d | m, d < m} Phi_d, by integer division
	std::vector<long> num(m + 1, 0);
	num[0] = -1;
	num[m] = 1;
	for (long d = 1; d < m; d++) {
		if (m % d)
			continue;
		std::vector<long> phi = cyclotomic(d);
		// divide num by phi exactly
		std::vector<long> q(num.size() - phi.size() + 1, 0);
		std::vector<long> r = num;
		for (int i = int(q.size()) - 1; i >= 0; i--) {
			long c = r[i + phi.size() - 1] / phi.back();
			q[i] = c;
			for (std::size_t j = 0; j < phi.size(); j++)
				r[i + j] -= c * phi[j];
		}
		num = std::move(q);
	}
	return num;
}

namespace {

std::string power_sum(int nvars, long e)
{
	std::ostringstream os;
	for (int i = 1; i <= nvars; i++) {
		if (i > 1)
			os << "+";
		os << "p" << i << "^" << e;
	}
	return os.str();
}

std::string zeta_power(long m, long k)
{
	// zeta^k rendered against the generator; k reduced mod m
	k %= m;
	if (k == 0)
		return "1";
	std::ostringstream os;
	os << "zeta^" << k;
	return os.str();
}

} // namespace

std::string family_group_text(long m, int k)
{
	if (m < 2)
		throw UnknownGroupError("G(m,1," + std::to_string(k) +
		                        ") needs m >= 2");
	std::ostringstream os;
	std::string name = (m == 2 && k == 2)   ? "B2"
	                   : (m == 2 && k == 3) ? "B3"
	                                        : "G(" + std::to_string(m) +
	                                              ",1," + std::to_string(k) +
	                                              ")";
	os << "[meta]\n";
	os << "name = " << name << "\n";
	os << "rank = " << k << "\n";
	os << "degrees =";
	for (int i = 1; i <= k; i++)
		os << " " << m * i;
	os << "\n\n";

	if (m > 2) {
		os << "[generators]\n";
		auto phi = cyclotomic(m);
		os << "zeta | ";
		bool first = true;
		for (int i = int(phi.size()) - 1; i >= 0; i--) {
			if (phi[i] == 0)
				continue;
			long c = phi[i];
			if (!first)
				os << (c < 0 ? "-" : "+");
			else if (c < 0)
				os << "-";
			first = false;
			long a = std::abs(c);
			if (a != 1 || i == 0)
				os << a;
			if (i > 0) {
				if (a != 1)
					os << "*";
				os << "z";
				if (i > 1)
					os << "^" << i;
			}
		}
		os << " | " << zeta_power(m, m - 1) << "\n\n";
	}

	os << "[invariants]\n";
	for (int i = 1; i <= k; i++)
		os << "U" << i << " = " << power_sum(k, m * i) << "\n";
	os << "\n[mirrors]\n";
	// coordinate mirrors carry order-m reflections
	for (int i = 0; i < k; i++) {
		os << m << ":";
		for (int j = 0; j < k; j++)
			os << (j ? "," : " ") << (j == i ? "1" : "0");
		os << "\n";
	}
	// p_i - zeta^t p_j carry order-2 reflections
	for (long t = 0; t < m; t++)
		for (int i = 0; i < k; i++)
			for (int j = i + 1; j < k; j++) {
				os << 2 << ":";
				for (int col = 0; col < k; col++) {
					os << (col ? "," : " ");
					if (col == i)
						os << "1";
					else if (col == j)
						os << "-(" << zeta_power(m, t) << ")";
					else
						os << "0";
				}
				os << "\n";
			}

	os << "\n[hermitian]\nidentity\n";

	os << "\n[reported]\n";
	os << "mirrors = " << (k + m * k * (k - 1) / 2) << "\n";
	if (k == 2) {
		// c1 = -(2m-1)/(2m)
		os << "c1 = -" << (2 * m - 1) << "/" << 2 * m << "\n";
		os << "family_lambda = c1+" << (2 * m - 1) << "/" << 2 * m << "\n";
		os << "family_weights = " << m << "*" << k << " -2*" << m << "\n";
		os << "frobenius_c1 = -3/4\n";
	} else if (k == 3) {
		os << "c1 = -" << (2 * m - 1) << "/" << 3 * m << "\n";
		os << "c2 = -" << (3 * m - 1) << "/" << 2 * m << "\n";
		// c3 = (2/9) c2^2
		Rat c2(-(3 * m - 1), 2 * m);
		Rat c3 = Rat(2, 9) * c2 * c2;
		c3.canonicalize();
		os << "c3 = " << c3.get_str() << "\n";
		os << "family_lambda = 2*c1+" << 2 * (2 * m - 1) << "/" << 3 * m
		   << "\n";
		os << "family_weights = " << m << "*" << k << " -1*" << 3 * m << "\n";
		os << "family_c2 = 3/2*c1-1/2\n";
		os << "family_c3 = 1/2*c1^2-1/3*c1+1/18\n";
		os << "frobenius_c1 = -1/2\n";
	}
	return os.str();
}

static std::optional<std::pair<long, int>> parse_family(const std::string &s)
{
	// G(<int>,1,<k>)
	if (s.rfind("G(", 0) != 0 || s.back() != ')')
		return std::nullopt;
	auto inner = s.substr(2, s.size() - 3);
	auto parts = std::vector<std::string>();
	std::string cur;
	for (char c : inner) {
		if (c == ',') {
			parts.push_back(cur);
			cur.clear();
		} else
			cur += c;
	}
	parts.push_back(cur);
	if (parts.size() != 3 || parts[1] != "1")
		return std::nullopt;
	int k = std::stoi(parts[2]);
	if (k != 2 && k != 3)
		return std::nullopt;
	if (parts[0] == "m")
		return std::make_pair(long(-1), k);
	return std::make_pair(std::stol(parts[0]), k);
}

GroupSpec registry_lookup(const std::string &name0, std::optional<long> m,
                          const std::string &data_dir)
{
	std::string name = name0 == "H3" ? "G23" : name0;
	if (name == "B2")
		name = "G(2,1,2)";
	else if (name == "B3")
		name = "G(2,1,3)";
	if (auto fam = parse_family(name)) {
		long mm = fam->first >= 0 ? fam->first : m.value_or(-1);
		if (mm < 2)
			throw UnknownGroupError("family " + name +
			                        " needs a parameter m >= 2");
		return load_group_text(family_group_text(mm, fam->second),
		                       name + "@m=" + std::to_string(mm));
	}
	auto path = std::filesystem::path(data_dir) / file_for(name);
	if (!std::filesystem::exists(path))
		throw UnknownGroupError("unknown group " + name0 + " (no " +
		                        path.string() + ")");
	GroupSpec g = load_group_file(path.string());
	if (g.name != name && g.name != name0)
		throw ValidationError("file " + path.string() + " declares group " +
		                      g.name);
	return g;
}

std::vector<GroupInfo> list_groups(const std::string &data_dir)
{
	std::vector<GroupInfo> out;
	for (const auto &e : registry_names()) {
		if (e.parametric) {
			GroupSpec g = registry_lookup(e.name, 3, data_dir);
			out.push_back(GroupInfo{e.name, g.rank, g.degrees,
			                        int(g.mirrors.size())});
			continue;
		}
		GroupSpec g = registry_lookup(e.name, std::nullopt, data_dir);
		out.push_back(
		    GroupInfo{e.name, g.rank, g.degrees, int(g.mirrors.size())});
	}
	return out;
}

} // namespace biflat
