// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nhssh/errors.hpp"

namespace nhssh::cli {

namespace {

enum class Kind { Decimal, Int, Real, Bool, IntList, Branch };

struct KeySpec {
  const char* key;
  const char* fallback;
  Kind kind;
};

// clang-format off
constexpr KeySpec kKeys[] = {
    {"digits", "500", Kind::Int},
    {"u", "0.5", Kind::Decimal},
    {"v", "1", Kind::Decimal},
    {"w", "1.5", Kind::Decimal},
    {"delta", "1e-7", Kind::Decimal},
    {"L", "2000", Kind::Int},
    {"ell", "120", Kind::Int},
    {"ells", "60,100,120", Kind::IntList},
    {"entropy_ells", "20,40,60,80,100", Kind::IntList},
    {"renyi", "2,3", Kind::IntList},
    {"branch", "upper", Kind::Branch},
    {"exp_check", "true", Kind::Bool},
    {"cache", "true", Kind::Bool},
    {"csv_digits", "30", Kind::Int},
    {"sweep_factor", "100", Kind::Int},
    {"condition_cap_fraction", "0.25", Kind::Real},
    {"endpoint_window", "0.1", Kind::Real},
    {"endpoint_tolerance", "0.05", Kind::Real},
    {"collapse_tolerance", "0.02", Kind::Real},
    {"diag_tolerance", "0.02", Kind::Real},
    {"diag_profile_tolerance", "0.03", Kind::Real},
    {"triangle_window", "0.2", Kind::Real},
    {"triangle_tolerance", "0.05", Kind::Real},
    {"locality_edge", "0.2", Kind::Real},
    {"locality_tolerance", "1e-3", Kind::Real},
    {"reality_threshold", "0.01", Kind::Real},
    {"reality_fraction", "0.9", Kind::Real},
    {"central_charge_tolerance", "0.1", Kind::Real},
    {"ed_L", "8", Kind::Int},
    {"ed_ell", "4", Kind::Int},
    {"ed_digits", "200", Kind::Int},
    {"ed_gapped_u", "1", Kind::Decimal},
    {"ed_gapped_v", "1", Kind::Decimal},
    {"ed_gapped_w", "5", Kind::Decimal},
    {"ed_gapped_delta", "0", Kind::Decimal},
    {"ed_critical_u", "0.5", Kind::Decimal},
    {"ed_critical_v", "1", Kind::Decimal},
    {"ed_critical_w", "1.5", Kind::Decimal},
    {"ed_critical_delta", "1e-3", Kind::Decimal},
};
// clang-format on

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : kKeys)
    if (key == k.key) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& s, int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_real(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_list(const std::string& s, std::vector<int>& out) {
  out.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    if (!parse_int(trim(item), v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

// Empty string when the value is acceptable for the key, otherwise the reason.
std::string check(const KeySpec& spec, const std::string& value) {
  switch (spec.kind) {
    case Kind::Int: {
      int v = 0;
      return parse_int(value, v) ? "" : "expected an integer";
    }
    case Kind::Real: {
      double v = 0;
      return parse_real(value, v) ? "" : "expected a number";
    }
    case Kind::Decimal:
      try {
        (void)BigReal::parse(value, Precision{30});
        return "";
      } catch (const Error&) {
        return "expected a decimal literal";
      }
    case Kind::Bool:
      return (value == "true" || value == "false") ? "" : "expected true or false";
    case Kind::IntList: {
      std::vector<int> v;
      return parse_list(value, v) ? "" : "expected a comma-separated list of integers";
    }
    case Kind::Branch:
      return (value == "upper" || value == "lower") ? "" : "expected upper or lower";
  }
  return "unknown kind";
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  for (const auto& k : kKeys) {
    c.values_[k.key] = k.fallback;
    c.origin_[k.key] = "default";
  }
  return c;
}

void RunConfig::assign(const std::string& key, const std::string& value, const std::string& where) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(where + ": unknown field '" + key + "'");
  const std::string reason = check(*spec, value);
  if (!reason.empty()) throw ConfigError(where + ": field '" + key + "' = '" + value + "': " + reason);
  values_[key] = value;
  origin_[key] = where;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    assign(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
}

void RunConfig::set(const std::string& assignment, const std::string& origin) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value, got '" + assignment + "'");
  assign(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), origin + " " + assignment);
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown field '" + key + "'");
  return it->second;
}

int RunConfig::get_int(const std::string& key) const {
  int v = 0;
  if (!parse_int(get(key), v)) throw ConfigError(origin_.at(key) + ": field '" + key + "' is not an integer");
  return v;
}

double RunConfig::get_double(const std::string& key) const {
  double v = 0;
  if (!parse_real(get(key), v)) throw ConfigError(origin_.at(key) + ": field '" + key + "' is not a number");
  return v;
}

bool RunConfig::get_bool(const std::string& key) const { return get(key) == "true"; }

std::vector<int> RunConfig::get_int_list(const std::string& key) const {
  std::vector<int> v;
  if (!parse_list(get(key), v)) throw ConfigError(origin_.at(key) + ": field '" + key + "' is not an integer list");
  return v;
}

ModelParams RunConfig::params(int ell) const {
  return ModelParams::from_strings(get("u"), get("v"), get("w"), get("delta"), get_int("L"), ell, precision());
}

ModelParams RunConfig::params(const std::string& prefix, int L, int ell, Precision p) const {
  return ModelParams::from_strings(get(prefix + "u"), get(prefix + "v"), get(prefix + "w"), get(prefix + "delta"), L,
                                   ell, p);
}

void RunConfig::validate() const {
  if (get_int("digits") < 20) throw ConfigError(origin_.at("digits") + ": field 'digits' must be at least 20");
  if (get_int("csv_digits") < 2) throw ConfigError(origin_.at("csv_digits") + ": field 'csv_digits' must be >= 2");
  for (int q : get_int_list("renyi"))
    if (q < 2) throw ConfigError(origin_.at("renyi") + ": Renyi orders must be >= 2");
  try {
    nhssh::validate(params(get_int("ell")), true);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model parameters: ") + e.what());
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace nhssh::cli
