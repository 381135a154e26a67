// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value run configuration. Every key has a default; a config file and
// --set overrides are applied on top, in that order. Values stay strings until a
// command asks for them, so physics constants are only ever parsed at precision P.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhssh/bignum.hpp"
#include "nhssh/model.hpp"

namespace nhssh::cli {

class RunConfig {
 public:
  /// All known keys at their defaults.
  static RunConfig defaults();

  /// Applies a config file. ConfigError names the file, line and field on failure.
  void load_file(const std::string& path);
  /// Applies one "key=value" override. ConfigError for unknown keys.
  void set(const std::string& assignment, const std::string& origin = "--set");

  const std::string& get(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  Precision precision() const { return Precision{get_int("digits")}; }
  /// Model parameters from the u, v, w, delta, L keys with subsystem length ell.
  ModelParams params(int ell) const;
  /// The same, reading keys prefixed with `prefix` (e.g. "ed_critical_").
  ModelParams params(const std::string& prefix, int L, int ell, Precision p) const;

  /// Checks every typed key once so errors surface before any work starts.
  void validate() const;

  nlohmann::json to_json() const;

 private:
  void assign(const std::string& key, const std::string& value, const std::string& where);

  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> origin_;
};

}  // namespace nhssh::cli
