// SPDX-License-Identifier: Apache-2.0
//
// Decimal-string JSON containers for matrices and spectra, and SHA-256 digests.
//
// Container layout (schema "nhssh.container/1"):
//
//   { "schema": ..., "kind": "correlation" | "kernel" | "spectrum" | ...,
//     "precision_digits": P, "params": {...}, "grid": {"cells": N, "twist": delta},
//     "restricted": bool, "rows": r, "cols": c,
//     "entries": [["re", "im"], ...]            (matrices, row-major)
//     "values":  [["re", "im"], ...]            (spectra)
//     "metadata": {"key": "value", ...} }
//
// Keys are emitted in sorted order, so equal inputs give byte-identical files.
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nhssh/bignum.hpp"
#include "nhssh/correlation.hpp"
#include "nhssh/matrix.hpp"
#include "nhssh/model.hpp"

namespace nhssh {

inline constexpr std::string_view kContainerSchema = "nhssh.container/1";

/// Significant digits that round-trip every bit of a value at precision p.
int full_digits(Precision p);

/// to_string with `digits` significant digits; digits <= 0 means full_digits.
std::string decimal(const BigReal& x, int digits = 0);

nlohmann::json params_to_json(const ModelParams& params);
/// ConfigError on missing or malformed fields.
ModelParams params_from_json(const nlohmann::json& j);

struct MatrixContainer {
  std::string kind;
  ModelParams params;
  bool restricted = false;
  BigMatrix matrix;
  std::map<std::string, std::string> metadata;
};

nlohmann::json to_json(const MatrixContainer& c, int digits = 0);
/// Entries are parsed at the precision recorded in the header. DomainError on bad data.
MatrixContainer matrix_from_json(const nlohmann::json& j);

nlohmann::json spectrum_to_json(std::string_view kind, const ModelParams& params, const std::vector<BigComplex>& values,
                                int digits = 0);
std::vector<BigComplex> spectrum_from_json(const nlohmann::json& j);

MatrixContainer container(const CorrelationMatrix& c);
CorrelationMatrix correlation_from(const MatrixContainer& c);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

std::string sha256_hex(std::string_view data);
/// Digest of the canonical (params, P) record; used as the cache key and in file names.
std::string params_digest(const ModelParams& params);

}  // namespace nhssh
