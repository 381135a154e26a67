// SPDX-License-Identifier: Apache-2.0
#include "nhssh/serialize.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <stdexcept>

#include "nhssh/errors.hpp"

namespace nhssh {

using nlohmann::json;

int full_digits(Precision p) { return static_cast<int>(std::ceil(static_cast<double>(p.bits()) * 0.30102999566398120)) + 2; }

std::string decimal(const BigReal& x, int digits) {
  return to_string(x, digits > 0 ? digits : full_digits(x.precision()));
}

json params_to_json(const ModelParams& params) {
  return json{{"u", decimal(params.u)},
              {"v", decimal(params.v)},
              {"w", decimal(params.w)},
              {"delta", decimal(params.delta)},
              {"L", params.L},
              {"ell", params.ell},
              {"precision_digits", params.precision.digits}};
}

ModelParams params_from_json(const json& j) {
  try {
    return ModelParams::from_strings(j.at("u").get<std::string>(), j.at("v").get<std::string>(),
                                     j.at("w").get<std::string>(), j.at("delta").get<std::string>(), j.at("L").get<int>(),
                                     j.at("ell").get<int>(), Precision{j.at("precision_digits").get<int>()});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params record: ") + e.what());
  }
}

namespace {

json complex_entry(const BigComplex& z, int digits) { return json::array({decimal(z.re, digits), decimal(z.im, digits)}); }

BigComplex parse_entry(const json& e, Precision p) {
  if (!e.is_array() || e.size() != 2) throw DomainError("container entry must be a [re, im] pair");
  return BigComplex(BigReal::parse(e[0].get<std::string>(), p), BigReal::parse(e[1].get<std::string>(), p));
}

json header(std::string_view kind, const ModelParams& params) {
  return json{{"schema", kContainerSchema},
              {"kind", kind},
              {"precision_digits", params.precision.digits},
              {"params", params_to_json(params)},
              {"grid", {{"cells", params.cells()}, {"twist", decimal(params.delta)}}}};
}

void check_schema(const json& j) {
  if (!j.contains("schema") || j["schema"] != kContainerSchema) throw DomainError("not an nhssh container");
}

}  // namespace

json to_json(const MatrixContainer& c, int digits) {
  json j = header(c.kind, c.params);
  j["restricted"] = c.restricted;
  j["rows"] = c.matrix.rows();
  j["cols"] = c.matrix.cols();
  json entries = json::array();
  for (const auto& z : c.matrix.entries()) entries.push_back(complex_entry(z, digits));
  j["entries"] = std::move(entries);
  j["metadata"] = c.metadata;
  return j;
}

MatrixContainer matrix_from_json(const json& j) {
  check_schema(j);
  try {
    ModelParams params = params_from_json(j.at("params"));
    const Precision p{j.at("precision_digits").get<int>()};
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& entries = j.at("entries");
    if (entries.size() != rows * cols) throw DomainError("container entry count does not match its shape");
    BigMatrix m(rows, cols, p);
    for (std::size_t i = 0; i < entries.size(); ++i) m.entries()[i] = parse_entry(entries[i], p);
    MatrixContainer c{j.at("kind").get<std::string>(), std::move(params), j.value("restricted", false), std::move(m),
                      {}};
    if (j.contains("metadata")) c.metadata = j["metadata"].get<std::map<std::string, std::string>>();
    return c;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed container: ") + e.what());
  }
}

json spectrum_to_json(std::string_view kind, const ModelParams& params, const std::vector<BigComplex>& values,
                      int digits) {
  json j = header(kind, params);
  json out = json::array();
  for (const auto& z : values) out.push_back(complex_entry(z, digits));
  j["values"] = std::move(out);
  return j;
}

std::vector<BigComplex> spectrum_from_json(const json& j) {
  check_schema(j);
  try {
    const Precision p{j.at("precision_digits").get<int>()};
    std::vector<BigComplex> values;
    for (const auto& e : j.at("values")) values.push_back(parse_entry(e, p));
    return values;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed spectrum: ") + e.what());
  }
}

MatrixContainer container(const CorrelationMatrix& c) {
  return MatrixContainer{"correlation", c.params, c.restricted, c.matrix, {}};
}

CorrelationMatrix correlation_from(const MatrixContainer& c) {
  if (c.kind != "correlation") throw DomainError("container holds '" + c.kind + "', not a correlation matrix");
  return CorrelationMatrix{c.matrix, c.params, c.restricted};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

std::string params_digest(const ModelParams& params) { return sha256_hex(params_to_json(params).dump()); }

}  // namespace nhssh
