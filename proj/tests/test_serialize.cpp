// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nhssh/errors.hpp"
#include "nhssh/serialize.hpp"
#include "support.hpp"

using namespace nhssh;

namespace {

ModelParams params(int digits = 60) {
  return ModelParams::from_strings("0.5", "1", "1.5", "1e-7", 40, 4, Precision{digits});
}

}  // namespace

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("matrix container round-trips every bit") {
  const ModelParams m = params();
  const BigMatrix a = test::random_matrix(5, m.precision, 4);
  MatrixContainer c{"kernel", m, true, a, {{"branch", "PrincipalUpper"}}};
  const std::string text = dump(to_json(c));
  const MatrixContainer back = matrix_from_json(nlohmann::json::parse(text));
  CHECK(back.kind == "kernel");
  CHECK(back.restricted);
  CHECK(back.metadata.at("branch") == "PrincipalUpper");
  CHECK(back.matrix.entries() == a.entries());
  CHECK(params_digest(back.params) == params_digest(m));
  // byte-identical on re-serialization
  CHECK(dump(to_json(back)) == text);
}

TEST_CASE("spectrum container round-trip and truncated digits") {
  const ModelParams m = params(100);
  std::vector<BigComplex> v{test::cnum("1.25", "-3", m.precision), BigComplex(pi(m.precision))};
  const auto j = spectrum_to_json("kernel_spectrum", m, v);
  CHECK(spectrum_from_json(j) == v);
  const auto short_form = spectrum_to_json("kernel_spectrum", m, v, 10);
  CHECK(short_form["values"][1][0] == "3.141592654e0");
}

TEST_CASE("params digest separates precision and parameters") {
  CHECK(params_digest(params(60)) != params_digest(params(61)));
  ModelParams other = params();
  other.ell = 6;
  CHECK(params_digest(other) != params_digest(params()));
  CHECK(params_digest(params()) == params_digest(params()));
}

TEST_CASE("malformed containers are rejected") {
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"schema", "other"}}), DomainError);
  auto j = to_json(MatrixContainer{"kernel", params(), false, BigMatrix(2, 2, params().precision), {}});
  j["rows"] = 3;
  CHECK_THROWS_AS(matrix_from_json(j), DomainError);
  CHECK_THROWS_AS(correlation_from(matrix_from_json(to_json(
                      MatrixContainer{"kernel", params(), false, BigMatrix(1, 1, params().precision), {}}))),
                  DomainError);
}
