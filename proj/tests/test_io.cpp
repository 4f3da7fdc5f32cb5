#include <doctest.h>

#include <cstring>

#include "normeq/io.hpp"
#include "test_support.hpp"

using namespace normeq;
using testing::Rng;

TEST_CASE("operator files parse into matrices") {
  const Matrix diag = parse_operator_json(
      R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[2,0]]})");
  CHECK(diag(0, 0) == Complex(1.0, 0.0));
  CHECK(diag(0, 1) == Complex(0.0, 0.0));
  CHECK(diag(1, 1) == Complex(2.0, 0.0));

  const Matrix imaginary = parse_operator_json(R"({"rows":1,"cols":1,"data":[[0,1]]})");
  CHECK(imaginary(0, 0) == Complex(0.0, 1.0));
}

TEST_CASE("operator file errors carry their kinds") {
  try {
    (void)parse_operator_json(R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0]]})");
    FAIL("expected shape_error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape_error);
  }

  try {
    (void)parse_operator_json("{\"rows\":1,");
    FAIL("expected parse_error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse_error);
    // nlohmann annotates the byte position of the failure.
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }

  CHECK_THROWS_AS((void)parse_operator_json(R"({"rows":0,"cols":1,"data":[]})"), Error);
  CHECK_THROWS_AS((void)parse_operator_json(R"({"rows":1,"cols":1,"data":[[1]]})"), Error);
  CHECK_THROWS_AS((void)parse_operator_json(R"({"cols":1,"data":[[1,0]]})"), Error);
}

TEST_CASE("operator round trip is bit exact") {
  Rng rng(139);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = testing::random_matrix(4, 3, rng);
    const Matrix back = parse_operator_json(render_operator_json(m));
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    CHECK(std::memcmp(m.data(), back.data(),
                      sizeof(Complex) * static_cast<std::size_t>(m.size())) == 0);
  }

  // Values that stress the 17-significant-digit rendering.
  Matrix awkward(1, 4);
  awkward << Complex(0.1, -0.3), Complex(1e-300, 1e300),
      Complex(-4.9406564584124654e-324, 0.25), Complex(1.0 / 3.0, -2.0 / 3.0);
  const Matrix back = parse_operator_json(render_operator_json(awkward));
  CHECK(std::memcmp(awkward.data(), back.data(), sizeof(Complex) * 4) == 0);
}

TEST_CASE("renderer prints short decimals plainly") {
  Matrix quarter(1, 1);
  quarter << Complex(0.25, 0.0);
  CHECK(render_operator_json(quarter) ==
        "{\"cols\":1,\"data\":[[0.25,0]],\"rows\":1}\n");
}

TEST_CASE("invariant files round trip through their canonical form") {
  const std::string text =
      R"({"atoms":[{"re":"1","im":"0","mult":"2"},{"re":"0.5","im":"-2","mult":"aleph0"},{"re":"3","im":"0","mult":"card:2"}]})";
  const AtomicSpectralType invariant = parse_invariant_json(text);
  CHECK(invariant.atoms().size() == 3);
  CHECK(*invariant.multiplicity(AtomLabel("1", "0")) == ExtMult::finite(2));
  CHECK(*invariant.multiplicity(AtomLabel("0.5", "-2")) == ExtMult::aleph0());

  const std::string canonical = render_invariant_json(invariant);
  CHECK(parse_invariant_json(canonical) == invariant);
  CHECK(render_invariant_json(parse_invariant_json(canonical)) == canonical);
}

TEST_CASE("invariant files reject duplicates and zero multiplicities") {
  CHECK_THROWS_AS((void)parse_invariant_json(
                      R"({"atoms":[{"re":"1","im":"0","mult":"0"}]})"),
                  Error);
  CHECK_THROWS_AS(
      (void)parse_invariant_json(
          R"({"atoms":[{"re":"1","im":"0","mult":"1"},{"re":"1.0","im":"0","mult":"2"}]})"),
      Error);
}

TEST_CASE("json emitter is byte stable with sorted keys") {
  Json doc{{"b", 0.25}, {"a", Json{{"z", 1}, {"y", "text"}}}, {"c", Json::array({1.5, 2})}};
  const std::string first = emit_json(doc);
  const std::string second = emit_json(doc);
  CHECK(first == second);
  CHECK(first == "{\"a\":{\"y\":\"text\",\"z\":1},\"b\":0.25,\"c\":[1.5,2]}\n");
  CHECK(first.back() == '\n');
}

TEST_CASE("digests depend on content only") {
  const std::string a = digest_hex("abc");
  CHECK(a.size() == 16);
  CHECK(a == digest_hex("abc"));
  CHECK(a != digest_hex("abd"));
}

TEST_CASE("format_double uses up to 17 significant digits and round trips") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.0) == "0");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
  const double tiny = 1e-9;
  CHECK(std::stod(format_double(tiny)) == tiny);
}
