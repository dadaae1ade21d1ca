#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "tracefn/errors.hpp"
#include "tracefn/matrix_io.hpp"
#include "tracefn/random.hpp"
#include "tracefn/report.hpp"

using namespace tracefn;
using nlohmann::json;

TEST_CASE("matrix JSON parsing") {
  const auto m = matrix_from_json(json::parse(R"({"n": 2, "re": [[1, 2], [2, 3]]})"));
  CHECK(m(0, 1) == Complex(2.0, 0.0));
  const auto c = matrix_from_json(json::parse(R"({"n": 2, "re": [[1, 0], [0, 1]], "im": [[0, 1], [-1, 0]]})"));
  CHECK(c(0, 1) == Complex(0.0, 1.0));

  for (const char* bad : {
           R"({"re": [[1]]})",
           R"({"n": 2, "re": [[1, 2]]})",
           R"({"n": 1, "re": [[1]], "extra": 0})",
           R"({"n": 1, "re": [["x"]]})",
           R"({"n": 0, "re": []})",
           R"({"n": 2, "re": [[1, 2], [3, 4]]})",
           R"({"n": 1, "re": [[1]], "im": [[1]]})",
           R"([1, 2])",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(matrix_from_json(json::parse(bad)), ParseError);
  }
}

TEST_CASE("matrix file round trip") {
  SplitMix64 rng(81);
  const auto m = random_hermitian(rng, 5);
  const auto path = std::filesystem::temp_directory_path() / "tracefn_roundtrip.json";
  write_matrix_file(path, m);
  const auto back = read_matrix_file(path);
  std::filesystem::remove(path);
  CHECK((back.matrix() - m.matrix()).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_FALSE(matrix_to_json(HermitianMatrix::identity(2)).contains("im"));
  try {
    (void)read_matrix_file("/nonexistent/tracefn.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/tracefn.json") != std::string::npos);
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(number_json(INFINITY) == json("+inf"));
  CHECK(number_json(-INFINITY) == json("-inf"));
  CHECK(number_json(1.5) == json(1.5));
  CHECK(format_extended(ExtendedReal::plus_infinity()) == "+inf");
  CHECK(extended_json(ExtendedReal::finite(2.0)) == json(2.0));
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("run reports are deterministic up to wall time") {
  const auto make = [](double wall) {
    RunReport r;
    r.command = "eval";
    r.input_digest = fnv1a_hex("x");
    r.add_result("value", 1.0, Provenance::formula);
    r.add_result("fd", 0.5, Provenance::finite_difference);
    r.verdicts["fd"] = "pass";
    r.wall_time_seconds = wall;
    return r.to_json();
  };
  auto a = make(0.1), b = make(0.2);
  CHECK(a != b);
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("SplitMix64 reference stream") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  SplitMix64 u(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    const int k = u.uniform_int(3, 8);
    CHECK((k >= 3 && k <= 8));
  }
}

TEST_CASE("random instance generators") {
  SplitMix64 rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = rng.uniform_int(3, 8);
    const Eigen::Index corank = rng.uniform_int(1, 2);
    const auto inst = random_singular_instance(rng, n, corank);
    const auto d = eig(inst.a);
    CHECK(d.rank() == n - corank);
    CHECK(image_contained(inst.p, d));
    CHECK(direction_admissible(d, inst.b).admissible);

    const CMatrix u = random_unitary(rng, n);
    CHECK((u.adjoint() * u - CMatrix::Identity(n, n)).norm() <= 1e-12);
    const auto rho = random_density(rng, n, 2);
    CHECK(rho.trace() == doctest::Approx(1.0));
    CHECK(eig(rho).rank() == 2);
  }
}
