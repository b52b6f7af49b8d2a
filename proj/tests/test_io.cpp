#include <doctest.h>

#include <cmath>

#include "seqspace/error.hpp"
#include "seqspace/io.hpp"

using namespace seqspace;
using io::Json;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::internal;
}

}  // namespace

TEST_CASE("sequence formats") {
  const auto a = io::sequence_from_text("[3, [0, 4], -1.5]");
  REQUIRE(a.size() == 3);
  CHECK(a(2) == Complex(0.0, 4.0));
  CHECK(a.finite_support());

  const auto b = io::sequence_from_text(R"({"values": [1, 2], "finite_support": false})");
  CHECK_FALSE(b.finite_support());

  const auto c = io::sequence_from_text("index,re,im\n1,1.0,0\n3,0,-2\n");
  REQUIRE(c.size() == 3);
  CHECK(c(1) == Complex(1.0));
  CHECK(c(2) == Complex(0.0));
  CHECK(c(3) == Complex(0.0, -2.0));
  CHECK(io::sequence_from_csv("2,5,0").size() == 2);

  CHECK(kind_of([] { io::sequence_from_text("[1, \"x\"]"); }) == ErrorKind::parse);
  CHECK(kind_of([] { io::sequence_from_text("1,abc,0"); }) == ErrorKind::parse);
  CHECK(kind_of([] { io::parse_json("{not json"); }) == ErrorKind::parse);
}

TEST_CASE("sequence round trip") {
  const TruncatedSequence x(std::vector<Complex>{{1.0, -0.5}, 0.0, {2.25, 0.0}});
  CHECK(io::sequence_from_json(io::to_json(x))(1) == x(1));
  CHECK(io::sequence_from_json(io::to_json(x))(3) == x(3));
}

TEST_CASE("matrix specs") {
  CHECK(io::matrix_from_json(io::parse_json(R"("hilbert")")).family() == MatrixFamily::hilbert);
  const auto c = io::matrix_from_json(io::parse_json(R"({"family": "cesaro", "alpha": 0.5})"));
  CHECK(c.name() == "cesaro(0.5)");
  CHECK(io::matrix_from_json(io::parse_json(R"({"family": "cesaro"})")).entry(2, 1).real() == doctest::Approx(0.5));
  const auto d = io::matrix_from_json(io::parse_json(R"({"family": "diagonal", "ratio": 0.5})"));
  CHECK(d.entry(3, 3).real() == doctest::Approx(0.125));
  const auto p = io::matrix_from_json(io::parse_json(R"({"family": "power_type", "beta": 2})"));
  CHECK(p.entry(2, 1).real() == doctest::Approx(0.25));
  const auto e = io::matrix_from_json(io::parse_json(R"({"family": "custom", "entries": [[1, 1, 1, 0], [2, 1, 0, 1]]})"));
  CHECK(e.entry(2, 1) == Complex(0.0, 1.0));

  CHECK(kind_of([] { io::matrix_from_json(io::parse_json(R"({"family": "nope"})")); }) == ErrorKind::parse);
  CHECK(kind_of([] { io::matrix_from_json(io::parse_json(R"({"family": "cesaro", "alpha": -1})")); }) ==
        ErrorKind::parameter);
}

TEST_CASE("reports") {
  NormReport r;
  r.value = 5.0;
  r.truncation = 2;
  r.sound = true;
  const Json j = io::to_json(r);
  CHECK(j["value"] == 5.0);
  CHECK(j["sound"] == true);
  CHECK(j["truncation"] == 2);
  CHECK_FALSE(j.contains("tail_bound"));

  const Check c = check_le("a <= b", 1.0, 2.0, 0.0);
  const Json jc = io::to_json(c);
  CHECK(jc["name"] == "a <= b");
  CHECK(jc["pass"] == true);
  CHECK(jc["slack"] == 1.0);

  Partition part;
  part.breakpoints = {2, 3};
  part.final_block_infinite = true;
  const Json jp = io::to_json(part);
  CHECK(jp["breakpoints"] == Json::array({2, 3}));
  CHECK(jp["infinite_tail"] == true);

  const Json info = io::matrix_info(MatrixDescriptor::cesaro(1.0), 2.0, 32);
  CHECK(info["flags"]["lower_triangular"] == true);
  CHECK(info["row_monotone_check"]["ok"] == true);
}
