#include <catch_amalgamated.hpp>

#include <set>

#include "flagvar/error.hpp"
#include "flagvar/roots.hpp"

using namespace flagvar;

namespace {
std::vector<std::string> labels(const RootSystem& rs, const std::vector<Root>& roots) {
  std::vector<std::string> out;
  for (const Root& r : roots) out.push_back(rs.label(r));
  return out;
}
}  // namespace

TEST_CASE("A2 positive roots", "[roots]") {
  const RootSystem rs = build_root_system(Family::A, 2);
  CHECK(labels(rs, rs.positive()) == std::vector<std::string>{"a12", "a13", "a23"});
  CHECK(labels(rs, rs.simple()) == std::vector<std::string>{"a12", "a23"});
}

TEST_CASE("C3 positive roots in listing order", "[roots]") {
  const RootSystem rs = build_root_system(Family::C, 3);
  CHECK(labels(rs, rs.positive()) ==
        std::vector<std::string>{"a12", "a12+", "a13", "a13+", "a23", "a23+", "a11", "a22", "a33"});
  CHECK(labels(rs, rs.simple()) == std::vector<std::string>{"a12", "a23", "a33"});
}

TEST_CASE("A1 has a single positive root", "[roots]") {
  const RootSystem rs = build_root_system(Family::A, 1);
  CHECK(rs.positive().size() == 1);
  CHECK(rs.roots().size() == 2);
}

TEST_CASE("root counts", "[roots]") {
  for (int l = 1; l <= 7; ++l) CHECK(build_root_system(Family::A, l).roots().size() == std::size_t(l * (l + 1)));
  for (int l = 2; l <= 7; ++l) CHECK(build_root_system(Family::C, l).roots().size() == std::size_t(2 * l * l));
}

TEST_CASE("structural invariants", "[roots][property]") {
  for (Family f : {Family::A, Family::C}) {
    for (int l = 2; l <= 6; ++l) {
      const RootSystem rs = build_root_system(f, l);
      std::set<Root> all(rs.roots().begin(), rs.roots().end());
      CHECK(all.size() == rs.roots().size());
      for (const Root& r : rs.roots()) {
        CHECK(all.count(-r) == 1);
        CHECK_FALSE(r.is_zero());
      }
      for (const Root& r : rs.positive()) {
        const auto sc = rs.simple_coordinates(r);
        for (int c : sc) CHECK(c >= 0);
        // reconstruct from simple roots
        Root back{std::vector<int>(rs.ambient_dimension(), 0)};
        for (int k = 0; k < l; ++k)
          for (int t = 0; t < sc[k]; ++t) back = back + rs.simple()[k];
        CHECK(back == r);
      }
      for (const Root& r : rs.roots()) {
        if (f == Family::A) {
          int sum = 0, ones = 0, minus = 0;
          for (int c : r.coords) {
            sum += c;
            ones += c == 1;
            minus += c == -1;
          }
          CHECK(sum == 0);
          CHECK(ones == 1);
          CHECK(minus == 1);
        }
      }
    }
  }
}

TEST_CASE("labels round-trip", "[roots]") {
  for (Family f : {Family::A, Family::C}) {
    for (int l : {2, 3, 11}) {
      const RootSystem rs = build_root_system(f, l);
      for (const Root& r : rs.roots()) CHECK(rs.parse(rs.label(r)) == r);
    }
  }
  const RootSystem c11 = build_root_system(Family::C, 11);
  CHECK(c11.label(c11.sum(1, 11)) == "a1,11+");
  CHECK(c11.label(-c11.sum(10, 10)) == "-a10,10");
}

TEST_CASE("malformed labels and unsupported systems", "[roots][errors]") {
  const RootSystem rs = build_root_system(Family::A, 2);
  CHECK_THROWS_AS(rs.parse("a11"), Error);
  CHECK_THROWS_AS(rs.parse("b12"), Error);
  CHECK_THROWS_AS(rs.parse("a14"), Error);
  CHECK_THROWS_AS(rs.parse("a12+"), Error);
  try {
    build_root_system(Family::C, 1);
    FAIL("expected configuration error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Configuration);
  }
  CHECK_THROWS_AS(build_root_system(Family::A, 0), Error);
  CHECK_THROWS_AS(parse_family("G"), Error);
}
