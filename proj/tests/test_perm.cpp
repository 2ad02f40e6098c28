#include "pq/perm.hpp"

#include "doctest.h"

#include <random>

using namespace pq;

namespace {

std::string fixture(const std::string& rel) { return std::string(PQ_FIXTURE_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("parse generators") {
  auto a5 = parse_generators("(1,2,3,4,5); (3,4,5)");
  CHECK(a5.generators.size() == 2);
  CHECK(a5.degree == 5);
  CHECK(enumerate_elements(a5).size() == 60);

  auto c2 = parse_generators("(1,2)");
  CHECK(c2.degree == 2);
  CHECK(enumerate_elements(c2).size() == 2);

  CHECK_THROWS_AS(parse_generators("(1,2,3); (1,2,3"), PermError);
  CHECK_THROWS_AS(parse_generators("(1,2)(2,3)"), PermError);
  CHECK_THROWS_AS(parse_generators("(1,,2)"), PermError);
  CHECK_THROWS_AS(parse_generators("1,2"), PermError);
  CHECK_THROWS_AS(parse_generators("# only a comment\n"), PermError);
}

TEST_CASE("header and comments") {
  auto g = parse_generators("# S3, degree 3\norder=6\n(1,2)\n(1,2,3) # rotation\n");
  CHECK(g.name == "S3");
  CHECK(g.declared_order == 6u);
  CHECK(g.generators.size() == 2);
  CHECK(enumerate_elements(g).size() == 6);
  auto bad = parse_generators("order=5\n(1,2)\n");
  CHECK_THROWS_AS(enumerate_elements(bad), PermError);
}

TEST_CASE("element order") {
  CHECK(element_order(Permutation(7)) == 1);
  CHECK(element_order(parse_generators("(1,2,3,4,5)").generators[0]) == 5);
  CHECK(element_order(parse_generators("(1,2)(3,4,5)").generators[0]) == 6);
}

TEST_CASE("enumeration cap") {
  auto a5 = parse_generators("(1,2,3,4,5); (3,4,5)");
  CHECK_THROWS_AS(enumerate_elements(a5, 10), CapExceeded);
  CHECK(enumerate_elements(parse_generators("(1,2)"), 1000000).size() == 2);
}

TEST_CASE("spectra") {
  auto a5 = spectrum(parse_generators("(1,2,3,4,5); (3,4,5)"));
  CHECK(a5.orders == std::set<std::uint64_t>{1, 2, 3, 5});
  CHECK(a5.counts[1] == 1);
  CHECK(a5.counts[2] == 15);
  auto s5 = spectrum(parse_generators("(1,2,3,4,5); (1,2)"));
  CHECK(s5.orders == std::set<std::uint64_t>{1, 2, 3, 4, 5, 6});
  auto u33 = spectrum(load_generators(fixture("groups/U3_3.gens")));
  CHECK(u33.orders == std::set<std::uint64_t>{1, 2, 3, 4, 6, 7, 8, 12});
  CHECK(u33.group_order == 6048);
}

TEST_CASE("order properties on an enumerated group") {
  auto g = load_generators(fixture("groups/L2_7.gens"));
  auto elems = enumerate_elements(g);
  REQUIRE(elems.size() == 168);
  std::uint64_t total = 0;
  for (auto& [o, c] : spectrum(g).counts) total += c;
  CHECK(total == 168);
  std::mt19937 rng(7);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    CHECK(168 % element_order(elems[i]) == 0);
    const auto& h = elems[rng() % elems.size()];
    CHECK(element_order(h * elems[i] * h.inverse()) == element_order(elems[i]));
  }
}

TEST_CASE("cycle printing round trip") {
  auto p = parse_generators("(1,3,5)(2,4)").generators[0];
  CHECK(p.to_string() == "(1,3,5)(2,4)");
  CHECK(Permutation(3).to_string() == "()");
  CHECK((p * p.inverse()).is_identity());
}
