#include "pq/char_table.hpp"
#include "pq/perm.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace pq;

namespace {

std::string fixture(const std::string& rel) { return std::string(PQ_FIXTURE_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> table_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("tables"))) {
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::multiset<std::int64_t> degrees(const CharacterTable& t) {
  std::multiset<std::int64_t> d;
  for (const auto& chi : t.irreducibles) d.insert(chi.degree);
  return d;
}

}  // namespace

TEST_CASE("load fixtures") {
  auto a5 = load_table_file(fixture("tables/A5.json"));
  CHECK(a5.class_count() == 5);
  CHECK(degrees(a5) == std::multiset<std::int64_t>{1, 3, 3, 4, 5});
  auto l33 = load_table_file(fixture("tables/L3_3.json"));
  CHECK(l33.class_count() == 12);
  CHECK(l33.group_order == 5616);
}

TEST_CASE("canonical class order") {
  auto t = load_table_file(fixture("tables/U3_3.2.json"));
  for (int i = 1; i < t.class_count(); ++i) {
    const auto& a = t.classes[i - 1];
    const auto& b = t.classes[i];
    bool ordered = a.element_order < b.element_order ||
                   (a.element_order == b.element_order &&
                    (a.size < b.size || (a.size == b.size && a.name < b.name)));
    CHECK(ordered);
  }
  CHECK(validate_table(t).ok());
}

TEST_CASE("schema violations") {
  std::string text = slurp(fixture("tables/A5.json"));
  auto j = text;
  auto pos = j.find("\"2\": [");
  REQUIRE(pos != std::string::npos);
  j.replace(pos, 3, "\"7\"");
  CHECK_THROWS_AS(load_table(j), TableError);
  CHECK_THROWS_AS(load_table("{\"name\": \"x\"}"), TableError);
  CHECK_THROWS_AS(load_table("not json"), TableError);
}

TEST_CASE("every fixture validates") {
  auto files = table_files();
  CHECK(files.size() >= 19);
  for (const auto& f : files) {
    auto t = load_table_file(f);
    auto r = validate_table(t);
    INFO(f);
    CHECK(r.ok());
    for (const auto& m : r.failures) MESSAGE(m);
    if (!t.is_ordinary()) CHECK(!r.notices.empty());
  }
}

TEST_CASE("perturbed value is caught") {
  auto t = load_table_file(fixture("tables/A5.json"));
  t.irreducibles[1].values[2] += Cyclotomic(1);
  auto r = validate_table(t);
  REQUIRE_FALSE(r.ok());
  bool named = false;
  for (const auto& f : r.failures) {
    if (f.find("row orthogonality") != std::string::npos && f.find(t.irreducibles[1].name) != std::string::npos) {
      named = true;
    }
  }
  CHECK(named);
}

TEST_CASE("Brauer tables skip orthogonality") {
  auto t = load_table_file(fixture("tables/U3_3.mod3.json"));
  auto r = validate_table(t);
  CHECK(r.ok());
  REQUIRE(r.notices.size() == 1);
  CHECK(r.notices[0].find("skipped") != std::string::npos);
  auto ord = load_table_file(fixture("tables/U3_3.json"));
  auto map = class_map(ord, t);
  for (std::size_t i = 0; i < map.size(); ++i) CHECK(ord.classes[map[i]].name == t.classes[i].name);
}

TEST_CASE("generic PSL(2,p)") {
  auto t7 = psl2_generic_table(7);
  CHECK(t7.class_count() == 6);
  CHECK(degrees(t7) == std::multiset<std::int64_t>{1, 3, 3, 6, 7, 8});
  CHECK_THROWS_AS(psl2_generic_table(4), TableError);
  CHECK_THROWS_AS(psl2_generic_table(3), TableError);
  for (std::int64_t p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    auto t = psl2_generic_table(p);
    auto r = validate_table(t);
    INFO("p = " << p);
    CHECK(r.ok());
    for (const auto& m : r.failures) MESSAGE(m);
  }
  CHECK(tables_equivalent(psl2_generic_table(5), load_table_file(fixture("tables/A5.json"))));
  CHECK(tables_equivalent(psl2_generic_table(7), load_table_file(fixture("tables/L2_7.json"))));
  CHECK(tables_equivalent(psl2_generic_table(17), load_table_file(fixture("tables/L2_17.json"))));
  CHECK_FALSE(tables_equivalent(psl2_generic_table(7), load_table_file(fixture("tables/L2_8.json"))));
}

TEST_CASE("eligible classes") {
  auto a5 = load_table_file(fixture("tables/A5.json"));
  auto names = [&](const std::vector<int>& idx) {
    std::set<std::string> s;
    for (int i : idx) s.insert(a5.classes[i].name);
    return s;
  };
  CHECK(names(eligible_classes(a5, 6)) == std::set<std::string>{"2a", "3a"});
  CHECK(names(eligible_classes(a5, 5)) == std::set<std::string>{"5a", "5b"});
  CHECK(eligible_classes(a5, 1).empty());
}

TEST_CASE("table element orders agree with permutation spectra") {
  for (const auto& e : std::filesystem::directory_iterator(fixture("groups"))) {
    std::string stem = e.path().stem().string();
    auto t = load_table_file(fixture("tables/" + stem + ".json"));
    auto s = spectrum(load_generators(e.path().string()));
    std::set<std::uint64_t> orders;
    for (const auto& c : t.classes) orders.insert(static_cast<std::uint64_t>(c.element_order));
    INFO(stem);
    CHECK(orders == s.orders);
    CHECK(s.group_order == static_cast<std::uint64_t>(t.group_order));
  }
}

TEST_CASE("json round trip") {
  auto t = load_table_file(fixture("tables/L2_8.json"));
  auto back = load_table(table_to_json(t));
  CHECK(tables_equivalent(t, back));
  CHECK(back.classes.size() == t.classes.size());
  for (int i = 0; i < t.class_count(); ++i) CHECK(back.classes[i].name == t.classes[i].name);
}
