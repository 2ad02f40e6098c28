#include "pq/filters.hpp"
#include "pq/help.hpp"

#include "doctest.h"

#include <filesystem>
#include <set>

using namespace pq;

namespace {

std::string fixture(const std::string& rel) { return std::string(PQ_FIXTURE_DIR) + "/" + rel; }

CharacterTable table(const std::string& stem) { return load_table_file(fixture("tables/" + stem + ".json")); }

std::vector<CharacterTable> brauer(const std::string& stem, std::vector<int> primes = {}) {
  std::vector<CharacterTable> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("tables"))) {
    std::string f = e.path().filename().string();
    if (f.rfind(stem + ".mod", 0) != 0) continue;
    auto t = load_table_file(e.path().string());
    if (primes.empty() || std::count(primes.begin(), primes.end(), t.characteristic)) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.characteristic < b.characteristic; });
  return out;
}

std::size_t wagner_count(HelpSolver& s, std::int64_t n) {
  std::set<IntVector> kept;
  for (const auto& t : s.solve(n).towers) {
    if (wagner_passes(t, s.table())) kept.insert(t.self().values);
  }
  return kept.size();
}

}  // namespace

TEST_CASE("unit character values") {
  auto a5 = table("A5");
  int c5a = a5.class_index("5a");
  int c5b = a5.class_index("5b");
  const ClassFunction* chi3 = nullptr;
  for (const auto& chi : a5.irreducibles) {
    if (chi.degree == 3 && !chi.values[c5a].is_rational()) {
      chi3 = &chi;
      break;
    }
  }
  REQUIRE(chi3);
  PaVector e5a{5, {c5a, c5b}, {1, 0}};
  CHECK(unit_character_value(a5, *chi3, e5a) == chi3->values[c5a]);
  PaVector mixed{5, {c5a, c5b}, {2, -1}};
  CHECK(unit_character_value(a5, *chi3, mixed) == Cyclotomic(2) * chi3->values[c5a] - chi3->values[c5b]);
  PaVector six{6, {a5.class_index("2a"), a5.class_index("3a")}, {4, -3}};
  CHECK(unit_character_value(a5, a5.irreducibles[0], six) == Cyclotomic(1));
}

TEST_CASE("constraint systems") {
  auto a5 = table("A5");
  auto s = build_constraints({a5}, 2, {});
  REQUIRE(s.variables.size() == 1);
  CHECK(a5.classes[s.variables[0]].name == "2a");
  REQUIRE(s.equalities.size() == 1);
  CHECK(enumerate_integer_points(s) == std::vector<IntVector>{{1}});
  CHECK_THROWS_AS(build_constraints({a5}, 1, {}), HelpError);
  CHECK_THROWS_AS(build_constraints({a5}, 6, {}), HelpError);  // tail missing
  auto b = brauer("A5", {2});
  CHECK_THROWS_AS(build_constraints({a5, b.at(0)}, 2, {}), HelpError);

  HelpSolver solver(a5);
  auto five = solver.constraints(5, {});
  CHECK(enumerate_integer_points(five) == std::vector<IntVector>{{0, 1}, {1, 0}});
  // u^2 ~ 3a and u^3 ~ 2a leaves no integral ε(u) of order 6.
  std::map<std::int64_t, PaPtr> tail;
  tail[2] = solver.intern(PaVector{3, eligible_classes(a5, 3), {1}});
  tail[3] = solver.intern(PaVector{2, eligible_classes(a5, 2), {1}});
  CHECK(enumerate_integer_points(solver.constraints(6, tail)).empty());
}

TEST_CASE("A5") {
  HelpSolver s(table("A5"));
  CHECK(s.solve(2).distinct().size() == 1);
  CHECK(s.solve(3).distinct().size() == 1);
  auto c5 = classify_solutions(s.solve(5), s.table());
  CHECK(c5.trivial.size() == 2);
  CHECK(c5.nontrivial.empty());
  for (int n : {6, 10, 15}) CHECK(s.solve(n).towers.empty());
  CHECK_THROWS_AS(s.solve(1), HelpError);
  CHECK_THROWS_AS(s.solve(7), HelpError);
  auto empty = classify_solutions(SolutionSet{}, s.table());
  CHECK(empty.trivial.empty());
  CHECK(empty.nontrivial.empty());
}

TEST_CASE("PSL(3,3) counts and the Wagner tuples") {
  HelpSolver s(table("L3_3"), brauer("L3_3"), {.wagner = true});
  CHECK(s.solve(3).distinct().size() == 5);
  CHECK(s.solve(6).distinct().size() == 31);
  CHECK(classify_solutions(s.solve(6), s.table()).nontrivial.size() > 0);
  const auto& twelve = s.solve(12);
  std::vector<std::string> names;
  for (int c : twelve.classes) names.push_back(s.table().classes[c].name);
  CHECK(names == std::vector<std::string>{"2a", "3a", "3b", "4a", "6a"});
  CHECK(twelve.distinct().size() == 11);
  CHECK(wagner_count(s, 12) == 4);
  std::set<IntVector> rejected;
  for (const auto& t : twelve.towers) {
    if (!wagner_passes(t, s.table())) rejected.insert(t.self().values);
  }
  std::set<IntVector> expected{{-1, -1, -2, 1, 4}, {-1, 0, -3, 1, 4}, {-1, 0, 0, 1, 1}, {1, 0, 0, 1, -1},
                               {1, 0, 3, 1, -4},   {1, 1, -1, 1, -1}, {1, 1, 2, 1, -4}};
  CHECK(rejected == expected);
  CHECK(s.solve(26).towers.empty());
}

TEST_CASE("U4(2) counts") {
  HelpSolver s(table("U4_2"), brauer("U4_2", {2, 5}), {.wagner = true});
  CHECK(s.solve(2).distinct().size() == 3);
  CHECK(s.solve(3).distinct().size() == 7);
  CHECK(wagner_count(s, 4) == 13);
  CHECK(s.solve(10).towers.empty());
}

TEST_CASE("trivial towers are admissible") {
  for (const auto& stem : {"A5", "L2_7", "L2_8", "A6", "L3_3", "S5", "L3_2.2", "U3_3"}) {
    HelpSolver s(table(stem), brauer(stem), {.wagner = true});
    for (int c = 1; c < s.table().class_count(); ++c) {
      auto tower = trivial_tower(s, c);
      const auto& sol = s.solve(tower.unit_order);
      bool found = false;
      for (const auto& t : sol.towers) {
        if (t.pa == tower.pa) found = true;
      }
      INFO(stem << " " << s.table().classes[c].name);
      CHECK(found);
      CHECK(wagner_passes(tower, s.table()));
    }
  }
}

TEST_CASE("solutions have integral multiplicities") {
  HelpSolver s(table("L3_3"));
  auto chars = help_characters(s.table(), s.table());
  for (std::int64_t n : {3, 4, 6}) {
    for (const auto& tower : s.solve(n).towers) {
      std::int64_t total = 0;
      for (const auto& x : tower.self().values) total += x;
      CHECK(total == 1);
      for (const auto& chi : chars) {
        auto mu = multiplicities(chi, tower);
        BigRational sum;
        for (const auto& m : mu) {
          CHECK(m.get_den() == 1);
          CHECK(m >= 0);
          sum += m;
        }
        CHECK(sum == chi.degree);
      }
    }
  }
}

TEST_CASE("HeLP agrees with a brute-force scan") {
  // Every tuple in the box is tested directly with the cyclotomic values.
  const std::int64_t bound = 6;
  int systems = 0;
  for (const auto& e : std::filesystem::directory_iterator(fixture("tables"))) {
    std::string stem = e.path().stem().string();
    if (stem.find(".mod") != std::string::npos) continue;
    HelpSolver s(load_table_file(e.path().string()));
    auto chars = help_characters(s.table(), s.table());
    for (std::int64_t n = 2; n <= 8; ++n) {
      bool ok = true;
      for (auto p : nt::prime_divisors(n)) ok = ok && s.table().group_order % p == 0;
      if (!ok) continue;
      auto cls = eligible_classes(s.table(), n);
      if (cls.empty() || cls.size() > 3) continue;
      for (const auto& tail : s.tails(n)) {
        ++systems;
        std::set<IntVector> expected;
        IntVector x(cls.size(), -bound);
        while (true) {
          std::int64_t sum = 0;
          for (auto v : x) sum += v;
          if (sum == 1) {
            PowerTower t{n, tail};
            t.pa[1] = std::make_shared<const PaVector>(PaVector{n, cls, x});
            bool good = true;
            for (const auto& chi : chars) {
              for (const auto& m : multiplicities(chi, t)) {
                if (m.get_den() != 1 || m < 0 || m > chi.degree) good = false;
              }
              if (!good) break;
            }
            if (good) expected.insert(x);
          }
          std::size_t i = 0;
          while (i < x.size() && x[i] == bound) x[i++] = -bound;
          if (i == x.size()) break;
          ++x[i];
        }
        auto got = enumerate_integer_points(s.constraints(n, tail));
        INFO(stem << " n=" << n);
        CHECK(std::set<IntVector>(got.begin(), got.end()) == expected);
      }
    }
  }
  CHECK(systems >= 20);
}

TEST_CASE("deterministic output") {
  HelpSolver a(table("L3_3"));
  HelpSolver b(table("L3_3"));
  const auto& x = a.solve(6);
  const auto& y = b.solve(6);
  REQUIRE(x.towers.size() == y.towers.size());
  for (std::size_t i = 0; i < x.towers.size(); ++i) {
    CHECK(x.towers[i].self().values == y.towers[i].self().values);
    CHECK_FALSE(tower_less(x.towers[i], y.towers[i]));
    CHECK_FALSE(tower_less(y.towers[i], x.towers[i]));
  }
}
