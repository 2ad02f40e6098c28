#pragma once

#include "pq/help.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pq {

// Classes whose elements have exactly the given order.
std::vector<int> classes_of_order(const CharacterTable& t, std::int64_t order);

// Wagner test for one prime power p^j dividing the unit order.
struct WagnerResult {
  bool pass = true;
  std::int64_t prime = 0;
  int exponent = 0;
  int witness = -1;  // class D whose congruence fails
};
WagnerResult wagner_filter(const PowerTower& tower, const CharacterTable& t, std::int64_t p, int j);
// Runs every prime power dividing the unit order.
bool wagner_passes(const PowerTower& tower, const CharacterTable& t);

struct PQConstantCharacter {
  std::string source;  // e.g. "(1,6,8) over characteristic 3"
  std::string table;
  std::int64_t characteristic = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::vector<std::pair<int, std::int64_t>> combination;  // irreducible index, coefficient
  std::int64_t degree = 0;
  Cyclotomic value_on_p;
  Cyclotomic value_on_q;
  std::vector<Cyclotomic> values;

  // Nonnegative combination, i.e. a proper character.
  bool is_character() const;
};

// Combines the given irreducibles of t; throws if the result is not constant
// on the classes of order p and on those of order q.
PQConstantCharacter make_pq_constant(const CharacterTable& t, std::int64_t p, std::int64_t q,
                                     const std::vector<std::pair<int, std::int64_t>>& combination);

// Integer combinations of at most max_terms irreducibles with coefficients
// in [-max_coeff, max_coeff] that are constant on the classes of order p and
// on the classes of order q. Sorted by number of terms, then lexicographically.
std::vector<PQConstantCharacter> find_pq_constant(const CharacterTable& t, std::int64_t p, std::int64_t q,
                                                  int max_terms = 4, int max_coeff = 2);

// One multiplicity in the projected system: n·μ_l = m1 + mp·ε_p + mq·ε_q.
struct PQForm {
  std::int64_t l = 0;
  BigRational m1;
  BigRational mp;
  BigRational mq;
};

struct PQVerdict {
  bool feasible = true;
  std::vector<PQForm> forms;
  std::vector<std::pair<std::int64_t, std::int64_t>> witnesses;  // (ε_p, ε_q) found, if bounded
  std::string reason;
};

// Two-variable HeLP projection for units of order p·q; t is the table the
// character lives on and must have no class of order divisible by p·q.
PQVerdict pq_eliminate(const PQConstantCharacter& xi, const CharacterTable& t, std::int64_t n);

struct SweepResult {
  std::int64_t unit_order = 0;
  std::map<std::int64_t, std::size_t> per_order;  // order of u^d -> number of choices
  std::uint64_t cases = 0;
  std::uint64_t feasible = 0;
  std::vector<std::map<std::int64_t, IntVector>> feasible_cases;  // first few, keyed by d
  bool eliminated() const { return feasible == 0; }
};

// Every combination of the HeLP-admissible ε(u^d), d a proper divisor > 1,
// run through the constraints for u. The choices for u^d are the solutions
// the solver feeds into towers (power_solutions). Combinations are not
// required to be coherent with each other.
SweepResult case_sweep(HelpSolver& solver, std::int64_t n, unsigned threads = 1);

struct PQConstantSpec {
  std::string table;  // name of a table known to the solver
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::vector<std::pair<int, std::int64_t>> combination;  // empty: search
};

struct FilterConfig {
  bool wagner = false;
  std::set<std::int64_t> wagner_exempt;  // orders reported without the Wagner test
  std::vector<PQConstantSpec> pq_constant;
  std::vector<std::int64_t> case_sweep_orders;
  int max_terms = 4;
  int max_coeff = 2;
  unsigned threads = 1;
};

struct OrderVerdict {
  std::int64_t order = 0;
  bool in_group = false;
  std::size_t help_count = 0;      // distinct ε(u) from HeLP alone
  std::size_t filtered_count = 0;  // after the configured filters
  std::size_t trivial = 0;
  std::size_t nontrivial = 0;
  bool eliminated = false;
  std::string method;
  std::vector<std::string> notes;
  std::vector<IntVector> survivors;
  std::vector<IntVector> rejected_by_wagner;
  std::optional<SweepResult> sweep;
};

OrderVerdict eliminate_order(HelpSolver& solver, std::int64_t n, const FilterConfig& config);

}  // namespace pq
