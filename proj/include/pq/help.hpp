#pragma once

#include "pq/char_table.hpp"
#include "pq/integer_points.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

class HelpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Partial augmentations of a unit of order unit_order, one entry per class
// of the ordinary table whose element order divides unit_order (identity
// excluded).
struct PaVector {
  std::int64_t unit_order = 1;
  std::vector<int> classes;
  IntVector values;

  std::int64_t at(int cls) const;
  bool is_trivial(const CharacterTable& t) const;
  std::string to_string(const CharacterTable& t) const;
  friend bool operator==(const PaVector& a, const PaVector& b) {
    return a.unit_order == b.unit_order && a.classes == b.classes && a.values == b.values;
  }
};
using PaPtr = std::shared_ptr<const PaVector>;

// pa[d] describes u^d for every divisor d < n; pa[1] is u itself. Equal
// powers reached along different routes share one PaVector.
struct PowerTower {
  std::int64_t unit_order = 1;
  std::map<std::int64_t, PaPtr> pa;

  const PaVector& self() const { return *pa.at(1); }
  const PaVector* power(std::int64_t d) const;
};

// Canonical order: ε(u) first, then the powers by increasing divisor.
bool tower_less(const PowerTower& a, const PowerTower& b);

struct SolutionSet {
  std::int64_t unit_order = 1;
  std::vector<int> classes;
  std::vector<PowerTower> towers;
  std::vector<std::string> class_functions_used;
  std::size_t tails = 0;  // tower tails examined

  // Distinct ε(u) vectors, sorted. This is what the counts refer to.
  std::vector<IntVector> distinct() const;
};

// A class function usable in HeLP, expressed on the classes of the ordinary
// table. Brauer characters only carry values on p-regular classes.
struct HelpCharacter {
  std::string name;
  std::int64_t characteristic = 0;
  std::int64_t degree = 1;
  std::vector<Cyclotomic> values;
  std::vector<bool> defined;
};

// Lifts every irreducible of `table` onto the classes of `ordinary`.
std::vector<HelpCharacter> help_characters(const CharacterTable& ordinary, const CharacterTable& table);

// χ(u) = Σ_C ε_C(u) χ(C) for a concrete vector.
Cyclotomic unit_character_value(const HelpCharacter& chi, const PaVector& v);
Cyclotomic unit_character_value(const CharacterTable& t, const ClassFunction& chi, const PaVector& v);

// Tr_{Q(ζ_m)/Q}(x ζ_m^{-l}) for l = 0..m-1; the conductor of x divides m.
std::vector<BigRational> trace_row(const Cyclotomic& x, std::int64_t m);

// Multiplicity forms μ_l(u, χ) over the eligible classes of order n, with
// the proper powers of u taken from `tail` (keys are divisors 1 < d < n).
// Brauer tables whose characteristic divides n are rejected.
ConstraintSystem build_constraints(const std::vector<CharacterTable>& tables, std::int64_t n,
                                   const std::map<std::int64_t, PaPtr>& tail);

struct HelpOptions {
  // Apply the Wagner test to the solution sets of proper powers.
  bool wagner = false;
  // Orders whose solution sets are used unfiltered even when wagner is set.
  std::set<std::int64_t> wagner_exempt;
};

// Memoising HeLP engine over one ordinary table plus optional Brauer tables.
class HelpSolver {
 public:
  HelpSolver(CharacterTable ordinary, std::vector<CharacterTable> brauer = {}, HelpOptions options = {});

  const CharacterTable& table() const { return ordinary_; }
  const HelpOptions& options() const { return options_; }
  const std::vector<CharacterTable>& brauer() const { return brauer_; }

  // All admissible towers for order n; proper powers are filtered as the
  // options say, u itself is not.
  const SolutionSet& solve(std::int64_t n);
  // The solution set used for u^d when building towers of larger orders.
  const SolutionSet& power_solutions(std::int64_t m);

  // Coherent tails for order n assembled from the solutions of n/p.
  std::vector<std::map<std::int64_t, PaPtr>> tails(std::int64_t n);

  // Forms for one tail, using the characters admissible for n.
  ConstraintSystem constraints(std::int64_t n, const std::map<std::int64_t, PaPtr>& tail);

  // The forms for order n before deduplication, one per (character, l):
  // the ε(u) coefficients and the constant χ(1)/n. The contribution of u^d
  // to every constant is power_contribution(n, d, ε(u^d)).
  struct FormTemplate {
    std::vector<int> classes;
    std::vector<std::int64_t> divisors;  // proper divisors d > 1
    std::vector<std::vector<BigRational>> coeffs;
    std::vector<BigRational> constant;
    std::vector<std::int64_t> degree;
    std::vector<std::string> labels;
  };
  const FormTemplate& form_template(std::int64_t n);
  std::vector<BigRational> power_contribution(std::int64_t n, std::int64_t d, const PaVector& v);
  std::vector<std::string> characters_for(std::int64_t n) const;

  PaPtr intern(PaVector v);

 private:
  struct Basis {
    std::vector<int> classes;
    std::vector<std::int64_t> divisors;
    std::vector<std::size_t> chars;
    // rows[ci][class][divisor index] = trace row of length n/d
    std::vector<std::map<int, std::vector<std::vector<BigRational>>>> rows;
  };
  const Basis& basis(std::int64_t n);
  std::map<std::int64_t, FormTemplate> templates_;

  CharacterTable ordinary_;
  std::vector<CharacterTable> brauer_;
  HelpOptions options_;
  std::vector<HelpCharacter> chars_;
  std::map<std::int64_t, Basis> bases_;
  std::map<std::int64_t, SolutionSet> raw_;
  std::map<std::int64_t, SolutionSet> filtered_;
  std::map<std::pair<std::int64_t, IntVector>, PaPtr> pool_;
};

// One-shot wrapper: tables[0] is the ordinary table, the rest Brauer.
SolutionSet help_solve(const std::vector<CharacterTable>& tables, std::int64_t n, HelpOptions options = {});

struct Classification {
  std::vector<IntVector> trivial;
  std::vector<IntVector> nontrivial;
};
Classification classify_solutions(const SolutionSet& s, const CharacterTable& t);

// Tower of a group element in class c, read off the power maps.
PowerTower trivial_tower(HelpSolver& solver, int c);

// μ_l(u, χ) for every l, evaluated directly from the cyclotomic values.
std::vector<BigRational> multiplicities(const HelpCharacter& chi, const PowerTower& tower);

}  // namespace pq
