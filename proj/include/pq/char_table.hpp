#pragma once

#include "pq/cyclotomic.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConjugacyClassInfo {
  std::string name;
  std::int64_t element_order = 1;
  std::int64_t size = 1;
};

struct ClassFunction {
  std::string name;
  std::int64_t degree = 1;
  std::vector<Cyclotomic> values;
};

struct CharacterTable {
  std::string name;
  std::int64_t group_order = 1;
  std::int64_t characteristic = 0;
  std::vector<ConjugacyClassInfo> classes;
  std::map<std::int64_t, std::vector<int>> power_maps;
  std::vector<ClassFunction> irreducibles;

  bool is_ordinary() const { return characteristic == 0; }
  int class_count() const { return static_cast<int>(classes.size()); }
  // Index of the class with the given name, or -1.
  int class_index(const std::string& name) const;
  // Class of x^e for x in class c, composing prime power maps.
  int power_class(int c, std::int64_t e) const;
  std::int64_t centralizer_order(int c) const { return group_order / classes[c].size; }
};

// Parses and canonicalises a table file. Classes are re-sorted by
// (element_order, size, name) with power maps and values permuted to match.
CharacterTable load_table(const std::string& json_text);
CharacterTable load_table_file(const std::string& path);
std::string table_to_json(const CharacterTable& t);

struct ValidationReport {
  std::vector<std::string> failures;
  std::vector<std::string> notices;
  bool ok() const { return failures.empty(); }
};

// Exact checks: orthogonality (ordinary tables), power-map orders, class
// sums, central character integrality. Failures are collected, not thrown.
ValidationReport validate_table(const CharacterTable& t);

// Ordinary character table of PSL(2,p) for a prime p >= 5.
CharacterTable psl2_generic_table(std::int64_t p);

// Non-identity classes whose element order divides n.
std::vector<int> eligible_classes(const CharacterTable& t, std::int64_t n);

// For each class of `sub` (a Brauer table) the index of the class with the
// same name in `ordinary`. Throws if a name is missing or orders disagree.
std::vector<int> class_map(const CharacterTable& ordinary, const CharacterTable& sub);

// True if the tables agree up to a permutation of classes and characters
// that respects element orders, class sizes and power maps.
bool tables_equivalent(const CharacterTable& a, const CharacterTable& b);

}  // namespace pq
