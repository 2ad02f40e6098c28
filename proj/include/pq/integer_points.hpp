#pragma once

#include "pq/cyclotomic.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

class UnboundedSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// constant + coeffs . x must be an integer in [lower, upper]; a missing bound
// means that side is open.
struct LinearForm {
  std::vector<BigRational> coeffs;
  BigRational constant;
  std::optional<BigRational> lower = BigRational(0);
  std::optional<BigRational> upper;
  std::string label;
};

// coeffs . x == constant.
struct Equality {
  std::vector<BigInt> coeffs;
  BigInt constant;
};

struct ConstraintSystem {
  std::vector<int> variables;  // class indices, one per coordinate
  std::vector<LinearForm> forms;
  std::vector<Equality> equalities;

  std::size_t dimension() const { return variables.size(); }
};

using IntVector = std::vector<std::int64_t>;

// Exact LP over the rationals: maximise c.x subject to A x <= b, x free.
enum class LpStatus { Optimal, Infeasible, Unbounded };
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  BigRational value;
};
LpResult lp_maximize(const std::vector<std::vector<BigRational>>& a, const std::vector<BigRational>& b,
                     const std::vector<BigRational>& c);
bool lp_feasible(const std::vector<std::vector<BigRational>>& a, const std::vector<BigRational>& b);

// Integer rows used by the search: lo <= a.x + b <= hi and mod | a.x + b.
struct IntRow {
  IntVector a;
  std::int64_t b = 0;
  std::int64_t mod = 1;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool has_lo = true;
  bool has_hi = true;
};

// Scales every form and equality to integer rows, normalised and
// deduplicated.
std::vector<IntRow> compile_rows(const ConstraintSystem& s);
// The normalisation compile_rows applies: divide out common factors, round
// the bounds onto the lattice, sort and deduplicate.
void normalize_rows(std::vector<IntRow>& rows);

// Exact per-variable bounds of the rational relaxation. Returns nullopt if
// the relaxation is empty; throws UnboundedSystem if some variable is
// unbounded.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> relaxation_box(const std::vector<IntRow>& rows,
                                                                                   std::size_t dim);

// A box containing every point of the relaxation, from an invertible block
// of two-sided rows. Cheaper and looser than relaxation_box; nullopt if the
// two-sided rows do not have full rank.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> parallelepiped_box(const std::vector<IntRow>& rows,
                                                                                       std::size_t dim);

// parallelepiped_box, falling back to relaxation_box.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> start_box(const std::vector<IntRow>& rows,
                                                                              std::size_t dim);

// All integer points of the system, lexicographically sorted.
std::vector<IntVector> enumerate_integer_points(const ConstraintSystem& s);
// Some integer point of the system, if one exists.
std::optional<IntVector> find_integer_point(const ConstraintSystem& s);

// Lower-level entry points on compiled rows with a given starting box.
std::vector<IntVector> search_box(const std::vector<IntRow>& rows,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& box,
                                  std::size_t limit = 0);

// Checks one point against the exact rational system.
bool satisfies(const ConstraintSystem& s, const IntVector& x);

}  // namespace pq
