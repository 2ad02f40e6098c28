#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pq {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Small number theory helpers shared by the cyclotomic code and the solver.
namespace nt {

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);
std::int64_t mod(std::int64_t a, std::int64_t m);
bool is_prime(std::int64_t n);
// Prime factorisation as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
int moebius(std::int64_t n);
// Inverse of a modulo m; throws if gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);
// Tr_{Q(zeta_n)/Q}(zeta_n^j), the Ramanujan sum c_n(j).
std::int64_t ramanujan(std::int64_t n, std::int64_t j);

}  // namespace nt

class CyclotomicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact element of Q(zeta_n).
//
// The stored form is the expansion in the Zumbroich basis of Q(zeta_n) with n
// the conductor of the value. For each prime power p^e exactly dividing n an
// exponent k is a basis exponent iff the leading base-p digit of k mod p^e is
// nonzero (p odd) or zero (p = 2). Terms are sorted by exponent and carry
// nonzero coefficients, so equal values have identical representations.
class Cyclotomic {
 public:
  using Term = std::pair<std::int64_t, BigRational>;

  Cyclotomic() = default;
  Cyclotomic(long value);  // NOLINT(google-explicit-constructor)
  Cyclotomic(const BigRational& value);  // NOLINT(google-explicit-constructor)

  // zeta_n^k.
  static Cyclotomic zeta(std::int64_t n, std::int64_t k = 1);
  // Sum of c * zeta_n^k over the given terms; any exponents allowed.
  static Cyclotomic from_terms(std::int64_t n, const std::vector<Term>& terms);

  std::int64_t conductor() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return n_ == 1; }
  std::optional<BigRational> as_rational() const;

  // Coefficients of the value written over zeta_m, m a multiple of the
  // conductor. Exponents are in [0, m) and the result is not normalised.
  std::vector<Term> embed(std::int64_t m) const;

  // Image under zeta_n -> zeta_n^k.
  Cyclotomic galois(std::int64_t k) const;
  Cyclotomic conj() const { return galois(-1); }

  // Tr_{Q(zeta_n)/Q} where n is the conductor.
  BigRational trace() const;
  // Tr_{Q(zeta_m)/Q}; m must be a multiple of the conductor.
  BigRational trace_over(std::int64_t m) const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& rhs);
  Cyclotomic& operator-=(const Cyclotomic& rhs);
  Cyclotomic& operator*=(const Cyclotomic& rhs);
  Cyclotomic& operator*=(const BigRational& rhs);

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }
  // Arbitrary but fixed total order, used for sorting and map keys.
  friend bool operator<(const Cyclotomic& a, const Cyclotomic& b);

  std::string to_string() const;

 private:
  // Normalises dense coefficients over zeta_n into *this.
  void assign_dense(std::int64_t n, std::vector<BigRational> dense);

  std::int64_t n_ = 1;
  std::vector<Term> terms_;
};

// Arithmetic entry point with an explicit operation tag.
enum class CycOp { Add, Sub, Mul };
Cyclotomic cyclo_arith(const Cyclotomic& a, const Cyclotomic& b, CycOp op);

// embed() as a value: same element with declared conductor m. Returned as
// the exponent/coefficient list over zeta_m; throws if the conductor does not
// divide m.
std::vector<Cyclotomic::Term> embed(const Cyclotomic& a, std::int64_t m);

BigRational parse_rational(const std::string& text);
std::string rational_to_string(const BigRational& q);

}  // namespace pq
