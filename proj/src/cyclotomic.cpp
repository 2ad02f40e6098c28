#include "pq/cyclotomic.hpp"

#include <algorithm>
#include <sstream>

namespace pq {

namespace nt {

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto& [p, e] : factor(n)) r = r / p * (p - 1);
  return r;
}

int moebius(std::int64_t n) {
  int r = 1;
  for (auto& [p, e] : factor(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t r0 = mod(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw std::invalid_argument("inverse_mod: not invertible");
  return mod(s0, m);
}

std::int64_t ramanujan(std::int64_t n, std::int64_t j) {
  std::int64_t r = mod(j, n);
  std::int64_t g = r == 0 ? n : gcd(n, r);
  std::int64_t q = n / g;
  return moebius(q) * (euler_phi(n) / euler_phi(q));
}

}  // namespace nt

namespace {

// Rewrites dense coefficients over zeta_n in the Zumbroich basis of Q(zeta_n).
void to_zumbroich(std::int64_t n, std::vector<BigRational>& dense) {
  for (auto& [p, e] : nt::factor(n)) {
    std::int64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    std::int64_t top = q / p;
    std::int64_t step = n / p;
    for (std::int64_t k = 0; k < n; ++k) {
      if (dense[k] == 0) continue;
      std::int64_t digit = (k % q) / top;
      if (p == 2) {
        // zeta^(k + n/2) = -zeta^k; keep the exponent with leading bit 0.
        if (digit == 0) continue;
        dense[(k + step) % n] -= dense[k];
      } else {
        // The p-th roots of unity sum to zero; drop the member with digit 0.
        if (digit != 0) continue;
        for (std::int64_t t = 1; t < p; ++t) dense[(k + t * step) % n] -= dense[k];
      }
      dense[k] = 0;
    }
  }
}

// One conductor reduction step on a Zumbroich-normal dense vector. Returns
// false if the value does not lie in a proper cyclotomic subfield of the
// kind tested here.
bool reduce_once(std::int64_t& n, std::vector<BigRational>& dense) {
  for (auto& [p, e] : nt::factor(n)) {
    if (e >= 2 || p == 2) {
      // p^2 | n: the value lies in Q(zeta_{n/p}) iff every exponent is
      // divisible by p. For p || n with p = 2 the Zumbroich exponents are even.
      bool all = true;
      for (std::int64_t k = 0; k < n && all; ++k) {
        if (dense[k] != 0 && k % p != 0) all = false;
      }
      if (!all) continue;
      std::int64_t m = n / p;
      std::vector<BigRational> next(m);
      for (std::int64_t k = 0; k < n; ++k) {
        if (dense[k] != 0) next[k / p] = dense[k];
      }
      n = m;
      dense.swap(next);
      return true;
    }
    // p odd, p || n. Each coset k + (n/p)Z carries p-1 basis exponents; the
    // value lies in Q(zeta_{n/p}) iff the coefficients are constant on cosets.
    std::int64_t m = n / p;
    bool ok = true;
    std::vector<BigRational> next(m);
    for (std::int64_t r = 0; r < m && ok; ++r) {
      std::int64_t k0 = -1;
      const BigRational* c = nullptr;
      for (std::int64_t t = 0; t < p; ++t) {
        std::int64_t k = r + t * m;
        if (k % p == 0) {
          k0 = k;
          continue;
        }
        if (c == nullptr) {
          c = &dense[k];
        } else if (dense[k] != *c) {
          ok = false;
          break;
        }
      }
      if (ok && *c != 0) next[(k0 / p) % m] -= *c;
    }
    if (!ok) continue;
    n = m;
    dense.swap(next);
    return true;
  }
  return false;
}

}  // namespace

Cyclotomic::Cyclotomic(long value) : Cyclotomic(BigRational(value)) {}

Cyclotomic::Cyclotomic(const BigRational& value) {
  if (value != 0) terms_.emplace_back(0, value);
}

Cyclotomic Cyclotomic::zeta(std::int64_t n, std::int64_t k) {
  if (n < 1) throw CyclotomicError("zeta: order must be positive");
  return from_terms(n, {{k, BigRational(1)}});
}

Cyclotomic Cyclotomic::from_terms(std::int64_t n, const std::vector<Term>& terms) {
  if (n < 1) throw CyclotomicError("cyclotomic: conductor must be positive");
  std::vector<BigRational> dense(n);
  for (auto& [k, c] : terms) dense[nt::mod(k, n)] += c;
  Cyclotomic out;
  out.assign_dense(n, std::move(dense));
  return out;
}

void Cyclotomic::assign_dense(std::int64_t n, std::vector<BigRational> dense) {
  do {
    to_zumbroich(n, dense);
  } while (reduce_once(n, dense));
  terms_.clear();
  for (std::int64_t k = 0; k < n; ++k) {
    if (dense[k] != 0) terms_.emplace_back(k, dense[k]);
  }
  n_ = terms_.empty() ? 1 : n;
}

std::optional<BigRational> Cyclotomic::as_rational() const {
  if (n_ != 1) return std::nullopt;
  return terms_.empty() ? BigRational(0) : terms_.front().second;
}

std::vector<Cyclotomic::Term> Cyclotomic::embed(std::int64_t m) const {
  if (m < 1 || m % n_ != 0) {
    throw CyclotomicError("embed: " + std::to_string(m) + " is not a multiple of the conductor " +
                          std::to_string(n_));
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& [k, c] : terms_) out.emplace_back(k * (m / n_), c);
  return out;
}

Cyclotomic Cyclotomic::galois(std::int64_t k) const {
  if (nt::gcd(k, n_) != 1) {
    throw CyclotomicError("galois: " + std::to_string(k) + " is not coprime to " + std::to_string(n_));
  }
  std::vector<Term> moved;
  moved.reserve(terms_.size());
  for (auto& [j, c] : terms_) moved.emplace_back(nt::mod(j * nt::mod(k, n_), n_), c);
  return from_terms(n_, moved);
}

BigRational Cyclotomic::trace() const {
  BigRational s = 0;
  for (auto& [k, c] : terms_) s += c * nt::ramanujan(n_, k);
  return s;
}

BigRational Cyclotomic::trace_over(std::int64_t m) const {
  if (m < 1 || m % n_ != 0) {
    throw CyclotomicError("trace_over: " + std::to_string(m) + " is not a multiple of " + std::to_string(n_));
  }
  return trace() * (nt::euler_phi(m) / nt::euler_phi(n_));
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& rhs) {
  std::int64_t m = nt::lcm(n_, rhs.n_);
  std::vector<BigRational> dense(m);
  for (auto& [k, c] : embed(m)) dense[k] += c;
  for (auto& [k, c] : rhs.embed(m)) dense[k] += c;
  assign_dense(m, std::move(dense));
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& rhs) { return *this += -rhs; }

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& rhs) {
  std::int64_t m = nt::lcm(n_, rhs.n_);
  std::vector<BigRational> dense(m);
  auto a = embed(m);
  auto b = rhs.embed(m);
  for (auto& [i, x] : a) {
    for (auto& [j, y] : b) dense[(i + j) % m] += x * y;
  }
  assign_dense(m, std::move(dense));
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const BigRational& rhs) {
  if (rhs == 0) {
    *this = Cyclotomic();
    return *this;
  }
  BigRational f = rhs;
  f.canonicalize();
  for (auto& t : terms_) t.second *= f;
  return *this;
}

bool operator<(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  std::size_t len = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (a.terms_[i].first != b.terms_[i].first) return a.terms_[i].first < b.terms_[i].first;
    if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second;
  }
  return a.terms_.size() < b.terms_.size();
}

std::string Cyclotomic::to_string() const {
  if (n_ == 1) return rational_to_string(as_rational().value());
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : terms_) {
    std::string z = "E(" + std::to_string(n_) + ")";
    if (k != 1) z += "^" + std::to_string(k);
    if (k == 0) z = "";
    if (c < 0) {
      os << "-";
    } else if (!first) {
      os << "+";
    }
    BigRational a = abs(c);
    if (z.empty()) {
      os << rational_to_string(a);
    } else {
      if (a != 1) os << rational_to_string(a) << "*";
      os << z;
    }
    first = false;
  }
  return os.str();
}

Cyclotomic cyclo_arith(const Cyclotomic& a, const Cyclotomic& b, CycOp op) {
  switch (op) {
    case CycOp::Add:
      return a + b;
    case CycOp::Sub:
      return a - b;
    case CycOp::Mul:
      return a * b;
  }
  return a;
}

std::vector<Cyclotomic::Term> embed(const Cyclotomic& a, std::int64_t m) { return a.embed(m); }

BigRational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (t.size() > 0 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den)) throw std::invalid_argument("malformed rational '" + text + "'");
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  BigRational q(BigInt(num), d);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const BigRational& q) { return q.get_str(); }

}  // namespace pq
