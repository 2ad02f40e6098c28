#include "pq/integer_points.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace pq {

namespace {

using i128 = __int128;

enum class StdStatus { Optimal, Infeasible, Unbounded };

// Minimises cost.z subject to m z = rhs, z >= 0 (dense tableau, Bland's rule).
StdStatus std_simplex(std::vector<std::vector<BigRational>> m, std::vector<BigRational> rhs,
                      const std::vector<BigRational>& cost, BigRational& value) {
  const std::size_t rows = m.size();
  const std::size_t n = cost.size();
  for (std::size_t r = 0; r < rows; ++r) {
    if (rhs[r] < 0) {
      rhs[r] = -rhs[r];
      for (auto& x : m[r]) x = -x;
    }
    m[r].resize(n + rows);
    m[r][n + r] = 1;
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = n + r;
  std::vector<bool> alive(rows, true);

  auto pivot = [&](std::size_t r, std::size_t j, std::vector<BigRational>& d) {
    BigRational inv = 1 / m[r][j];
    for (auto& x : m[r]) {
      if (x != 0) x *= inv;
    }
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || !alive[i] || m[i][j] == 0) continue;
      BigRational f = m[i][j];
      for (std::size_t c = 0; c < m[i].size(); ++c) {
        if (m[r][c] != 0) m[i][c] -= f * m[r][c];
      }
      rhs[i] -= f * rhs[r];
    }
    if (d[j] != 0) {
      BigRational f = d[j];
      for (std::size_t c = 0; c < d.size(); ++c) {
        if (m[r][c] != 0) d[c] -= f * m[r][c];
      }
    }
    basis[r] = j;
  };

  auto run = [&](std::vector<BigRational>& d, std::size_t eligible) -> bool {
    while (true) {
      std::size_t enter = eligible;
      for (std::size_t j = 0; j < eligible; ++j) {
        if (d[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == eligible) return true;
      std::size_t leave = rows;
      BigRational best;
      for (std::size_t r = 0; r < rows; ++r) {
        if (!alive[r] || m[r][enter] <= 0) continue;
        BigRational ratio = rhs[r] / m[r][enter];
        if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows) return false;
      pivot(leave, enter, d);
    }
  };

  // Phase 1: minimise the sum of artificials.
  std::vector<BigRational> d(n + rows);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < rows; ++r) d[j] -= m[r][j];
  }
  run(d, n + rows);
  BigRational infeas = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] >= n) infeas += rhs[r];
  }
  if (infeas > 0) return StdStatus::Infeasible;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < n) continue;
    std::size_t j = 0;
    while (j < n && m[r][j] == 0) ++j;
    std::vector<BigRational> dummy(n + rows);
    if (j < n) {
      pivot(r, j, dummy);
    } else {
      alive[r] = false;
    }
  }

  // Phase 2.
  std::vector<BigRational> d2(n + rows);
  for (std::size_t j = 0; j < n; ++j) {
    d2[j] = cost[j];
    for (std::size_t r = 0; r < rows; ++r) {
      if (alive[r] && m[r][j] != 0) d2[j] -= cost[basis[r]] * m[r][j];
    }
  }
  if (!run(d2, n)) return StdStatus::Unbounded;
  value = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (alive[r]) value += cost[basis[r]] * rhs[r];
  }
  return StdStatus::Optimal;
}

std::vector<std::vector<BigRational>> transpose(const std::vector<std::vector<BigRational>>& a, std::size_t cols) {
  std::vector<std::vector<BigRational>> t(cols, std::vector<BigRational>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
  }
  return t;
}

std::int64_t to_i64(const BigInt& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer constraint data exceeds 64 bits");
  return z.get_si();
}

std::int64_t floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return nt::gcd(a, b); }

// Solutions of a*x == r (mod m): returns false if none, else x == x0 (mod step).
bool solve_congruence(std::int64_t a, std::int64_t r, std::int64_t m, std::int64_t& x0, std::int64_t& step) {
  a = nt::mod(a, m);
  r = nt::mod(r, m);
  std::int64_t g = gcd64(a, m);
  if (g == 0) g = m;
  if (r % g != 0) return false;
  step = m / g;
  if (step == 1) {
    x0 = 0;
    return true;
  }
  std::int64_t inv = nt::inverse_mod((a / g) % step, step);
  x0 = static_cast<std::int64_t>((static_cast<i128>(r / g) * inv) % step);
  return true;
}

struct Search {
  const std::vector<IntRow>& rows;
  std::size_t dim;
  std::size_t limit;
  std::vector<IntVector> found;
  int shave_depth = 1;

  using Box = std::vector<std::pair<std::int64_t, std::int64_t>>;

  bool propagate(Box& box) const {
    for (int round = 0; round < 64; ++round) {
      bool changed = false;
      for (const auto& row : rows) {
        i128 lo_sum = row.b, hi_sum = row.b;
        std::size_t free_count = 0, free_var = 0;
        std::int64_t g = row.mod;
        for (std::size_t i = 0; i < dim; ++i) {
          std::int64_t a = row.a[i];
          if (a == 0) continue;
          i128 x = static_cast<i128>(a) * box[i].first;
          i128 y = static_cast<i128>(a) * box[i].second;
          lo_sum += std::min(x, y);
          hi_sum += std::max(x, y);
          if (box[i].first != box[i].second) {
            ++free_count;
            free_var = i;
            g = gcd64(g, a);
          }
        }
        if ((row.has_hi && lo_sum > row.hi) || (row.has_lo && hi_sum < row.lo)) return false;
        if (free_count == 0) {
          if (row.mod > 1 && static_cast<std::int64_t>(lo_sum % row.mod) != 0) return false;
          continue;
        }
        // The fixed part must be compatible with the gcd of the free part.
        if (row.mod > 1) {
          i128 fixed = row.b;
          for (std::size_t i = 0; i < dim; ++i) {
            if (row.a[i] != 0 && box[i].first == box[i].second) fixed += static_cast<i128>(row.a[i]) * box[i].first;
          }
          if (g > 1 && static_cast<std::int64_t>(((fixed % g) + g) % g) != 0) return false;
          if (free_count == 1) {
            std::int64_t a = row.a[free_var];
            std::int64_t r = static_cast<std::int64_t>((((-fixed) % row.mod) + row.mod) % row.mod);
            std::int64_t x0, step;
            if (!solve_congruence(a, r, row.mod, x0, step)) return false;
            if (step > 1) {
              auto& [lo, hi] = box[free_var];
              std::int64_t nlo = lo + nt::mod(x0 - lo, step);
              std::int64_t nhi = hi - nt::mod(hi - x0, step);
              if (nlo > nhi) return false;
              if (nlo != lo || nhi != hi) {
                lo = nlo;
                hi = nhi;
                changed = true;
              }
            }
          }
        }
        for (std::size_t i = 0; i < dim; ++i) {
          std::int64_t a = row.a[i];
          if (a == 0 || box[i].first == box[i].second) continue;
          i128 x = static_cast<i128>(a) * box[i].first;
          i128 y = static_cast<i128>(a) * box[i].second;
          i128 other_lo = lo_sum - std::min(x, y);
          i128 other_hi = hi_sum - std::max(x, y);
          // row.lo - other_hi <= a * x_i <= row.hi - other_lo
          std::int64_t nlo = box[i].first, nhi = box[i].second;
          if (a > 0) {
            if (row.has_lo) nlo = std::max<std::int64_t>(nlo, ceil_div(row.lo - other_hi, a));
            if (row.has_hi) nhi = std::min<std::int64_t>(nhi, floor_div(row.hi - other_lo, a));
          } else {
            if (row.has_hi) nlo = std::max<std::int64_t>(nlo, ceil_div(row.hi - other_lo, a));
            if (row.has_lo) nhi = std::min<std::int64_t>(nhi, floor_div(row.lo - other_hi, a));
          }
          if (nlo > nhi) return false;
          if (nlo != box[i].first || nhi != box[i].second) {
            box[i] = {nlo, nhi};
            changed = true;
            // Bounds moved; recompute sums on the next sweep.
          }
        }
      }
      if (!changed) return true;
    }
    return true;
  }

  bool check(const Box& box) const {
    for (const auto& row : rows) {
      i128 v = row.b;
      for (std::size_t i = 0; i < dim; ++i) v += static_cast<i128>(row.a[i]) * box[i].first;
      if (row.has_lo && v < row.lo) return false;
      if (row.has_hi && v > row.hi) return false;
      if (row.mod > 1 && v % row.mod != 0) return false;
    }
    return true;
  }

  // Drops end values whose assignment propagation refutes, until stable.
  bool shave(Box& box) const {
    if (!propagate(box)) return false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < dim; ++i) {
        for (int side = 0; side < 2; ++side) {
          while (box[i].first < box[i].second) {
            std::int64_t v = side == 0 ? box[i].first : box[i].second;
            Box probe = box;
            probe[i] = {v, v};
            if (propagate(probe)) break;
            if (side == 0) {
              ++box[i].first;
            } else {
              --box[i].second;
            }
            changed = true;
          }
        }
        if (changed && !propagate(box)) return false;
      }
    }
    return true;
  }

  void dfs(Box box, int depth = 0) {
    if (limit != 0 && found.size() >= limit) return;
    if (depth < shave_depth ? !shave(box) : !propagate(box)) return;
    std::size_t pick = dim;
    std::int64_t width = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      std::int64_t w = box[i].second - box[i].first;
      if (w > 0 && (pick == dim || w < width)) {
        pick = i;
        width = w;
      }
    }
    if (pick == dim) {
      if (check(box)) {
        IntVector x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = box[i].first;
        found.push_back(std::move(x));
      }
      return;
    }
    for (std::int64_t v = box[pick].first; v <= box[pick].second; ++v) {
      Box next = box;
      next[pick] = {v, v};
      dfs(std::move(next), depth + 1);
      if (limit != 0 && found.size() >= limit) return;
    }
  }
};

}  // namespace

namespace {

// Assumes the system is feasible; the dual is then bounded iff the primal is.
LpResult maximize_feasible(const std::vector<std::vector<BigRational>>& a, const std::vector<BigRational>& b,
                           const std::vector<BigRational>& c) {
  LpResult res;
  BigRational value;
  // Dual: minimise b.y subject to A^T y = c, y >= 0.
  StdStatus st = std_simplex(transpose(a, c.size()), c, b, value);
  if (st == StdStatus::Infeasible) {
    res.status = LpStatus::Unbounded;
  } else if (st == StdStatus::Optimal) {
    res.status = LpStatus::Optimal;
    res.value = value;
  } else {
    res.status = LpStatus::Infeasible;
  }
  return res;
}

}  // namespace

LpResult lp_maximize(const std::vector<std::vector<BigRational>>& a, const std::vector<BigRational>& b,
                     const std::vector<BigRational>& c) {
  if (!lp_feasible(a, b)) return LpResult{};
  return maximize_feasible(a, b, c);
}

bool lp_feasible(const std::vector<std::vector<BigRational>>& a, const std::vector<BigRational>& b) {
  if (a.empty()) return true;
  std::size_t dim = a[0].size();
  BigRational value;
  // Farkas: infeasible iff some y >= 0 has A^T y = 0 and b.y < 0.
  StdStatus st = std_simplex(transpose(a, dim), std::vector<BigRational>(dim), b, value);
  return st == StdStatus::Optimal;
}

namespace {

void normalize_row(IntRow& row) {
  std::int64_t g = row.mod;
  g = gcd64(g, row.b);
  for (auto x : row.a) g = gcd64(g, x);
  if (g > 1) {
    // Every value of a.x + b is a multiple of g, so divide through.
    for (auto& x : row.a) x /= g;
    row.b /= g;
    row.mod /= g;
    if (row.has_lo) row.lo = ceil_div(row.lo, g);
    if (row.has_hi) row.hi = floor_div(row.hi, g);
  }
  if (row.mod > 1) {
    if (row.has_lo) row.lo = ceil_div(row.lo, row.mod) * row.mod;
    if (row.has_hi) row.hi = floor_div(row.hi, row.mod) * row.mod;
  }
}

}  // namespace

void normalize_rows(std::vector<IntRow>& rows) {
  for (auto& row : rows) normalize_row(row);
  std::sort(rows.begin(), rows.end(), [](const IntRow& x, const IntRow& y) {
    return std::tie(x.a, x.b, x.mod, x.has_lo, x.lo, x.has_hi, x.hi) <
           std::tie(y.a, y.b, y.mod, y.has_lo, y.lo, y.has_hi, y.hi);
  });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const IntRow& x, const IntRow& y) {
                           return x.a == y.a && x.b == y.b && x.mod == y.mod && x.has_lo == y.has_lo &&
                                  x.lo == y.lo && x.has_hi == y.has_hi && x.hi == y.hi;
                         }),
             rows.end());
}

std::vector<IntRow> compile_rows(const ConstraintSystem& s) {
  const std::size_t dim = s.dimension();
  std::vector<IntRow> rows;
  auto push = [&](IntRow row) { rows.push_back(std::move(row)); };
  for (const auto& f : s.forms) {
    if (f.coeffs.size() != dim) throw std::invalid_argument("form " + f.label + " has wrong dimension");
    BigInt l = f.constant.get_den();
    for (const auto& c : f.coeffs) l = lcm(l, BigInt(c.get_den()));
    IntRow row;
    row.a.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) row.a[i] = to_i64(BigInt(f.coeffs[i] * l));
    row.b = to_i64(BigInt(f.constant * l));
    row.mod = to_i64(l);
    row.has_lo = f.lower.has_value();
    row.has_hi = f.upper.has_value();
    if (row.has_lo) {
      BigInt v;
      BigRational x = *f.lower;
      mpz_cdiv_q(v.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      row.lo = to_i64(v * l);
    }
    if (row.has_hi) {
      BigInt v;
      BigRational x = *f.upper;
      mpz_fdiv_q(v.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      row.hi = to_i64(v * l);
    }
    push(std::move(row));
  }
  for (const auto& e : s.equalities) {
    if (e.coeffs.size() != dim) throw std::invalid_argument("equality has wrong dimension");
    IntRow row;
    row.a.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) row.a[i] = to_i64(e.coeffs[i]);
    row.b = -to_i64(e.constant);
    row.lo = row.hi = 0;
    push(std::move(row));
  }
  normalize_rows(rows);
  return rows;
}

std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> relaxation_box(const std::vector<IntRow>& rows,
                                                                                   std::size_t dim) {
  std::vector<std::vector<BigRational>> a;
  std::vector<BigRational> b;
  for (const auto& row : rows) {
    std::vector<BigRational> up(dim), down(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      up[i] = row.a[i];
      down[i] = -row.a[i];
    }
    if (row.has_hi) {
      a.push_back(up);
      b.emplace_back(row.hi - row.b);
    }
    if (row.has_lo) {
      a.push_back(down);
      b.emplace_back(row.b - row.lo);
    }
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> box(dim);
  if (dim == 0) {
    return box;
  }
  if (!lp_feasible(a, b)) return std::nullopt;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<BigRational> c(dim);
    c[i] = 1;
    LpResult hi = maximize_feasible(a, b, c);
    c[i] = -1;
    LpResult lo = maximize_feasible(a, b, c);
    if (hi.status == LpStatus::Unbounded || lo.status == LpStatus::Unbounded) {
      throw UnboundedSystem("variable " + std::to_string(i) + " is unbounded");
    }
    if (hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal) return std::nullopt;
    BigInt h, l;
    mpz_fdiv_q(h.get_mpz_t(), hi.value.get_num_mpz_t(), hi.value.get_den_mpz_t());
    BigRational neg = -lo.value;
    mpz_cdiv_q(l.get_mpz_t(), neg.get_num_mpz_t(), neg.get_den_mpz_t());
    if (l > h) return std::nullopt;
    box[i] = {to_i64(l), to_i64(h)};
  }
  return box;
}

std::vector<IntVector> search_box(const std::vector<IntRow>& rows,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& box, std::size_t limit) {
  std::size_t dim = box.size();
  Search s{rows, dim, limit, {}};
  s.dfs(box);
  std::sort(s.found.begin(), s.found.end());
  return s.found;
}

std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> parallelepiped_box(const std::vector<IntRow>& rows,
                                                                                       std::size_t dim) {
  // Two-sided rows, narrowest first.
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].has_lo && rows[r].has_hi) order.push_back(r);
  }
  auto norm = [&](std::size_t r) {
    i128 s = 0;
    for (auto x : rows[r].a) s += x < 0 ? -x : x;
    return s;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    i128 wx = static_cast<i128>(rows[x].hi - rows[x].lo);
    i128 wy = static_cast<i128>(rows[y].hi - rows[y].lo);
    return wx * norm(y) < wy * norm(x);
  });
  // Greedily pick independent rows, keeping an echelon copy for the test.
  std::vector<std::size_t> picked;
  std::vector<std::vector<BigRational>> echelon;
  std::vector<std::size_t> pivots;
  for (std::size_t r : order) {
    if (picked.size() == dim) break;
    std::vector<BigRational> v(rows[r].a.begin(), rows[r].a.end());
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      if (v[pivots[k]] == 0) continue;
      BigRational f = v[pivots[k]] / echelon[k][pivots[k]];
      for (std::size_t j = 0; j < dim; ++j) v[j] -= f * echelon[k][j];
    }
    std::size_t p = 0;
    while (p < dim && v[p] == 0) ++p;
    if (p == dim) continue;
    echelon.push_back(std::move(v));
    pivots.push_back(p);
    picked.push_back(r);
  }
  if (picked.size() != dim) return std::nullopt;
  // Invert the picked block: [B | I] -> [I | B^-1].
  std::vector<std::vector<BigRational>> m(dim, std::vector<BigRational>(2 * dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m[i][j] = rows[picked[i]].a[j];
    m[i][dim + i] = 1;
  }
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    BigRational inv = 1 / m[c][c];
    for (auto& x : m[c]) x *= inv;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == c || m[i][c] == 0) continue;
      BigRational f = m[i][c];
      for (std::size_t j = 0; j < 2 * dim; ++j) m[i][j] -= f * m[c][j];
    }
  }
  // x = B^-1 w with w_i = (a_i.x) in [lo_i - b_i, hi_i - b_i].
  std::vector<std::pair<std::int64_t, std::int64_t>> box(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    BigRational lo = 0, hi = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const BigRational& f = m[j][dim + i];
      if (f == 0) continue;
      const IntRow& row = rows[picked[i]];
      BigRational x = f * BigRational(row.lo - row.b);
      BigRational y = f * BigRational(row.hi - row.b);
      lo += x < y ? x : y;
      hi += x < y ? y : x;
    }
    BigInt l, h;
    mpz_cdiv_q(l.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(h.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    box[j] = {to_i64(l), to_i64(h)};
  }
  return box;
}

std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> start_box(const std::vector<IntRow>& rows,
                                                                              std::size_t dim) {
  if (auto box = parallelepiped_box(rows, dim)) return box;
  return relaxation_box(rows, dim);
}

std::vector<IntVector> enumerate_integer_points(const ConstraintSystem& s) {
  auto rows = compile_rows(s);
  auto box = start_box(rows, s.dimension());
  if (!box) return {};
  return search_box(rows, *box);
}

std::optional<IntVector> find_integer_point(const ConstraintSystem& s) {
  auto rows = compile_rows(s);
  auto box = start_box(rows, s.dimension());
  if (!box) return std::nullopt;
  auto pts = search_box(rows, *box, 1);
  if (pts.empty()) return std::nullopt;
  return pts.front();
}

bool satisfies(const ConstraintSystem& s, const IntVector& x) {
  if (x.size() != s.dimension()) return false;
  for (const auto& f : s.forms) {
    BigRational v = f.constant;
    for (std::size_t i = 0; i < x.size(); ++i) v += f.coeffs[i] * BigRational(x[i]);
    if (v.get_den() != 1) return false;
    if (f.lower && v < *f.lower) return false;
    if (f.upper && v > *f.upper) return false;
  }
  for (const auto& e : s.equalities) {
    BigInt v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) v += e.coeffs[i] * x[i];
    if (v != e.constant) return false;
  }
  return true;
}

}  // namespace pq
