#include "pq/filters.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace pq {

WagnerResult wagner_filter(const PowerTower& tower, const CharacterTable& t, std::int64_t p, int j) {
  const std::int64_t n = tower.unit_order;
  std::int64_t pj = 1;
  for (int i = 0; i < j; ++i) pj *= p;
  if (j < 1 || n % pj != 0) {
    throw HelpError("wagner_filter: " + std::to_string(p) + "^" + std::to_string(j) + " does not divide " +
                    std::to_string(n));
  }
  WagnerResult r{true, p, j, -1};
  std::map<int, std::int64_t> diff;
  const PaVector& u = tower.self();
  for (std::size_t i = 0; i < u.classes.size(); ++i) {
    if (u.values[i] != 0) diff[t.power_class(u.classes[i], pj)] += u.values[i];
  }
  if (pj == n) {
    diff[0] -= 1;
  } else {
    const PaVector* v = tower.power(pj);
    if (!v) throw HelpError("wagner_filter: tower lacks u^" + std::to_string(pj));
    for (std::size_t i = 0; i < v->classes.size(); ++i) diff[v->classes[i]] -= v->values[i];
  }
  for (const auto& [cls, x] : diff) {
    if (x % p != 0) {
      r.pass = false;
      r.witness = cls;
      break;
    }
  }
  return r;
}

bool wagner_passes(const PowerTower& tower, const CharacterTable& t) {
  for (const auto& [p, e] : nt::factor(tower.unit_order)) {
    for (int j = 1; j <= e; ++j) {
      if (!wagner_filter(tower, t, p, j).pass) return false;
    }
  }
  return true;
}

bool PQConstantCharacter::is_character() const {
  return std::all_of(combination.begin(), combination.end(), [](const auto& c) { return c.second > 0; });
}

std::vector<int> classes_of_order(const CharacterTable& t, std::int64_t order) {
  std::vector<int> out;
  for (int i = 0; i < t.class_count(); ++i) {
    if (t.classes[i].element_order == order) out.push_back(i);
  }
  return out;
}

namespace {

std::string describe(const CharacterTable& t, const std::vector<std::pair<int, std::int64_t>>& combination) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < combination.size(); ++i) {
    if (i) out << ",";
    auto [idx, c] = combination[i];
    if (c == -1) {
      out << "-";
    } else if (c != 1) {
      out << c << "*";
    }
    out << idx + 1;
  }
  out << ") over " << (t.is_ordinary() ? std::string("characteristic 0") : "characteristic " + std::to_string(t.characteristic));
  return out.str();
}

}  // namespace

PQConstantCharacter make_pq_constant(const CharacterTable& t, std::int64_t p, std::int64_t q,
                                     const std::vector<std::pair<int, std::int64_t>>& combination) {
  auto cp = classes_of_order(t, p);
  auto cq = classes_of_order(t, q);
  if (cp.empty() || cq.empty()) {
    throw HelpError("make_pq_constant: " + t.name + " has no classes of order " + std::to_string(cp.empty() ? p : q));
  }
  PQConstantCharacter xi;
  xi.table = t.name;
  xi.characteristic = t.characteristic;
  xi.p = p;
  xi.q = q;
  xi.combination = combination;
  xi.values.assign(t.class_count(), Cyclotomic());
  for (auto [idx, c] : combination) {
    if (idx < 0 || idx >= static_cast<int>(t.irreducibles.size())) throw HelpError("make_pq_constant: bad index");
    for (int k = 0; k < t.class_count(); ++k) {
      Cyclotomic v = t.irreducibles[idx].values[k];
      v *= BigRational(static_cast<long>(c));
      xi.values[k] += v;
    }
  }
  auto deg = xi.values[0].as_rational();
  if (!deg || deg->get_den() != 1) throw HelpError("make_pq_constant: degree is not an integer");
  xi.degree = deg->get_num().get_si();
  xi.value_on_p = xi.values[cp[0]];
  xi.value_on_q = xi.values[cq[0]];
  for (int c : cp) {
    if (xi.values[c] != xi.value_on_p) throw HelpError("make_pq_constant: not constant on classes of order " + std::to_string(p));
  }
  for (int c : cq) {
    if (xi.values[c] != xi.value_on_q) throw HelpError("make_pq_constant: not constant on classes of order " + std::to_string(q));
  }
  xi.source = describe(t, combination);
  return xi;
}

std::vector<PQConstantCharacter> find_pq_constant(const CharacterTable& t, std::int64_t p, std::int64_t q,
                                                  int max_terms, int max_coeff) {
  if (p == q) throw HelpError("find_pq_constant: p and q must differ");
  auto cp = classes_of_order(t, p);
  auto cq = classes_of_order(t, q);
  if (cp.empty() || cq.empty()) return {};
  // Constancy is linear: encode χ(C) - χ(C0) through its trace form, which
  // is nondegenerate, so a combination is constant iff its vector vanishes.
  const std::size_t k = t.irreducibles.size();
  std::vector<std::vector<BigRational>> diff(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& vals = t.irreducibles[i].values;
    for (const auto& [cls, order] : {std::pair{&cp, p}, std::pair{&cq, q}}) {
      for (std::size_t c = 1; c < cls->size(); ++c) {
        auto row = trace_row(vals[(*cls)[c]] - vals[(*cls)[0]], order);
        diff[i].insert(diff[i].end(), row.begin(), row.end());
      }
    }
  }
  BigInt den = 1;
  for (const auto& row : diff) {
    for (const auto& x : row) den = lcm(den, BigInt(x.get_den()));
  }
  const std::size_t len = diff.empty() ? 0 : diff[0].size();
  std::vector<std::vector<std::int64_t>> vec(k, std::vector<std::int64_t>(len));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < len; ++j) vec[i][j] = BigInt(diff[i][j] * den).get_si();
  }

  std::vector<std::vector<std::pair<int, std::int64_t>>> found;
  std::vector<std::pair<int, std::int64_t>> combo;
  std::vector<std::int64_t> acc(len, 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    if (!combo.empty() && std::all_of(acc.begin(), acc.end(), [](std::int64_t x) { return x == 0; })) {
      std::int64_t g = 0;
      for (const auto& c : combo) g = std::gcd(g, c.second);
      if (g == 1) found.push_back(combo);
    }
    if (static_cast<int>(combo.size()) == max_terms) return;
    for (std::size_t i = start; i < k; ++i) {
      for (std::int64_t c = -max_coeff; c <= max_coeff; ++c) {
        if (c == 0 || (combo.empty() && c < 0)) continue;
        for (std::size_t j = 0; j < len; ++j) acc[j] += c * vec[i][j];
        combo.emplace_back(static_cast<int>(i), c);
        dfs(i + 1);
        combo.pop_back();
        for (std::size_t j = 0; j < len; ++j) acc[j] -= c * vec[i][j];
      }
    }
  };
  dfs(0);
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<PQConstantCharacter> out;
  for (const auto& c : found) out.push_back(make_pq_constant(t, p, q, c));
  return out;
}

PQVerdict pq_eliminate(const PQConstantCharacter& xi, const CharacterTable& t, std::int64_t n) {
  const std::int64_t p = xi.p;
  const std::int64_t q = xi.q;
  if (p == q || !nt::is_prime(p) || !nt::is_prime(q) || n != p * q) {
    throw HelpError("pq_eliminate: unit order must be the product of the two distinct primes");
  }
  for (const auto& c : t.classes) {
    if (c.element_order % n == 0) {
      throw HelpError("pq_eliminate: " + t.name + " has elements of order divisible by " + std::to_string(n));
    }
  }
  PQVerdict v;
  auto ra = trace_row(xi.value_on_p, n);
  auto rb = trace_row(xi.value_on_q, n);
  auto rap = trace_row(xi.value_on_p, p);
  auto rbq = trace_row(xi.value_on_q, q);
  std::set<std::tuple<BigRational, BigRational, BigRational>> seen;
  for (std::int64_t l = 0; l < n; ++l) {
    // u^p has order q and ξ(u^p) = ξ(C_q); u^q has order p.
    BigRational m1 = BigRational(xi.degree) + rbq[l % q] + rap[l % p];
    if (!seen.emplace(m1, ra[l], rb[l]).second) continue;
    v.forms.push_back({l, m1, ra[l], rb[l]});
  }

  const bool bounded_char = xi.is_character();
  const BigRational nn(n);
  if (bounded_char) {
    ConstraintSystem s;
    s.variables = {0, 1};
    for (const auto& f : v.forms) {
      LinearForm lf;
      lf.coeffs = {f.mp / nn, f.mq / nn};
      lf.constant = f.m1 / nn;
      lf.lower = BigRational(0);
      lf.upper = BigRational(xi.degree);
      lf.label = "l=" + std::to_string(f.l);
      s.forms.push_back(std::move(lf));
    }
    s.equalities.push_back({{BigInt(1), BigInt(1)}, BigInt(1)});
    try {
      auto pts = enumerate_integer_points(s);
      for (const auto& x : pts) v.witnesses.emplace_back(x[0], x[1]);
      v.feasible = !pts.empty();
      v.reason = v.feasible ? "integer solutions exist" : "no integer (ε_p, ε_q) satisfies the bounded forms";
      return v;
    } catch (const UnboundedSystem&) {
      // Every form is independent of ε_p; handled below.
    }
  }
  // Substitute ε_q = 1 - ε_p: n μ_l = (m1 + mq) + (mp - mq) ε_p. Integrality
  // is periodic in ε_p with period dividing n times the denominators.
  BigInt period = n;
  for (const auto& f : v.forms) {
    period = lcm(period, BigInt(BigRational(f.mp - f.mq).get_den()) * n);
    period = lcm(period, BigInt(BigRational(f.m1 + f.mq).get_den()) * n);
  }
  const std::int64_t limit = period.get_si();
  for (std::int64_t x = 0; x < limit; ++x) {
    bool ok = true;
    for (const auto& f : v.forms) {
      BigRational mu = (f.m1 + f.mq + (f.mp - f.mq) * BigRational(x)) / nn;
      mu.canonicalize();
      if (mu.get_den() != 1 || (bounded_char && (mu < 0 || mu > xi.degree))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      v.feasible = true;
      v.witnesses.emplace_back(x, 1 - x);
      v.reason = "integrality holds for ε_p ≡ " + std::to_string(x) + " mod " + std::to_string(limit);
      return v;
    }
  }
  v.feasible = false;
  v.reason = "no residue of ε_p makes every multiplicity integral";
  return v;
}

SweepResult case_sweep(HelpSolver& solver, std::int64_t n, unsigned threads) {
  SweepResult r;
  r.unit_order = n;
  std::vector<std::int64_t> divs;
  std::vector<std::vector<PaPtr>> choices;
  for (auto d : nt::divisors(n)) {
    if (d == 1 || d == n) continue;
    const std::int64_t m = n / d;
    const SolutionSet& s = solver.power_solutions(m);
    std::vector<PaPtr> list;
    for (auto& x : s.distinct()) list.push_back(solver.intern(PaVector{m, s.classes, x}));
    r.per_order[m] = list.size();
    divs.push_back(d);
    choices.push_back(std::move(list));
  }
  r.cases = 1;
  for (const auto& c : choices) r.cases *= c.size();
  if (r.cases == 0) return r;
  if (divs.empty()) {
    // n prime: one case with an empty tail.
    r.feasible = solver.solve(n).towers.empty() ? 0 : 1;
    return r;
  }
  auto tail_of = [&](std::uint64_t index) {
    std::map<std::int64_t, PaPtr> tail;
    for (std::size_t i = 0; i < divs.size(); ++i) {
      tail[divs[i]] = choices[i][index % choices[i].size()];
      index /= choices[i].size();
    }
    return tail;
  };
  // Sanity check of the template against the generic path.
  solver.constraints(n, tail_of(0));

  // Scale each form once by a denominator common to every case, so that a
  // case only adds integer offsets to the constants.
  const auto& tmpl = solver.form_template(n);
  const std::size_t forms = tmpl.constant.size();
  const std::size_t dim = tmpl.classes.size();
  std::vector<std::vector<std::vector<BigRational>>> contrib(divs.size());
  for (std::size_t i = 0; i < divs.size(); ++i) {
    for (const auto& v : choices[i]) contrib[i].push_back(solver.power_contribution(n, divs[i], *v));
  }
  struct Form {
    IntVector a;
    std::int64_t base = 0;
    std::int64_t mod = 1;
    std::int64_t hi = 0;
    std::vector<IntVector> offset;  // per divisor, per choice
    bool operator<(const Form& o) const { return std::tie(a, base, mod, hi, offset) < std::tie(o.a, o.base, o.mod, o.hi, o.offset); }
    bool operator==(const Form& o) const { return a == o.a && base == o.base && mod == o.mod && hi == o.hi && offset == o.offset; }
  };
  std::vector<Form> compiled;
  for (std::size_t f = 0; f < forms; ++f) {
    BigInt l = tmpl.constant[f].get_den();
    for (const auto& c : tmpl.coeffs[f]) l = lcm(l, BigInt(c.get_den()));
    for (const auto& per : contrib) {
      for (const auto& c : per) l = lcm(l, BigInt(c[f].get_den()));
    }
    auto scaled = [&](const BigRational& x) {
      BigRational y = x * BigRational(l);
      if (y.get_den() != 1 || !y.get_num().fits_slong_p()) throw HelpError("case_sweep: coefficient overflow");
      return static_cast<std::int64_t>(y.get_num().get_si());
    };
    Form row;
    for (const auto& c : tmpl.coeffs[f]) row.a.push_back(scaled(c));
    row.base = scaled(tmpl.constant[f]);
    row.mod = scaled(BigRational(1));
    row.hi = scaled(BigRational(tmpl.degree[f]));
    for (const auto& per : contrib) {
      IntVector off;
      for (const auto& c : per) off.push_back(scaled(c[f]));
      row.offset.push_back(std::move(off));
    }
    compiled.push_back(std::move(row));
  }
  std::sort(compiled.begin(), compiled.end());
  compiled.erase(std::unique(compiled.begin(), compiled.end()), compiled.end());

  auto feasible_case = [&](std::uint64_t index) {
    std::vector<std::size_t> pick(divs.size());
    for (std::size_t i = 0; i < divs.size(); ++i) {
      pick[i] = index % choices[i].size();
      index /= choices[i].size();
    }
    std::vector<IntRow> rows;
    rows.reserve(compiled.size() + 1);
    for (const auto& f : compiled) {
      IntRow r;
      r.a = f.a;
      r.b = f.base;
      for (std::size_t i = 0; i < pick.size(); ++i) r.b += f.offset[i][pick[i]];
      r.mod = f.mod;
      r.lo = 0;
      r.hi = f.hi;
      rows.push_back(std::move(r));
    }
    IntRow sum;
    sum.a.assign(dim, 1);
    sum.b = -1;
    rows.push_back(std::move(sum));
    normalize_rows(rows);
    auto box = start_box(rows, dim);
    return box && !search_box(rows, *box, 1).empty();
  };

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> feasible{0};
  std::mutex mu;
  std::vector<std::uint64_t> witnesses;
  auto worker = [&] {
    while (true) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= r.cases) return;
      if (feasible_case(i)) {
        ++feasible;
        std::lock_guard<std::mutex> lock(mu);
        witnesses.push_back(i);
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  r.feasible = feasible.load();
  std::sort(witnesses.begin(), witnesses.end());
  for (std::size_t i = 0; i < witnesses.size() && i < 10; ++i) {
    std::map<std::int64_t, IntVector> c;
    for (const auto& [d, v] : tail_of(witnesses[i])) c[d] = v->values;
    r.feasible_cases.push_back(std::move(c));
  }
  return r;
}

OrderVerdict eliminate_order(HelpSolver& solver, std::int64_t n, const FilterConfig& config) {
  const CharacterTable& t = solver.table();
  OrderVerdict v;
  v.order = n;
  v.in_group = !classes_of_order(t, n).empty();
  std::vector<std::string> methods;

  if (std::find(config.case_sweep_orders.begin(), config.case_sweep_orders.end(), n) != config.case_sweep_orders.end()) {
    v.sweep = case_sweep(solver, n, config.threads);
    v.help_count = v.filtered_count = v.sweep->feasible;
    methods.push_back("case sweep");
    v.notes.push_back("case sweep over " + std::to_string(v.sweep->cases) + " cases, " +
                      std::to_string(v.sweep->feasible) + " feasible");
  } else {
    const SolutionSet& s = solver.solve(n);
    auto all = s.distinct();
    v.help_count = all.size();
    const bool use_wagner = config.wagner && !config.wagner_exempt.count(n);
    std::set<IntVector> kept;
    for (const auto& tower : s.towers) {
      if (!use_wagner || wagner_passes(tower, t)) kept.insert(tower.self().values);
    }
    for (const auto& x : all) {
      if (!kept.count(x)) v.rejected_by_wagner.push_back(x);
    }
    v.survivors.assign(kept.begin(), kept.end());
    v.filtered_count = v.survivors.size();
    for (const auto& x : v.survivors) {
      PaVector pv{n, s.classes, x};
      (pv.is_trivial(t) ? v.trivial : v.nontrivial)++;
    }
    methods.push_back(use_wagner ? "HeLP+Wagner" : "HeLP");
  }

  bool pq_killed = false;
  for (const auto& spec : config.pq_constant) {
    if (spec.p * spec.q != n) continue;
    const CharacterTable* src = nullptr;
    if (spec.table == t.name) src = &t;
    for (const auto& b : solver.brauer()) {
      if (b.name == spec.table) src = &b;
    }
    if (!src) throw HelpError("eliminate_order: unknown table " + spec.table + " in pq_constant");
    std::vector<PQConstantCharacter> xis;
    if (spec.combination.empty()) {
      xis = find_pq_constant(*src, spec.p, spec.q, config.max_terms, config.max_coeff);
    } else {
      xis.push_back(make_pq_constant(*src, spec.p, spec.q, spec.combination));
    }
    for (const auto& xi : xis) {
      if (!pq_eliminate(xi, *src, n).feasible) {
        pq_killed = true;
        v.notes.push_back("(p,q)-constant character " + xi.source + " of " + src->name + " with values (" +
                          xi.value_on_p.to_string() + ", " + xi.value_on_q.to_string() + ")");
        break;
      }
    }
    if (pq_killed) {
      methods.push_back("(p,q)-constant");
      break;
    }
  }

  const bool empty = v.sweep ? v.sweep->eliminated() : v.filtered_count == 0;
  v.eliminated = !v.in_group && (empty || pq_killed);
  if (pq_killed && !empty) v.notes.push_back("HeLP survivors are excluded by the (p,q)-constant character");
  std::ostringstream m;
  for (std::size_t i = 0; i < methods.size(); ++i) m << (i ? ", " : "") << methods[i];
  v.method = m.str();
  return v;
}

}  // namespace pq
