#include "pq/help.hpp"

#include "pq/filters.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace pq {

std::int64_t PaVector::at(int cls) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == cls) return values[i];
  }
  return 0;
}

bool PaVector::is_trivial(const CharacterTable& t) const {
  int hits = 0;
  bool ok = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) continue;
    ++hits;
    ok = ok && values[i] == 1 && t.classes[classes[i]].element_order == unit_order;
  }
  return hits == 1 && ok;
}

std::string PaVector::to_string(const CharacterTable& t) const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out << ", ";
    out << t.classes[classes[i]].name << ": " << values[i];
  }
  out << ")";
  return out.str();
}

const PaVector* PowerTower::power(std::int64_t d) const {
  auto it = pa.find(d);
  return it == pa.end() ? nullptr : it->second.get();
}

bool tower_less(const PowerTower& a, const PowerTower& b) {
  if (a.unit_order != b.unit_order) return a.unit_order < b.unit_order;
  auto ia = a.pa.begin();
  auto ib = b.pa.begin();
  for (; ia != a.pa.end() && ib != b.pa.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second->values != ib->second->values) return ia->second->values < ib->second->values;
  }
  return ia == a.pa.end() && ib != b.pa.end();
}

std::vector<IntVector> SolutionSet::distinct() const {
  std::set<IntVector> s;
  for (const auto& t : towers) s.insert(t.self().values);
  return {s.begin(), s.end()};
}

std::vector<HelpCharacter> help_characters(const CharacterTable& ordinary, const CharacterTable& table) {
  std::vector<int> map = class_map(ordinary, table);
  std::vector<HelpCharacter> out;
  for (const auto& chi : table.irreducibles) {
    HelpCharacter h;
    h.name = table.is_ordinary() ? chi.name : "mod" + std::to_string(table.characteristic) + ":" + chi.name;
    h.characteristic = table.characteristic;
    h.degree = chi.degree;
    h.values.assign(ordinary.class_count(), Cyclotomic());
    h.defined.assign(ordinary.class_count(), false);
    for (std::size_t i = 0; i < map.size(); ++i) {
      h.values[map[i]] = chi.values[i];
      h.defined[map[i]] = true;
    }
    out.push_back(std::move(h));
  }
  return out;
}

Cyclotomic unit_character_value(const HelpCharacter& chi, const PaVector& v) {
  Cyclotomic out;
  for (std::size_t i = 0; i < v.classes.size(); ++i) {
    if (v.values[i] == 0) continue;
    int c = v.classes[i];
    if (c < 0 || c >= static_cast<int>(chi.values.size()) || !chi.defined[c]) {
      throw HelpError("unit_character_value: class " + std::to_string(c) + " not in the support of " + chi.name);
    }
    Cyclotomic term = chi.values[c];
    term *= BigRational(static_cast<long>(v.values[i]));
    out += term;
  }
  return out;
}

Cyclotomic unit_character_value(const CharacterTable& t, const ClassFunction& chi, const PaVector& v) {
  Cyclotomic out;
  for (std::size_t i = 0; i < v.classes.size(); ++i) {
    int c = v.classes[i];
    if (c <= 0 || c >= t.class_count()) {
      throw HelpError("unit_character_value: class index " + std::to_string(c) + " out of range");
    }
    Cyclotomic term = chi.values[c];
    term *= BigRational(static_cast<long>(v.values[i]));
    out += term;
  }
  return out;
}

std::vector<BigRational> trace_row(const Cyclotomic& x, std::int64_t m) {
  std::vector<std::int64_t> c(m);
  for (std::int64_t j = 0; j < m; ++j) c[j] = nt::ramanujan(m, j);
  std::vector<BigRational> row(m);
  for (const auto& [k, a] : x.embed(m)) {
    for (std::int64_t l = 0; l < m; ++l) row[l] += a * c[nt::mod(k - l, m)];
  }
  return row;
}

HelpSolver::HelpSolver(CharacterTable ordinary, std::vector<CharacterTable> brauer, HelpOptions options)
    : ordinary_(std::move(ordinary)), brauer_(std::move(brauer)), options_(options) {
  if (!ordinary_.is_ordinary()) throw HelpError("HelpSolver: first table must be ordinary");
  chars_ = help_characters(ordinary_, ordinary_);
  for (const auto& b : brauer_) {
    if (b.is_ordinary()) throw HelpError("HelpSolver: extra table " + b.name + " is not a Brauer table");
    if (ordinary_.group_order % b.characteristic != 0) {
      throw HelpError("HelpSolver: characteristic of " + b.name + " does not divide the group order");
    }
    auto more = help_characters(ordinary_, b);
    chars_.insert(chars_.end(), more.begin(), more.end());
  }
}

PaPtr HelpSolver::intern(PaVector v) {
  auto key = std::make_pair(v.unit_order, v.values);
  auto it = pool_.find(key);
  if (it != pool_.end()) return it->second;
  auto p = std::make_shared<const PaVector>(std::move(v));
  pool_.emplace(std::move(key), p);
  return p;
}

std::vector<std::string> HelpSolver::characters_for(std::int64_t n) const {
  std::vector<std::string> out;
  for (const auto& chi : chars_) {
    if (chi.characteristic == 0 || n % chi.characteristic != 0) out.push_back(chi.name);
  }
  return out;
}

const HelpSolver::Basis& HelpSolver::basis(std::int64_t n) {
  auto it = bases_.find(n);
  if (it != bases_.end()) return it->second;
  Basis b;
  b.classes = eligible_classes(ordinary_, n);
  for (auto d : nt::divisors(n)) {
    if (d < n) b.divisors.push_back(d);
  }
  for (std::size_t ci = 0; ci < chars_.size(); ++ci) {
    const auto& chi = chars_[ci];
    if (chi.characteristic != 0 && n % chi.characteristic == 0) continue;
    b.chars.push_back(ci);
    std::map<int, std::vector<std::vector<BigRational>>> rows;
    for (int c : b.classes) {
      if (!chi.defined[c]) throw HelpError("HelpSolver: " + chi.name + " undefined on class " + ordinary_.classes[c].name);
      std::vector<std::vector<BigRational>> per_divisor;
      for (auto d : b.divisors) {
        std::int64_t m = n / d;
        if (m % ordinary_.classes[c].element_order == 0) {
          per_divisor.push_back(trace_row(chi.values[c], m));
        } else {
          per_divisor.emplace_back();
        }
      }
      rows.emplace(c, std::move(per_divisor));
    }
    b.rows.push_back(std::move(rows));
  }
  return bases_.emplace(n, std::move(b)).first->second;
}

const HelpSolver::FormTemplate& HelpSolver::form_template(std::int64_t n) {
  auto it = templates_.find(n);
  if (it != templates_.end()) return it->second;
  if (n < 2) throw HelpError("constraints: unit order must be at least 2");
  const Basis& b = basis(n);
  const BigRational inv_n(1, n);
  FormTemplate f;
  f.classes = b.classes;
  f.divisors.assign(b.divisors.begin() + 1, b.divisors.end());
  for (std::size_t k = 0; k < b.chars.size(); ++k) {
    const auto& chi = chars_[b.chars[k]];
    const auto& rows = b.rows[k];
    for (std::int64_t l = 0; l < n; ++l) {
      std::vector<BigRational> coeffs(b.classes.size());
      for (std::size_t j = 0; j < b.classes.size(); ++j) coeffs[j] = rows.at(b.classes[j])[0][l] * inv_n;
      BigRational constant(chi.degree, n);
      constant.canonicalize();
      f.coeffs.push_back(std::move(coeffs));
      f.constant.push_back(constant);
      f.degree.push_back(chi.degree);
      f.labels.push_back(chi.name + " l=" + std::to_string(l));
    }
  }
  return templates_.emplace(n, std::move(f)).first->second;
}

std::vector<BigRational> HelpSolver::power_contribution(std::int64_t n, std::int64_t d, const PaVector& v) {
  const Basis& b = basis(n);
  auto pos = std::find(b.divisors.begin(), b.divisors.end(), d);
  if (d <= 1 || pos == b.divisors.end()) throw HelpError("power_contribution: " + std::to_string(d) + " is not a proper divisor");
  const std::size_t di = pos - b.divisors.begin();
  const std::int64_t m = n / d;
  if (v.unit_order != m) throw HelpError("constraints: u^" + std::to_string(d) + " has the wrong order");
  const BigRational inv_n(1, n);
  std::vector<BigRational> out;
  out.reserve(b.chars.size() * n);
  for (std::size_t k = 0; k < b.chars.size(); ++k) {
    const auto& rows = b.rows[k];
    for (std::int64_t l = 0; l < n; ++l) {
      BigRational c;
      for (std::size_t j = 0; j < v.classes.size(); ++j) {
        if (v.values[j] == 0) continue;
        c += rows.at(v.classes[j])[di][l % m] * BigRational(static_cast<long>(v.values[j]));
      }
      out.push_back(c * inv_n);
    }
  }
  return out;
}

ConstraintSystem HelpSolver::constraints(std::int64_t n, const std::map<std::int64_t, PaPtr>& tail) {
  const FormTemplate& f = form_template(n);
  std::vector<BigRational> constant = f.constant;
  for (auto d : f.divisors) {
    auto it = tail.find(d);
    if (it == tail.end() || !it->second) throw HelpError("constraints: tower tail lacks u^" + std::to_string(d));
    auto add = power_contribution(n, d, *it->second);
    for (std::size_t i = 0; i < constant.size(); ++i) constant[i] += add[i];
  }
  // Σ_l μ_l = χ(1) identically; forms come in blocks of n per character.
  for (std::size_t start = 0; start < constant.size(); start += n) {
    BigRational total;
    std::vector<BigRational> coeff_sum(f.classes.size());
    for (std::size_t i = start; i < start + n; ++i) {
      total += constant[i];
      for (std::size_t j = 0; j < f.classes.size(); ++j) coeff_sum[j] += f.coeffs[i][j];
    }
    bool ok = total == f.degree[start];
    for (const auto& c : coeff_sum) ok = ok && c == 0;
    if (!ok) throw HelpError("constraints: multiplicities of " + f.labels[start] + " do not sum to the degree");
  }
  using Key = std::tuple<std::vector<BigRational>, BigRational, std::int64_t>;
  std::set<Key> seen;
  ConstraintSystem s;
  s.variables = f.classes;
  for (std::size_t i = 0; i < constant.size(); ++i) {
    if (!seen.emplace(f.coeffs[i], constant[i], f.degree[i]).second) continue;
    LinearForm form;
    form.coeffs = f.coeffs[i];
    form.constant = constant[i];
    form.lower = BigRational(0);
    form.upper = BigRational(f.degree[i]);
    form.label = f.labels[i];
    s.forms.push_back(std::move(form));
  }
  Equality aug;
  aug.coeffs.assign(f.classes.size(), BigInt(1));
  aug.constant = 1;
  s.equalities.push_back(std::move(aug));
  return s;
}

std::vector<std::map<std::int64_t, PaPtr>> HelpSolver::tails(std::int64_t n) {
  std::vector<std::map<std::int64_t, PaPtr>> partial{{}};
  for (auto p : nt::prime_divisors(n)) {
    if (n == p) continue;
    const SolutionSet& sub = power_solutions(n / p);
    std::vector<std::map<std::int64_t, PaPtr>> next;
    for (const auto& tail : partial) {
      for (const auto& tower : sub.towers) {
        auto merged = tail;
        bool ok = true;
        for (const auto& [e, v] : tower.pa) {
          auto [it, inserted] = merged.emplace(p * e, v);
          if (!inserted && it->second != v) {
            ok = false;
            break;
          }
        }
        if (ok) next.push_back(std::move(merged));
      }
    }
    partial = std::move(next);
  }
  return partial;
}

const SolutionSet& HelpSolver::solve(std::int64_t n) {
  auto it = raw_.find(n);
  if (it != raw_.end()) return it->second;
  if (n < 2) throw HelpError("help_solve: unit order must be at least 2");
  for (auto p : nt::prime_divisors(n)) {
    if (ordinary_.group_order % p != 0) {
      throw HelpError("help_solve: prime " + std::to_string(p) + " does not divide the group order");
    }
  }
  SolutionSet out;
  out.unit_order = n;
  out.classes = eligible_classes(ordinary_, n);
  out.class_functions_used = characters_for(n);
  auto all_tails = tails(n);
  out.tails = all_tails.size();
  for (auto& tail : all_tails) {
    ConstraintSystem s = constraints(n, tail);
    for (auto& x : enumerate_integer_points(s)) {
      PowerTower t;
      t.unit_order = n;
      t.pa = tail;
      t.pa[1] = intern(PaVector{n, out.classes, std::move(x)});
      out.towers.push_back(std::move(t));
    }
  }
  std::sort(out.towers.begin(), out.towers.end(), tower_less);
  return raw_.emplace(n, std::move(out)).first->second;
}

const SolutionSet& HelpSolver::power_solutions(std::int64_t m) {
  if (!options_.wagner || options_.wagner_exempt.count(m)) return solve(m);
  auto it = filtered_.find(m);
  if (it != filtered_.end()) return it->second;
  SolutionSet s = solve(m);
  std::erase_if(s.towers, [&](const PowerTower& t) { return !wagner_passes(t, ordinary_); });
  return filtered_.emplace(m, std::move(s)).first->second;
}

ConstraintSystem build_constraints(const std::vector<CharacterTable>& tables, std::int64_t n,
                                   const std::map<std::int64_t, PaPtr>& tail) {
  if (tables.empty()) throw HelpError("build_constraints: no tables");
  for (std::size_t i = 1; i < tables.size(); ++i) {
    if (tables[i].characteristic != 0 && n % tables[i].characteristic == 0) {
      throw HelpError("build_constraints: " + tables[i].name + " has characteristic dividing " + std::to_string(n));
    }
  }
  HelpSolver solver(tables[0], {tables.begin() + 1, tables.end()});
  return solver.constraints(n, tail);
}

SolutionSet help_solve(const std::vector<CharacterTable>& tables, std::int64_t n, HelpOptions options) {
  if (tables.empty()) throw HelpError("help_solve: no tables");
  HelpSolver solver(tables[0], {tables.begin() + 1, tables.end()}, options);
  return solver.solve(n);
}

Classification classify_solutions(const SolutionSet& s, const CharacterTable& t) {
  Classification c;
  std::set<IntVector> seen;
  for (const auto& tower : s.towers) {
    const PaVector& v = tower.self();
    if (!seen.insert(v.values).second) continue;
    (v.is_trivial(t) ? c.trivial : c.nontrivial).push_back(v.values);
  }
  return c;
}

PowerTower trivial_tower(HelpSolver& solver, int c) {
  const auto& t = solver.table();
  std::int64_t n = t.classes.at(c).element_order;
  if (n < 2) throw HelpError("trivial_tower: identity class");
  PowerTower tower;
  tower.unit_order = n;
  for (auto d : nt::divisors(n)) {
    if (d == n) continue;
    std::int64_t m = n / d;
    int target = t.power_class(c, d);
    PaVector v{m, eligible_classes(t, m), {}};
    for (int cls : v.classes) v.values.push_back(cls == target ? 1 : 0);
    tower.pa[d] = solver.intern(std::move(v));
  }
  return tower;
}

std::vector<BigRational> multiplicities(const HelpCharacter& chi, const PowerTower& tower) {
  const std::int64_t n = tower.unit_order;
  std::vector<BigRational> mu(n);
  for (std::int64_t l = 0; l < n; ++l) {
    BigRational total(chi.degree);
    for (const auto& [d, v] : tower.pa) {
      std::int64_t m = n / d;
      Cyclotomic x = unit_character_value(chi, *v) * Cyclotomic::zeta(m, -l);
      total += x.trace_over(m);
    }
    total /= n;
    total.canonicalize();
    mu[l] = total;
  }
  return mu;
}

}  // namespace pq
