#include "pq/char_table.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pq {

using nlohmann::json;

int CharacterTable::class_index(const std::string& n) const {
  for (int i = 0; i < class_count(); ++i) {
    if (classes[i].name == n) return i;
  }
  return -1;
}

int CharacterTable::power_class(int c, std::int64_t e) const {
  if (e < 1) throw TableError("power_class: exponent must be positive");
  for (auto& [p, k] : nt::factor(e)) {
    auto it = power_maps.find(p);
    if (it == power_maps.end()) {
      // x^p for a prime p not dividing |G| permutes classes of p'-elements;
      // without the map we cannot tell where.
      throw TableError("table " + name + " has no " + std::to_string(p) + "-power map");
    }
    for (int i = 0; i < k; ++i) c = it->second[c];
  }
  return c;
}

namespace {

Cyclotomic parse_cyclotomic(const json& v) {
  if (v.is_number_integer()) return Cyclotomic(BigRational(v.get<long>()));
  if (v.is_string()) return Cyclotomic(parse_rational(v.get<std::string>()));
  if (!v.is_object() || !v.contains("n") || !v.contains("terms")) {
    throw TableError("malformed cyclotomic value " + v.dump());
  }
  std::int64_t n = v.at("n").get<std::int64_t>();
  if (n < 1) throw TableError("cyclotomic with non-positive conductor " + v.dump());
  std::vector<Cyclotomic::Term> terms;
  for (const auto& t : v.at("terms")) {
    if (!t.is_array() || t.size() != 2) throw TableError("malformed cyclotomic term " + t.dump());
    BigRational c = t[1].is_string() ? parse_rational(t[1].get<std::string>()) : BigRational(t[1].get<long>());
    terms.emplace_back(t[0].get<std::int64_t>(), c);
  }
  return Cyclotomic::from_terms(n, terms);
}

json cyclotomic_to_json(const Cyclotomic& c) {
  if (auto q = c.as_rational()) {
    if (q->get_den() == 1 && q->get_num().fits_slong_p()) return q->get_num().get_si();
    return rational_to_string(*q);
  }
  json terms = json::array();
  for (auto& [k, v] : c.terms()) terms.push_back({k, rational_to_string(v)});
  return {{"n", c.conductor()}, {"terms", terms}};
}

void require(bool cond, const std::string& what) {
  if (!cond) throw TableError(what);
}

// Applies the canonical class order (element_order, size, name).
void canonicalise(CharacterTable& t) {
  std::vector<int> perm(t.classes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    const auto& x = t.classes[a];
    const auto& y = t.classes[b];
    if (x.element_order != y.element_order) return x.element_order < y.element_order;
    if (x.size != y.size) return x.size < y.size;
    return x.name < y.name;
  });
  std::vector<int> where(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = static_cast<int>(i);
  std::vector<ConjugacyClassInfo> classes;
  for (int i : perm) classes.push_back(t.classes[i]);
  t.classes = std::move(classes);
  for (auto& [p, map] : t.power_maps) {
    std::vector<int> next(map.size());
    for (std::size_t i = 0; i < perm.size(); ++i) next[i] = where[map[perm[i]]];
    map = std::move(next);
  }
  for (auto& chi : t.irreducibles) {
    std::vector<Cyclotomic> values;
    for (int i : perm) values.push_back(chi.values[i]);
    chi.values = std::move(values);
  }
}

}  // namespace

CharacterTable load_table(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw TableError(std::string("table file is not valid JSON: ") + e.what());
  }
  CharacterTable t;
  try {
    for (const char* key : {"name", "group_order", "characteristic", "classes", "power_maps", "irreducibles"}) {
      require(j.contains(key), std::string("table is missing field '") + key + "'");
    }
    t.name = j.at("name").get<std::string>();
    t.group_order = j.at("group_order").get<std::int64_t>();
    t.characteristic = j.at("characteristic").get<std::int64_t>();
    require(t.group_order >= 1, "group_order must be positive");
    require(t.characteristic == 0 || nt::is_prime(t.characteristic), "characteristic must be 0 or a prime");
    for (const auto& c : j.at("classes")) {
      ConjugacyClassInfo info;
      info.name = c.at("name").get<std::string>();
      info.element_order = c.at("element_order").get<std::int64_t>();
      info.size = c.at("size").get<std::int64_t>();
      require(info.element_order >= 1 && t.group_order % info.element_order == 0,
              "class " + info.name + ": element order does not divide the group order");
      require(info.size >= 1 && t.group_order % info.size == 0,
              "class " + info.name + ": size does not divide the group order");
      t.classes.push_back(info);
    }
    int k = t.class_count();
    require(k >= 1, "table has no classes");
    require(t.classes[0].element_order == 1 && t.classes[0].size == 1, "class 0 must be the identity class");
    for (int i = 1; i < k; ++i) require(t.classes[i].element_order > 1, "only class 0 may have element order 1");
    std::set<std::string> names;
    for (const auto& c : t.classes) require(names.insert(c.name).second, "duplicate class name " + c.name);
    for (auto it = j.at("power_maps").begin(); it != j.at("power_maps").end(); ++it) {
      std::int64_t p = std::stoll(it.key());
      require(nt::is_prime(p), "power map key " + it.key() + " is not a prime");
      std::vector<int> map = it.value().get<std::vector<int>>();
      require(static_cast<int>(map.size()) == k, "power map " + it.key() + " has wrong length");
      for (int x : map) require(x >= 0 && x < k, "power map " + it.key() + " has an out-of-range entry");
      t.power_maps[p] = std::move(map);
    }
    for (auto p : nt::prime_divisors(t.group_order)) {
      require(t.power_maps.count(p) == 1, "missing power map for prime " + std::to_string(p));
    }
    for (const auto& c : j.at("irreducibles")) {
      ClassFunction chi;
      chi.name = c.at("name").get<std::string>();
      chi.degree = c.at("degree").get<std::int64_t>();
      require(chi.degree >= 1, "character " + chi.name + " has non-positive degree");
      const auto& vals = c.at("values");
      require(static_cast<int>(vals.size()) == k, "character " + chi.name + " has wrong number of values");
      for (const auto& v : vals) chi.values.push_back(parse_cyclotomic(v));
      require(chi.values[0] == Cyclotomic(chi.degree), "character " + chi.name + ": value at 1a differs from degree");
      t.irreducibles.push_back(std::move(chi));
    }
    require(!t.irreducibles.empty(), "table has no irreducibles");
  } catch (const json::exception& e) {
    throw TableError(std::string("table schema violation: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TableError(std::string("table schema violation: ") + e.what());
  }
  canonicalise(t);
  return t;
}

CharacterTable load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open table file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_table(ss.str());
}

std::string table_to_json(const CharacterTable& t) {
  json j;
  j["name"] = t.name;
  j["group_order"] = t.group_order;
  j["characteristic"] = t.characteristic;
  j["classes"] = json::array();
  for (const auto& c : t.classes) {
    j["classes"].push_back({{"name", c.name}, {"element_order", c.element_order}, {"size", c.size}});
  }
  j["power_maps"] = json::object();
  for (const auto& [p, map] : t.power_maps) j["power_maps"][std::to_string(p)] = map;
  j["irreducibles"] = json::array();
  for (const auto& chi : t.irreducibles) {
    json vals = json::array();
    for (const auto& v : chi.values) vals.push_back(cyclotomic_to_json(v));
    j["irreducibles"].push_back({{"name", chi.name}, {"degree", chi.degree}, {"values", vals}});
  }
  return j.dump(1);
}

ValidationReport validate_table(const CharacterTable& t) {
  ValidationReport r;
  int k = t.class_count();
  auto fail = [&](const std::string& s) { r.failures.push_back(s); };

  for (int i = 0; i < k; ++i) {
    const auto& c = t.classes[i];
    if (t.group_order % c.element_order != 0) fail("class " + c.name + ": element order does not divide |G|");
    if (t.group_order % c.size != 0) fail("class " + c.name + ": size does not divide |G|");
    if (t.characteristic != 0 && c.element_order % t.characteristic == 0) {
      fail("class " + c.name + " is " + std::to_string(t.characteristic) + "-singular in a Brauer table");
    }
  }
  for (auto p : nt::prime_divisors(t.group_order)) {
    auto it = t.power_maps.find(p);
    if (it == t.power_maps.end()) {
      fail("missing power map for prime " + std::to_string(p));
      continue;
    }
    for (int i = 0; i < k; ++i) {
      std::int64_t o = t.classes[i].element_order;
      std::int64_t expect = o / nt::gcd(o, p);
      std::int64_t got = t.classes[it->second[i]].element_order;
      if (got != expect) {
        fail("power map " + std::to_string(p) + ": class " + t.classes[i].name + " maps to order " +
             std::to_string(got) + ", expected " + std::to_string(expect));
      }
    }
  }
  for (const auto& chi : t.irreducibles) {
    if (static_cast<int>(chi.values.size()) != k) {
      fail("character " + chi.name + " has wrong length");
      return r;
    }
    if (chi.values[0] != Cyclotomic(chi.degree)) fail("character " + chi.name + ": value at identity is not the degree");
    for (int i = 0; i < k; ++i) {
      if (t.classes[i].element_order % chi.values[i].conductor() != 0) {
        fail("character " + chi.name + " at " + t.classes[i].name + ": conductor does not divide the element order");
      }
    }
  }

  if (!t.is_ordinary()) {
    r.notices.push_back("Brauer table (characteristic " + std::to_string(t.characteristic) +
                        "): orthogonality checks skipped");
    return r;
  }

  std::int64_t sum_sizes = 0;
  for (const auto& c : t.classes) sum_sizes += c.size;
  if (sum_sizes != t.group_order) fail("class sizes sum to " + std::to_string(sum_sizes) + ", not |G|");
  BigInt sum_sq = 0;
  for (const auto& chi : t.irreducibles) sum_sq += BigInt(chi.degree) * chi.degree;
  if (sum_sq != t.group_order) fail("squared degrees sum to " + sum_sq.get_str() + ", not |G|");
  if (static_cast<int>(t.irreducibles.size()) != k) fail("number of irreducibles differs from number of classes");

  std::vector<std::vector<Cyclotomic>> conj(t.irreducibles.size());
  for (std::size_t a = 0; a < t.irreducibles.size(); ++a) {
    for (const auto& v : t.irreducibles[a].values) conj[a].push_back(v.conj());
  }
  for (std::size_t a = 0; a < t.irreducibles.size(); ++a) {
    for (std::size_t b = a; b < t.irreducibles.size(); ++b) {
      Cyclotomic s;
      for (int i = 0; i < k; ++i) {
        Cyclotomic term = t.irreducibles[a].values[i] * conj[b][i];
        term *= BigRational(t.classes[i].size);
        s += term;
      }
      Cyclotomic expect(a == b ? t.group_order : 0);
      if (s != expect) {
        fail("row orthogonality fails for " + t.irreducibles[a].name + ", " + t.irreducibles[b].name);
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j2 = i; j2 < k; ++j2) {
      Cyclotomic s;
      for (std::size_t a = 0; a < t.irreducibles.size(); ++a) s += t.irreducibles[a].values[i] * conj[a][j2];
      Cyclotomic expect(i == j2 ? t.centralizer_order(i) : 0);
      if (s != expect) fail("column orthogonality fails for " + t.classes[i].name + ", " + t.classes[j2].name);
    }
  }
  // |C| chi(C) / chi(1) is an algebraic integer. The Zumbroich basis is an
  // integral basis, so this means integral coefficients.
  for (const auto& chi : t.irreducibles) {
    for (int i = 0; i < k; ++i) {
      Cyclotomic w = chi.values[i];
      BigRational f(t.classes[i].size, chi.degree);
      f.canonicalize();
      w *= f;
      for (auto& [e, c] : w.terms()) {
        if (c.get_den() != 1) {
          fail("central character of " + chi.name + " at " + t.classes[i].name + " is not integral");
          break;
        }
      }
    }
  }
  return r;
}

CharacterTable psl2_generic_table(std::int64_t q) {
  if (q < 5 || !nt::is_prime(q)) throw TableError("psl2_generic_table: need a prime p >= 5, got " + std::to_string(q));
  const std::int64_t r = (q - 1) / 2;  // order of the split torus in PSL
  const std::int64_t s = (q + 1) / 2;  // order of the nonsplit torus
  const bool one_mod_four = q % 4 == 1;

  enum Kind { Identity, Unipotent, Split, Nonsplit };
  struct Param {
    Kind kind;
    std::int64_t e;  // exponent on the torus generator, or 0/1 for u, u'
    std::int64_t order;
    std::int64_t size;
  };
  std::vector<Param> params;
  params.push_back({Identity, 0, 1, 1});
  params.push_back({Unipotent, 0, q, (q * q - 1) / 2});
  params.push_back({Unipotent, 1, q, (q * q - 1) / 2});
  for (std::int64_t l = 1; l <= r / 2; ++l) {
    params.push_back({Split, l, r / nt::gcd(r, l), 2 * l == r ? q * (q + 1) / 2 : q * (q + 1)});
  }
  for (std::int64_t m = 1; m <= s / 2; ++m) {
    params.push_back({Nonsplit, m, s / nt::gcd(s, m), 2 * m == s ? q * (q - 1) / 2 : q * (q - 1)});
  }
  // Name classes by order; letters follow (size, parameter).
  std::vector<int> idx(params.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (params[a].order != params[b].order) return params[a].order < params[b].order;
    return params[a].size < params[b].size;
  });
  std::vector<std::string> names(params.size());
  std::map<std::int64_t, int> letters;
  for (int i : idx) {
    int l = letters[params[i].order]++;
    names[i] = std::to_string(params[i].order) + static_cast<char>('a' + l);
  }

  auto find_class = [&](Kind kind, std::int64_t e) -> int {
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].kind == kind && params[i].e == e) return static_cast<int>(i);
    }
    throw TableError("psl2_generic_table: internal class lookup failed");
  };
  auto torus_class = [&](Kind kind, std::int64_t modulus, std::int64_t e) -> int {
    e = nt::mod(e, modulus);
    if (e == 0) return 0;
    return find_class(kind, std::min(e, modulus - e));
  };
  auto is_square = [&](std::int64_t x) {
    x = nt::mod(x, q);
    for (std::int64_t y = 1; y < q; ++y) {
      if (y * y % q == x) return true;
    }
    return false;
  };

  CharacterTable t;
  t.name = "PSL(2," + std::to_string(q) + ")";
  t.group_order = q * (q * q - 1) / 2;
  t.characteristic = 0;
  for (std::size_t i = 0; i < params.size(); ++i) t.classes.push_back({names[i], params[i].order, params[i].size});
  for (auto p : nt::prime_divisors(t.group_order)) {
    std::vector<int> map(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& c = params[i];
      switch (c.kind) {
        case Identity:
          map[i] = 0;
          break;
        case Unipotent:
          if (p == q) {
            map[i] = 0;
          } else {
            // u^p is conjugate to u iff p is a square mod q.
            map[i] = find_class(Unipotent, is_square(p) ? c.e : 1 - c.e);
          }
          break;
        case Split:
          map[i] = torus_class(Split, r, c.e * p);
          break;
        case Nonsplit:
          map[i] = torus_class(Nonsplit, s, c.e * p);
          break;
      }
    }
    t.power_maps[p] = map;
  }

  // sqrt(eps*q) as the quadratic Gauss sum.
  Cyclotomic gauss;
  for (std::int64_t x = 1; x < q; ++x) gauss += is_square(x) ? Cyclotomic::zeta(q, x) : -Cyclotomic::zeta(q, x);
  const BigRational half(1, 2);

  auto add_char = [&](const std::string& name, std::int64_t degree, const std::function<Cyclotomic(const Param&)>& f) {
    ClassFunction chi;
    chi.name = name;
    chi.degree = degree;
    for (const auto& c : params) chi.values.push_back(c.kind == Identity ? Cyclotomic(degree) : f(c));
    t.irreducibles.push_back(std::move(chi));
  };
  add_char("1", 1, [](const Param&) { return Cyclotomic(1); });
  add_char("St", q, [](const Param& c) {
    return Cyclotomic(c.kind == Unipotent ? 0 : c.kind == Split ? 1 : -1);
  });
  for (std::int64_t k = 1; 2 * k < r; ++k) {
    add_char("chi" + std::to_string(k), q + 1, [&, k](const Param& c) {
      if (c.kind == Unipotent) return Cyclotomic(1);
      if (c.kind == Nonsplit) return Cyclotomic(0);
      return Cyclotomic::zeta(r, k * c.e) + Cyclotomic::zeta(r, -k * c.e);
    });
  }
  for (std::int64_t k = 1; 2 * k < s; ++k) {
    add_char("theta" + std::to_string(k), q - 1, [&, k](const Param& c) {
      if (c.kind == Unipotent) return Cyclotomic(-1);
      if (c.kind == Split) return Cyclotomic(0);
      return -(Cyclotomic::zeta(s, k * c.e) + Cyclotomic::zeta(s, -k * c.e));
    });
  }
  for (int sign : {1, -1}) {
    std::string name = std::string(one_mod_four ? "xi" : "eta") + (sign == 1 ? "1" : "2");
    if (one_mod_four) {
      add_char(name, (q + 1) / 2, [&, sign](const Param& c) {
        if (c.kind == Unipotent) {
          Cyclotomic v = Cyclotomic(1) + (c.e == 0 ? sign : -sign) * gauss;
          v *= half;
          return v;
        }
        if (c.kind == Split) return Cyclotomic(c.e % 2 == 0 ? 1 : -1);
        return Cyclotomic(0);
      });
    } else {
      add_char(name, (q - 1) / 2, [&, sign](const Param& c) {
        if (c.kind == Unipotent) {
          Cyclotomic v = Cyclotomic(-1) + (c.e == 0 ? sign : -sign) * gauss;
          v *= half;
          return v;
        }
        if (c.kind == Nonsplit) return Cyclotomic(c.e % 2 == 0 ? -1 : 1);
        return Cyclotomic(0);
      });
    }
  }
  canonicalise(t);
  return t;
}

std::vector<int> eligible_classes(const CharacterTable& t, std::int64_t n) {
  std::vector<int> out;
  if (n < 1) return out;
  for (int i = 1; i < t.class_count(); ++i) {
    if (n % t.classes[i].element_order == 0) out.push_back(i);
  }
  return out;
}

std::vector<int> class_map(const CharacterTable& ordinary, const CharacterTable& sub) {
  std::vector<int> out;
  for (const auto& c : sub.classes) {
    int i = ordinary.class_index(c.name);
    if (i < 0) throw TableError("class " + c.name + " of " + sub.name + " not found in " + ordinary.name);
    if (ordinary.classes[i].element_order != c.element_order) {
      throw TableError("class " + c.name + " has different element orders in " + sub.name + " and " + ordinary.name);
    }
    out.push_back(i);
  }
  return out;
}

bool tables_equivalent(const CharacterTable& a, const CharacterTable& b) {
  if (a.group_order != b.group_order || a.class_count() != b.class_count() ||
      a.irreducibles.size() != b.irreducibles.size() || a.characteristic != b.characteristic) {
    return false;
  }
  int k = a.class_count();
  std::vector<std::vector<Cyclotomic>> rows_b;
  for (const auto& chi : b.irreducibles) rows_b.push_back(chi.values);
  std::sort(rows_b.begin(), rows_b.end());

  // Backtrack over bijections a-class -> b-class preserving order and size.
  std::vector<int> image(k, -1);
  std::vector<bool> used(k, false);
  std::function<bool(int)> extend = [&](int i) -> bool {
    if (i == k) {
      for (const auto& [p, map] : a.power_maps) {
        auto it = b.power_maps.find(p);
        if (it == b.power_maps.end()) return false;
        for (int x = 0; x < k; ++x) {
          if (image[map[x]] != it->second[image[x]]) return false;
        }
      }
      std::vector<std::vector<Cyclotomic>> rows_a;
      for (const auto& chi : a.irreducibles) {
        std::vector<Cyclotomic> row(k);
        for (int x = 0; x < k; ++x) row[image[x]] = chi.values[x];
        rows_a.push_back(std::move(row));
      }
      std::sort(rows_a.begin(), rows_a.end());
      return rows_a == rows_b;
    }
    for (int j = 0; j < k; ++j) {
      if (used[j] || a.classes[i].element_order != b.classes[j].element_order ||
          a.classes[i].size != b.classes[j].size) {
        continue;
      }
      image[i] = j;
      used[j] = true;
      if (extend(i + 1)) return true;
      used[j] = false;
    }
    image[i] = -1;
    return false;
  };
  return extend(0);
}

}  // namespace pq
