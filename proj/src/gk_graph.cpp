#include "pq/gk_graph.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pq {

bool PrimeGraph::adjacent(std::int64_t p, std::int64_t q) const {
  if (p > q) std::swap(p, q);
  return edges.count({p, q}) > 0;
}

std::vector<PrimePair> PrimeGraph::non_edges() const {
  std::vector<PrimePair> out;
  for (auto i = vertices.begin(); i != vertices.end(); ++i) {
    for (auto j = std::next(i); j != vertices.end(); ++j) {
      if (!edges.count({*i, *j})) out.emplace_back(*i, *j);
    }
  }
  return out;
}

std::string PrimeGraph::to_string() const {
  std::ostringstream out;
  out << "vertices {";
  bool first = true;
  for (auto v : vertices) {
    out << (first ? "" : ",") << v;
    first = false;
  }
  out << "} edges {";
  first = true;
  for (auto [p, q] : edges) {
    out << (first ? "" : ",") << "{" << p << "," << q << "}";
    first = false;
  }
  out << "}";
  return out.str();
}

PrimeGraph graph_from_spectrum(const std::set<std::int64_t>& orders) {
  PrimeGraph g;
  for (auto n : orders) {
    if (n < 1) throw std::invalid_argument("graph_from_spectrum: element order " + std::to_string(n));
    auto ps = nt::prime_divisors(n);
    g.vertices.insert(ps.begin(), ps.end());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) g.edges.emplace(ps[i], ps[j]);
    }
  }
  return g;
}

PrimeGraph graph_from_spectrum(const Spectrum& s) {
  std::set<std::int64_t> orders;
  for (auto n : s.orders) orders.insert(static_cast<std::int64_t>(n));
  return graph_from_spectrum(orders);
}

PrimeGraph graph_from_table(const CharacterTable& t) {
  if (!t.is_ordinary()) {
    throw std::invalid_argument("graph_from_table: " + t.name + " is a Brauer table and lacks the p-singular classes");
  }
  std::set<std::int64_t> orders;
  for (const auto& c : t.classes) orders.insert(c.element_order);
  return graph_from_spectrum(orders);
}

GammaVerdict gamma_verdict(const PrimeGraph& pi, const std::map<std::int64_t, bool>& eliminated) {
  GammaVerdict v;
  for (auto [p, q] : pi.non_edges()) {
    auto it = eliminated.find(p * q);
    if (it == eliminated.end()) {
      throw std::invalid_argument("gamma_verdict: no verdict for order " + std::to_string(p * q));
    }
    if (!it->second) v.open.emplace_back(p, q);
  }
  v.verified = v.open.empty();
  return v;
}

// ---------------------------------------------------------------------------
// Facts

namespace {

const std::vector<std::pair<FactKind, std::string>> kKinds = {
    {FactKind::Group, "group"},
    {FactKind::AlmostSimple, "almost_simple"},
    {FactKind::Primes, "primes"},
    {FactKind::PiComplete, "pi_complete"},
    {FactKind::PqVerified, "pq_verified"},
    {FactKind::PairVerified, "pair_verified"},
    {FactKind::Quotient, "quotient"},
    {FactKind::AlmostSimpleImages, "almost_simple_images"},
    {FactKind::DirectProductQuotient, "direct_product_quotient"},
};

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

ReductionFact make(FactKind k, std::string group) {
  ReductionFact f;
  f.kind = k;
  f.group = std::move(group);
  return f;
}

}  // namespace

std::string kind_name(FactKind k) {
  for (const auto& [kind, name] : kKinds) {
    if (kind == k) return name;
  }
  return "?";
}

std::string ReductionFact::to_string() const {
  std::ostringstream out;
  out << kind_name(kind) << "(" << group;
  switch (kind) {
    case FactKind::Quotient:
      out << ", " << normal << ", " << quotient;
      break;
    case FactKind::AlmostSimpleImages:
    case FactKind::DirectProductQuotient:
      out << ", [" << join(members) << "]";
      break;
    case FactKind::Primes: {
      out << ", [";
      for (std::size_t i = 0; i < primes.size(); ++i) out << (i ? ", " : "") << primes[i];
      out << "]";
      break;
    }
    case FactKind::PairVerified:
      out << ", " << pair.first << ", " << pair.second;
      break;
    default:
      break;
  }
  out << ")";
  return out.str();
}

std::vector<ReductionFact> parse_facts(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ReductionError(std::string("facts: ") + e.what());
  }
  if (!doc.is_array()) throw ReductionError("facts: expected a JSON array");
  std::vector<ReductionFact> out;
  for (const auto& j : doc) {
    try {
      if (!j.is_object() || !j.contains("kind")) throw ReductionError("facts: entry without a kind");
      const auto name = j.at("kind").get<std::string>();
      auto it = std::find_if(kKinds.begin(), kKinds.end(), [&](const auto& k) { return k.second == name; });
      if (it == kKinds.end()) throw ReductionError("facts: unknown kind " + name);
      ReductionFact f = make(it->first, j.at("group").get<std::string>());
      if (f.group.empty()) throw ReductionError("facts: empty group id");
      switch (f.kind) {
        case FactKind::Quotient:
          f.normal = j.at("normal").get<std::string>();
          f.quotient = j.at("quotient").get<std::string>();
          break;
        case FactKind::AlmostSimpleImages:
          f.members = j.at("images").get<std::vector<std::string>>();
          break;
        case FactKind::DirectProductQuotient:
          f.members = j.at("factors").get<std::vector<std::string>>();
          if (f.members.size() != 2) throw ReductionError("facts: direct_product_quotient needs exactly two factors");
          break;
        case FactKind::Primes:
          f.primes = j.at("primes").get<std::vector<std::int64_t>>();
          for (auto p : f.primes) {
            if (!nt::is_prime(p)) throw ReductionError("facts: " + std::to_string(p) + " is not prime");
          }
          std::sort(f.primes.begin(), f.primes.end());
          f.primes.erase(std::unique(f.primes.begin(), f.primes.end()), f.primes.end());
          break;
        case FactKind::PairVerified: {
          auto p = j.at("p").get<std::int64_t>();
          auto q = j.at("q").get<std::int64_t>();
          if (!nt::is_prime(p) || !nt::is_prime(q) || p == q) throw ReductionError("facts: bad prime pair");
          f.pair = {std::min(p, q), std::max(p, q)};
          break;
        }
        default:
          break;
      }
      out.push_back(std::move(f));
    } catch (const nlohmann::json::exception& e) {
      throw ReductionError(std::string("facts: ") + e.what());
    }
  }
  return out;
}

std::vector<ReductionFact> load_facts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReductionError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_facts(buf.str());
}

// ---------------------------------------------------------------------------
// Inference

namespace {

struct Base {
  std::set<ReductionFact> facts;

  bool has(const ReductionFact& f) const { return facts.count(f) > 0; }
  bool verified(const std::string& g) const { return has(make(FactKind::PqVerified, g)); }
  const ReductionFact* primes(const std::string& g) const {
    for (const auto& f : facts) {
      if (f.kind == FactKind::Primes && f.group == g) return &f;
    }
    return nullptr;
  }
};

}  // namespace

std::vector<Derivation> reduction_infer(const std::vector<ReductionFact>& facts) {
  Base base;
  base.facts.insert(facts.begin(), facts.end());

  std::set<std::string> ids;
  for (const auto& f : base.facts) ids.insert(f.group);
  for (const auto& f : base.facts) {
    std::vector<std::string> refs = f.members;
    if (f.kind == FactKind::Quotient) {
      refs.push_back(f.normal);
      refs.push_back(f.quotient);
    }
    for (const auto& r : refs) {
      if (!ids.count(r)) throw ReductionError("dangling reference to " + r + " in " + f.to_string());
    }
  }
  for (const auto& f : base.facts) {
    if (f.kind != FactKind::Primes) continue;
    for (const auto& g : base.facts) {
      if (g.kind == FactKind::Primes && g.group == f.group && g.primes != f.primes) {
        throw ReductionError("conflicting prime sets for " + f.group);
      }
    }
  }

  std::map<ReductionFact, Derivation> derived;
  auto add = [&](std::string rule, ReductionFact c, std::vector<ReductionFact> premises) {
    if (base.has(c) || derived.count(c)) return false;
    derived.emplace(c, Derivation{std::move(rule), c, std::move(premises)});
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::tuple<std::string, ReductionFact, std::vector<ReductionFact>>> round;
    for (const auto& f : base.facts) {
      switch (f.kind) {
        case FactKind::AlmostSimpleImages: {
          bool all = std::all_of(f.members.begin(), f.members.end(), [&](const auto& x) { return base.verified(x); });
          if (!all) break;
          std::vector<ReductionFact> premises{f};
          for (const auto& x : f.members) premises.push_back(make(FactKind::PqVerified, x));
          round.emplace_back("R1", make(FactKind::PqVerified, f.group), std::move(premises));
          break;
        }
        case FactKind::Quotient: {
          if (!base.verified(f.quotient)) break;
          auto complete = make(FactKind::PiComplete, f.normal);
          if (base.has(complete)) {
            round.emplace_back("R2", make(FactKind::PqVerified, f.group),
                               std::vector<ReductionFact>{f, complete, make(FactKind::PqVerified, f.quotient)});
          }
          const ReductionFact* pg = base.primes(f.group);
          const ReductionFact* pn = base.primes(f.normal);
          if (!pg || !pn) break;
          for (std::size_t i = 0; i < pg->primes.size(); ++i) {
            for (std::size_t j = i + 1; j < pg->primes.size(); ++j) {
              auto p = pg->primes[i];
              auto q = pg->primes[j];
              auto in_n = [&](std::int64_t r) { return std::binary_search(pn->primes.begin(), pn->primes.end(), r); };
              if (in_n(p) && in_n(q)) continue;
              ReductionFact c = make(FactKind::PairVerified, f.group);
              c.pair = {p, q};
              round.emplace_back("R2p", c,
                                 std::vector<ReductionFact>{f, make(FactKind::PqVerified, f.quotient), *pg, *pn});
            }
          }
          break;
        }
        case FactKind::DirectProductQuotient: {
          auto a = make(FactKind::AlmostSimple, f.members[0]);
          auto b = make(FactKind::AlmostSimple, f.members[1]);
          if (base.has(a) && base.has(b)) {
            round.emplace_back("R3", make(FactKind::PqVerified, f.group), std::vector<ReductionFact>{f, a, b});
          }
          break;
        }
        default:
          break;
      }
    }
    for (auto& [rule, c, premises] : round) {
      if (add(rule, c, premises)) changed = true;
    }
    for (const auto& [c, d] : derived) base.facts.insert(c);
  }

  std::vector<Derivation> out;
  for (auto& [c, d] : derived) out.push_back(std::move(d));
  return out;
}

}  // namespace pq
