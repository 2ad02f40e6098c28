#include "pq/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace pq {

using ojson = nlohmann::ordered_json;

const std::vector<ExternalFact>& external_fact_registry() {
  static const std::vector<ExternalFact> facts = {
      {"A6", 6, "Hertweck: no units of order 6 in V(ZA6)"},
      {"A6.2_2", 6, "Baechle and Margolis, lattice method: no units of order 6 in V(Z PGL(2,9))"},
      {"M10", 6, "Baechle and Margolis, lattice method: no units of order 6 in V(Z M10)"},
  };
  return facts;
}

const ExternalFact* find_external_fact(const std::string& group, std::int64_t order) {
  for (const auto& f : external_fact_registry()) {
    if (f.group == group && f.order == order) return &f;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::pair<int, std::int64_t>> parse_combination(const std::string& text) {
  static const std::regex term(R"(\s*(-)?(?:(\d+)\s*\*)?\s*(\d+)\s*)");
  std::string body = text;
  auto open = body.find('(');
  auto close = body.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw VerifyError("combination must look like (1,6,8): " + text);
  }
  body = body.substr(open + 1, close - open - 1);
  std::vector<std::pair<int, std::int64_t>> out;
  std::stringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::smatch m;
    if (!std::regex_match(item, m, term)) throw VerifyError("bad term '" + item + "' in " + text);
    std::int64_t c = m[2].matched ? std::stoll(m[2].str()) : 1;
    if (m[1].matched) c = -c;
    int idx = std::stoi(m[3].str());
    if (idx < 1 || c == 0) throw VerifyError("bad term '" + item + "' in " + text);
    out.emplace_back(idx - 1, c);
  }
  if (out.empty()) throw VerifyError("empty combination " + text);
  return out;
}

namespace {

template <class T>
std::vector<T> get_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<T>>();
}

std::string combination_text(const std::vector<std::pair<int, std::int64_t>>& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    if (c[i].second == -1) {
      out += "-";
    } else if (c[i].second != 1) {
      out += std::to_string(c[i].second) + "*";
    }
    out += std::to_string(c[i].first + 1);
  }
  return out + ")";
}

}  // namespace

VerifyConfig parse_config(const std::string& json_text) {
  VerifyConfig c;
  try {
    auto j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw VerifyError("config: expected an object");
    static const std::set<std::string> known = {"brauer",          "wagner",        "wagner_exempt", "pq_constant",
                                                "case_sweep_orders", "torsion_orders", "skip_orders",  "max_terms",
                                                "max_coeff",       "threads",       "external_facts", "comment"};
    for (const auto& [k, v] : j.items()) {
      if (!known.count(k)) throw VerifyError("config: unknown key " + k);
    }
    c.brauer = get_list<std::int64_t>(j, "brauer");
    c.filters.wagner = j.value("wagner", false);
    for (auto n : get_list<std::int64_t>(j, "wagner_exempt")) c.filters.wagner_exempt.insert(n);
    c.filters.case_sweep_orders = get_list<std::int64_t>(j, "case_sweep_orders");
    c.torsion_orders = get_list<std::int64_t>(j, "torsion_orders");
    c.skip_orders = get_list<std::int64_t>(j, "skip_orders");
    c.filters.max_terms = j.value("max_terms", 4);
    c.filters.max_coeff = j.value("max_coeff", 2);
    c.filters.threads = j.value("threads", 1u);
    c.external_facts = j.value("external_facts", true);
    if (j.contains("pq_constant")) {
      for (const auto& e : j.at("pq_constant")) {
        PQConstantSpec s;
        s.table = e.at("table").get<std::string>();
        s.p = e.at("p").get<std::int64_t>();
        s.q = e.at("q").get<std::int64_t>();
        if (e.contains("source")) s.combination = parse_combination(e.at("source").get<std::string>());
        c.filters.pq_constant.push_back(std::move(s));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw VerifyError(std::string("config: ") + e.what());
  }
  for (auto n : c.brauer) {
    if (!nt::is_prime(n)) throw VerifyError("config: Brauer characteristic " + std::to_string(n) + " is not prime");
  }
  if (c.filters.max_terms < 1 || c.filters.max_coeff < 1) throw VerifyError("config: search bounds must be positive");
  return c;
}

VerifyConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw VerifyError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

ojson config_json(const VerifyConfig& c) {
  ojson j;
  j["brauer"] = c.brauer;
  j["wagner"] = c.filters.wagner;
  j["wagner_exempt"] = std::vector<std::int64_t>(c.filters.wagner_exempt.begin(), c.filters.wagner_exempt.end());
  j["pq_constant"] = ojson::array();
  for (const auto& s : c.filters.pq_constant) {
    ojson e;
    e["table"] = s.table;
    e["p"] = s.p;
    e["q"] = s.q;
    if (!s.combination.empty()) e["source"] = combination_text(s.combination);
    j["pq_constant"].push_back(e);
  }
  j["case_sweep_orders"] = c.filters.case_sweep_orders;
  j["torsion_orders"] = c.torsion_orders;
  j["skip_orders"] = c.skip_orders;
  j["max_terms"] = c.filters.max_terms;
  j["max_coeff"] = c.filters.max_coeff;
  j["threads"] = c.filters.threads;
  j["external_facts"] = c.external_facts;
  return j;
}

}  // namespace

std::string config_to_json(const VerifyConfig& c) { return config_json(c).dump(2); }

std::vector<CharacterTable> load_brauer_tables(const std::string& table_path, const std::vector<std::int64_t>& primes) {
  namespace fs = std::filesystem;
  fs::path p(table_path);
  std::vector<CharacterTable> out;
  for (auto prime : primes) {
    fs::path b = p.parent_path() / (p.stem().string() + ".mod" + std::to_string(prime) + ".json");
    if (!fs::exists(b)) throw VerifyError("missing Brauer table " + b.string());
    out.push_back(load_table_file(b.string()));
    if (out.back().characteristic != prime) throw VerifyError(b.string() + " has the wrong characteristic");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

std::string status_name(OrderStatus s) {
  switch (s) {
    case OrderStatus::TrivialOnly:
      return "trivial-only";
    case OrderStatus::NonTrivial:
      return "non-trivial";
    case OrderStatus::Eliminated:
      return "eliminated";
    case OrderStatus::EliminatedExternal:
      return "eliminated-external";
    case OrderStatus::Survivors:
      return "survivors";
  }
  return "?";
}

VerificationReport verify_pq(const CharacterTable& table, const std::vector<CharacterTable>& brauer,
                             const VerifyConfig& config) {
  if (!table.is_ordinary()) throw VerifyError("verify_pq: " + table.name + " is not an ordinary table");
  auto validation = validate_table(table);
  if (!validation.ok()) throw VerifyError("verify_pq: " + table.name + " fails validation: " + validation.failures[0]);
  for (const auto& b : brauer) {
    auto vb = validate_table(b);
    if (!vb.ok()) throw VerifyError("verify_pq: " + b.name + " fails validation: " + vb.failures[0]);
  }

  VerificationReport r;
  r.group = table.name;
  r.config = config;
  for (const auto& b : brauer) r.brauer_tables.push_back(b.name);
  r.pi = graph_from_table(table);
  for (const auto& c : table.classes) r.element_orders.insert(c.element_order);

  std::map<std::int64_t, std::optional<PrimePair>> orders;
  for (auto pair : r.pi.non_edges()) orders[pair.first * pair.second] = pair;
  for (auto n : config.torsion_orders) {
    auto ps = nt::prime_divisors(std::max<std::int64_t>(n, 1));
    bool ok = n >= 2 && std::all_of(ps.begin(), ps.end(), [&](std::int64_t p) { return table.group_order % p == 0; });
    if (!ok) throw VerifyError("verify_pq: torsion order " + std::to_string(n) + " is not admissible for " + table.name);
    orders.emplace(n, std::nullopt);
  }
  for (auto n : config.skip_orders) {
    if (orders.count(n)) throw VerifyError("verify_pq: order " + std::to_string(n) + " is both computed and skipped");
  }

  HelpOptions options;
  options.wagner = config.filters.wagner;
  options.wagner_exempt = config.filters.wagner_exempt;
  HelpSolver solver(table, brauer, options);
  std::map<std::int64_t, bool> eliminated;
  for (const auto& [n, pair] : orders) {
    OrderReport o;
    o.order = n;
    o.pair = pair;
    auto start = std::chrono::steady_clock::now();
    o.verdict = eliminate_order(solver, n, config.filters);
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.class_functions = solver.characters_for(n);
    if (o.verdict.in_group) {
      o.status = o.verdict.nontrivial == 0 && !o.verdict.sweep ? OrderStatus::TrivialOnly : OrderStatus::NonTrivial;
    } else if (o.verdict.eliminated) {
      o.status = OrderStatus::Eliminated;
    } else if (const ExternalFact* f = find_external_fact(table.name, n); f && config.external_facts) {
      o.status = OrderStatus::EliminatedExternal;
      o.external = *f;
      r.external_facts_used.push_back(*f);
    } else {
      o.status = OrderStatus::Survivors;
    }
    if (pair) {
      eliminated[n] = o.status == OrderStatus::Eliminated || o.status == OrderStatus::EliminatedExternal;
    }
    r.per_order.emplace(n, std::move(o));
  }
  r.open = gamma_verdict(r.pi, eliminated).open;
  if (!r.open.empty()) {
    r.final = "undecided";
  } else {
    // Only external facts on p·q orders matter for the verdict.
    bool used = false;
    for (const auto& [n, o] : r.per_order) used = used || (o.pair && o.status == OrderStatus::EliminatedExternal);
    r.final = used ? "verified-with-external-facts" : "verified";
  }
  return r;
}

ConsistencyReport cross_check(const PermutationGroup& group, const CharacterTable& table) {
  ConsistencyReport r;
  auto fail = [&](std::string s) {
    r.consistent = false;
    r.discrepancies.push_back(std::move(s));
  };
  if (!table.is_ordinary()) {
    fail("table " + table.name + " is not an ordinary table");
    return r;
  }
  Spectrum s;
  try {
    s = spectrum(group);
  } catch (const std::exception& e) {
    fail(std::string("permutation group: ") + e.what());
    return r;
  }
  auto order = static_cast<std::uint64_t>(table.group_order);
  if (s.group_order != order) {
    fail("group order: permutation group " + std::to_string(s.group_order) + ", table " + std::to_string(order));
  } else {
    r.checks.push_back("group order " + std::to_string(order));
  }
  if (group.declared_order && *group.declared_order != s.group_order) {
    fail("declared order " + std::to_string(*group.declared_order) + " but enumerated " + std::to_string(s.group_order));
  }
  std::int64_t total = 0;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto& c : table.classes) {
    total += c.size;
    counts[static_cast<std::uint64_t>(c.element_order)] += static_cast<std::uint64_t>(c.size);
  }
  if (total != table.group_order) {
    fail("class sizes of the table sum to " + std::to_string(total));
  } else {
    r.checks.push_back("class sizes sum to the group order");
  }
  std::set<std::uint64_t> keys;
  for (const auto& [k, v] : counts) keys.insert(k);
  for (const auto& [k, v] : s.counts) keys.insert(k);
  bool same = true;
  for (auto k : keys) {
    auto a = s.counts.count(k) ? s.counts.at(k) : 0;
    auto b = counts.count(k) ? counts.at(k) : 0;
    if (a != b) {
      same = false;
      fail("elements of order " + std::to_string(k) + ": permutation group " + std::to_string(a) + ", table " +
           std::to_string(b));
    }
  }
  if (same) r.checks.push_back("element order counts agree");
  if (graph_from_spectrum(s) != graph_from_table(table)) fail("prime graphs differ");
  return r;
}

// ---------------------------------------------------------------------------
// Output

namespace {

ojson pair_json(const PrimePair& p) { return ojson::array({p.first, p.second}); }

ojson order_json(const OrderReport& o, ReportOptions options) {
  const auto& v = o.verdict;
  ojson j;
  j["order"] = o.order;
  j["pair"] = o.pair ? pair_json(*o.pair) : ojson(nullptr);
  j["in_group"] = v.in_group;
  j["status"] = status_name(o.status);
  j["method"] = v.method;
  j["help_count"] = v.help_count;
  j["filtered_count"] = v.filtered_count;
  j["trivial"] = v.trivial;
  j["nontrivial"] = v.nontrivial;
  j["class_functions"] = o.class_functions;
  j["survivors"] = v.survivors;
  j["rejected_by_wagner"] = v.rejected_by_wagner;
  j["notes"] = v.notes;
  if (v.sweep) {
    ojson s;
    s["cases"] = v.sweep->cases;
    s["feasible"] = v.sweep->feasible;
    ojson per = ojson::array();
    for (const auto& [m, k] : v.sweep->per_order) per.push_back(ojson::array({m, k}));
    s["per_order"] = per;
    j["sweep"] = s;
  }
  if (o.external) j["external"] = o.external->attribution;
  if (options.timing) j["seconds"] = o.seconds;
  return j;
}

std::string join_orders(const std::vector<std::string>& xs) {
  if (xs.empty()) return "---";
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

std::size_t reported_count(const OrderReport& o) { return o.verdict.filtered_count; }

}  // namespace

std::string emit_report_json(const VerificationReport& r, ReportOptions options) {
  ojson j;
  j["group"] = r.group;
  j["brauer_tables"] = r.brauer_tables;
  j["config"] = config_json(r.config);
  ojson pi;
  pi["vertices"] = std::vector<std::int64_t>(r.pi.vertices.begin(), r.pi.vertices.end());
  pi["edges"] = ojson::array();
  for (const auto& e : r.pi.edges) pi["edges"].push_back(pair_json(e));
  j["pi"] = pi;
  j["per_order"] = ojson::array();
  for (const auto& [n, o] : r.per_order) j["per_order"].push_back(order_json(o, options));
  j["external_facts_used"] = ojson::array();
  for (const auto& f : r.external_facts_used) {
    j["external_facts_used"].push_back({{"group", f.group}, {"order", f.order}, {"attribution", f.attribution}});
  }
  j["open_pairs"] = ojson::array();
  for (const auto& p : r.open) j["open_pairs"].push_back(pair_json(p));
  j["final"] = r.final;
  return j.dump(2) + "\n";
}

std::vector<std::string> landscape_row(const VerificationReport& r) {
  std::vector<std::string> trivial, in_g, eliminated, in_v;
  for (const auto& [n, o] : r.per_order) {
    const std::string counted = std::to_string(n) + "(" + std::to_string(reported_count(o)) + ")";
    switch (o.status) {
      case OrderStatus::TrivialOnly:
        trivial.push_back(std::to_string(n));
        break;
      case OrderStatus::NonTrivial:
        in_g.push_back(counted);
        break;
      case OrderStatus::Eliminated:
      case OrderStatus::EliminatedExternal:
        eliminated.push_back(std::to_string(n));
        break;
      case OrderStatus::Survivors:
        in_v.push_back(counted);
        break;
    }
  }
  std::vector<std::string> skip_g, skip_v;
  std::vector<std::int64_t> skips = r.config.skip_orders;
  std::sort(skips.begin(), skips.end());
  for (auto n : skips) (r.element_orders.count(n) ? skip_g : skip_v).push_back(std::to_string(n));
  return {r.group, r.group, join_orders(trivial), join_orders(in_g), join_orders(skip_g),
          join_orders(eliminated), join_orders(in_v), join_orders(skip_v)};
}

std::string emit_report_markdown(const VerificationReport& r) {
  std::ostringstream out;
  auto row = landscape_row(r);
  out << "# " << r.group << "\n\n";
  out << "| G | Character table | (ZC-1) | order(#) in G | Not considered in G | No orders in V(ZG) | order(#) in V(ZG) | "
         "Not considered in V(ZG) |\n";
  out << "|---|---|---|---|---|---|---|---|\n|";
  for (const auto& c : row) out << " " << c << " |";
  out << "\n\n";
  out << "Prime graph: " << r.pi.to_string() << "\n\n";
  out << "Brauer tables: " << (r.brauer_tables.empty() ? std::string("none") : join_orders(r.brauer_tables))
      << "; Wagner test: " << (r.config.filters.wagner ? "on" : "off") << "\n\n";
  if (!r.per_order.empty()) {
    out << "| order | pair | status | HeLP | filtered | method |\n|---|---|---|---|---|---|\n";
    for (const auto& [n, o] : r.per_order) {
      out << "| " << n << " | "
          << (o.pair ? "{" + std::to_string(o.pair->first) + "," + std::to_string(o.pair->second) + "}" : std::string("-"))
          << " | " << status_name(o.status) << " | " << o.verdict.help_count << " | " << o.verdict.filtered_count
          << " | " << o.verdict.method << " |\n";
    }
    out << "\n";
  }
  for (const auto& [n, o] : r.per_order) {
    for (const auto& note : o.verdict.notes) out << "- order " << n << ": " << note << "\n";
  }
  for (const auto& f : r.external_facts_used) out << "- external fact, order " << f.order << ": " << f.attribution << "\n";
  if (!r.open.empty()) {
    out << "- open pairs:";
    for (auto [p, q] : r.open) out << " {" << p << "," << q << "}";
    out << "\n";
  }
  out << "\nFinal: " << r.final << "\n";
  return out.str();
}

std::string solutions_to_json(const SolutionSet& s, const CharacterTable& t) {
  ojson j;
  j["table"] = t.name;
  j["unit_order"] = s.unit_order;
  std::vector<std::string> names;
  for (int c : s.classes) names.push_back(t.classes[c].name);
  j["classes"] = names;
  auto cls = classify_solutions(s, t);
  j["count"] = cls.trivial.size() + cls.nontrivial.size();
  j["trivial"] = cls.trivial;
  j["nontrivial"] = cls.nontrivial;
  j["towers_examined"] = s.tails;
  j["class_functions"] = s.class_functions_used;
  return j.dump(2) + "\n";
}

}  // namespace pq
