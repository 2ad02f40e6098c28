// Command-line front end. Results go to stdout, diagnostics to stderr.
//
// Exit codes: 0 verified / eliminated / valid, 10 undecided / survivors,
// 2 input error, 3 internal invariant violation.

#include "pq/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>

using namespace pq;

namespace {

constexpr int kOk = 0;
constexpr int kOpen = 10;
constexpr int kInput = 2;
constexpr int kInternal = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CharacterTable read_table(const std::string& path) {
  try {
    return load_table_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

std::vector<CharacterTable> read_tables(const std::vector<std::string>& paths) {
  std::vector<CharacterTable> out;
  for (const auto& p : paths) out.push_back(read_table(p));
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

nlohmann::ordered_json graph_json(const PrimeGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = std::vector<std::int64_t>(g.vertices.begin(), g.vertices.end());
  j["edges"] = nlohmann::ordered_json::array();
  for (auto [p, q] : g.edges) j["edges"].push_back({p, q});
  j["non_edges"] = nlohmann::ordered_json::array();
  for (auto [p, q] : g.non_edges()) j["non_edges"].push_back({p, q});
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime graph verification for integral group rings"};
  app.require_subcommand(1);
  int code = kOk;

  // validate
  std::string table_path;
  auto* validate = app.add_subcommand("validate", "Check orthogonality and power maps of a table");
  validate->add_option("--table", table_path, "Character table JSON")->required();
  validate->callback([&] {
    auto t = read_table(table_path);
    auto r = validate_table(t);
    for (const auto& n : r.notices) std::cerr << "note: " << n << "\n";
    for (const auto& f : r.failures) std::cout << "FAIL " << f << "\n";
    std::cout << t.name << ": " << (r.ok() ? "valid" : "invalid") << "\n";
    code = r.ok() ? kOk : kInput;
  });

  // prime-graph
  std::string group_path;
  auto* graph = app.add_subcommand("prime-graph", "Print the prime graph of a group");
  auto* gt = graph->add_option("--table", table_path, "Ordinary character table JSON");
  auto* gg = graph->add_option("--group", group_path, "Permutation generators");
  gt->excludes(gg);
  graph->callback([&] {
    PrimeGraph g;
    if (!table_path.empty()) {
      g = graph_from_table(read_table(table_path));
    } else if (!group_path.empty()) {
      g = graph_from_spectrum(spectrum(load_generators(group_path)));
    } else {
      throw InputError("prime-graph needs --table or --group");
    }
    std::cout << graph_json(g).dump(2) << "\n";
  });

  // help
  std::int64_t order = 0;
  std::vector<std::string> brauer_paths;
  bool wagner = false;
  std::string out_path;
  auto* help = app.add_subcommand("help", "Admissible partial augmentations for one order");
  help->add_option("--table", table_path, "Ordinary character table JSON")->required();
  help->add_option("--order", order, "Order of the unit")->required();
  help->add_option("--brauer", brauer_paths, "Brauer table JSON (repeatable)");
  help->add_flag("--wagner", wagner, "Apply the Wagner test");
  help->add_option("--out", out_path, "Write the solutions as JSON");
  help->callback([&] {
    HelpSolver s(read_table(table_path), read_tables(brauer_paths), {.wagner = wagner});
    FilterConfig c;
    c.wagner = wagner;
    auto v = eliminate_order(s, order, c);
    std::cerr << s.table().name << " order " << order << ": " << v.help_count << " from HeLP, " << v.filtered_count
              << " after filters\n";
    std::string text = solutions_to_json(s.solve(order), s.table());
    if (wagner) {
      auto j = nlohmann::ordered_json::parse(text);
      j["wagner_survivors"] = v.survivors;
      j["rejected_by_wagner"] = v.rejected_by_wagner;
      text = j.dump(2) + "\n";
    }
    if (!out_path.empty()) write_file(out_path, text);
    std::cout << text;
    code = v.nontrivial == 0 ? kOk : kOpen;
  });

  // pq-constant
  std::int64_t p = 0, q = 0;
  int max_terms = 4, max_coeff = 2;
  auto* pqc = app.add_subcommand("pq-constant", "Search (p,q)-constant characters and test units of order p*q");
  pqc->add_option("--table", table_path, "Character table JSON (ordinary or Brauer)")->required();
  pqc->add_option("--p", p, "First prime")->required();
  pqc->add_option("--q", q, "Second prime")->required();
  pqc->add_option("--max-terms", max_terms, "Irreducibles per combination")->capture_default_str();
  pqc->add_option("--max-coeff", max_coeff, "Largest coefficient")->capture_default_str();
  pqc->callback([&] {
    auto t = read_table(table_path);
    auto xs = find_pq_constant(t, p, q, max_terms, max_coeff);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    bool killed = false;
    for (const auto& xi : xs) {
      auto v = pq_eliminate(xi, t, p * q);
      killed = killed || !v.feasible;
      nlohmann::ordered_json e;
      e["source"] = xi.source;
      e["degree"] = xi.degree;
      e["value_on_p"] = xi.value_on_p.to_string();
      e["value_on_q"] = xi.value_on_q.to_string();
      e["character"] = xi.is_character();
      e["eliminates"] = !v.feasible;
      e["reason"] = v.reason;
      nlohmann::ordered_json forms = nlohmann::ordered_json::array();
      for (const auto& f : v.forms) {
        forms.push_back({{"l", f.l}, {"m1", f.m1.get_str()}, {"mp", f.mp.get_str()}, {"mq", f.mq.get_str()}});
      }
      e["forms"] = forms;
      j.push_back(e);
    }
    std::cout << j.dump(2) << "\n";
    code = killed ? kOk : kOpen;
  });

  // sweep
  std::vector<std::int64_t> exempt;
  unsigned threads = 1;
  auto* sweep = app.add_subcommand("sweep", "Run every combination of power solutions for one order");
  sweep->add_option("--table", table_path, "Ordinary character table JSON")->required();
  sweep->add_option("--order", order, "Order of the unit")->required();
  sweep->add_option("--brauer", brauer_paths, "Brauer table JSON (repeatable)");
  sweep->add_flag("--wagner", wagner, "Apply the Wagner test to the power solutions");
  sweep->add_option("--wagner-exempt", exempt, "Orders whose solutions skip the Wagner test");
  sweep->add_option("--threads", threads, "Worker threads")->capture_default_str();
  sweep->callback([&] {
    HelpOptions o;
    o.wagner = wagner;
    o.wagner_exempt.insert(exempt.begin(), exempt.end());
    HelpSolver s(read_table(table_path), read_tables(brauer_paths), o);
    auto r = case_sweep(s, order, threads);
    nlohmann::ordered_json j;
    j["unit_order"] = r.unit_order;
    j["per_order"] = nlohmann::ordered_json::array();
    for (const auto& [m, k] : r.per_order) j["per_order"].push_back({m, k});
    j["cases"] = r.cases;
    j["feasible"] = r.feasible;
    j["eliminated"] = r.eliminated();
    std::cout << j.dump(2) << "\n";
    code = r.eliminated() ? kOk : kOpen;
  });

  // verify-pq
  std::string config_path, format = "markdown";
  bool timing = false;
  auto* verify = app.add_subcommand("verify-pq", "Decide the prime graph question for one group");
  verify->add_option("--table", table_path, "Ordinary character table JSON")->required();
  verify->add_option("--config", config_path, "Filter configuration JSON");
  verify->add_option("--out", out_path, "Write the JSON report here");
  verify->add_option("--format", format, "Report on stdout")->check(CLI::IsMember({"markdown", "json"}));
  verify->add_flag("--timing", timing, "Include wall times in the JSON report");
  verify->callback([&] {
    VerifyConfig c;
    if (!config_path.empty()) c = load_config_file(config_path);
    auto t = read_table(table_path);
    auto br = load_brauer_tables(table_path, c.brauer);
    auto r = verify_pq(t, br, c);
    for (const auto& [n, o] : r.per_order) {
      std::cerr << t.name << " order " << n << ": " << status_name(o.status) << " (" << o.seconds << " s)\n";
    }
    std::string json = emit_report_json(r, {.timing = timing});
    if (!out_path.empty()) write_file(out_path, json);
    std::cout << (format == "json" ? json : emit_report_markdown(r));
    code = r.final == "undecided" ? kOpen : kOk;
  });

  // reduce
  std::string facts_path;
  auto* reduce = app.add_subcommand("reduce", "Apply the reduction rules to a fact base");
  reduce->add_option("--facts", facts_path, "Facts JSON")->required();
  reduce->callback([&] {
    auto ds = reduction_infer(load_facts_file(facts_path));
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& d : ds) {
      std::vector<std::string> premises;
      for (const auto& f : d.premises) premises.push_back(f.to_string());
      j.push_back({{"rule", d.rule}, {"conclusion", d.conclusion.to_string()}, {"premises", premises}});
    }
    std::cout << j.dump(2) << "\n";
  });

  // cross-check
  auto* cross = app.add_subcommand("cross-check", "Compare a permutation group with its character table");
  cross->add_option("--table", table_path, "Ordinary character table JSON")->required();
  cross->add_option("--group", group_path, "Permutation generators")->required();
  cross->callback([&] {
    auto r = cross_check(load_generators(group_path), read_table(table_path));
    for (const auto& c : r.checks) std::cout << "ok   " << c << "\n";
    for (const auto& d : r.discrepancies) std::cout << "FAIL " << d << "\n";
    std::cout << (r.consistent ? "consistent" : "inconsistent") << "\n";
    code = r.consistent ? kOk : kInternal;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const TableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const VerifyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ReductionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const PermError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const HelpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return code;
}
