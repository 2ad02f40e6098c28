#pragma once

#include "pq/filters.hpp"
#include "pq/gk_graph.hpp"
#include "pq/perm.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

class VerifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A known elimination from the literature that HeLP alone does not reproduce.
struct ExternalFact {
  std::string group;  // table name
  std::int64_t order = 0;
  std::string attribution;
};
const std::vector<ExternalFact>& external_fact_registry();
const ExternalFact* find_external_fact(const std::string& group, std::int64_t order);

struct VerifyConfig {
  std::vector<std::int64_t> brauer;          // characteristics of the Brauer tables to load
  FilterConfig filters;
  std::vector<std::int64_t> torsion_orders;  // further orders to report besides the p·q orders
  std::vector<std::int64_t> skip_orders;     // listed as not considered
  bool external_facts = true;
};

// Parses "(1,6,8)" style combinations: 1-based indices, optional "c*" or "-".
std::vector<std::pair<int, std::int64_t>> parse_combination(const std::string& text);

VerifyConfig parse_config(const std::string& json_text);
VerifyConfig load_config_file(const std::string& path);
std::string config_to_json(const VerifyConfig& c);

// <dir>/<stem>.mod<p>.json next to the ordinary table file.
std::vector<CharacterTable> load_brauer_tables(const std::string& table_path, const std::vector<std::int64_t>& primes);

enum class OrderStatus { TrivialOnly, NonTrivial, Eliminated, EliminatedExternal, Survivors };
std::string status_name(OrderStatus s);

struct OrderReport {
  std::int64_t order = 0;
  std::optional<PrimePair> pair;  // set for the p·q orders of non-adjacent primes
  OrderVerdict verdict;
  OrderStatus status = OrderStatus::Survivors;
  std::vector<std::string> class_functions;
  std::optional<ExternalFact> external;
  double seconds = 0;
};

struct VerificationReport {
  std::string group;
  PrimeGraph pi;
  std::set<std::int64_t> element_orders;
  VerifyConfig config;
  std::vector<std::string> brauer_tables;
  std::map<std::int64_t, OrderReport> per_order;
  std::vector<ExternalFact> external_facts_used;
  std::vector<PrimePair> open;
  std::string final;  // verified | verified-with-external-facts | undecided
};

// Validates the table, computes Π(G), runs eliminate_order on every p·q
// with p, q non-adjacent and on the configured torsion orders, then applies
// registered external facts to the pairs left open.
VerificationReport verify_pq(const CharacterTable& table, const std::vector<CharacterTable>& brauer,
                             const VerifyConfig& config);

struct ConsistencyReport {
  bool consistent = true;
  std::vector<std::string> discrepancies;
  std::vector<std::string> checks;
};

// Compares the permutation group with the ordinary table: group order,
// class sizes, and the number of elements of each order.
ConsistencyReport cross_check(const PermutationGroup& group, const CharacterTable& table);

struct ReportOptions {
  bool timing = false;  // wall times break byte-identical output
};
std::string emit_report_json(const VerificationReport& r, ReportOptions options = {});
// One row in the layout of the landscape table, then per-order details.
std::string emit_report_markdown(const VerificationReport& r);
// The landscape-table row alone: name, table, and the six order columns.
std::vector<std::string> landscape_row(const VerificationReport& r);

std::string solutions_to_json(const SolutionSet& s, const CharacterTable& t);

}  // namespace pq
