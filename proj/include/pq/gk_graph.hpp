#pragma once

#include "pq/char_table.hpp"
#include "pq/perm.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

using PrimePair = std::pair<std::int64_t, std::int64_t>;  // first < second

struct PrimeGraph {
  std::set<std::int64_t> vertices;
  std::set<PrimePair> edges;

  bool adjacent(std::int64_t p, std::int64_t q) const;
  // Unordered pairs of distinct vertices that are not joined.
  std::vector<PrimePair> non_edges() const;
  bool complete() const { return non_edges().empty(); }
  std::string to_string() const;
  friend bool operator==(const PrimeGraph&, const PrimeGraph&) = default;
};

// Vertices are the primes dividing an element order; {p,q} is an edge iff
// p·q divides some element order.
PrimeGraph graph_from_spectrum(const std::set<std::int64_t>& orders);
PrimeGraph graph_from_spectrum(const Spectrum& s);
// Reads the element orders off the classes; Brauer tables are rejected.
PrimeGraph graph_from_table(const CharacterTable& t);

struct GammaVerdict {
  bool verified = false;
  std::vector<PrimePair> open;
};

// eliminated maps p·q to whether units of that order were excluded. Every
// non-edge must be covered; std::invalid_argument otherwise.
GammaVerdict gamma_verdict(const PrimeGraph& pi, const std::map<std::int64_t, bool>& eliminated);

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FactKind {
  Group,
  AlmostSimple,
  Primes,
  PiComplete,
  PqVerified,
  PairVerified,
  Quotient,
  AlmostSimpleImages,
  DirectProductQuotient,
};

// One declared or derived statement about groups named by id.
//   quotient:                group/normal = quotient
//   almost_simple_images:    members are every almost simple image of group
//   direct_product_quotient: group has a quotient that is members[0] x members[1]
//   pair_verified:           V(Z group) has units of order p·q iff group has elements of that order
struct ReductionFact {
  FactKind kind = FactKind::Group;
  std::string group;
  std::string normal;
  std::string quotient;
  std::vector<std::string> members;
  std::vector<std::int64_t> primes;
  PrimePair pair{0, 0};

  std::string to_string() const;
  friend auto operator<=>(const ReductionFact&, const ReductionFact&) = default;
};

std::string kind_name(FactKind k);
std::vector<ReductionFact> parse_facts(const std::string& json_text);
std::vector<ReductionFact> load_facts_file(const std::string& path);

struct Derivation {
  std::string rule;  // R1, R2, R2p, R3
  ReductionFact conclusion;
  std::vector<ReductionFact> premises;
};

// Forward chaining to a fixpoint. Only new facts are returned, sorted by
// conclusion. Throws ReductionError on a reference to an undeclared group.
//   R1  almost_simple_images(G, L), pq_verified(X) for all X in L  => pq_verified(G)
//   R2  quotient(G, N, Q), pi_complete(N), pq_verified(Q)          => pq_verified(G)
//   R2p quotient(G, N, Q), pq_verified(Q), primes(G), primes(N)    => pair_verified(G, p, q)
//       for p != q in π(G) with one of them outside π(N)
//   R3  direct_product_quotient(G, [A, B]), almost_simple(A), almost_simple(B) => pq_verified(G)
std::vector<Derivation> reduction_infer(const std::vector<ReductionFact>& facts);

}  // namespace pq
