#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pq {

class PermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public PermError {
 public:
  using PermError::PermError;
};

// Permutation of {1..degree}, stored as a full image array.
class Permutation {
 public:
  explicit Permutation(std::uint32_t degree = 1);
  // images[i] is the image of point i + 1, 1-based values.
  static Permutation from_images(const std::vector<std::uint32_t>& images);
  // Disjoint cycles over 1-based points; throws on repeated points.
  static Permutation from_cycles(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& cycles);

  std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
  // Image of the 1-based point x.
  std::uint32_t operator()(std::uint32_t x) const { return img_[x - 1] + 1; }
  bool is_identity() const;

  // Left-to-right product: x^(a*b) = (x^a)^b.
  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  Permutation extended(std::uint32_t degree) const;

  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

  std::size_t hash() const;

 private:
  std::vector<std::uint32_t> img_;  // 0-based images
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const { return p.hash(); }
};

struct PermutationGroup {
  std::string name;
  std::vector<Permutation> generators;
  std::optional<std::uint64_t> declared_order;
  std::uint32_t degree = 1;
};

struct Spectrum {
  std::set<std::uint64_t> orders;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t group_order = 0;
};

inline constexpr std::uint64_t kDefaultElementCap = 1000000;

// Parses the generator file format: disjoint-cycle permutations separated by
// ';' or newlines, '#' comments, optional "order=N" header.
PermutationGroup parse_generators(const std::string& text, const std::string& name = "");
PermutationGroup load_generators(const std::string& path);

std::uint64_t element_order(const Permutation& g);

// All elements, by breadth-first closure. Throws CapExceeded once more than
// cap elements are found, and PermError if a declared order is contradicted.
std::vector<Permutation> enumerate_elements(const PermutationGroup& g, std::uint64_t cap = kDefaultElementCap);

Spectrum spectrum(const PermutationGroup& g, std::uint64_t cap = kDefaultElementCap);

}  // namespace pq
