#include "pq/perm.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace pq {

Permutation::Permutation(std::uint32_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0u);
}

Permutation Permutation::from_images(const std::vector<std::uint32_t>& images) {
  Permutation p(static_cast<std::uint32_t>(images.size()));
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::uint32_t x = images[i];
    if (x < 1 || x > images.size() || seen[x - 1]) throw PermError("image array is not a bijection");
    seen[x - 1] = true;
    p.img_[i] = x - 1;
  }
  return p;
}

Permutation Permutation::from_cycles(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
  Permutation p(degree);
  std::vector<bool> used(degree, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::uint32_t x = cycle[i];
      if (x < 1 || x > degree) throw PermError("cycle point " + std::to_string(x) + " out of range");
      if (used[x - 1]) throw PermError("point " + std::to_string(x) + " repeated: cycles are not disjoint");
      used[x - 1] = true;
      p.img_[x - 1] = cycle[(i + 1) % cycle.size()] - 1;
    }
  }
  return p;
}

bool Permutation::is_identity() const {
  for (std::uint32_t i = 0; i < img_.size(); ++i) {
    if (img_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (rhs.degree() != degree()) throw PermError("degree mismatch in product");
  Permutation out(degree());
  for (std::uint32_t i = 0; i < img_.size(); ++i) out.img_[i] = rhs.img_[img_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out(degree());
  for (std::uint32_t i = 0; i < img_.size(); ++i) out.img_[img_[i]] = i;
  return out;
}

Permutation Permutation::extended(std::uint32_t degree) const {
  if (degree < this->degree()) throw PermError("cannot shrink a permutation");
  Permutation out(degree);
  std::copy(img_.begin(), img_.end(), out.img_.begin());
  return out;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  std::vector<bool> seen(img_.size(), false);
  for (std::uint32_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == i) continue;
    os << '(';
    std::uint32_t x = i;
    bool first = true;
    while (!seen[x]) {
      seen[x] = true;
      if (!first) os << ',';
      os << x + 1;
      first = false;
      x = img_[x];
    }
    os << ')';
  }
  std::string s = os.str();
  return s.empty() ? "()" : s;
}

std::size_t Permutation::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (std::uint32_t x : img_) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::vector<std::uint32_t>> parse_cycles(const std::string& chunk) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < chunk.size() && (chunk[i] == ' ' || chunk[i] == '\t')) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw PermError("malformed cycle notation '" + chunk + "': " + why);
  };
  skip_ws();
  if (i == chunk.size()) fail("empty permutation");
  while (i < chunk.size()) {
    if (chunk[i] != '(') fail("expected '('");
    ++i;
    std::vector<std::uint32_t> cycle;
    skip_ws();
    if (i < chunk.size() && chunk[i] == ')') {
      ++i;
      skip_ws();
      continue;
    }
    while (true) {
      skip_ws();
      if (i >= chunk.size() || chunk[i] < '0' || chunk[i] > '9') fail("expected a point");
      std::uint64_t v = 0;
      while (i < chunk.size() && chunk[i] >= '0' && chunk[i] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(chunk[i] - '0');
        if (v > (1u << 24)) fail("point too large");
        ++i;
      }
      if (v == 0) fail("points are 1-based");
      cycle.push_back(static_cast<std::uint32_t>(v));
      skip_ws();
      if (i >= chunk.size()) fail("unterminated cycle");
      if (chunk[i] == ',') {
        ++i;
        continue;
      }
      if (chunk[i] == ')') {
        ++i;
        break;
      }
      fail("unexpected character");
    }
    cycles.push_back(std::move(cycle));
    skip_ws();
  }
  return cycles;
}

}  // namespace

PermutationGroup parse_generators(const std::string& text, const std::string& name) {
  PermutationGroup g;
  g.name = name;
  std::vector<std::vector<std::vector<std::uint32_t>>> parsed;
  std::uint32_t degree = 1;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      if (g.name.empty()) {
        std::string comment = trim(line.substr(hash + 1));
        g.name = trim(comment.substr(0, comment.find(',')));
      }
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("order", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw PermError("malformed order header '" + line + "'");
      std::string v = trim(line.substr(eq + 1));
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw PermError("malformed order header '" + line + "'");
      }
      g.declared_order = std::stoull(v);
      continue;
    }
    std::size_t start = 0;
    while (start <= line.size()) {
      auto semi = line.find(';', start);
      std::string chunk = trim(line.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
      if (!chunk.empty()) {
        auto cycles = parse_cycles(chunk);
        for (auto& c : cycles) {
          for (auto x : c) degree = std::max(degree, x);
        }
        parsed.push_back(std::move(cycles));
      }
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
  }
  if (parsed.empty()) throw PermError("no generators given");
  for (auto& cycles : parsed) g.generators.push_back(Permutation::from_cycles(degree, cycles));
  g.degree = degree;
  return g;
}

PermutationGroup load_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PermError("cannot open generator file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_generators(ss.str());
}

std::uint64_t element_order(const Permutation& g) {
  std::uint64_t order = 1;
  std::vector<bool> seen(g.degree() + 1, false);
  for (std::uint32_t i = 1; i <= g.degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::uint32_t x = i; !seen[x]; x = g(x)) {
      seen[x] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

std::vector<Permutation> enumerate_elements(const PermutationGroup& g, std::uint64_t cap) {
  if (cap < 1) throw PermError("cap must be positive");
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> out;
  std::deque<std::size_t> queue;
  Permutation id(g.degree);
  seen.insert(id);
  out.push_back(id);
  queue.push_back(0);
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    for (const auto& s : g.generators) {
      Permutation next = out[idx] * s;
      if (!seen.insert(next).second) continue;
      if (out.size() + 1 > cap) {
        throw CapExceeded("group " + g.name + " has more than " + std::to_string(cap) + " elements");
      }
      out.push_back(std::move(next));
      queue.push_back(out.size() - 1);
    }
  }
  if (g.declared_order && *g.declared_order != out.size()) {
    throw PermError("group " + g.name + " declares order " + std::to_string(*g.declared_order) + " but has " +
                    std::to_string(out.size()) + " elements");
  }
  return out;
}

Spectrum spectrum(const PermutationGroup& g, std::uint64_t cap) {
  Spectrum s;
  for (const auto& x : enumerate_elements(g, cap)) {
    std::uint64_t o = element_order(x);
    s.orders.insert(o);
    ++s.counts[o];
    ++s.group_order;
  }
  return s;
}

}  // namespace pq
