#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "lg/bits.hpp"

namespace lg {

class WeightRule;

namespace rule {

struct Constant {
  double value = 0.0;
};

/// Every edge of a DenseLoad path over `size` indices weighs `size` on both sides.
struct DenseLoad {
  int size = 0;
};

/// One edge of the SparseLoad path: loads `index` after `prefix` (the earlier gadget indices)
/// in a gadget of `size` indices; `side` selects w^0 or w^1.
struct SparseLoad {
  int index = 0;
  IndexSet prefix;
  int size = 0;
  int side = 0;
};

struct Table {
  IndexSet support;
  std::map<std::uint64_t, double> entries;  // keyed by z & support
  std::shared_ptr<const WeightRule> fallback;
};

struct Product {
  std::vector<WeightRule> factors;
};

}  // namespace rule

/// Deterministic map (input restricted to a label, side) → nonnegative weight.
/// Immutable; copies share structure.
class WeightRule {
 public:
  using Node = std::variant<rule::Constant, rule::DenseLoad, rule::SparseLoad, rule::Table, rule::Product>;

  WeightRule() : node_(std::make_shared<const Node>(rule::Constant{0.0})) {}

  static WeightRule constant(double v) {
    require(v >= 0.0 && std::isfinite(v), "weight must be a finite nonnegative number");
    return WeightRule(rule::Constant{v});
  }
  static WeightRule dense_load(int size) {
    require(size >= 1, "dense-load size must be positive");
    return WeightRule(rule::DenseLoad{size});
  }
  static WeightRule sparse_load(int index, IndexSet prefix, int size, int side) {
    require(size >= 1 && prefix.size() < size, "sparse-load position exceeds gadget size");
    require(!prefix.contains(index), "sparse-load index already in prefix");
    require(side == 0 || side == 1, "sparse-load side must be 0 or 1");
    return WeightRule(rule::SparseLoad{index, prefix, size, side});
  }
  static WeightRule table(IndexSet support, std::map<std::uint64_t, double> entries, WeightRule fallback) {
    for (const auto& [key, v] : entries) {
      require((key & ~support.mask()) == 0, "table key has bits outside its support");
      require(v >= 0.0 && std::isfinite(v), "table weight must be finite and nonnegative");
    }
    return WeightRule(rule::Table{support, std::move(entries), std::make_shared<const WeightRule>(std::move(fallback))});
  }
  static WeightRule product(std::vector<WeightRule> factors) {
    if (factors.size() == 1) return factors.front();
    return WeightRule(rule::Product{std::move(factors)});
  }

  const Node& node() const { return *node_; }

  bool is_constant() const { return std::holds_alternative<rule::Constant>(*node_); }

  double operator()(Input z) const {
    return std::visit([z](const auto& n) { return eval(n, z); }, *node_);
  }

  /// Indices the value may depend on.
  IndexSet support() const {
    return std::visit(
        [](const auto& n) -> IndexSet {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, rule::SparseLoad>) {
            IndexSet s = n.prefix;
            s.insert(n.index);
            return s;
          } else if constexpr (std::is_same_v<T, rule::Table>) {
            return n.support | n.fallback->support();
          } else if constexpr (std::is_same_v<T, rule::Product>) {
            IndexSet s;
            for (const auto& f : n.factors) s = s | f.support();
            return s;
          } else {
            return IndexSet{};
          }
        },
        *node_);
  }

  /// Multiply by a constant, folding constants where possible.
  WeightRule scaled(double factor) const {
    require(factor >= 0.0 && std::isfinite(factor), "scale factor must be finite and nonnegative");
    if (factor == 1.0) return *this;
    if (const auto* c = std::get_if<rule::Constant>(node_.get())) return constant(c->value * factor);
    if (const auto* p = std::get_if<rule::Product>(node_.get())) {
      auto factors = p->factors;
      if (!factors.empty() && factors.front().is_constant()) {
        factors.front() = factors.front().scaled(factor);
        return product(std::move(factors));
      }
      factors.insert(factors.begin(), constant(factor));
      return product(std::move(factors));
    }
    return product({constant(factor), *this});
  }

  /// Pointwise product with another rule.
  WeightRule times(const WeightRule& other) const {
    if (other.is_constant()) return scaled(std::get<rule::Constant>(other.node()).value);
    if (is_constant()) return other.scaled(std::get<rule::Constant>(*node_).value);
    std::vector<WeightRule> factors;
    auto append = [&](const WeightRule& r) {
      if (const auto* p = std::get_if<rule::Product>(&r.node()))
        factors.insert(factors.end(), p->factors.begin(), p->factors.end());
      else
        factors.push_back(r);
    };
    append(*this);
    append(other);
    return product(std::move(factors));
  }

 private:
  explicit WeightRule(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static double eval(const rule::Constant& n, Input) { return n.value; }
  static double eval(const rule::DenseLoad& n, Input) { return static_cast<double>(n.size); }
  static double eval(const rule::SparseLoad& n, Input z) {
    const double log_term = std::log(static_cast<double>(n.size) + 1.0);
    if (static_cast<int>(bit(z, n.index)) == n.side)
      return 3.0 * (weight_on(z, n.prefix) + 1) * log_term;
    return 3.0 * n.size * log_term;
  }
  static double eval(const rule::Table& n, Input z) {
    auto it = n.entries.find(z & n.support.mask());
    return it != n.entries.end() ? it->second : (*n.fallback)(z);
  }
  static double eval(const rule::Product& n, Input z) {
    double v = 1.0;
    for (const auto& f : n.factors) v *= f(z);
    return v;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace lg
