#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lg/bits.hpp"

namespace lg {

/// Explicit promise domain Z ⊆ {0,1}^N, shared between the functions defined on it.
class Domain {
 public:
  Domain(int n_bits, std::vector<Input> inputs) : n_bits_(n_bits), inputs_(std::move(inputs)) {
    require(n_bits_ >= 0 && n_bits_ <= kMaxBits, "bit count must be in [0, 64]");
    std::sort(inputs_.begin(), inputs_.end());
    require(std::adjacent_find(inputs_.begin(), inputs_.end()) == inputs_.end(),
            "domain contains a duplicate input");
    const Input outside = n_bits_ == 64 ? 0 : ~((Input{1} << n_bits_) - 1);
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      require((inputs_[i] & outside) == 0, "domain input has bits beyond N");
      position_.emplace(inputs_[i], i);
    }
  }

  /// {0,1}^N; N ≤ 24.
  static std::shared_ptr<const Domain> full(int n_bits) {
    require(n_bits <= 24, "full domain capped at 24 bits");
    std::vector<Input> all(std::size_t{1} << n_bits);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return std::make_shared<const Domain>(n_bits, std::move(all));
  }

  int n_bits() const { return n_bits_; }
  std::size_t size() const { return inputs_.size(); }
  const std::vector<Input>& inputs() const { return inputs_; }
  Input operator[](std::size_t i) const { return inputs_[i]; }

  std::optional<std::size_t> position(Input z) const {
    auto it = position_.find(z);
    if (it == position_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(Input z) const { return position_.count(z) != 0; }

 private:
  int n_bits_;
  std::vector<Input> inputs_;
  std::unordered_map<Input, std::size_t> position_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// f : Z → {0,1} as a truth table, plus an optional certificate oracle table.
class BooleanFunction {
 public:
  BooleanFunction() = default;
  BooleanFunction(DomainPtr domain, std::vector<std::uint8_t> values,
                  std::map<Input, IndexSet> certificates = {})
      : domain_(std::move(domain)), values_(std::move(values)), certs_(std::move(certificates)) {
    require(domain_ != nullptr, "function needs a domain");
    require(values_.size() == domain_->size(), "truth table length differs from domain size");
    for (auto v : values_) require(v <= 1, "truth table values must be 0 or 1");
    for (const auto& [y, cert] : certs_) {
      auto pos = domain_->position(y);
      require(pos.has_value(), "certificate for input outside the domain");
      require(values_[*pos] == 1, "certificate attached to a negative input");
    }
  }

  static BooleanFunction from_predicate(DomainPtr domain, const std::function<bool(Input)>& pred) {
    std::vector<std::uint8_t> values(domain->size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = pred((*domain)[i]) ? 1 : 0;
    return BooleanFunction(std::move(domain), std::move(values));
  }

  int n_bits() const { return domain_->n_bits(); }
  const DomainPtr& domain() const { return domain_; }
  const Domain& inputs() const { return *domain_; }
  const std::vector<std::uint8_t>& values() const { return values_; }
  const std::map<Input, IndexSet>& certificates() const { return certs_; }

  bool contains(Input z) const { return domain_->contains(z); }

  bool value(Input z) const {
    auto pos = domain_->position(z);
    require(pos.has_value(), "input " + to_bitstring(z, n_bits()) + " is outside the domain");
    return values_[*pos] == 1;
  }
  bool value_at(std::size_t i) const { return values_[i] == 1; }

  std::vector<Input> positives() const { return select(1); }
  std::vector<Input> negatives() const { return select(0); }

  bool is_constant() const {
    return std::all_of(values_.begin(), values_.end(), [&](auto v) { return v == values_.front(); });
  }

  std::optional<IndexSet> certificate(Input y) const {
    auto it = certs_.find(y);
    if (it == certs_.end()) return std::nullopt;
    return it->second;
  }

  /// True iff every z in Z agreeing with y on `s` has f(z) = 1.
  bool is_one_certificate(Input y, IndexSet s) const {
    const Input pattern = y & s.mask();
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (((*domain_)[i] & s.mask()) == pattern && values_[i] == 0) return false;
    return true;
  }

  BooleanFunction with_certificates(std::map<Input, IndexSet> certs) const {
    return BooleanFunction(domain_, values_, std::move(certs));
  }

 private:
  std::vector<Input> select(std::uint8_t v) const {
    std::vector<Input> out;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == v) out.push_back((*domain_)[i]);
    return out;
  }

  DomainPtr domain_;
  std::vector<std::uint8_t> values_;
  std::map<Input, IndexSet> certs_;
};

/// Pointwise OR over a common domain.
inline BooleanFunction disjunction(const DomainPtr& domain, const std::vector<const BooleanFunction*>& parts) {
  std::vector<std::uint8_t> values(domain->size(), 0);
  for (const auto* f : parts) {
    require(f->domain() == domain, "disjunction over functions on different domains");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] |= f->values()[i];
  }
  return BooleanFunction(domain, std::move(values));
}

/// Every certified set must force f = 1 on Z. Returns the first offending input, if any.
inline std::optional<Input> find_bad_certificate(const BooleanFunction& f) {
  for (const auto& [y, cert] : f.certificates())
    if (!f.is_one_certificate(y, cert)) return y;
  return std::nullopt;
}

}  // namespace lg
