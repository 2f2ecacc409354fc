#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace lg {

/// An input z in {0,1}^N, bit i holding z_i. N is capped at 64.
using Input = std::uint64_t;

inline constexpr int kMaxBits = 64;

/// Thrown for malformed specifications, cap violations and model errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

/// Sorted set of distinct indices in [N], stored as a bitmask.
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint64_t mask) : mask_(mask) {}
  IndexSet(std::initializer_list<int> indices) {
    for (int i : indices) insert(i);
  }

  static IndexSet from_indices(const std::vector<int>& indices) {
    IndexSet s;
    for (int i : indices) {
      require(i >= 0 && i < kMaxBits, "index out of range: " + std::to_string(i));
      require(!s.contains(i), "duplicate index: " + std::to_string(i));
      s.insert(i);
    }
    return s;
  }

  /// {0, ..., n-1}
  static constexpr IndexSet range(int n) {
    return IndexSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1U; }
  constexpr bool contains(IndexSet other) const { return (other.mask_ & ~mask_) == 0; }
  constexpr bool disjoint(IndexSet other) const { return (other.mask_ & mask_) == 0; }
  /// Largest index plus one, or 0 when empty.
  constexpr int bound() const { return mask_ == 0 ? 0 : 64 - std::countl_zero(mask_); }

  void insert(int i) { mask_ |= std::uint64_t{1} << i; }

  constexpr IndexSet operator|(IndexSet o) const { return IndexSet(mask_ | o.mask_); }
  constexpr IndexSet operator&(IndexSet o) const { return IndexSet(mask_ & o.mask_); }
  constexpr IndexSet operator-(IndexSet o) const { return IndexSet(mask_ & ~o.mask_); }
  constexpr bool operator==(const IndexSet&) const = default;
  constexpr auto operator<=>(const IndexSet&) const = default;

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

 private:
  std::uint64_t mask_ = 0;
};

/// Hamming weight of z restricted to s.
inline int weight_on(Input z, IndexSet s) { return std::popcount(z & s.mask()); }

inline bool bit(Input z, int i) { return (z >> i) & 1U; }

/// Bits fixed on an index subset; `bits` is zero outside `indices`.
struct PartialAssignment {
  IndexSet indices;
  std::uint64_t bits = 0;

  static PartialAssignment of(Input z, IndexSet s) { return {s, z & s.mask()}; }

  bool matches(Input z) const { return (z & indices.mask()) == bits; }
  bool operator==(const PartialAssignment&) const = default;
  auto operator<=>(const PartialAssignment&) const = default;

  /// Serialized as "i:b,i:b" with 1-based indices in ascending order.
  std::string key() const {
    std::string out;
    for (int i : indices.to_vector()) {
      if (!out.empty()) out += ',';
      out += std::to_string(i + 1);
      out += ':';
      out += bit(bits, i) ? '1' : '0';
    }
    return out;
  }

  static PartialAssignment parse(const std::string& key) {
    PartialAssignment a;
    std::size_t pos = 0;
    while (pos < key.size()) {
      auto comma = key.find(',', pos);
      if (comma == std::string::npos) comma = key.size();
      auto item = key.substr(pos, comma - pos);
      auto colon = item.find(':');
      require(colon != std::string::npos && colon + 2 == item.size(),
              "malformed assignment item '" + item + "'");
      int index = 0;
      try {
        index = std::stoi(item.substr(0, colon)) - 1;
      } catch (const std::exception&) {
        throw Error("malformed assignment index in '" + item + "'");
      }
      require(index >= 0 && index < kMaxBits, "assignment index out of range in '" + item + "'");
      require(!a.indices.contains(index), "duplicate index in assignment '" + key + "'");
      char b = item[colon + 1];
      require(b == '0' || b == '1', "assignment bit must be 0 or 1 in '" + item + "'");
      a.indices.insert(index);
      if (b == '1') a.bits |= std::uint64_t{1} << index;
      pos = comma + 1;
    }
    return a;
  }
};

/// N-character bitstring, character i = z_i.
inline std::string to_bitstring(Input z, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (bit(z, i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline Input parse_bitstring(const std::string& s) {
  require(s.size() <= static_cast<std::size_t>(kMaxBits), "bitstring longer than 64 bits");
  Input z = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] == '0' || s[i] == '1', "bitstring contains '" + std::string(1, s[i]) + "'");
    if (s[i] == '1') z |= Input{1} << i;
  }
  return z;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// All k-subsets of {0..n-1} as masks, in increasing numeric order.
inline std::vector<std::uint64_t> subsets_of_size(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k < 0 || k > n) return out;
  if (k == 0) return {0};
  std::uint64_t s = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = n >= 64 ? 0 : std::uint64_t{1} << n;
  while (limit == 0 || s < limit) {
    out.push_back(s);
    std::uint64_t c = s & (~s + 1);
    std::uint64_t r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

}  // namespace lg
