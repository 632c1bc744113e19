#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "dppselect/errors.hpp"

namespace dppsel {

// Submodel indicator over p predictors; bit i set means predictor i is in.
// Predictor 0 is the least significant bit, so masks order naturally as
// integers (used for deterministic tie-breaking and table indexing).
class SubsetMask {
 public:
  SubsetMask() = default;

  explicit SubsetMask(int p, std::uint64_t bits = 0) : p_(p), bits_(bits) {
    if (p < 0 || p > 64) throw TooLarge("mask dimension", p, 64);
    if (p < 64 && (bits >> p) != 0)
      throw DimensionMismatch("mask bits exceed dimension " + std::to_string(p));
  }

  static SubsetMask full(int p) {
    return SubsetMask(p, p == 64 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << p) - 1);
  }

  static SubsetMask of(int p, std::initializer_list<int> indices) {
    SubsetMask m(p);
    for (int i : indices) m.set(i);
    return m;
  }

  int dim() const { return p_; }
  int count() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  bool contains(int i) const {
    return i >= 0 && i < p_ && ((bits_ >> i) & 1u) != 0;
  }

  SubsetMask& set(int i, bool on = true) {
    if (i < 0 || i >= p_)
      throw DimensionMismatch("mask index " + std::to_string(i) +
                              " out of range for dimension " + std::to_string(p_));
    if (on)
      bits_ |= std::uint64_t{1} << i;
    else
      bits_ &= ~(std::uint64_t{1} << i);
    return *this;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int i = 0; i < p_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  bool is_subset_of(const SubsetMask& other) const {
    return p_ == other.p_ && (bits_ & ~other.bits_) == 0;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;

 private:
  int p_ = 0;
  std::uint64_t bits_ = 0;
};

}  // namespace dppsel
