#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crjet {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// A multi-index is a sequence of non-negative exponents, one per ring
// variable; its total degree is the sum of the entries.
using MultiIndex = std::vector<int>;

// The ambient ring of a truncated series: an ordered list of variable names
// plus the total-degree truncation order N (N >= 2 so second derivatives stay
// representable).
//
// Exponent vectors are packed into a single 64-bit key, one bit field per
// variable, so that monomial products are key additions. The field width is
// chosen from the variable count; construction fails if 2N would overflow a
// field, which bounds the ring at 12 variables for the default orders used
// here.
class Ring {
 public:
  static RingPtr make(std::vector<std::string> names, int order);

  int nvars() const { return static_cast<int>(names_.size()); }
  int order() const { return order_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int var) const { return names_[static_cast<size_t>(var)]; }
  // Index of a variable name, or -1 when absent.
  int index_of(std::string_view name) const;

  bool same(const Ring& other) const { return order_ == other.order_ && names_ == other.names_; }

  std::uint64_t pack(std::span<const int> exponents) const;
  MultiIndex unpack(std::uint64_t key) const;
  int exponent(std::uint64_t key, int var) const {
    return static_cast<int>((key >> (bits_ * var)) & field_mask_);
  }
  int total_degree(std::uint64_t key) const;
  std::uint64_t unit_key(int var) const { return std::uint64_t{1} << (bits_ * var); }

 private:
  Ring(std::vector<std::string> names, int order, int bits);

  std::vector<std::string> names_;
  int order_;
  int bits_;
  std::uint64_t field_mask_;
};

}  // namespace crjet
