#include "crjet/ring.hpp"

#include <algorithm>
#include <set>

#include "crjet/errors.hpp"

namespace crjet {

RingPtr Ring::make(std::vector<std::string> names, int order) {
  if (names.empty()) throw ContractError("a series ring needs at least one variable");
  if (order < 2) throw ContractError("truncation order must be at least 2");
  std::set<std::string> distinct(names.begin(), names.end());
  if (distinct.size() != names.size()) throw ContractError("ring variable names must be distinct");

  int bits = std::min<int>(32, 64 / static_cast<int>(names.size()));
  std::uint64_t field_max = (std::uint64_t{1} << bits) - 1;
  // Keys of two in-range monomials must add without carrying between fields.
  if (static_cast<std::uint64_t>(2 * order) > field_max) {
    throw ContractError("truncation order " + std::to_string(order) + " is too large for " +
                        std::to_string(names.size()) + " variables");
  }
  return RingPtr(new Ring(std::move(names), order, bits));
}

Ring::Ring(std::vector<std::string> names, int order, int bits)
    : names_(std::move(names)),
      order_(order),
      bits_(bits),
      field_mask_((std::uint64_t{1} << bits) - 1) {}

int Ring::index_of(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::uint64_t Ring::pack(std::span<const int> exponents) const {
  if (static_cast<int>(exponents.size()) != nvars()) {
    throw ContractError("multi-index length does not match the ring's variable count");
  }
  std::uint64_t key = 0;
  for (int i = nvars() - 1; i >= 0; --i) {
    int e = exponents[static_cast<size_t>(i)];
    if (e < 0 || static_cast<std::uint64_t>(e) > field_mask_) {
      throw ContractError("exponent out of range for ring packing");
    }
    key = (key << bits_) | static_cast<std::uint64_t>(e);
  }
  return key;
}

MultiIndex Ring::unpack(std::uint64_t key) const {
  MultiIndex out(static_cast<size_t>(nvars()));
  for (int i = 0; i < nvars(); ++i) {
    out[static_cast<size_t>(i)] = static_cast<int>(key & field_mask_);
    key >>= bits_;
  }
  return out;
}

int Ring::total_degree(std::uint64_t key) const {
  int deg = 0;
  for (int i = 0; i < nvars(); ++i) {
    deg += static_cast<int>(key & field_mask_);
    key >>= bits_;
  }
  return deg;
}

}  // namespace crjet
