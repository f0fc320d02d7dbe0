#include "crjet/series.hpp"

#include <algorithm>
#include <sstream>

#include "crjet/errors.hpp"
#include "crjet/series_kernels.hpp"

namespace crjet {

namespace {

int combine_trusted(const Series& a, const Series& b) {
  return std::min(a.trusted(), b.trusted());
}

int multiply_trusted(const Series& a, const Series& b) {
  const int n = a.order();
  if (a.is_exact() && b.is_exact()) {
    if (a.is_zero() || b.is_zero() || a.degree() + b.degree() <= n) return kExactDegree;
    return n;
  }
  return std::min({a.trusted(), b.trusted(), n});
}

}  // namespace

void require_same_ring(const Series& a, const Series& b) {
  if (a.ring().get() == b.ring().get()) return;
  if (!a.ring()->same(*b.ring())) {
    throw ContractError("series over different rings cannot be combined");
  }
}

Series Series::constant(RingPtr ring, CRat value) {
  Series s(std::move(ring));
  if (!value.is_zero()) s.terms_.emplace(0, std::move(value));
  return s;
}

Series Series::variable(RingPtr ring, int var) {
  if (var < 0 || var >= ring->nvars()) throw ContractError("variable index out of range");
  Series s(ring);
  s.terms_.emplace(ring->unit_key(var), CRat(1));
  return s;
}

Series Series::monomial(RingPtr ring, std::span<const int> exponents, CRat value) {
  std::uint64_t key = ring->pack(exponents);
  if (ring->total_degree(key) > ring->order()) {
    throw ContractError("monomial degree exceeds the ring truncation order");
  }
  Series s(std::move(ring));
  if (!value.is_zero()) s.terms_.emplace(key, std::move(value));
  return s;
}

int Series::degree() const {
  int deg = -1;
  for (const auto& [key, value] : terms_) deg = std::max(deg, ring_->total_degree(key));
  return deg;
}

int Series::valuation() const {
  int val = order() + 1;
  for (const auto& [key, value] : terms_) val = std::min(val, ring_->total_degree(key));
  return val;
}

CRat Series::coefficient(std::span<const int> exponents) const {
  return coefficient_key(ring_->pack(exponents));
}

CRat Series::coefficient_key(std::uint64_t key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? CRat() : it->second;
}

Series Series::operator-() const {
  Series out(ring_);
  out.trusted_ = trusted_;
  for (const auto& [key, value] : terms_) out.terms_.emplace(key, -value);
  return out;
}

Series Series::operator+(const Series& other) const {
  Series out = *this;
  out += other;
  return out;
}

Series Series::operator-(const Series& other) const {
  Series out = *this;
  out -= other;
  return out;
}

Series& Series::operator+=(const Series& other) {
  require_same_ring(*this, other);
  trusted_ = combine_trusted(*this, other);
  for (const auto& [key, value] : other.terms_) add_term(key, value);
  return *this;
}

Series& Series::operator-=(const Series& other) {
  require_same_ring(*this, other);
  trusted_ = combine_trusted(*this, other);
  for (const auto& [key, value] : other.terms_) add_term(key, -value);
  return *this;
}

Series Series::operator*(const Series& other) const {
  require_same_ring(*this, other);
  Series out = kernels::multiply(*this, other, order());
  out.set_trusted(multiply_trusted(*this, other));
  return out;
}

Series Series::scaled(const CRat& factor) const {
  Series out(ring_);
  out.trusted_ = trusted_;
  if (factor.is_zero()) return out;
  for (const auto& [key, value] : terms_) out.terms_.emplace(key, factor * value);
  return out;
}

Series operator*(const CRat& scalar, const Series& s) { return s.scaled(scalar); }

Series Series::pow(int exponent) const {
  if (exponent < 0) throw ContractError("series powers must have non-negative exponents");
  Series out = Series::constant(ring_, CRat(1));
  for (int k = 0; k < exponent; ++k) out = out * *this;
  return out;
}

Series Series::inverse() const {
  CRat c = constant_term();
  if (c.is_zero()) {
    throw BadCoordinatesError("cannot invert a series with zero constant term");
  }
  if (term_count() == 1 && terms_.count(0) == 1) {
    Series out = Series::constant(ring_, CRat(1) / c);
    out.trusted_ = trusted_;
    return out;
  }
  // 1/u = (1/c) * sum_k t^k with t = 1 - u/c, val(t) >= 1.
  Series t = Series::constant(ring_, CRat(1)) - scaled(CRat(1) / c);
  Series out = Series::constant(ring_, CRat(1));
  for (int k = 0; k < order(); ++k) {
    out = out * t;
    out.add_term(0, CRat(1));
  }
  out = out.scaled(CRat(1) / c);
  out.set_trusted(std::min(trusted_, order()));
  return out;
}

Series Series::derivative(int var) const {
  if (var < 0 || var >= ring_->nvars()) {
    throw ContractError("unknown variable in differentiation");
  }
  Series out(ring_);
  const std::uint64_t unit = ring_->unit_key(var);
  for (const auto& [key, value] : terms_) {
    int e = ring_->exponent(key, var);
    if (e == 0) continue;
    out.terms_.emplace(key - unit, CRat(Rational(e)) * value);
  }
  out.trusted_ = is_exact() ? kExactDegree : trusted_ - 1;
  return out;
}

Series Series::truncated(int degree) const {
  Series out(ring_);
  for (const auto& [key, value] : terms_) {
    if (ring_->total_degree(key) <= degree) out.terms_.emplace(key, value);
  }
  out.trusted_ = (is_exact() && this->degree() <= degree) ? kExactDegree
                                                          : std::min(trusted_, degree);
  return out;
}

Series Series::homogeneous_part(int degree) const {
  Series out(ring_);
  for (const auto& [key, value] : terms_) {
    if (ring_->total_degree(key) == degree) out.terms_.emplace(key, value);
  }
  return out;
}

Series Series::transport(const RingPtr& target) const {
  if (target.get() == ring_.get() || target->same(*ring_)) {
    Series out = *this;
    out.ring_ = target;
    return out;
  }
  std::vector<int> where(static_cast<size_t>(ring_->nvars()));
  for (int i = 0; i < ring_->nvars(); ++i) {
    int j = target->index_of(ring_->name(i));
    if (j < 0) {
      throw ContractError("target ring lacks variable '" + ring_->name(i) + "'");
    }
    where[static_cast<size_t>(i)] = j;
  }
  if (target->order() < ring_->order() && degree() > target->order()) {
    throw ContractError("transport would truncate stored terms");
  }
  Series out(target);
  out.trusted_ = std::min(trusted_, target->order() == ring_->order()
                                        ? trusted_
                                        : std::min(trusted_, target->order()));
  MultiIndex exps(static_cast<size_t>(target->nvars()), 0);
  for (const auto& [key, value] : terms_) {
    std::fill(exps.begin(), exps.end(), 0);
    for (int i = 0; i < ring_->nvars(); ++i) {
      exps[static_cast<size_t>(where[static_cast<size_t>(i)])] = ring_->exponent(key, i);
    }
    out.terms_.emplace(target->pack(exps), value);
  }
  return out;
}

Series Series::permuted_conjugate(std::span<const int> permutation) const {
  if (static_cast<int>(permutation.size()) != ring_->nvars()) {
    throw ContractError("permutation length does not match the ring");
  }
  Series out(ring_);
  out.trusted_ = trusted_;
  MultiIndex exps(static_cast<size_t>(ring_->nvars()), 0);
  for (const auto& [key, value] : terms_) {
    std::fill(exps.begin(), exps.end(), 0);
    for (int i = 0; i < ring_->nvars(); ++i) {
      exps[static_cast<size_t>(permutation[static_cast<size_t>(i)])] = ring_->exponent(key, i);
    }
    out.terms_.emplace(ring_->pack(exps), value.conj());
  }
  return out;
}

CRat Series::evaluate(std::span<const CRat> point) const {
  if (static_cast<int>(point.size()) != ring_->nvars()) {
    throw ContractError("evaluation point has the wrong dimension");
  }
  std::vector<int> max_exp(static_cast<size_t>(ring_->nvars()), 0);
  for (const auto& [key, value] : terms_) {
    for (int i = 0; i < ring_->nvars(); ++i) {
      max_exp[static_cast<size_t>(i)] = std::max(max_exp[static_cast<size_t>(i)],
                                                 ring_->exponent(key, i));
    }
  }
  std::vector<std::vector<CRat>> pows(static_cast<size_t>(ring_->nvars()));
  for (size_t i = 0; i < pows.size(); ++i) {
    pows[i].resize(static_cast<size_t>(max_exp[i]) + 1);
    pows[i][0] = CRat(1);
    for (int e = 1; e <= max_exp[i]; ++e) pows[i][static_cast<size_t>(e)] =
        pows[i][static_cast<size_t>(e - 1)] * point[i];
  }
  CRat total;
  for (const auto& [key, value] : terms_) {
    CRat term = value;
    for (int i = 0; i < ring_->nvars(); ++i) {
      int e = ring_->exponent(key, i);
      if (e > 0) term *= pows[static_cast<size_t>(i)][static_cast<size_t>(e)];
    }
    total += term;
  }
  return total;
}

bool Series::operator==(const Series& other) const {
  require_same_ring(*this, other);
  if (terms_.size() != other.terms_.size()) return false;
  for (const auto& [key, value] : terms_) {
    auto it = other.terms_.find(key);
    if (it == other.terms_.end() || !(it->second == value)) return false;
  }
  return true;
}

std::vector<std::pair<MultiIndex, CRat>> Series::sorted_terms() const {
  std::vector<std::pair<MultiIndex, CRat>> out;
  out.reserve(terms_.size());
  for (const auto& [key, value] : terms_) out.emplace_back(ring_->unpack(key), value);
  std::sort(out.begin(), out.end(), [this](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int e : a.first) da += e;
    for (int e : b.first) db += e;
    if (da != db) return da < db;
    return a.first < b.first;
  });
  return out;
}

void Series::add_term(std::uint64_t key, const CRat& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Series::set_term(std::uint64_t key, CRat value) {
  if (value.is_zero()) {
    terms_.erase(key);
  } else {
    terms_[key] = std::move(value);
  }
}

void Series::prune_zeros() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero()) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

std::string Series::str() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [exps, value] : sorted_terms()) {
    if (!first) out << " + ";
    first = false;
    out << "(" << value.str() << ")";
    for (int i = 0; i < ring_->nvars(); ++i) {
      int e = exps[static_cast<size_t>(i)];
      if (e == 0) continue;
      out << "*" << ring_->name(i);
      if (e > 1) out << "^" << e;
    }
  }
  return out.str();
}

}  // namespace crjet
