#pragma once

#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crjet/rational.hpp"
#include "crjet/ring.hpp"

namespace crjet {

// Trusted degree of a series whose stored coefficients are all exact, i.e. an
// honest polynomial rather than the truncation of something longer.
inline constexpr int kExactDegree = INT_MAX;

struct KeyHash {
  size_t operator()(std::uint64_t key) const noexcept {
    key += 0x9e3779b97f4a7c15ULL;
    key = (key ^ (key >> 30)) * 0xbf58476d1ce4e5b9ULL;
    key = (key ^ (key >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<size_t>(key ^ (key >> 31));
  }
};

// A multivariate power series over CRat, truncated at the ring's total
// degree N. Only nonzero coefficients of total degree <= N are stored.
//
// Every operation is exact on the coefficients it keeps. The `trusted`
// marker tracks through which total degree the stored coefficients agree
// with the untruncated object the series stands for: arithmetic takes the
// minimum, differentiation drops it by one, and kExactDegree means the
// series is a complete polynomial. Values are immutable in spirit: all
// operations return fresh series, so sharing across threads is safe.
class Series {
 public:
  using TermMap = std::unordered_map<std::uint64_t, CRat, KeyHash>;

  explicit Series(RingPtr ring) : ring_(std::move(ring)) {}

  static Series constant(RingPtr ring, CRat value);
  static Series variable(RingPtr ring, int var);
  static Series monomial(RingPtr ring, std::span<const int> exponents, CRat value);

  const RingPtr& ring() const { return ring_; }
  int order() const { return ring_->order(); }

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  // Largest stored total degree (-1 for the zero series).
  int degree() const;
  // Smallest stored total degree (order()+1 for the zero series).
  int valuation() const;

  int trusted() const { return trusted_; }
  bool is_exact() const { return trusted_ == kExactDegree; }
  Series& set_trusted(int degree) {
    trusted_ = degree;
    return *this;
  }

  CRat coefficient(std::span<const int> exponents) const;
  CRat coefficient_key(std::uint64_t key) const;
  CRat constant_term() const { return coefficient_key(0); }

  Series operator-() const;
  Series operator+(const Series& other) const;
  Series operator-(const Series& other) const;
  Series operator*(const Series& other) const;
  Series& operator+=(const Series& other);
  Series& operator-=(const Series& other);

  Series scaled(const CRat& factor) const;
  Series pow(int exponent) const;

  // Multiplicative inverse through degree N; the constant term must be
  // nonzero.
  Series inverse() const;

  // Formal partial derivative. Exact inputs stay exact; otherwise the result
  // is trusted one degree less than the input.
  Series derivative(int var) const;

  // Drops every term of total degree > degree.
  Series truncated(int degree) const;
  Series homogeneous_part(int degree) const;

  // Re-expresses the series in another ring that contains all its variables
  // (matched by name).
  Series transport(const RingPtr& target) const;

  // Sends variable i to variable permutation[i] and conjugates every
  // coefficient.
  Series permuted_conjugate(std::span<const int> permutation) const;

  // Exact evaluation of the stored truncation at a point.
  CRat evaluate(std::span<const CRat> point) const;

  // Structural equality of coefficient maps (the trusted marker is not part
  // of the value).
  bool operator==(const Series& other) const;
  bool operator!=(const Series& other) const { return !(*this == other); }

  const TermMap& terms() const { return terms_; }
  // Terms sorted by (total degree, exponents lexicographic); the canonical
  // order for printing and serialization.
  std::vector<std::pair<MultiIndex, CRat>> sorted_terms() const;

  // Adds value to the coefficient at key, erasing it if the sum is zero.
  void add_term(std::uint64_t key, const CRat& value);
  void set_term(std::uint64_t key, CRat value);
  void prune_zeros();

  std::string str() const;

 private:
  friend class SeriesKernels;

  RingPtr ring_;
  TermMap terms_;
  int trusted_ = kExactDegree;
};

Series operator*(const CRat& scalar, const Series& s);

// Throws ContractError unless both series live in the same ring.
void require_same_ring(const Series& a, const Series& b);

}  // namespace crjet
