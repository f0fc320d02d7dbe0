#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crjet/series.hpp"

namespace crjet {

// Exact composition of series: source-ring variables are either assigned a
// series in the target ring or passed through to the target variable of the
// same name.
//
// Assigned series must have zero constant term unless the plan is built with
// allow_constant_terms (the affine-shift case, e.g. recentering at a point);
// a constant term would otherwise silently break the truncation-degree
// accounting, so it is a contract error. Affine plans additionally require
// exact polynomial inputs.
//
// A plan caches the power products of the assigned series, so building one
// plan and applying it to many series (all the second derivatives of a
// defining function, say) costs little more than a single application.
class SubstitutionPlan {
 public:
  SubstitutionPlan(RingPtr source, RingPtr target, std::map<int, Series> assignment,
                   bool allow_constant_terms = false);

  Series apply(const Series& f) const;
  // Composition truncated at total degree `limit` in the target ring.
  Series apply(const Series& f, int limit) const;

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }

 private:
  const Series& power_product(std::uint64_t active_key, int limit) const;

  RingPtr source_;
  RingPtr target_;
  std::vector<std::optional<Series>> assigned_;  // indexed by source variable
  std::vector<int> passthrough_;                 // target index, -1 when assigned
  std::vector<int> min_degree_;                  // valuation lower bound per source variable
  bool affine_ = false;
  bool all_assigned_exact_ = true;
  int min_assigned_trusted_ = kExactDegree;

  mutable std::unordered_map<std::uint64_t, Series, KeyHash> cache_;
  mutable int cache_limit_ = -1;
};

// One-shot convenience wrapper; assignment is keyed by source variable name.
Series substitute(const Series& f, const RingPtr& target,
                  const std::map<std::string, Series>& assignment,
                  bool allow_constant_terms = false);

}  // namespace crjet
