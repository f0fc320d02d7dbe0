#include "crjet/substitution.hpp"

#include <algorithm>

#include "crjet/errors.hpp"
#include "crjet/series_kernels.hpp"

namespace crjet {

SubstitutionPlan::SubstitutionPlan(RingPtr source, RingPtr target,
                                   std::map<int, Series> assignment, bool allow_constant_terms)
    : source_(std::move(source)), target_(std::move(target)), affine_(allow_constant_terms) {
  const int nv = source_->nvars();
  assigned_.resize(static_cast<size_t>(nv));
  passthrough_.assign(static_cast<size_t>(nv), -1);
  min_degree_.assign(static_cast<size_t>(nv), 1);

  for (auto& [var, series] : assignment) {
    if (var < 0 || var >= nv) throw ContractError("substitution assigns an unknown variable");
    if (!series.ring()->same(*target_)) {
      throw ContractError("substituted series for '" + source_->name(var) +
                          "' does not live in the target ring");
    }
    if (!series.constant_term().is_zero() && !affine_) {
      throw ContractError("substituted series for '" + source_->name(var) +
                          "' has a nonzero constant term; use an affine-shift substitution");
    }
    all_assigned_exact_ = all_assigned_exact_ && series.is_exact();
    min_assigned_trusted_ = std::min(min_assigned_trusted_, series.trusted());
    min_degree_[static_cast<size_t>(var)] = std::max(0, series.valuation());
    if (series.is_zero()) min_degree_[static_cast<size_t>(var)] = target_->order() + 1;
    assigned_[static_cast<size_t>(var)] = std::move(series);
  }
  for (int v = 0; v < nv; ++v) {
    if (assigned_[static_cast<size_t>(v)]) continue;
    int idx = target_->index_of(source_->name(v));
    if (idx < 0) {
      throw ContractError("variable '" + source_->name(v) +
                          "' is neither assigned nor present in the target ring");
    }
    passthrough_[static_cast<size_t>(v)] = idx;
  }
}

const Series& SubstitutionPlan::power_product(std::uint64_t active_key, int limit) const {
  if (limit != cache_limit_) {
    cache_.clear();
    cache_limit_ = limit;
  }
  auto it = cache_.find(active_key);
  if (it != cache_.end()) return it->second;

  Series value(target_);
  if (active_key == 0) {
    value = Series::constant(target_, CRat(1));
  } else {
    for (int v = 0; v < source_->nvars(); ++v) {
      int e = source_->exponent(active_key, v);
      if (e == 0 || !assigned_[static_cast<size_t>(v)]) continue;
      const Series& prefix = power_product(active_key - source_->unit_key(v), limit);
      const Series& factor = *assigned_[static_cast<size_t>(v)];
      value = kernels::multiply(prefix, factor, limit);
      value.set_trusted(std::min(prefix.trusted(), factor.trusted()));
      break;
    }
  }
  return cache_.emplace(active_key, std::move(value)).first->second;
}

Series SubstitutionPlan::apply(const Series& f) const { return apply(f, target_->order()); }

Series SubstitutionPlan::apply(const Series& f, int limit) const {
  if (!f.ring()->same(*source_)) {
    throw ContractError("substitution applied to a series from another ring");
  }
  if (affine_ && !(f.is_exact() && all_assigned_exact_)) {
    throw ContractError("affine-shift substitution requires exact polynomial inputs");
  }

  const int nv = source_->nvars();
  Series out(target_);
  MultiIndex shift_exps(static_cast<size_t>(target_->nvars()), 0);
  int max_composite_degree = 0;

  for (const auto& [key, coeff] : f.terms()) {
    std::uint64_t active_key = 0;
    std::fill(shift_exps.begin(), shift_exps.end(), 0);
    int low_bound = 0;
    int composite_degree = 0;
    for (int v = 0; v < nv; ++v) {
      int e = source_->exponent(key, v);
      if (e == 0) continue;
      if (passthrough_[static_cast<size_t>(v)] >= 0) {
        shift_exps[static_cast<size_t>(passthrough_[static_cast<size_t>(v)])] += e;
        low_bound += e;
        composite_degree += e;
      } else {
        active_key += static_cast<std::uint64_t>(e) * source_->unit_key(v);
        low_bound += e * min_degree_[static_cast<size_t>(v)];
        const Series& arg = *assigned_[static_cast<size_t>(v)];
        composite_degree += e * std::max(0, arg.degree());
      }
    }
    max_composite_degree = std::max(max_composite_degree, composite_degree);
    if (low_bound > limit) continue;

    const Series& power = power_product(active_key, limit);
    if (power.is_zero()) continue;
    const std::uint64_t shift_key = target_->pack(shift_exps);
    const int shift_deg = target_->total_degree(shift_key);
    for (const auto& [pkey, pvalue] : power.terms()) {
      if (shift_deg + target_->total_degree(pkey) > limit) continue;
      CRat term;
      term.add_mul(coeff, pvalue);
      out.add_term(shift_key + pkey, term);
    }
  }

  int trusted;
  if (f.is_exact() && all_assigned_exact_) {
    trusted = (max_composite_degree <= limit) ? kExactDegree : limit;
  } else {
    trusted = std::min({f.trusted(), min_assigned_trusted_, limit});
  }
  out.set_trusted(trusted);
  return out;
}

Series substitute(const Series& f, const RingPtr& target,
                  const std::map<std::string, Series>& assignment, bool allow_constant_terms) {
  std::map<int, Series> by_index;
  for (const auto& [name, series] : assignment) {
    int idx = f.ring()->index_of(name);
    if (idx < 0) throw ContractError("substitution names unknown variable '" + name + "'");
    by_index.emplace(idx, series);
  }
  SubstitutionPlan plan(f.ring(), target, std::move(by_index), allow_constant_terms);
  return plan.apply(f);
}

}  // namespace crjet
