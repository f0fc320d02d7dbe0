#include "crjet/series_kernels.hpp"

#include <algorithm>
#include <atomic>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crjet::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Pairs of terms whose product survives truncation, used to decide whether a
// product is worth distributing across threads.
constexpr size_t kParallelWorkThreshold = 1u << 15;

struct FlatTerms {
  std::vector<std::uint64_t> keys;
  std::vector<const CRat*> coeffs;
  std::vector<int> degs;
};

// Terms sorted by ascending total degree so the inner product loop can stop
// at the truncation boundary.
FlatTerms flatten(const Series& s) {
  const Ring& ring = *s.ring();
  FlatTerms flat;
  flat.keys.reserve(s.term_count());
  std::vector<std::pair<int, const std::pair<const std::uint64_t, CRat>*>> order;
  order.reserve(s.term_count());
  for (const auto& term : s.terms()) {
    order.emplace_back(ring.total_degree(term.first), &term);
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [deg, term] : order) {
    flat.keys.push_back(term->first);
    flat.coeffs.push_back(&term->second);
    flat.degs.push_back(deg);
  }
  return flat;
}

void accumulate_range(const FlatTerms& fa, const FlatTerms& fb, size_t begin, size_t end,
                      int limit, Series::TermMap& acc) {
  const size_t nb = fb.keys.size();
  for (size_t ia = begin; ia < end; ++ia) {
    const int da = fa.degs[ia];
    const std::uint64_t ka = fa.keys[ia];
    const CRat& ca = *fa.coeffs[ia];
    for (size_t ib = 0; ib < nb; ++ib) {
      if (da + fb.degs[ib] > limit) break;
      auto [it, inserted] = acc.try_emplace(ka + fb.keys[ib]);
      it->second.add_mul(ca, *fb.coeffs[ib]);
    }
  }
}

Series finish(const Series& a, Series::TermMap acc) {
  Series out(a.ring());
  for (auto& [key, value] : acc) {
    if (!value.is_zero()) out.set_term(key, std::move(value));
  }
  return out;
}

}  // namespace

Series serial_multiply(const Series& a, const Series& b, int limit) {
  Series out(a.ring());
  if (a.is_zero() || b.is_zero()) return out;
  FlatTerms fa = flatten(a);
  FlatTerms fb = flatten(b);
  Series::TermMap acc;
  acc.reserve(a.term_count() + b.term_count());
  accumulate_range(fa, fb, 0, fa.keys.size(), limit, acc);
  return finish(a, std::move(acc));
}

Series parallel_multiply(const Series& a, const Series& b, int limit) {
#ifdef _OPENMP
  if (a.is_zero() || b.is_zero()) return Series(a.ring());
  const int threads = omp_get_max_threads();
  if (threads <= 1 || a.term_count() * b.term_count() < kParallelWorkThreshold) {
    return serial_multiply(a, b, limit);
  }
  FlatTerms fa = flatten(a);
  FlatTerms fb = flatten(b);
  const size_t na = fa.keys.size();
  std::vector<Series::TermMap> partial(static_cast<size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    const int nt = omp_get_num_threads();
    const size_t chunk = (na + static_cast<size_t>(nt) - 1) / static_cast<size_t>(nt);
    const size_t begin = std::min(na, chunk * static_cast<size_t>(t));
    const size_t end = std::min(na, begin + chunk);
    accumulate_range(fa, fb, begin, end, limit, partial[static_cast<size_t>(t)]);
  }
  Series::TermMap acc = std::move(partial[0]);
  for (size_t t = 1; t < partial.size(); ++t) {
    for (auto& [key, value] : partial[t]) {
      auto [it, inserted] = acc.try_emplace(key, std::move(value));
      if (!inserted) it->second += value;
    }
  }
  return finish(a, std::move(acc));
#else
  return serial_multiply(a, b, limit);
#endif
}

Series multiply(const Series& a, const Series& b, int limit) {
  if (g_parallel.load(std::memory_order_relaxed)) return parallel_multiply(a, b, limit);
  return serial_multiply(a, b, limit);
}

void set_parallel_enabled(bool enabled) { g_parallel.store(enabled, std::memory_order_relaxed); }

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace crjet::kernels
