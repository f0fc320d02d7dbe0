#pragma once

// Shared test utilities: deterministic random series and a corpus of random
// strictly pseudoconvex polynomial hypersurfaces in graph form.

#include <random>
#include <vector>

#include "crjet/hypersurface.hpp"
#include "crjet/series.hpp"

namespace crjet::testing {

inline Series random_series(const RingPtr& ring, std::mt19937_64& rng, int max_terms,
                            int max_degree = -1) {
  if (max_degree < 0) max_degree = ring->order();
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  std::uniform_int_distribution<int> deg(0, max_degree);
  Series out(ring);
  for (int t = 0; t < max_terms; ++t) {
    int d = deg(rng);
    MultiIndex exps(static_cast<size_t>(ring->nvars()), 0);
    for (int rem = d; rem > 0; --rem) {
      std::uniform_int_distribution<int> pick(0, ring->nvars() - 1);
      ++exps[static_cast<size_t>(pick(rng))];
    }
    out.add_term(ring->pack(exps),
                 CRat(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng))));
  }
  return out;
}

struct CorpusOptions {
  int n = 1;
  int order = 8;
  int max_degree = 4;   // total degree of added monomial bundles
  int bundles = 3;      // number of random real monomial bundles
  int coeff_bound = 10; // numerators and denominators up to this
  bool allow_u = false; // allow Re w dependence in the graph function
  bool hermitian_tweak = false;
};

// Im w = sum |z_j|^2 (+ optional small Hermitian tweak) + random real bundles
// c*m + conj(c)*swap(m) of total degree in [2, max_degree]. Degree-2 pieces
// of bidegree (1,1) in (z, zb) are excluded so the Levi form at 0 stays the
// identity (plus the controlled tweak): every corpus surface is strictly
// pseudoconvex, hence Levi-nondegenerate, at the marked point.
inline Hypersurface random_surface(std::mt19937_64& rng, const CorpusOptions& opts) {
  const int n = opts.n;
  RingPtr gring = graph_ring(n, opts.order);
  const int iu = 2 * n;

  Series phi(gring);
  for (int j = 0; j < n; ++j) {
    phi += Series::variable(gring, j) * Series::variable(gring, n + j);
  }

  std::uniform_int_distribution<int> num(-opts.coeff_bound, opts.coeff_bound);
  std::uniform_int_distribution<int> den(1, opts.coeff_bound);
  std::uniform_int_distribution<int> deg(2, opts.max_degree);
  std::uniform_int_distribution<int> var(0, opts.allow_u ? 2 * n : 2 * n - 1);

  if (opts.hermitian_tweak && n > 1) {
    // One off-diagonal pair, kept small enough for diagonal dominance.
    std::uniform_int_distribution<int> pick(0, n - 1);
    int j = pick(rng), k = pick(rng);
    if (j != k) {
      CRat eps(make_rational(num(rng) >= 0 ? 1 : -1, 4 * n), make_rational(1, 4 * n));
      phi += eps * (Series::variable(gring, j) * Series::variable(gring, n + k));
      phi += eps.conj() * (Series::variable(gring, k) * Series::variable(gring, n + j));
    }
  }

  auto conj_index = [&](const MultiIndex& m) {
    MultiIndex out(m.size(), 0);
    for (int j = 0; j < n; ++j) {
      out[static_cast<size_t>(j)] = m[static_cast<size_t>(n + j)];
      out[static_cast<size_t>(n + j)] = m[static_cast<size_t>(j)];
    }
    out[static_cast<size_t>(iu)] = m[static_cast<size_t>(iu)];
    return out;
  };

  for (int b = 0; b < opts.bundles; ++b) {
    int d = deg(rng);
    MultiIndex exps(static_cast<size_t>(gring->nvars()), 0);
    for (int rem = d; rem > 0; --rem) ++exps[static_cast<size_t>(var(rng))];
    // Keep the Levi form at 0 under control: no pure (1,1) quadratics.
    int zdeg = 0, zbdeg = 0;
    for (int j = 0; j < n; ++j) {
      zdeg += exps[static_cast<size_t>(j)];
      zbdeg += exps[static_cast<size_t>(n + j)];
    }
    if (d == 2 && zdeg == 1 && zbdeg == 1) {
      --b;
      continue;
    }
    int p = num(rng);
    if (p == 0) p = 1;
    CRat c(make_rational(p, den(rng)), make_rational(num(rng), den(rng)));
    MultiIndex partner = conj_index(exps);
    if (partner == exps) {
      c.im = 0;  // self-paired monomials need real coefficients
      phi += Series::monomial(gring, exps, c);
    } else {
      phi += Series::monomial(gring, exps, c);
      phi += Series::monomial(gring, partner, c.conj());
    }
  }
  return Hypersurface::from_graph_form(n, phi);
}

inline Hypersurface quadric(int n, int order) {
  RingPtr gring = graph_ring(n, order);
  Series phi(gring);
  for (int j = 0; j < n; ++j) {
    phi += Series::variable(gring, j) * Series::variable(gring, n + j);
  }
  return Hypersurface::from_graph_form(n, phi);
}

// Im w = |z|^2 + |z|^4 in C^2.
inline Hypersurface quartic_example(int order) {
  RingPtr gring = graph_ring(1, order);
  Series zzb = Series::variable(gring, 0) * Series::variable(gring, 1);
  return Hypersurface::from_graph_form(1, zzb + zzb * zzb);
}

// True when every stored coefficient of total degree <= d vanishes.
inline bool zero_through(const Series& s, int d) {
  for (const auto& [key, value] : s.terms()) {
    if (s.ring()->total_degree(key) <= d) return false;
  }
  return true;
}

}  // namespace crjet::testing
