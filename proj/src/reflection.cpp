#include "crjet/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "crjet/errors.hpp"
#include "crjet/series_kernels.hpp"

namespace crjet {

namespace {

Cx pow_int(Cx base, int e) {
  Cx out(1.0, 0.0);
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

// In-place complex Gaussian elimination with partial pivoting.
std::vector<Cx> solve_linear(std::vector<std::vector<Cx>> a, std::vector<Cx> b) {
  const size_t n = a.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-14) {
      throw DegenerateConfigurationError("singular linearization in the reflection solve");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t r = col + 1; r < n; ++r) {
      Cx f = a[r][col] / a[col][col];
      if (f == Cx(0.0, 0.0)) continue;
      for (size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Cx> x(n);
  for (size_t row = n; row-- > 0;) {
    Cx acc = b[row];
    for (size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

double max_norm(const std::vector<Cx>& v) {
  double out = 0.0;
  for (const Cx& c : v) out = std::max(out, std::abs(c));
  return out;
}

}  // namespace

double jet_distance(const JetPointC& a, const JetPointC& b) {
  double out = std::abs(a.w - b.w);
  for (size_t j = 0; j < a.z.size(); ++j) out = std::max(out, std::abs(a.z[j] - b.z[j]));
  for (size_t j = 0; j < a.xi.size(); ++j) out = std::max(out, std::abs(a.xi[j] - b.xi[j]));
  return out;
}

Cx ReflectionMap::DPoly::eval(const std::vector<Cx>& args) const {
  Cx total(0.0, 0.0);
  for (size_t t = 0; t < coeffs.size(); ++t) {
    Cx term = coeffs[t];
    const MultiIndex& e = exps[t];
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] > 0) term *= pow_int(args[v], e[v]);
    }
    total += term;
  }
  return total;
}

ReflectionMap::ReflectionMap(const Hypersurface& m) : n_(m.n()) {
  const Series& rho = m.rho();
  if (!rho.is_exact()) {
    throw ContractError("the reflection map needs a polynomial defining series");
  }
  const RingPtr& ring = rho.ring();
  const int iw = n_, iwb = 2 * n_ + 1;

  // Normalized chart required: linear part exactly (i/2)(w - wb).
  CRat half_i(Rational(0), make_rational(1, 2));
  bool normalized = rho.coefficient_key(ring->unit_key(iw)) == half_i &&
                    rho.coefficient_key(ring->unit_key(iwb)) == -half_i;
  for (int j = 0; j < n_ && normalized; ++j) {
    normalized = rho.coefficient_key(ring->unit_key(j)).is_zero() &&
                 rho.coefficient_key(ring->unit_key(n_ + 1 + j)).is_zero();
  }
  if (!normalized) {
    throw ContractError(
        "the reflection map expects normalized coordinates (apply normalize_to_quadric first)");
  }

  auto to_dpoly = [](const Series& s) {
    DPoly p;
    for (const auto& [exps, value] : s.sorted_terms()) {
      p.exps.push_back(exps);
      p.coeffs.push_back(value.to_complex_double());
    }
    return p;
  };

  graph_solvable_ = graph_solvable(m);
  graph_const_ =
      (rho.derivative(iw) - rho.derivative(iwb)).constant_term().to_complex_double();

  hermitian_.assign(static_cast<size_t>(n_), std::vector<Cx>(static_cast<size_t>(n_)));
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      MultiIndex e(static_cast<size_t>(ring->nvars()), 0);
      e[static_cast<size_t>(j)] = 1;
      e[static_cast<size_t>(n_ + 1 + k)] = 1;
      hermitian_[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          rho.coefficient(e).to_complex_double();
    }
  }

  rho_ = to_dpoly(rho);
  Series rho_w = rho.derivative(iw);
  rho_w_ = to_dpoly(rho_w);
  for (int j = 0; j < n_; ++j) rho_z_.push_back(to_dpoly(rho.derivative(j)));
  auto conj_var = [&](int k) { return k < n_ ? n_ + 1 + k : iwb; };
  for (int k = 0; k <= n_; ++k) {
    rho_conj_.push_back(to_dpoly(rho.derivative(conj_var(k))));
    rho_w_conj_.push_back(to_dpoly(rho_w.derivative(conj_var(k))));
  }
  rho_z_conj_.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    Series rho_zj = rho.derivative(j);
    for (int k = 0; k <= n_; ++k) {
      rho_z_conj_[static_cast<size_t>(j)].push_back(to_dpoly(rho_zj.derivative(conj_var(k))));
    }
  }
}

std::vector<Cx> ReflectionMap::args_for(const JetPointC& p, const std::vector<Cx>& unknowns) const {
  std::vector<Cx> args(static_cast<size_t>(2 * n_ + 2));
  for (int j = 0; j < n_; ++j) args[static_cast<size_t>(j)] = p.z[static_cast<size_t>(j)];
  args[static_cast<size_t>(n_)] = p.w;
  for (int k = 0; k < n_; ++k) args[static_cast<size_t>(n_ + 1 + k)] = unknowns[static_cast<size_t>(k)];
  args[static_cast<size_t>(2 * n_ + 1)] = unknowns[static_cast<size_t>(n_)];
  return args;
}

std::vector<Cx> ReflectionMap::equations(const JetPointC& p, const std::vector<Cx>& unknowns) const {
  std::vector<Cx> args = args_for(p, unknowns);
  std::vector<Cx> e(static_cast<size_t>(n_ + 1));
  e[0] = rho_.eval(args);
  Cx rw = rho_w_.eval(args);
  for (int j = 0; j < n_; ++j) {
    e[static_cast<size_t>(j + 1)] =
        p.xi[static_cast<size_t>(j)] * rw + rho_z_[static_cast<size_t>(j)].eval(args);
  }
  return e;
}

std::vector<std::vector<Cx>> ReflectionMap::jacobian(const JetPointC& p,
                                                     const std::vector<Cx>& unknowns) const {
  std::vector<Cx> args = args_for(p, unknowns);
  std::vector<std::vector<Cx>> jac(static_cast<size_t>(n_ + 1),
                                   std::vector<Cx>(static_cast<size_t>(n_ + 1)));
  for (int k = 0; k <= n_; ++k) jac[0][static_cast<size_t>(k)] = rho_conj_[static_cast<size_t>(k)].eval(args);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k <= n_; ++k) {
      jac[static_cast<size_t>(j + 1)][static_cast<size_t>(k)] =
          p.xi[static_cast<size_t>(j)] * rho_w_conj_[static_cast<size_t>(k)].eval(args) +
          rho_z_conj_[static_cast<size_t>(j)][static_cast<size_t>(k)].eval(args);
    }
  }
  return jac;
}

JetPointC ReflectionMap::quadric_reflection(const JetPointC& p) const {
  // For rho = z.h.zb + (i/2)(w - wb) the incidence system is linear:
  // h zb = -(i/2) xi and wb = w - 2i z.h.zb.
  std::vector<Cx> rhs(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) rhs[static_cast<size_t>(j)] = Cx(0.0, -0.5) * p.xi[static_cast<size_t>(j)];
  std::vector<Cx> zb = solve_linear(hermitian_, rhs);
  Cx pairing(0.0, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      pairing += p.z[static_cast<size_t>(j)] * hermitian_[static_cast<size_t>(j)][static_cast<size_t>(k)] *
                 zb[static_cast<size_t>(k)];
    }
  }
  Cx wb = p.w - Cx(0.0, 2.0) * pairing;

  JetPointC out;
  out.z.resize(static_cast<size_t>(n_));
  out.xi.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) out.z[static_cast<size_t>(j)] = std::conj(zb[static_cast<size_t>(j)]);
  out.w = std::conj(wb);
  // Slope of the Segre variety of the input base: for the quadric,
  // S_{(z,w)} is the graph w' = conj(w) + 2i z'.h.conj(z), so
  // xi'_k = 2i sum_j h_kj conj(z_j) at every point of it.
  for (int k = 0; k < n_; ++k) {
    Cx acc(0.0, 0.0);
    for (int j = 0; j < n_; ++j) {
      acc += hermitian_[static_cast<size_t>(k)][static_cast<size_t>(j)] *
             std::conj(p.z[static_cast<size_t>(j)]);
    }
    out.xi[static_cast<size_t>(k)] = Cx(0.0, 2.0) * acc;
  }
  return out;
}

ReflectionResult ReflectionMap::reflect(const JetPointC& p, const ReflectOptions& opts) const {
  if (static_cast<int>(p.z.size()) != n_ || static_cast<int>(p.xi.size()) != n_) {
    throw ContractError("jet point has the wrong dimension");
  }
  // Seed from the quadric closed form: unknowns are conj of the output base.
  JetPointC seed = quadric_reflection(p);
  std::vector<Cx> x(static_cast<size_t>(n_ + 1));
  for (int j = 0; j < n_; ++j) x[static_cast<size_t>(j)] = std::conj(seed.z[static_cast<size_t>(j)]);
  x[static_cast<size_t>(n_)] = std::conj(seed.w);

  std::vector<Cx> e = equations(p, x);
  double res = max_norm(e);
  int iter = 0;
  while (res > opts.tol && iter < opts.max_iter) {
    std::vector<Cx> rhs(e.size());
    for (size_t i = 0; i < e.size(); ++i) rhs[i] = -e[i];
    std::vector<Cx> delta = solve_linear(jacobian(p, x), rhs);
    double lambda = 1.0;
    bool improved = false;
    while (lambda >= 1.0 / 1024.0) {
      std::vector<Cx> trial = x;
      for (size_t i = 0; i < trial.size(); ++i) trial[i] += lambda * delta[i];
      std::vector<Cx> etrial = equations(p, trial);
      double rtrial = max_norm(etrial);
      if (rtrial < res * (1.0 - lambda / 4.0) || rtrial < opts.tol) {
        x = std::move(trial);
        e = std::move(etrial);
        res = rtrial;
        improved = true;
        break;
      }
      lambda /= 2.0;
    }
    ++iter;
    if (!improved) break;
  }
  if (res > opts.tol) {
    throw ConvergenceError("reflection Newton iteration did not reach tolerance " +
                               std::to_string(opts.tol) + " in " + std::to_string(iter) +
                               " steps",
                           res);
  }

  ReflectionResult out{p, JetPointC{}, res, iter};
  out.output.z.resize(static_cast<size_t>(n_));
  out.output.xi.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) out.output.z[static_cast<size_t>(j)] = std::conj(x[static_cast<size_t>(j)]);
  out.output.w = std::conj(x[static_cast<size_t>(n_)]);

  // Slope of S_{(p.z, p.w)} at the output base: arguments (c, d, conj p).
  std::vector<Cx> args(static_cast<size_t>(2 * n_ + 2));
  for (int j = 0; j < n_; ++j) args[static_cast<size_t>(j)] = out.output.z[static_cast<size_t>(j)];
  args[static_cast<size_t>(n_)] = out.output.w;
  for (int j = 0; j < n_; ++j) args[static_cast<size_t>(n_ + 1 + j)] = std::conj(p.z[static_cast<size_t>(j)]);
  args[static_cast<size_t>(2 * n_ + 1)] = std::conj(p.w);
  Cx rw = rho_w_.eval(args);
  if (std::abs(rw) < 1e-14) {
    throw DegenerateConfigurationError("rho_w vanishes at the reflected point");
  }
  for (int j = 0; j < n_; ++j) {
    out.output.xi[static_cast<size_t>(j)] = -rho_z_[static_cast<size_t>(j)].eval(args) / rw;
  }
  return out;
}

JetPointC ReflectionMap::lift_on_mj(const std::vector<Cx>& z, double u) const {
  if (!graph_solvable_) {
    throw ValidationError("surface is not graph-solvable; cannot lift onto the jet image of M");
  }
  std::vector<Cx> args(static_cast<size_t>(2 * n_ + 2));
  for (int j = 0; j < n_; ++j) {
    args[static_cast<size_t>(j)] = z[static_cast<size_t>(j)];
    args[static_cast<size_t>(n_ + 1 + j)] = std::conj(z[static_cast<size_t>(j)]);
  }
  args[static_cast<size_t>(n_)] = Cx(u, 0.0);
  args[static_cast<size_t>(2 * n_ + 1)] = Cx(u, 0.0);
  Cx flat = rho_.eval(args);
  Cx v = -flat / (Cx(0.0, 1.0) * graph_const_);

  JetPointC p;
  p.z = z;
  p.w = Cx(u, v.real());
  args[static_cast<size_t>(n_)] = p.w;
  args[static_cast<size_t>(2 * n_ + 1)] = std::conj(p.w);
  Cx rw = rho_w_.eval(args);
  p.xi.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    p.xi[static_cast<size_t>(j)] = -rho_z_[static_cast<size_t>(j)].eval(args) / rw;
  }
  return p;
}

InvolutionReport involution_check(const Hypersurface& m, int samples, double tol,
                                  std::uint64_t seed) {
  ReflectionMap map(m);
  const int n = map.n();
  const double radius = 0.25;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_cx = [&](double scale) { return Cx(scale * unit(rng), scale * unit(rng)); };

  struct Sample {
    JetPointC p;
    bool on_lift;
  };
  std::vector<Sample> plan;
  plan.reserve(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    std::vector<Cx> z(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) z[static_cast<size_t>(j)] = random_cx(radius);
    JetPointC base = map.lift_on_mj(z, radius * unit(rng));
    bool on_lift = (s % 2 == 0);
    if (!on_lift) {
      base.w += random_cx(radius / 4.0);
      for (int j = 0; j < n; ++j) base.xi[static_cast<size_t>(j)] += random_cx(radius / 4.0);
    }
    plan.push_back(Sample{std::move(base), on_lift});
  }

  InvolutionReport report;
  report.requested = samples;
  report.tol = tol;
  std::vector<double> deviation(plan.size(), -1.0);
  std::vector<int> failed(plan.size(), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (kernels::parallel_enabled())
#endif
  for (size_t idx = 0; idx < plan.size(); ++idx) {
    try {
      const JetPointC& p = plan[idx].p;
      ReflectionResult first = map.reflect(p);
      if (plan[idx].on_lift) {
        deviation[idx] = jet_distance(first.output, p);
      } else {
        ReflectionResult second = map.reflect(first.output);
        deviation[idx] = jet_distance(second.output, p);
      }
    } catch (const Error&) {
      failed[idx] = 1;
    }
  }

  for (size_t idx = 0; idx < plan.size(); ++idx) {
    if (failed[idx]) {
      ++report.failed;
      continue;
    }
    ++report.converged;
    if (plan[idx].on_lift) {
      report.max_fixed_deviation = std::max(report.max_fixed_deviation, deviation[idx]);
    } else {
      report.max_involution_deviation = std::max(report.max_involution_deviation, deviation[idx]);
    }
  }
  report.pass = report.failed == 0 && report.max_involution_deviation < tol &&
                report.max_fixed_deviation < tol;
  return report;
}

double antiholomorphy_defect(const ReflectionMap& map, const JetPointC& p, double step) {
  ReflectOptions tight{1e-12, 80};
  const int n = map.n();
  auto output_at = [&](const JetPointC& q) {
    ReflectionResult r = map.reflect(q, tight);
    std::vector<Cx> flat = r.output.z;
    flat.push_back(r.output.w);
    flat.insert(flat.end(), r.output.xi.begin(), r.output.xi.end());
    return flat;
  };
  auto perturb = [&](int coord, Cx delta) {
    JetPointC q = p;
    if (coord < n) {
      q.z[static_cast<size_t>(coord)] += delta;
    } else if (coord == n) {
      q.w += delta;
    } else {
      q.xi[static_cast<size_t>(coord - n - 1)] += delta;
    }
    return q;
  };

  double worst = 0.0;
  for (int coord = 0; coord < 2 * n + 1; ++coord) {
    std::vector<Cx> xp = output_at(perturb(coord, Cx(step, 0.0)));
    std::vector<Cx> xm = output_at(perturb(coord, Cx(-step, 0.0)));
    std::vector<Cx> yp = output_at(perturb(coord, Cx(0.0, step)));
    std::vector<Cx> ym = output_at(perturb(coord, Cx(0.0, -step)));
    for (size_t i = 0; i < xp.size(); ++i) {
      Cx dx = (xp[i] - xm[i]) / (2.0 * step);
      Cx dy = (yp[i] - ym[i]) / (2.0 * step);
      // Wirtinger d/dv = (d/dx - i d/dy) / 2 must vanish for an
      // anti-holomorphic map.
      Cx wirtinger = 0.5 * (dx - Cx(0.0, 1.0) * dy);
      worst = std::max(worst, std::abs(wirtinger));
    }
  }
  return worst;
}

}  // namespace crjet
