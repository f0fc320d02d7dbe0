#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crjet/pde.hpp"
#include "crjet/segre.hpp"
#include "crjet/substitution.hpp"
#include "support.hpp"

using namespace crjet;
using namespace crjet::testing;

namespace {

constexpr int kOrder = 8;

CRat imag(long num, long den = 1) { return CRat(Rational(0), make_rational(num, den)); }

// rho of the model quadric: z zb + (i/2)(w - wb), and friends, built by hand.
Series quadric_rho(int n) {
  RingPtr ring = surface_ring(n, kOrder);
  Series rho(ring);
  for (int j = 0; j < n; ++j) {
    rho += Series::variable(ring, j) * Series::variable(ring, n + 1 + j);
  }
  rho += imag(1, 2) * (Series::variable(ring, n) - Series::variable(ring, 2 * n + 1));
  return rho;
}

Point quartic_point(const Hypersurface& m, long pnum, long pden, long unum, long uden) {
  std::vector<CRat> z{CRat(make_rational(pnum, pden))};
  return solve_point(m, z, make_rational(unum, uden));
}

}  // namespace

TEST_SUITE("hypersurface construction") {
  TEST_CASE("graph form of the model quadric") {
    Hypersurface m = quadric(1, kOrder);
    CHECK(m.rho() == quadric_rho(1));
  }

  TEST_CASE("graph form of the quartic perturbation") {
    Hypersurface m = quartic_example(kOrder);
    RingPtr ring = surface_ring(1, kOrder);
    Series zzb = Series::variable(ring, 0) * Series::variable(ring, 2);
    CHECK(m.rho() == quadric_rho(1) + zzb * zzb);
  }

  TEST_CASE("Im w = |z|^2 + Re(z^2)") {
    RingPtr gring = graph_ring(1, kOrder);
    Series z = Series::variable(gring, 0), zb = Series::variable(gring, 1);
    Series phi = z * zb + CRat(make_rational(1, 2)) * (z * z + zb * zb);
    Hypersurface m = Hypersurface::from_graph_form(1, phi);
    RingPtr ring = surface_ring(1, kOrder);
    Series zs = Series::variable(ring, 0), zbs = Series::variable(ring, 2);
    Series expected =
        quadric_rho(1) + CRat(make_rational(1, 2)) * (zs * zs + zbs * zbs);
    CHECK(m.rho() == expected);
  }

  TEST_CASE("reality violations name the offending pair") {
    RingPtr ring = surface_ring(1, kOrder);
    Series bad = quadric_rho(1) + Series::variable(ring, 0);  // + z1, no conjugate partner
    try {
      Hypersurface m(1, bad);
      FAIL("expected RealityError");
    } catch (const RealityError& e) {
      std::string msg = e.what();
      CHECK(msg.find("z1") != std::string::npos);
      CHECK(msg.find("zb1") != std::string::npos);
    }
  }

  TEST_CASE("degenerate differentials are rejected") {
    RingPtr ring = surface_ring(1, kOrder);
    Series z = Series::variable(ring, 0), zb = Series::variable(ring, 2);
    CHECK_THROWS_AS(Hypersurface(1, z * zb), ValidationError);
  }

  TEST_CASE("reality is preserved by graph ingestion on random surfaces") {
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 10; ++iter) {
      CorpusOptions opts;
      opts.n = 1 + iter % 3;
      opts.allow_u = iter % 2 == 0;
      Hypersurface m = random_surface(rng, opts);
      CHECK(conjugate_swap(m.rho()) == m.rho());
    }
  }
}

TEST_SUITE("complex defining equation") {
  TEST_CASE("model quadric solves to w = wb + 2i z zb") {
    Hypersurface m = quadric(1, kOrder);
    ComplexDefiner definer = complex_defining_equation(m);
    RingPtr tr = definer.ring;
    Series expected = Series::variable(tr, 2) +
                      imag(2) * (Series::variable(tr, 0) * Series::variable(tr, 1));
    CHECK(definer.theta == expected);
  }

  TEST_CASE("quartic perturbation") {
    Hypersurface m = quartic_example(kOrder);
    ComplexDefiner definer = complex_defining_equation(m);
    RingPtr tr = definer.ring;
    Series zzb = Series::variable(tr, 0) * Series::variable(tr, 1);
    Series expected = Series::variable(tr, 2) + imag(2) * (zzb + zzb * zzb);
    CHECK(definer.theta == expected);
  }

  TEST_CASE("substituting theta back into rho gives zero") {
    std::mt19937_64 rng(22);
    for (int iter = 0; iter < 12; ++iter) {
      CorpusOptions opts;
      opts.n = 1 + iter % 3;
      opts.allow_u = iter % 3 == 0;
      Hypersurface m = random_surface(rng, opts);
      ComplexDefiner definer = complex_defining_equation(m);
      Series residual = substitute(m.rho(), definer.ring, {{"w", definer.theta}});
      CHECK(zero_through(residual, residual.trusted()));
    }
  }

  TEST_CASE("w-degenerate charts are rejected") {
    // Re z = |w|^2-style germ: rho = (z + zb)/2 + w wb has rho_w(0) = 0.
    RingPtr ring = surface_ring(1, kOrder);
    Series rho = CRat(make_rational(1, 2)) * (Series::variable(ring, 0) + Series::variable(ring, 2)) +
                 Series::variable(ring, 1) * Series::variable(ring, 3);
    Hypersurface m(1, rho);
    CHECK_THROWS_AS(complex_defining_equation(m), BadCoordinatesError);
  }
}

TEST_SUITE("Levi jacobian") {
  TEST_CASE("model quadric gives -2i at the origin and at every point") {
    Hypersurface m = quadric(1, kOrder);
    CHECK(levi_jacobian(m, m.base()) == imag(-2));
    std::vector<CRat> z{CRat(make_rational(1, 2), make_rational(-1, 3))};
    Point q = solve_point(m, z, make_rational(2, 5));
    CHECK(levi_jacobian(m, q) == imag(-2));
  }

  TEST_CASE("|z|^4 germ is Levi-degenerate at 0 and solve_ab says so") {
    RingPtr gring = graph_ring(1, kOrder);
    Series zzb = Series::variable(gring, 0) * Series::variable(gring, 1);
    Hypersurface m = Hypersurface::from_graph_form(1, zzb * zzb);
    CHECK(levi_jacobian(m, m.base()) == CRat(0));
    try {
      solve_ab(m);
      FAIL("expected SingularJacobianError");
    } catch (const SingularJacobianError& e) {
      CHECK(e.jacobian_determinant() == CRat(0));
    }
  }

  TEST_CASE("points off the surface are rejected") {
    Hypersurface m = quadric(1, kOrder);
    Point off{{CRat(1)}, CRat(1)};
    CHECK_THROWS_AS(levi_jacobian(m, off), DomainError);
  }

  TEST_CASE("scaling rho preserves the jacobian and its verdict") {
    // The jacobian is built from the solved graph form, which depends only on
    // the zero set: a real constant multiple of rho drops out entirely.
    std::mt19937_64 rng(33);
    CorpusOptions opts;
    opts.n = 2;
    Hypersurface m = random_surface(rng, opts);
    CRat c(make_rational(3, 7));
    Hypersurface scaled(2, m.rho().scaled(c));
    CRat base = levi_jacobian(m, m.base());
    CRat got = levi_jacobian(scaled, scaled.base());
    CHECK(got == base);
    CHECK(!got.is_zero());
  }
}

TEST_SUITE("normalization") {
  TEST_CASE("the quadric is already normal") {
    Hypersurface m = quadric(1, kOrder);
    NormalizeResult result = normalize_to_quadric(m);
    CHECK(result.surface.rho() == m.rho());
    CHECK(result.old_from_new[0] == Series::variable(result.old_from_new[0].ring(), 0));
    CHECK(result.old_from_new[1] == Series::variable(result.old_from_new[1].ring(), 1));
    CHECK(result.unit == Series::constant(result.unit.ring(), CRat(1)));
  }

  TEST_CASE("holomorphic quadratic terms are absorbed into w") {
    RingPtr gring = graph_ring(1, kOrder);
    Series z = Series::variable(gring, 0), zb = Series::variable(gring, 1);
    Series phi = z * zb + CRat(make_rational(1, 2)) * (z * z + zb * zb);
    Hypersurface m = Hypersurface::from_graph_form(1, phi);
    NormalizeResult result = normalize_to_quadric(m);
    CHECK(result.surface.rho() == quadric_rho(1));
    // Old w in terms of the new coordinates: w = w' + i z'^2.
    RingPtr mr = result.old_from_new[1].ring();
    CHECK(result.old_from_new[1] ==
          Series::variable(mr, 1) + CRat::i() * Series::variable(mr, 0).pow(2));
    // And the forward map is w' = w - i z^2.
    CHECK(result.new_from_old[1] ==
          Series::variable(mr, 1) - CRat::i() * Series::variable(mr, 0).pow(2));
  }

  TEST_CASE("Re w = |z|^2 becomes Im w' = |z|^2 under w' = i w") {
    RingPtr ring = surface_ring(1, kOrder);
    Series rho = Series::variable(ring, 0) * Series::variable(ring, 2) -
                 CRat(make_rational(1, 2)) *
                     (Series::variable(ring, 1) + Series::variable(ring, 3));
    Hypersurface m(1, rho);
    NormalizeResult result = normalize_to_quadric(m);
    CHECK(result.surface.rho() == quadric_rho(1));
    RingPtr mr = result.old_from_new[1].ring();
    CHECK(result.old_from_new[1] == imag(-1) * Series::variable(mr, 1));
  }

  TEST_CASE("non-pseudoconvex germs are rejected") {
    RingPtr gring = graph_ring(2, kOrder);
    // Im w = |z1|^2 - |z2|^2: indefinite Levi form.
    Series phi = Series::variable(gring, 0) * Series::variable(gring, 2) -
                 Series::variable(gring, 1) * Series::variable(gring, 3);
    Hypersurface m = Hypersurface::from_graph_form(2, phi);
    CHECK_THROWS_AS(normalize_to_quadric(m), NotStrictlyPseudoconvexError);
  }

  TEST_CASE("random surfaces: purity, reality, invertibility, unit factorization") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 8; ++iter) {
      CorpusOptions opts;
      opts.n = 1 + iter % 2;
      opts.allow_u = true;
      opts.hermitian_tweak = true;
      Hypersurface m = random_surface(rng, opts);
      NormalizeResult result = normalize_to_quadric(m);
      const Series& out = result.surface.rho();
      const RingPtr& ring = out.ring();
      const int n = result.surface.n();

      validate_reality(out);
      // No pure quadratic, mixed z*wb, or w*wb terms of degree 2 remain.
      for (const auto& [exps, value] : out.truncated(2).sorted_terms()) {
        int deg = 0, zdeg = 0, zbdeg = 0;
        for (int e : exps) deg += e;
        for (int j = 0; j < n; ++j) {
          zdeg += exps[static_cast<size_t>(j)];
          zbdeg += exps[static_cast<size_t>(n + 1 + j)];
        }
        if (deg < 2) continue;
        CHECK(deg == 2);
        CHECK(zdeg == 1);
        CHECK(zbdeg == 1);
      }
      // Maps invert each other through degree N.
      auto fwd_then_inv = compose_maps(result.old_from_new, result.new_from_old);
      auto inv_then_fwd = compose_maps(result.new_from_old, result.old_from_new);
      RingPtr mr = result.old_from_new.front().ring();
      for (int j = 0; j <= n; ++j) {
        CHECK(fwd_then_inv[static_cast<size_t>(j)] == Series::variable(mr, j));
        CHECK(inv_then_fwd[static_cast<size_t>(j)] == Series::variable(mr, j));
      }
      // rho_new = unit * (rho ∘ old_from_new), recomputed from scratch.
      Series recomposed = apply_holomorphic_map(m.rho(), result.old_from_new);
      Series product = result.unit * recomposed;
      Series difference = product - out;
      CHECK(zero_through(difference, std::min(product.trusted(), out.trusted())));
      CHECK(!result.unit.constant_term().is_zero());
      (void)ring;
    }
  }
}

TEST_SUITE("Segre graphs and jets") {
  TEST_CASE("the Segre variety of the origin is w = 0") {
    Hypersurface m = quadric(1, kOrder);
    SegreGraph graph = segre_graph(m, m.base());
    CHECK(graph.taylor.is_zero());
  }

  TEST_CASE("quadric graph through (a, b) is w = bb + 2i z ab") {
    Hypersurface m = quadric(1, kOrder);
    std::vector<CRat> z{CRat(make_rational(1, 2), make_rational(1, 3))};
    Point q = solve_point(m, z, make_rational(-1, 4));
    SegreGraph graph = segre_graph(m, q);
    // Centered at a: w(a + t) = (bb + 2i a ab) + 2i ab t = b + 2i ab t.
    RingPtr zr = graph.taylor.ring();
    CRat ab = q.z[0].conj();
    CHECK(graph.taylor == (imag(2) * ab) * Series::variable(zr, 0));
    // The global constant coefficient b - 2i a ab equals bb.
    CHECK(q.w - imag(2) * q.z[0] * ab == q.w.conj());
  }

  TEST_CASE("quartic graph and two-jet") {
    Hypersurface m = quartic_example(kOrder);
    Point q = quartic_point(m, 1, 2, 1, 1);
    SegreGraph graph = segre_graph(m, q);
    RingPtr zr = graph.taylor.ring();
    CRat a = q.z[0], ab = q.z[0].conj();
    // w(a + t) = b + (2i ab + 4i a ab^2) t + 2i ab^2 t^2.
    Series expected = (imag(2) * ab + imag(4) * a * ab * ab) * Series::variable(zr, 0) +
                      (imag(2) * ab * ab) * Series::variable(zr, 0).pow(2);
    CHECK(graph.taylor == expected);

    SegreJet jet = segre_jet(m, q, 2);
    CHECK(jet.derivatives[0].at(MultiIndex{0}) == q.w);
    CHECK(jet.hessian()[0][0] == imag(4) * ab * ab);
  }

  TEST_CASE("first jet block spans the complex tangent") {
    std::mt19937_64 rng(24);
    CorpusOptions opts;
    opts.n = 2;
    Hypersurface m = random_surface(rng, opts);
    Point q = sample_points(m, 1, 99)[0];
    SegreJet jet = segre_jet(m, q, 1);
    std::vector<CRat> args = point_args(q);
    CRat rw = m.rho().derivative(2).evaluate(args);
    for (int j = 0; j < 2; ++j) {
      CRat expected = -(m.rho().derivative(j).evaluate(args)) / rw;
      CHECK(jet.gradient()[static_cast<size_t>(j)] == expected);
    }
  }

  TEST_CASE("jet order beyond N - 1 is a truncation error") {
    Hypersurface m = quadric(1, kOrder);
    CHECK_THROWS_AS(segre_jet(m, m.base(), kOrder), TruncationError);
  }

  TEST_CASE("incidence symmetry r in S_q iff q in S_r") {
    std::mt19937_64 rng(25);
    CorpusOptions opts;
    opts.n = 1;
    for (int iter = 0; iter < 6; ++iter) {
      Hypersurface m = random_surface(rng, opts);
      Point q = sample_points(m, 1, 7 + iter)[0];
      // A point of S_q above a rational z: rho is linear in w for rigid
      // graphs, w_r = conj(q_w) + 2i * phi(z_r, conj(q_z)), where phi is rho
      // with both w slots frozen at zero.
      CRat zr(make_rational(1, 3), make_rational(-1, 5));
      std::vector<CRat> args{zr, CRat(0), q.z[0].conj(), CRat(0)};
      CRat phi_val = m.rho().evaluate(args);
      Point r{{zr}, q.w.conj() + imag(2) * phi_val};
      // Membership of r in S_q: rho(r, conj q) = 0.
      std::vector<CRat> incidence = point_args(r);
      incidence[2] = q.z[0].conj();
      incidence[3] = q.w.conj();
      CHECK(m.rho().evaluate(incidence).is_zero());
      // The symmetric statement: q in S_r.
      std::vector<CRat> sym = point_args(q);
      sym[2] = r.z[0].conj();
      sym[3] = r.w.conj();
      CHECK(m.rho().evaluate(sym).is_zero());
    }
  }
}

TEST_SUITE("two-jet determinant") {
  TEST_CASE("the quadric's Phi vanishes identically") {
    for (int n : {1, 2, 3}) {
      Hypersurface m = quadric(n, kOrder);
      auto phi = phi_determinant(m);
      for (const auto& row : phi) {
        for (const Series& entry : row) CHECK(entry.is_zero());
      }
    }
  }

  TEST_CASE("straight Segre families of general Hermitian quadrics") {
    std::mt19937_64 rng(26);
    RingPtr gring = graph_ring(2, kOrder);
    // Im w = |z1|^2 + |z2|^2 + small off-diagonal Hermitian pair.
    Series phi = Series::variable(gring, 0) * Series::variable(gring, 2) +
                 Series::variable(gring, 1) * Series::variable(gring, 3);
    CRat eps(make_rational(1, 8), make_rational(1, 8));
    phi += eps * (Series::variable(gring, 0) * Series::variable(gring, 3));
    phi += eps.conj() * (Series::variable(gring, 1) * Series::variable(gring, 2));
    Hypersurface m = Hypersurface::from_graph_form(2, phi);
    for (const auto& row : phi_determinant(m)) {
      for (const Series& entry : row) CHECK(entry.is_zero());
    }
    (void)rng;
  }

  TEST_CASE("quartic perturbation: Phi = 4i zb^2 as a series") {
    Hypersurface m = quartic_example(kOrder);
    auto phi = phi_determinant(m);
    RingPtr ring = m.rho().ring();
    CHECK(phi[0][0] == imag(4) * Series::variable(ring, 2).pow(2));
  }

  TEST_CASE("scaling rho leaves Phi unchanged") {
    Hypersurface m = quartic_example(kOrder);
    Hypersurface scaled(1, m.rho().scaled(CRat(make_rational(5, 3))));
    CHECK(phi_determinant(m)[0][0] == phi_determinant(scaled)[0][0]);
  }

  TEST_CASE("Phi_ij equals Phi_ji as independently computed series") {
    std::mt19937_64 rng(27);
    for (int n : {2, 3}) {
      CorpusOptions opts;
      opts.n = n;
      Hypersurface m = random_surface(rng, opts);
      auto phi = phi_determinant(m);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          CHECK(phi[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                phi[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        }
      }
    }
  }

  TEST_CASE("oracle values on the quadric and quartic") {
    Hypersurface q1 = quadric(1, kOrder);
    std::vector<CRat> z{CRat(make_rational(2, 5))};
    Point q = solve_point(q1, z, make_rational(1, 3));
    CHECK(phi_oracle(q1, q)[0][0] == CRat(0));

    Hypersurface m = quartic_example(kOrder);
    Point p = quartic_point(m, 2, 3, -1, 2);
    CRat ab = p.z[0].conj();
    CHECK(phi_oracle(m, p)[0][0] == imag(4) * ab * ab);
  }

  TEST_CASE("determinant equals oracle at sampled points") {
    std::mt19937_64 rng(28);
    for (int iter = 0; iter < 6; ++iter) {
      CorpusOptions opts;
      opts.n = 1 + iter % 3;
      opts.allow_u = iter % 2 == 1;
      Hypersurface m = random_surface(rng, opts);
      for (const Point& q : sample_points(m, 3, 1000 + iter, /*require_levi=*/false)) {
        CHECK(phi_determinant_at(m, q) == phi_oracle(m, q));
      }
    }
  }
}

TEST_SUITE("associated system") {
  TEST_CASE("quadric closed forms for A and B") {
    for (int n : {1, 2}) {
      Hypersurface m = quadric(n, kOrder);
      ABSolution ab = solve_ab(m);
      RingPtr jr = ab.ring;
      for (int j = 0; j < n; ++j) {
        CHECK(ab.A[static_cast<size_t>(j)] ==
              CRat(Rational(0), make_rational(-1, 2)) * Series::variable(jr, n + 1 + j));
        CHECK(ab.xi_center[static_cast<size_t>(j)] == CRat(0));
      }
      Series expected_b = Series::variable(jr, n);
      for (int j = 0; j < n; ++j) {
        expected_b -= Series::variable(jr, j) * Series::variable(jr, n + 1 + j);
      }
      CHECK(ab.B == expected_b);
    }
  }

  TEST_CASE("A and B satisfy the defining incidence identities") {
    std::mt19937_64 rng(29);
    CorpusOptions opts;
    opts.n = 2;
    opts.allow_u = true;
    Hypersurface m = random_surface(rng, opts);
    ComplexDefiner definer = complex_defining_equation(m);
    ABSolution ab = solve_ab(m);
    std::map<std::string, Series> assign;
    for (int j = 0; j < 2; ++j) {
      assign.emplace("zb" + std::to_string(j + 1), ab.A[static_cast<size_t>(j)]);
    }
    assign.emplace("wb", ab.B);
    Series theta_along = substitute(definer.theta, ab.ring, assign);
    Series graph_residual = theta_along - Series::variable(ab.ring, 2);
    CHECK(zero_through(graph_residual, theta_along.trusted()));
    for (int j = 0; j < 2; ++j) {
      Series slope_along = substitute(definer.theta.derivative(j), ab.ring, assign);
      Series res = slope_along - Series::variable(ab.ring, 3 + j) -
                   Series::constant(ab.ring, ab.xi_center[static_cast<size_t>(j)]);
      CHECK(zero_through(res, slope_along.trusted()));
    }
  }

  TEST_CASE("quadric system vanishes; quartic slice at z = 0 is -i xi^2") {
    Hypersurface q2 = quadric(2, kOrder);
    PDESystem sys2 = associated_pde(q2);
    for (const auto& row : sys2.phi) {
      for (const Series& entry : row) CHECK(entry.is_zero());
    }

    Hypersurface m = quartic_example(kOrder);
    PDESystem sys = associated_pde(m);
    Series slice = substitute(sys.phi[0][0], jet_ring(1, kOrder),
                              {{"z1", Series(jet_ring(1, kOrder))}});
    Series expected = CRat(Rational(0), Rational(-1)) *
                      Series::variable(jet_ring(1, kOrder), 2).pow(2);
    CHECK(zero_through(slice - expected, slice.trusted()));
  }

  TEST_CASE("Segre graphs solve the associated system") {
    std::mt19937_64 rng(30);
    for (int iter = 0; iter < 5; ++iter) {
      CorpusOptions opts;
      opts.n = 1 + iter % 3;
      Hypersurface m = random_surface(rng, opts);
      Point q = sample_points(m, 1, 500 + iter)[0];
      for (const auto& row : segre_pde_residual(m, q)) {
        for (const Series& entry : row) {
          CHECK(zero_through(entry, entry.trusted()));
        }
      }
    }
  }

  TEST_CASE("total derivative fields act as expected") {
    Hypersurface m = quartic_example(kOrder);
    PDESystem sys = associated_pde(m);
    RingPtr jr = sys.ring;
    // L_1 w = xi_1 and L_1 xi_1 = Phi_11.
    CHECK(total_derivative_apply(sys, Series::variable(jr, 1), 0) == Series::variable(jr, 2));
    CHECK(total_derivative_apply(sys, Series::variable(jr, 2), 0) == sys.phi[0][0]);
    // On the quadric, L_1 f = f_z + xi f_w.
    Hypersurface q1 = quadric(1, kOrder);
    PDESystem qsys = associated_pde(q1);
    std::mt19937_64 rng(31);
    Series f = random_series(qsys.ring, rng, 10);
    Series expected = f.derivative(0) + (Series::variable(qsys.ring, 2) +
                                         Series::constant(qsys.ring, qsys.xi_center[0])) *
                                            f.derivative(1);
    CHECK(total_derivative_apply(qsys, f, 0) == expected);
  }

  TEST_CASE("integrability residuals") {
    // n = 1: empty family.
    CHECK(integrability_residual(associated_pde(quadric(1, kOrder))).empty());
    // Quadric n = 2: zero.
    for (const auto& entry : integrability_residual(associated_pde(quadric(2, kOrder)))) {
      CHECK(entry.residual.is_zero());
    }
    // Im w = |z1|^2 + |z2|^2 + |z1|^4: zero through the trusted degree.
    RingPtr gring = graph_ring(2, kOrder);
    Series phi = Series::variable(gring, 0) * Series::variable(gring, 2) +
                 Series::variable(gring, 1) * Series::variable(gring, 3);
    Series z1zb1 = Series::variable(gring, 0) * Series::variable(gring, 2);
    Hypersurface m = Hypersurface::from_graph_form(2, phi + z1zb1 * z1zb1);
    for (const auto& entry : integrability_residual(associated_pde(m))) {
      CHECK(entry.residual.trusted() >= kOrder - 3);
      CHECK(zero_through(entry.residual, entry.residual.trusted()));
    }
  }

  TEST_CASE("unit multiples of rho give the same system") {
    Hypersurface m = quartic_example(kOrder);
    RingPtr ring = m.rho().ring();
    // E = 1 + (z + zb)/2: a real unit.
    Series unit = Series::constant(ring, CRat(1)) +
                  CRat(make_rational(1, 2)) *
                      (Series::variable(ring, 0) + Series::variable(ring, 2));
    Hypersurface m2(1, unit * m.rho());
    PDESystem a = associated_pde(m);
    PDESystem b = associated_pde(m2);
    Series diff = a.phi[0][0] - b.phi[0][0];
    CHECK(zero_through(diff, std::min(a.phi[0][0].trusted(), b.phi[0][0].trusted())));
  }

  TEST_CASE("jet-chart Phi at the one-jet of the Segre variety matches the oracle") {
    std::mt19937_64 rng(32);
    CorpusOptions opts;
    opts.n = 2;
    Hypersurface m = random_surface(rng, opts);
    Point q = sample_points(m, 1, 77)[0];
    PDESystem sys = associated_pde(recenter(m, q));
    auto oracle = phi_oracle(m, q);
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        CHECK(sys.phi[static_cast<size_t>(k)][static_cast<size_t>(l)].constant_term() ==
              oracle[static_cast<size_t>(k)][static_cast<size_t>(l)]);
      }
    }
  }

  TEST_CASE("contact pullbacks vanish along Segre lifts") {
    Hypersurface m = quartic_example(kOrder);
    Point q = quartic_point(m, 1, 3, 1, 4);
    ContactResidual residual = contact_residual(m, q);
    for (const Series& s : residual.omega0) CHECK(s.is_zero());
    for (const auto& row : residual.omega) {
      for (const Series& entry : row) {
        CHECK(entry.trusted() >= kOrder - 2);
        CHECK(zero_through(entry, entry.trusted()));
      }
    }
  }
}
