#include <doctest.h>

#include <cmath>

#include "aqp/dynamics.hpp"
#include "aqp/hamiltonians.hpp"

using namespace aqp;

namespace {

// Linear-path Grover gap in the two-dimensional invariant subspace.
double grover_linear_gap(double s, double dim) {
  return std::sqrt(1.0 - 4.0 * (1.0 - 1.0 / dim) * s * (1.0 - s));
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("hamiltonians") {
  TEST_CASE("Landau-Zener endpoints") {
    const auto p = landau_zener();
    CHECK(p.qubits() == 1);
    CHECK(max_abs(p.initial().matrix() - pauli_z()) == 0.0);
    CHECK(max_abs(p.problem().matrix() - pauli_x()) == 0.0);

    const auto gi = gap_and_ground(p.initial());
    CHECK(gi.gap == doctest::Approx(2.0));
    CHECK(std::norm(inner(gi.ground_state, QuantumState::basis(2, 1))) ==
          doctest::Approx(1.0));
    CHECK(expectation(p.initial(), gi.ground_state) == doctest::Approx(-1.0));

    const auto gp = gap_and_ground(p.problem());
    CVector minus(2);
    minus << 1.0, -1.0;
    CHECK(std::norm(inner(gp.ground_state, QuantumState::normalized(minus))) ==
          doctest::Approx(1.0));
    CHECK(expectation(p.problem(), gp.ground_state) == doctest::Approx(-1.0));
  }

  TEST_CASE("Grover single qubit problem Hamiltonian") {
    const auto p = grover(1, 0);
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(1, 1) = 1.0;
    CHECK(max_abs(p.problem().matrix() - expected) < 1e-15);
  }

  TEST_CASE("Grover initial Hamiltonian annihilates the uniform state") {
    for (int n = 1; n <= 5; ++n) {
      const auto p = grover(n, 0);
      const auto dim = p.dim();
      const auto phi = QuantumState::normalized(CVector::Ones(dim));
      CHECK(std::abs(expectation(p.initial(), phi)) < 1e-14);
      CHECK(gap_and_ground(p.initial()).gap == doctest::Approx(1.0));
      CHECK(std::norm(inner(p.initial_ground(), phi)) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("Grover rejects a marked index out of range") {
    CHECK_THROWS_AS(grover(2, 4), ValidationError);
    CHECK_THROWS_AS(grover(2, -1), ValidationError);
    CHECK_THROWS_AS(grover(0, 0), ValidationError);
  }

  TEST_CASE("problem construction rejects degenerate endpoint ground states") {
    CHECK_THROWS_AS(AdiabaticProblem(1, HermitianOperator(identity(2)),
                                     HermitianOperator(pauli_x()), "bad"),
                    ValidationError);
    CHECK_THROWS_AS(AdiabaticProblem(1, HermitianOperator(pauli_z()),
                                     HermitianOperator(CMatrix::Zero(2, 2)), "bad"),
                    ValidationError);
    CHECK_THROWS_AS(AdiabaticProblem(1, HermitianOperator(pauli_z()),
                                     HermitianOperator(grover(2, 0).problem()), "bad"),
                    ValidationError);
  }

  TEST_CASE("hamiltonian_at combines the pair linearly") {
    const auto p = landau_zener();
    CHECK(max_abs(hamiltonian_at(p, 1.0, 0.0).matrix() - p.initial().matrix()) == 0.0);
    CHECK(max_abs(hamiltonian_at(p, 0.0, 1.0).matrix() - p.problem().matrix()) == 0.0);
    const auto spec = eigh(hamiltonian_at(p, 0.5, 0.5));
    CHECK(spec.eigenvalues[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
    CHECK(spec.eigenvalues[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(hamiltonian_at(p, NAN, 0.0), ValidationError);
  }

  TEST_CASE("hamiltonian_at is additive in the first control") {
    const auto p = grover(2, 1);
    const double a = 0.3, b = 0.45, c = 0.8;
    const CMatrix lhs = hamiltonian_at(p, a + b, c).matrix();
    const CMatrix rhs = hamiltonian_at(p, a, 0.0).matrix() + hamiltonian_at(p, b, c).matrix();
    CHECK(max_abs(lhs - rhs) < 1e-15);
  }

  TEST_CASE("gap diagnostics") {
    const auto z = gap_and_ground(HermitianOperator(pauli_z()));
    CHECK(z.gap == doctest::Approx(2.0));
    CHECK_FALSE(z.degenerate);
    CHECK(std::abs(z.ground_state[1] - 1.0) < 1e-15);

    const auto lz = landau_zener();
    CHECK(gap_and_ground(hamiltonian_at(lz, 0.5, 0.5)).gap ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    const auto g2 = grover(2, 0);
    CHECK(gap_and_ground(hamiltonian_at(g2, 0.5, 0.5)).gap == doctest::Approx(0.5).epsilon(1e-12));

    const auto flat = gap_and_ground(HermitianOperator(identity(4)));
    CHECK(flat.degenerate);
    CHECK(flat.gap == 0.0);
  }

  TEST_CASE("Grover linear-path gap matches the two-level closed form") {
    for (int n : {2, 3, 4}) {
      const auto p = grover(n, 0);
      const double dim = static_cast<double>(p.dim());
      for (int k = 0; k <= 20; ++k) {
        const double s = k / 20.0;
        const double g = gap_and_ground(hamiltonian_at(p, 1.0 - s, s)).gap;
        CHECK(std::abs(g - grover_linear_gap(s, dim)) < 1e-10);
      }
    }
  }

  TEST_CASE("Grover gap trace does not depend on the marked state") {
    const auto sch = linear(100);
    const auto reference = gap_trace(grover(2, 0), sch);
    for (int m = 1; m < 4; ++m) {
      const auto trace = gap_trace(grover(2, m), sch);
      for (std::size_t k = 0; k < trace.size(); ++k) {
        CHECK(std::abs(trace[k] - reference[k]) < 1e-12);
      }
    }
  }

  TEST_CASE("reduced Grover model at one qubit matches the full model up to rotation") {
    const auto full = grover(1, 0);
    const auto red = grover_reduced(1);
    for (const auto& [a, b] : {std::pair{&full.initial(), &red.initial()},
                               std::pair{&full.problem(), &red.problem()}}) {
      const auto sa = eigh(*a);
      const auto sb = eigh(*b);
      CHECK((sa.eigenvalues - sb.eigenvalues).cwiseAbs().maxCoeff() < 1e-14);
    }
    const double full_overlap = std::norm(inner(full.initial_ground(), full.target_ground()));
    const double red_overlap = std::norm(inner(red.initial_ground(), red.target_ground()));
    CHECK(std::abs(full_overlap - red_overlap) < 1e-14);
  }

  TEST_CASE("reduced Grover model reproduces fidelity and gaps") {
    SUBCASE("n=4 fidelity under the linear schedule, T=5") {
      const auto sch = linear(100);
      const double f_full = objective(grover(4, 0), sch, 5.0, 0.0).F1;
      const double f_red = objective(grover_reduced(4), sch, 5.0, 0.0).F1;
      CHECK(std::abs(f_full - f_red) < 1e-10);
    }
    SUBCASE("n=6 gap trace") {
      const auto sch = linear(100);
      const auto full = gap_trace(grover(6, 0), sch);
      const auto red = gap_trace(grover_reduced(6), sch);
      for (std::size_t k = 0; k < full.size(); ++k) CHECK(std::abs(full[k] - red[k]) < 1e-10);
    }
  }

  TEST_CASE("reduced Grover shadow test on linear and Roland-Cerf schedules") {
    for (int n = 2; n <= 4; ++n) {
      const long long dim = 1LL << n;
      for (const auto& sch : {linear(100), roland_cerf(dim, 100)}) {
        const auto full = objective(grover(n, 0), sch, 2.0 * std::sqrt(double(dim)), 0.1);
        const auto red = objective(grover_reduced(n), sch, 2.0 * std::sqrt(double(dim)), 0.1);
        CHECK(std::abs(full.F1 - red.F1) < 1e-9);
        CHECK(std::abs(full.F2 - red.F2) < 1e-9);
        for (std::size_t k = 0; k < full.P0_trace.size(); ++k) {
          CHECK(std::abs(full.P0_trace[k] - red.P0_trace[k]) < 1e-9);
        }
      }
    }
  }
}
