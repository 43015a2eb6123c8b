#include "aqp/hamiltonians.hpp"

#include <cmath>
#include <sstream>

namespace aqp {

namespace {

QuantumState nondegenerate_ground(const HermitianOperator& h, const char* which) {
  auto report = gap_and_ground(h);
  if (report.degenerate) {
    std::ostringstream msg;
    msg << which << " has a degenerate ground state (gap " << report.gap << ")";
    throw ValidationError(msg.str());
  }
  return std::move(report.ground_state);
}

void require_qubits(int qubits) {
  if (qubits < 1 || qubits > 20) {
    throw ValidationError("qubit count must be in [1, 20], got " + std::to_string(qubits));
  }
}

}  // namespace

AdiabaticProblem::AdiabaticProblem(int qubits, HermitianOperator initial,
                                   HermitianOperator problem, std::string label)
    : qubits_(qubits),
      initial_(std::move(initial)),
      problem_(std::move(problem)),
      label_(std::move(label)),
      initial_ground_(nondegenerate_ground(initial_, "initial Hamiltonian")),
      target_ground_(nondegenerate_ground(problem_, "problem Hamiltonian")) {
  if (qubits_ < 1) throw ValidationError("qubit count must be >= 1");
  if (initial_.dim() != problem_.dim()) {
    throw ValidationError("initial and problem Hamiltonians differ in dimension");
  }
}

AdiabaticProblem landau_zener() {
  return AdiabaticProblem(1, HermitianOperator(pauli_z()), HermitianOperator(pauli_x()),
                          "landau-zener");
}

AdiabaticProblem grover(int qubits, long long marked) {
  require_qubits(qubits);
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  if (marked < 0 || marked >= dim) {
    throw ValidationError("marked index " + std::to_string(marked) + " outside [0, " +
                          std::to_string(dim) + ")");
  }
  const CVector phi = CVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  CMatrix h_i = identity(dim) - phi * phi.adjoint();
  CMatrix h_p = identity(dim);
  h_p(marked, marked) = 0.0;
  return AdiabaticProblem(qubits, HermitianOperator(std::move(h_i)),
                          HermitianOperator(std::move(h_p)),
                          "grover-n" + std::to_string(qubits) + "-m" + std::to_string(marked));
}

AdiabaticProblem grover_reduced(int qubits) {
  require_qubits(qubits);
  const double n = std::ldexp(1.0, qubits);
  // |phi> = c|m> + s|perp>
  const double c = 1.0 / std::sqrt(n);
  const double s = std::sqrt(1.0 - 1.0 / n);
  CMatrix h_i(2, 2);
  h_i << 1.0 - c * c, -c * s, -c * s, 1.0 - s * s;
  CMatrix h_p(2, 2);
  h_p << 0.0, 0.0, 0.0, 1.0;
  return AdiabaticProblem(qubits, HermitianOperator(std::move(h_i)),
                          HermitianOperator(std::move(h_p)),
                          "grover-reduced-n" + std::to_string(qubits));
}

HermitianOperator hamiltonian_at(const AdiabaticProblem& p, double u1, double u2) {
  if (!std::isfinite(u1) || !std::isfinite(u2)) {
    throw ValidationError("control amplitudes must be finite");
  }
  CMatrix h = u1 * p.initial().matrix() + u2 * p.problem().matrix();
  return HermitianOperator(std::move(h));
}

GapReport gap_and_ground(const SpectralDecomposition& spec) {
  const double gap = spec.eigenvalues.size() > 1 ? spec.eigenvalues[1] - spec.eigenvalues[0] : 0.0;
  return GapReport{std::max(gap, 0.0), spec.eigenvector(0), gap < kDegeneracyTolerance};
}

GapReport gap_and_ground(const HermitianOperator& h) { return gap_and_ground(eigh(h)); }

double ground_population(const SpectralDecomposition& spec, const QuantumState& psi) {
  const double e0 = spec.eigenvalues[0];
  double population = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] - e0 >= kDegeneracyTolerance) break;
    population += std::norm(spec.eigenvectors.col(k).dot(psi.amplitudes()));
  }
  return population;
}

}  // namespace aqp
