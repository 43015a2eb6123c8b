#pragma once

// Problem families for adiabatic evolution and spectral diagnostics of the
// controlled Hamiltonian H(u1, u2) = u1 * H_I + u2 * H_P.

#include <string>

#include "aqp/qcore.hpp"

namespace aqp {

inline constexpr double kDegeneracyTolerance = 1e-9;

class AdiabaticProblem {
 public:
  /// Validates shapes (N = 2^n) and that both endpoint ground states are
  /// nondegenerate.
  AdiabaticProblem(int qubits, HermitianOperator initial, HermitianOperator problem,
                   std::string label);

  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return initial_.dim(); }
  const HermitianOperator& initial() const { return initial_; }
  const HermitianOperator& problem() const { return problem_; }
  const std::string& label() const { return label_; }

  /// Ground state of H_I (the initial state of every evolution).
  const QuantumState& initial_ground() const { return initial_ground_; }
  /// Ground state of H_P (the fidelity target).
  const QuantumState& target_ground() const { return target_ground_; }

 private:
  int qubits_;
  HermitianOperator initial_;
  HermitianOperator problem_;
  std::string label_;
  QuantumState initial_ground_;
  QuantumState target_ground_;
};

struct GapReport {
  double gap = 0.0;
  QuantumState ground_state;
  bool degenerate = false;
};

/// H_I = sigma_z, H_P = sigma_x.
AdiabaticProblem landau_zener();

/// H_I = I - |phi><phi| (uniform superposition), H_P = I - |m><m|.
AdiabaticProblem grover(int qubits, long long marked);

/// Grover pair restricted to span{|m>, |phi>}. Basis: |m> and the unit
/// component of |phi> orthogonal to |m>. The effective dimension is 2 but
/// qubits() still reports n.
AdiabaticProblem grover_reduced(int qubits);

HermitianOperator hamiltonian_at(const AdiabaticProblem& p, double u1, double u2);

GapReport gap_and_ground(const HermitianOperator& h);
GapReport gap_and_ground(const SpectralDecomposition& spec);

/// Orthogonal projector-based ground population |P_ground psi|^2, where the
/// ground subspace holds every eigenvector within kDegeneracyTolerance of E_0.
double ground_population(const SpectralDecomposition& spec, const QuantumState& psi);

}  // namespace aqp
