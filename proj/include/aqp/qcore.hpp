#pragma once

// Dense complex linear algebra for small Hermitian operators and state
// vectors (N <= 64). Everything here is a pure function of its inputs.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aqp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

/// Normalized amplitude vector. Construction rejects vectors whose norm
/// deviates from one by more than kNormTolerance.
class QuantumState {
 public:
  explicit QuantumState(CVector amplitudes);

  /// Computational basis state |index> in dimension `dim`.
  static QuantumState basis(Eigen::Index dim, Eigen::Index index);
  /// Rescales `v` to unit norm. `v` must be nonzero.
  static QuantumState normalized(const CVector& v);

  const CVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

 private:
  CVector amplitudes_;
};

/// Square complex matrix checked for Hermiticity at construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix entries);

  const CMatrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

  /// max_ij |H_ij - conj(H_ji)|
  static double max_asymmetry(const CMatrix& m);

 private:
  CMatrix entries_;
};

struct SpectralDecomposition {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // column k pairs with eigenvalues[k]

  QuantumState eigenvector(Eigen::Index k) const;
};

/// Eigen-decomposition with a fixed phase convention: the first component
/// of each eigenvector whose magnitude exceeds 1e-12 is real and positive.
SpectralDecomposition eigh(const HermitianOperator& h);

/// exp(-i H dt) built from the spectral decomposition of H.
CMatrix step_unitary(const HermitianOperator& h, double dt);
CMatrix step_unitary(const SpectralDecomposition& spec, double dt);

QuantumState apply(const CMatrix& u, const QuantumState& psi);

/// <psi|phi>, conjugate-linear in the first argument.
Complex inner(const QuantumState& psi, const QuantumState& phi);

/// <psi|H|psi>; the imaginary residue must be below 1e-12.
double expectation(const HermitianOperator& h, const QuantumState& psi);

/// Pauli matrices and identity as plain matrices.
CMatrix pauli_x();
CMatrix pauli_z();
CMatrix identity(Eigen::Index dim);

}  // namespace aqp
