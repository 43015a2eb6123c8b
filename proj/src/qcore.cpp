#include "aqp/qcore.hpp"

#include <cmath>
#include <sstream>

namespace aqp {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

QuantumState::QuantumState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (!is_power_of_two(amplitudes_.size())) {
    throw ValidationError("state dimension " + std::to_string(amplitudes_.size()) +
                          " is not a power of two");
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "state is not normalized: |psi| = " << norm;
    throw ValidationError(msg.str());
  }
}

QuantumState QuantumState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw ValidationError("basis index out of range");
  }
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return QuantumState(std::move(v));
}

QuantumState QuantumState::normalized(const CVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw ValidationError("cannot normalize a zero vector");
  return QuantumState(v / norm);
}

HermitianOperator::HermitianOperator(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw ValidationError("operator is not square");
  }
  const double asym = max_asymmetry(entries_);
  if (!(asym < kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "operator is not Hermitian: max |H_ij - conj(H_ji)| = " << asym;
    throw ValidationError(msg.str());
  }
}

double HermitianOperator::max_asymmetry(const CMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

QuantumState SpectralDecomposition::eigenvector(Eigen::Index k) const {
  return QuantumState(eigenvectors.col(k));
}

SpectralDecomposition eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition did not converge");
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.eigenvectors.cols(); ++k) {
    auto col = out.eigenvectors.col(k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col[i]);
      if (mag > 1e-12) {
        col *= std::conj(col[i]) / mag;
        col[i] = mag;
        break;
      }
    }
  }
  return out;
}

CMatrix step_unitary(const SpectralDecomposition& spec, double dt) {
  if (!std::isfinite(dt)) throw ValidationError("time step must be finite");
  const Eigen::Index n = spec.eigenvalues.size();
  CVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases[k] = std::polar(1.0, -spec.eigenvalues[k] * dt);
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

CMatrix step_unitary(const HermitianOperator& h, double dt) {
  return step_unitary(eigh(h), dt);
}

QuantumState apply(const CMatrix& u, const QuantumState& psi) {
  if (u.cols() != psi.dim() || u.rows() != psi.dim()) {
    throw ValidationError("dimension mismatch: operator " + std::to_string(u.rows()) + "x" +
                          std::to_string(u.cols()) + " applied to state of dimension " +
                          std::to_string(psi.dim()));
  }
  return QuantumState(u * psi.amplitudes());
}

Complex inner(const QuantumState& psi, const QuantumState& phi) {
  if (psi.dim() != phi.dim()) throw ValidationError("dimension mismatch in inner product");
  return psi.amplitudes().dot(phi.amplitudes());
}

double expectation(const HermitianOperator& h, const QuantumState& psi) {
  if (h.dim() != psi.dim()) throw ValidationError("dimension mismatch in expectation");
  const Complex value = psi.amplitudes().dot(h.matrix() * psi.amplitudes());
  const double scale = 1.0 + h.matrix().cwiseAbs().maxCoeff();
  if (!(std::abs(value.imag()) <= 1e-12 * scale)) {
    std::ostringstream msg;
    msg << "expectation value has imaginary residue " << value.imag();
    throw ValidationError(msg.str());
  }
  return value.real();
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

}  // namespace aqp
