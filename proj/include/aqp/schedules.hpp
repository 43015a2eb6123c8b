#pragma once

// Control schedules on the uniform scaled-time grid s_k = k / M and the
// CRAB parametrization used by the evolutionary optimizer.

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "aqp/qcore.hpp"

namespace aqp {

/// A CRAB candidate whose rendered control is constant cannot be normalized.
class DegenerateCandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two control sequences u1, u2 sampled at M + 1 grid points.
///
/// Values lie in [0, 1] and the boundary entries are pinned:
/// u1[0] = 1, u1[M] = 0, u2[0] = 0, u2[M] = 1.
class Schedule {
 public:
  Schedule(std::vector<double> u1, std::vector<double> u2);

  /// Skips the boundary-pin check (bounds and shape are still validated).
  /// Only meant for frozen-control diagnostics.
  static Schedule relaxed(std::vector<double> u1, std::vector<double> u2);

  int slices() const { return static_cast<int>(u1_.size()) - 1; }
  double s(int k) const { return static_cast<double>(k) / slices(); }
  const std::vector<double>& u1() const { return u1_; }
  const std::vector<double>& u2() const { return u2_; }
  bool pinned() const { return pinned_; }

  /// Average of the grid values bounding slice k (0 <= k < M).
  double mid_u1(int k) const { return 0.5 * (u1_[k] + u1_[k + 1]); }
  double mid_u2(int k) const { return 0.5 * (u2_[k] + u2_[k + 1]); }

 private:
  Schedule(std::vector<double> u1, std::vector<double> u2, bool pinned);

  std::vector<double> u1_;
  std::vector<double> u2_;
  bool pinned_ = true;
};

/// Raw (unconstrained) control pair on the grid.
struct RawControls {
  std::vector<double> u1;
  std::vector<double> u2;
};

/// Flat CRAB coefficient vector. For control l in {0, 1} and harmonic k in
/// [0, N_c) the genes (a, b, omega) sit at offset 3 * (l * N_c + k).
class CrabParams {
 public:
  explicit CrabParams(int harmonics);
  CrabParams(int harmonics, std::vector<double> genes);

  int harmonics() const { return harmonics_; }
  std::size_t size() const { return genes_.size(); }
  const std::vector<double>& genes() const { return genes_; }
  std::vector<double>& genes() { return genes_; }

  double a(int control, int k) const { return genes_[offset(control, k)]; }
  double b(int control, int k) const { return genes_[offset(control, k) + 1]; }
  double omega(int control, int k) const { return genes_[offset(control, k) + 2]; }
  double& a(int control, int k) { return genes_[offset(control, k)]; }
  double& b(int control, int k) { return genes_[offset(control, k) + 1]; }
  double& omega(int control, int k) { return genes_[offset(control, k) + 2]; }

  bool operator==(const CrabParams&) const = default;

 private:
  std::size_t offset(int control, int k) const {
    return static_cast<std::size_t>(3 * (control * harmonics_ + k));
  }

  int harmonics_;
  std::vector<double> genes_;
};

struct GuessEnvelope {
  std::function<double(double)> u1 = [](double s) { return 1.0 - s; };
  std::function<double(double)> u2 = [](double s) { return s; };
};

Schedule linear(int slices);

/// Local-adiabatic schedule for the Grover pair in Hilbert dimension `dim`.
Schedule roland_cerf(long long dim, int slices);

/// u_l(s) = u_l^g(s) * (1 + sum_k [a sin(omega s) + b cos(omega s)]) at grid points.
RawControls crab_render(const CrabParams& x, const GuessEnvelope& g, int slices);

/// Min-max rescales each control onto [0, 1], then pins the boundary entries.
/// Throws DegenerateCandidate for a constant control.
Schedule constrain(const RawControls& raw, int slices);

/// Clamps into [0, 1] and pins the boundary entries.
Schedule clip_and_pin(std::vector<double> u1, std::vector<double> u2);

/// CSV with header "s,u1,u2", one row per grid point.
void write_schedule_csv(std::ostream& out, const Schedule& sch);

}  // namespace aqp
