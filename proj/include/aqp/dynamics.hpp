#pragma once

// Piecewise-constant propagation of a schedule and the weighted objective
// F = F1 + alpha * F2 with
//   F1 = |<phi_0(T)|psi(T)>|^2
//   F2 = -(1/T) * integral_0^T <psi(t)|H(t)|psi(t)> dt.
//
// Slice k uses exact exp(-i H(ubar_k) T/M) with ubar_k the mean of the two
// bounding grid values. F2 is integrated with the trapezoidal rule using H
// at the grid values.

#include <iosfwd>
#include <vector>

#include "aqp/hamiltonians.hpp"
#include "aqp/schedules.hpp"

namespace aqp {

struct Trajectory {
  std::vector<QuantumState> states;  // M + 1 states at t_k = (k / M) T
  double duration = 0.0;
};

struct ObjectiveScores {
  double F = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double alpha = 0.0;
};

struct ObjectiveReport {
  double F = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double alpha = 0.0;
  std::vector<double> P0_trace;
  std::vector<double> gap_trace;
  std::vector<double> energy_trace;

  ObjectiveScores scores() const { return {F, F1, F2, alpha}; }
};

Trajectory propagate(const AdiabaticProblem& p, const Schedule& sch, double duration);

double fidelity_F1(const Trajectory& traj, const AdiabaticProblem& p);

/// <psi(t_k)|H(u(s_k))|psi(t_k)> at every grid point.
std::vector<double> energy_trace(const Trajectory& traj, const AdiabaticProblem& p,
                                 const Schedule& sch);

double energy_F2(const Trajectory& traj, const AdiabaticProblem& p, const Schedule& sch,
                 double duration);

/// F, F1 and F2 only; skips the spectral diagnostics.
ObjectiveScores evaluate(const AdiabaticProblem& p, const Schedule& sch, double duration,
                         double alpha);

/// Full report, including P0, gap and energy traces.
ObjectiveReport objective(const AdiabaticProblem& p, const Schedule& sch, double duration,
                          double alpha);

std::vector<double> ground_population_trace(const Trajectory& traj, const AdiabaticProblem& p,
                                            const Schedule& sch);

std::vector<double> gap_trace(const AdiabaticProblem& p, const Schedule& sch);

/// CSV with header "s,P0,gap,energy_expectation".
void write_trace_csv(std::ostream& out, const ObjectiveReport& report, const Schedule& sch);

}  // namespace aqp
