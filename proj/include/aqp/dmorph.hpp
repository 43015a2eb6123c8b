#pragma once

// Gradient-flow baseline: u_l <- clip(u_l + lambda * dF/du_l) with a
// backtracking step size. The gradient is the exact derivative of the
// discretized objective with respect to the schedule's grid values,
// obtained from one forward and one adjoint sweep.

#include <iosfwd>
#include <vector>

#include "aqp/dynamics.hpp"

namespace aqp {

struct DmorphConfig {
  double lambda0 = 0.02;
  double shrink = 0.5;
  int max_trials = 100;
  int iterations = 1000;  // G_max
  int slices = 100;       // M

  void validate() const;
};

/// dF/du_l[k] for every grid point k = 0..M. Entries at the pinned
/// boundary points are reported but never used by the update.
struct ControlGradient {
  std::vector<double> d_u1;
  std::vector<double> d_u2;
};

ControlGradient gradient(const AdiabaticProblem& p, const Schedule& sch, double duration,
                         double alpha);

/// Zeroes boundary entries and components that point out of [0, 1] at an
/// active bound.
ControlGradient project(const ControlGradient& g, const Schedule& sch);

struct DmorphStep {
  Schedule schedule;
  ObjectiveScores scores;
  bool accepted = false;
};

/// Tentative update with a precomputed gradient; accepted iff the new F is
/// strictly larger than `current_F`.
DmorphStep dmorph_step(const AdiabaticProblem& p, const Schedule& sch, const ControlGradient& g,
                       double current_F, double duration, double alpha, double lambda);
DmorphStep dmorph_step(const AdiabaticProblem& p, const Schedule& sch, double duration,
                       double alpha, double lambda);

struct DmorphRecord {
  int iteration = 0;
  double F = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double lambda = 0.0;
  int trials_used = 0;
};

struct DmorphResult {
  Schedule schedule;
  ObjectiveReport report;
  std::vector<DmorphRecord> history;  // row 0 is the initial schedule
  int iterations = 0;                 // accepted updates
  bool converged = false;             // stopped because every trial failed
};

DmorphResult dmorph_optimize(const AdiabaticProblem& p, double duration, double alpha,
                             const Schedule& initial, const DmorphConfig& config);

/// CSV with header "iteration,F,F1,F2,lambda,trials_used".
void write_dmorph_history_csv(std::ostream& out, const std::vector<DmorphRecord>& history);

}  // namespace aqp
