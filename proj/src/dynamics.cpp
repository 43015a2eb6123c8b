#include "aqp/dynamics.hpp"

#include <cmath>
#include <ostream>

#include "csv_format.hpp"

namespace aqp {

namespace {

void require_duration(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("adiabatic duration T must be positive and finite");
  }
}

void require_matching(const Trajectory& traj, const Schedule& sch) {
  if (traj.states.size() != static_cast<std::size_t>(sch.slices() + 1)) {
    throw ValidationError("trajectory length does not match schedule grid");
  }
}

}  // namespace

Trajectory propagate(const AdiabaticProblem& p, const Schedule& sch, double duration) {
  require_duration(duration);
  const int slices = sch.slices();
  const double dt = duration / slices;
  Trajectory traj;
  traj.duration = duration;
  traj.states.reserve(slices + 1);
  traj.states.push_back(p.initial_ground());
  for (int k = 0; k < slices; ++k) {
    const auto h = hamiltonian_at(p, sch.mid_u1(k), sch.mid_u2(k));
    traj.states.push_back(aqp::apply(step_unitary(h, dt), traj.states.back()));
  }
  return traj;
}

double fidelity_F1(const Trajectory& traj, const AdiabaticProblem& p) {
  return std::norm(inner(p.target_ground(), traj.states.back()));
}

std::vector<double> energy_trace(const Trajectory& traj, const AdiabaticProblem& p,
                                 const Schedule& sch) {
  require_matching(traj, sch);
  std::vector<double> out(traj.states.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = sch.u1()[k] * expectation(p.initial(), traj.states[k]) +
             sch.u2()[k] * expectation(p.problem(), traj.states[k]);
  }
  return out;
}

namespace {

double trapezoid_mean(const std::vector<double>& values) {
  const std::size_t slices = values.size() - 1;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k < slices; ++k) sum += values[k];
  return sum / static_cast<double>(slices);
}

}  // namespace

double energy_F2(const Trajectory& traj, const AdiabaticProblem& p, const Schedule& sch,
                 double duration) {
  require_duration(duration);
  // (1/T) * sum_k w_k * e_k * (T/M) reduces to the trapezoid mean over the grid
  return -trapezoid_mean(energy_trace(traj, p, sch));
}

ObjectiveScores evaluate(const AdiabaticProblem& p, const Schedule& sch, double duration,
                         double alpha) {
  const auto traj = propagate(p, sch, duration);
  ObjectiveScores out;
  out.alpha = alpha;
  out.F1 = fidelity_F1(traj, p);
  out.F2 = energy_F2(traj, p, sch, duration);
  out.F = out.F1 + alpha * out.F2;
  return out;
}

ObjectiveReport objective(const AdiabaticProblem& p, const Schedule& sch, double duration,
                          double alpha) {
  const auto traj = propagate(p, sch, duration);
  ObjectiveReport out;
  out.alpha = alpha;
  out.F1 = fidelity_F1(traj, p);
  out.energy_trace = energy_trace(traj, p, sch);
  out.F2 = -trapezoid_mean(out.energy_trace);
  out.F = out.F1 + alpha * out.F2;
  out.P0_trace = ground_population_trace(traj, p, sch);
  out.gap_trace = gap_trace(p, sch);
  return out;
}

std::vector<double> ground_population_trace(const Trajectory& traj, const AdiabaticProblem& p,
                                            const Schedule& sch) {
  require_matching(traj, sch);
  std::vector<double> out(traj.states.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto spec = eigh(hamiltonian_at(p, sch.u1()[k], sch.u2()[k]));
    out[k] = ground_population(spec, traj.states[k]);
  }
  return out;
}

std::vector<double> gap_trace(const AdiabaticProblem& p, const Schedule& sch) {
  std::vector<double> out(static_cast<std::size_t>(sch.slices() + 1));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = gap_and_ground(hamiltonian_at(p, sch.u1()[k], sch.u2()[k])).gap;
  }
  return out;
}

void write_trace_csv(std::ostream& out, const ObjectiveReport& report, const Schedule& sch) {
  out << "s,P0,gap,energy_expectation\n";
  for (int k = 0; k <= sch.slices(); ++k) {
    out << csv::num(sch.s(k)) << ',' << csv::num(report.P0_trace[k]) << ','
        << csv::num(report.gap_trace[k]) << ',' << csv::num(report.energy_trace[k]) << '\n';
  }
}

}  // namespace aqp
