#include "aqp/dmorph.hpp"

#include <cmath>
#include <ostream>

#include "csv_format.hpp"

namespace aqp {

void DmorphConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("D-MORPH config: " + what); };
  if (!(lambda0 > 0.0)) fail("initial step size must be > 0");
  if (!(shrink > 0.0 && shrink < 1.0)) fail("shrink factor must lie in (0, 1)");
  if (max_trials < 1) fail("max_trials must be >= 1");
  if (iterations < 0) fail("iteration cap must be >= 0");
  if (slices < 2) fail("slice count M must be >= 2");
}

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// d/dc <b| exp(-i (H + c X) dt) |a> at c = 0, given a = V^dag psi, b = V^dag chi
// in the eigenbasis of H and x = V^dag X V. Uses the divided difference
// (e^{-i E_p dt} - e^{-i E_q dt}) / (E_p - E_q) in its sinc form, which is
// exact and stays finite for degenerate pairs.
Complex exp_directional(const RVector& energies, const CMatrix& x, const CVector& a,
                        const CVector& b, double dt) {
  const Eigen::Index n = energies.size();
  Complex total = 0.0;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      const double mean = 0.5 * (energies[p] + energies[q]);
      const double half_gap = 0.5 * (energies[p] - energies[q]) * dt;
      const Complex weight = Complex(0.0, -dt) * std::polar(1.0, -mean * dt) * sinc(half_gap);
      total += std::conj(b[p]) * weight * x(p, q) * a[q];
    }
  }
  return total;
}

}  // namespace

ControlGradient gradient(const AdiabaticProblem& p, const Schedule& sch, double duration,
                         double alpha) {
  if (!(duration > 0.0)) throw ValidationError("adiabatic duration T must be positive");
  const int slices = sch.slices();
  const double dt = duration / slices;
  const CMatrix& h_i = p.initial().matrix();
  const CMatrix& h_p = p.problem().matrix();

  // forward sweep
  std::vector<SpectralDecomposition> spectra;
  std::vector<CMatrix> unitaries;
  std::vector<CVector> psi;
  spectra.reserve(slices);
  unitaries.reserve(slices);
  psi.reserve(slices + 1);
  psi.push_back(p.initial_ground().amplitudes());
  for (int k = 0; k < slices; ++k) {
    spectra.push_back(eigh(hamiltonian_at(p, sch.mid_u1(k), sch.mid_u2(k))));
    unitaries.push_back(step_unitary(spectra.back(), dt));
    psi.push_back(unitaries.back() * psi.back());
  }

  // Costate g_k with dF = 2 Re <g_k | d psi_k>. Sources: the fidelity
  // projection at k = M and the trapezoid-weighted energy at every k.
  const auto weight = [&](int k) {
    return (k == 0 || k == slices ? 0.5 : 1.0) / static_cast<double>(slices);
  };
  const auto energy_source = [&](int k) -> CVector {
    const CMatrix h = sch.u1()[k] * h_i + sch.u2()[k] * h_p;
    return -alpha * weight(k) * (h * psi[k]);
  };
  const CVector& target = p.target_ground().amplitudes();

  ControlGradient out{std::vector<double>(slices + 1, 0.0), std::vector<double>(slices + 1, 0.0)};
  // explicit dependence of the energy integrand on the grid values
  for (int k = 0; k <= slices; ++k) {
    out.d_u1[k] = -alpha * weight(k) * psi[k].dot(h_i * psi[k]).real();
    out.d_u2[k] = -alpha * weight(k) * psi[k].dot(h_p * psi[k]).real();
  }

  CVector costate = target * target.dot(psi[slices]) + energy_source(slices);
  for (int k = slices - 1; k >= 0; --k) {
    // slice k: d psi_{k+1} = (dU_k / d ubar) psi_k, ubar = (u[k] + u[k+1]) / 2
    const auto& spec = spectra[k];
    const CMatrix& v = spec.eigenvectors;
    const CVector a = v.adjoint() * psi[k];
    const CVector b = v.adjoint() * costate;
    const CMatrix x1 = v.adjoint() * h_i * v;
    const CMatrix x2 = v.adjoint() * h_p * v;
    const double d_mid1 = 2.0 * exp_directional(spec.eigenvalues, x1, a, b, dt).real();
    const double d_mid2 = 2.0 * exp_directional(spec.eigenvalues, x2, a, b, dt).real();
    out.d_u1[k] += 0.5 * d_mid1;
    out.d_u1[k + 1] += 0.5 * d_mid1;
    out.d_u2[k] += 0.5 * d_mid2;
    out.d_u2[k + 1] += 0.5 * d_mid2;
    costate = unitaries[k].adjoint() * costate;
    if (k > 0) costate += energy_source(k);
  }
  return out;
}

ControlGradient project(const ControlGradient& g, const Schedule& sch) {
  ControlGradient out = g;
  const int last = sch.slices();
  auto clean = [last](std::vector<double>& d, const std::vector<double>& u) {
    d.front() = 0.0;
    d.back() = 0.0;
    for (int k = 1; k < last; ++k) {
      if ((u[k] <= 0.0 && d[k] < 0.0) || (u[k] >= 1.0 && d[k] > 0.0)) d[k] = 0.0;
    }
  };
  clean(out.d_u1, sch.u1());
  clean(out.d_u2, sch.u2());
  return out;
}

DmorphStep dmorph_step(const AdiabaticProblem& p, const Schedule& sch, const ControlGradient& g,
                       double current_F, double duration, double alpha, double lambda) {
  const auto projected = project(g, sch);
  std::vector<double> u1 = sch.u1(), u2 = sch.u2();
  for (std::size_t k = 0; k < u1.size(); ++k) {
    u1[k] += lambda * projected.d_u1[k];
    u2[k] += lambda * projected.d_u2[k];
  }
  auto next = clip_and_pin(std::move(u1), std::move(u2));
  const auto scores = evaluate(p, next, duration, alpha);
  const bool accepted = scores.F > current_F;
  return DmorphStep{std::move(next), scores, accepted};
}

DmorphStep dmorph_step(const AdiabaticProblem& p, const Schedule& sch, double duration,
                       double alpha, double lambda) {
  const auto current = evaluate(p, sch, duration, alpha);
  return dmorph_step(p, sch, gradient(p, sch, duration, alpha), current.F, duration, alpha,
                     lambda);
}

DmorphResult dmorph_optimize(const AdiabaticProblem& p, double duration, double alpha,
                             const Schedule& initial, const DmorphConfig& config) {
  config.validate();
  if (initial.slices() != config.slices) {
    throw ValidationError("initial schedule has " + std::to_string(initial.slices()) +
                          " slices but the config asks for " + std::to_string(config.slices));
  }
  Schedule current = initial;
  auto scores = evaluate(p, current, duration, alpha);
  double lambda = config.lambda0;
  std::vector<DmorphRecord> history{{0, scores.F, scores.F1, scores.F2, lambda, 0}};
  bool converged = false;
  int accepted_count = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto g = gradient(p, current, duration, alpha);
    bool accepted = false;
    int trials = 0;
    while (trials < config.max_trials) {
      ++trials;
      auto step = dmorph_step(p, current, g, scores.F, duration, alpha, lambda);
      if (step.accepted) {
        current = std::move(step.schedule);
        scores = step.scores;
        accepted = true;
        break;
      }
      lambda *= config.shrink;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    ++accepted_count;
    history.push_back({it, scores.F, scores.F1, scores.F2, lambda, trials});
  }
  auto report = objective(p, current, duration, alpha);
  return DmorphResult{std::move(current), std::move(report), std::move(history), accepted_count,
                      converged};
}

void write_dmorph_history_csv(std::ostream& out, const std::vector<DmorphRecord>& history) {
  out << "iteration,F,F1,F2,lambda,trials_used\n";
  for (const auto& r : history) {
    out << r.iteration << ',' << csv::num(r.F) << ',' << csv::num(r.F1) << ','
        << csv::num(r.F2) << ',' << csv::num(r.lambda) << ',' << r.trials_used << '\n';
  }
}

}  // namespace aqp
