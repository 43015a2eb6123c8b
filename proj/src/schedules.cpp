#include "aqp/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "csv_format.hpp"

namespace aqp {

namespace {

void require_slices(int slices) {
  if (slices < 2) throw ValidationError("slice count must be >= 2, got " + std::to_string(slices));
}

void check_shape_and_bounds(const std::vector<double>& u1, const std::vector<double>& u2) {
  if (u1.size() != u2.size()) throw ValidationError("control sequences differ in length");
  if (u1.size() < 3) throw ValidationError("a schedule needs at least 2 slices");
  for (const auto* u : {&u1, &u2}) {
    for (std::size_t k = 0; k < u->size(); ++k) {
      const double v = (*u)[k];
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "control value " << v << " at grid point " << k << " outside [0, 1]";
        throw ValidationError(msg.str());
      }
    }
  }
}

}  // namespace

Schedule::Schedule(std::vector<double> u1, std::vector<double> u2)
    : Schedule(std::move(u1), std::move(u2), true) {}

Schedule::Schedule(std::vector<double> u1, std::vector<double> u2, bool pinned)
    : u1_(std::move(u1)), u2_(std::move(u2)), pinned_(pinned) {
  check_shape_and_bounds(u1_, u2_);
  if (pinned_ && !(u1_.front() == 1.0 && u1_.back() == 0.0 && u2_.front() == 0.0 &&
                   u2_.back() == 1.0)) {
    throw ValidationError("schedule violates boundary conditions u1(0)=u2(1)=1, u1(1)=u2(0)=0");
  }
}

Schedule Schedule::relaxed(std::vector<double> u1, std::vector<double> u2) {
  return Schedule(std::move(u1), std::move(u2), false);
}

CrabParams::CrabParams(int harmonics)
    : CrabParams(harmonics, std::vector<double>(static_cast<std::size_t>(6 * harmonics), 0.0)) {}

CrabParams::CrabParams(int harmonics, std::vector<double> genes)
    : harmonics_(harmonics), genes_(std::move(genes)) {
  if (harmonics_ < 1) throw ValidationError("CRAB harmonic count must be >= 1");
  if (genes_.size() != static_cast<std::size_t>(6 * harmonics_)) {
    throw ValidationError("CRAB vector length must be 6 * N_c");
  }
  for (double g : genes_) {
    if (!std::isfinite(g)) throw ValidationError("CRAB coefficients must be finite");
  }
}

Schedule linear(int slices) {
  require_slices(slices);
  std::vector<double> u1(slices + 1), u2(slices + 1);
  for (int k = 0; k <= slices; ++k) {
    const double s = static_cast<double>(k) / slices;
    u1[k] = 1.0 - s;
    u2[k] = s;
  }
  return Schedule(std::move(u1), std::move(u2));
}

Schedule roland_cerf(long long dim, int slices) {
  if (dim < 2) throw ValidationError("Roland-Cerf schedule needs dimension >= 2");
  require_slices(slices);
  const double root = std::sqrt(static_cast<double>(dim - 1));
  const double angle = std::atan(root);
  std::vector<double> u1(slices + 1), u2(slices + 1);
  for (int k = 0; k <= slices; ++k) {
    const double s = static_cast<double>(k) / slices;
    const double v = 0.5 + std::tan((2.0 * s - 1.0) * angle) / (2.0 * root);
    u2[k] = std::clamp(v, 0.0, 1.0);
    u1[k] = 1.0 - u2[k];
  }
  u2.front() = 0.0;
  u1.front() = 1.0;
  u2.back() = 1.0;
  u1.back() = 0.0;
  return Schedule(std::move(u1), std::move(u2));
}

RawControls crab_render(const CrabParams& x, const GuessEnvelope& g, int slices) {
  require_slices(slices);
  RawControls raw{std::vector<double>(slices + 1), std::vector<double>(slices + 1)};
  for (int control = 0; control < 2; ++control) {
    const auto& envelope = control == 0 ? g.u1 : g.u2;
    auto& out = control == 0 ? raw.u1 : raw.u2;
    for (int k = 0; k <= slices; ++k) {
      const double s = static_cast<double>(k) / slices;
      double modulation = 1.0;
      for (int h = 0; h < x.harmonics(); ++h) {
        const double w = x.omega(control, h);
        modulation += x.a(control, h) * std::sin(w * s) + x.b(control, h) * std::cos(w * s);
      }
      out[k] = envelope(s) * modulation;
    }
  }
  return raw;
}

Schedule constrain(const RawControls& raw, int slices) {
  require_slices(slices);
  const auto expected = static_cast<std::size_t>(slices + 1);
  if (raw.u1.size() != expected || raw.u2.size() != expected) {
    throw ValidationError("raw control length does not match slice count");
  }
  auto normalize = [](const std::vector<double>& u, const char* name) {
    const auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw DegenerateCandidate(std::string("raw control ") + name + " is not finite");
    }
    if (!(hi > lo)) {
      throw DegenerateCandidate(std::string("raw control ") + name + " is constant");
    }
    std::vector<double> out(u.size());
    const double span = hi - lo;
    for (std::size_t k = 0; k < u.size(); ++k) {
      out[k] = std::clamp((u[k] - lo) / span, 0.0, 1.0);
    }
    return out;
  };
  auto u1 = normalize(raw.u1, "u1");
  auto u2 = normalize(raw.u2, "u2");
  u1.front() = 1.0;
  u1.back() = 0.0;
  u2.front() = 0.0;
  u2.back() = 1.0;
  return Schedule(std::move(u1), std::move(u2));
}

Schedule clip_and_pin(std::vector<double> u1, std::vector<double> u2) {
  if (u1.size() != u2.size() || u1.size() < 3) {
    throw ValidationError("control sequences must share a length of at least 3");
  }
  for (auto* u : {&u1, &u2}) {
    for (double& v : *u) {
      if (!std::isfinite(v)) throw ValidationError("control update produced a non-finite value");
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  u1.front() = 1.0;
  u1.back() = 0.0;
  u2.front() = 0.0;
  u2.back() = 1.0;
  return Schedule(std::move(u1), std::move(u2));
}

void write_schedule_csv(std::ostream& out, const Schedule& sch) {
  out << "s,u1,u2\n";
  for (int k = 0; k <= sch.slices(); ++k) {
    out << csv::num(sch.s(k)) << ',' << csv::num(sch.u1()[k]) << ',' << csv::num(sch.u2()[k])
        << '\n';
  }
}

}  // namespace aqp
