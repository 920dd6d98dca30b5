#include "risim/propagation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "risim/rng.hpp"
#include "risim/surface.hpp"
#include "risim/units.hpp"

namespace risim {

void LinkGeometry::validate() const {
  if (!finite(tx_pos) || !finite(ris_center) || !finite(rx_pos) ||
      !finite(ris_normal)) {
    throw std::invalid_argument("link geometry: non-finite position");
  }
  if (distance(tx_pos, ris_center) <= 0.0 ||
      distance(ris_center, rx_pos) <= 0.0 ||
      distance(tx_pos, rx_pos) <= 0.0) {
    throw std::invalid_argument("link geometry: coincident terminals");
  }
  if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz)) {
    throw std::invalid_argument("link geometry: carrier frequency must be positive");
  }
  if (std::fabs(norm(ris_normal) - 1.0) > 1e-6) {
    throw std::invalid_argument("link geometry: surface normal must be unit length");
  }
}

double LinkGeometry::wavelength_m() const {
  return kSpeedOfLightMps / carrier_freq_hz;
}

void PathLossModel::validate() const {
  if (!(exponent >= 1.0 && exponent <= 6.0)) {
    throw std::invalid_argument("path-loss model: exponent must lie in [1, 6]");
  }
  if (!(reference_distance_m > 0.0)) {
    throw std::invalid_argument("path-loss model: reference distance must be positive");
  }
  if (fading == FadingKind::Rician && !std::isfinite(rician_k_db)) {
    throw std::invalid_argument("path-loss model: Rician K must be finite");
  }
  if (!std::isfinite(blockage_extra_loss_db) || blockage_extra_loss_db < 0.0) {
    throw std::invalid_argument("path-loss model: blockage loss must be finite and >= 0");
  }
}

double PathLossModel::path_loss_db(double distance_m, double freq_hz) const {
  switch (kind) {
    case PathLossKind::Fspl:
      return fspl_db(distance_m, freq_hz);
    case PathLossKind::LogDistance:
      return log_distance_pl_db(distance_m, *this, freq_hz);
  }
  throw std::logic_error("path-loss model: unknown kind");
}

double fspl_db(double distance_m, double freq_hz) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("fspl_db: distance must be positive");
  }
  if (!(freq_hz > 0.0)) {
    throw std::domain_error("fspl_db: frequency must be positive");
  }
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(freq_hz) +
         20.0 * std::log10(4.0 * kPi / kSpeedOfLightMps);
}

double log_distance_pl_db(double distance_m, const PathLossModel& model,
                          double freq_hz) {
  if (distance_m < model.reference_distance_m) {
    throw std::domain_error(
        "log_distance_pl_db: distance below the model reference distance");
  }
  return fspl_db(model.reference_distance_m, freq_hz) +
         10.0 * model.exponent * std::log10(distance_m / model.reference_distance_m);
}

double noise_power_w(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("noise_power_w: bandwidth must be positive");
  }
  const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_w(dbm);
}

double phase_for_distance(double distance_m, double wavelength_m) {
  return wrap_two_pi(kTwoPi * distance_m / wavelength_m);
}

namespace {

std::complex<double> draw_fading(const PathLossModel& model, Rng& rng) {
  switch (model.fading) {
    case FadingKind::None:
      return {1.0, 0.0};
    case FadingKind::Rayleigh:
      return rng.scattered_unit_power();
    case FadingKind::Rician: {
      const double k = db_to_linear(model.rician_k_db);
      return std::sqrt(k / (k + 1.0)) +
             std::sqrt(1.0 / (k + 1.0)) * rng.scattered_unit_power();
    }
  }
  throw std::logic_error("draw_fading: unknown fading kind");
}

void apply_fading(ComplexCoeff& coeff, const PathLossModel& model, Rng& rng) {
  if (model.fading == FadingKind::None) return;
  const std::complex<double> z = draw_fading(model, rng);
  coeff.amplitude *= std::abs(z);
  coeff.phase = wrap_two_pi(coeff.phase + std::arg(z));
}

}  // namespace

ChannelRealization sample_channel(const LinkGeometry& geometry,
                                  const RisSurface& surface,
                                  const PathLossModel& model,
                                  std::uint64_t seed,
                                  DirectPathMode direct_mode, double noise_w) {
  geometry.validate();
  model.validate();
  if (!(noise_w > 0.0)) {
    throw std::invalid_argument("sample_channel: noise power must be positive");
  }

  const double lambda = geometry.wavelength_m();
  const double tx_gain_amp = std::pow(10.0, model.tx_gain_dbi / 20.0);
  const double rx_gain_amp = std::pow(10.0, model.rx_gain_dbi / 20.0);

  const auto segment = [&](const Vec3& from, const Vec3& to,
                           double gain_amp) -> ComplexCoeff {
    const double d = distance(from, to);
    const double amp =
        std::pow(10.0, -model.path_loss_db(d, geometry.carrier_freq_hz) / 20.0) *
        gain_amp;
    return {amp, phase_for_distance(d, lambda)};
  };

  const int n = surface.element_count();
  ChannelRealization out;
  out.h.reserve(n);
  out.g.reserve(n);
  for (const Vec3& p : surface.element_positions) {
    out.h.push_back(segment(geometry.tx_pos, p, tx_gain_amp));
  }
  for (const Vec3& p : surface.element_positions) {
    out.g.push_back(segment(p, geometry.rx_pos, rx_gain_amp));
  }

  if (direct_mode != DirectPathMode::Absent) {
    out.direct = segment(geometry.tx_pos, geometry.rx_pos, tx_gain_amp * rx_gain_amp);
    if (direct_mode == DirectPathMode::Obstructed) {
      out.direct.amplitude *= std::pow(10.0, -model.blockage_extra_loss_db / 20.0);
    }
  }

  // Fading draws happen in one fixed order (h, then g, then direct) from a
  // single stream so a realization is a pure function of (inputs, seed).
  Rng rng(seed);
  for (ComplexCoeff& c : out.h) apply_fading(c, model, rng);
  for (ComplexCoeff& c : out.g) apply_fading(c, model, rng);
  if (direct_mode != DirectPathMode::Absent) apply_fading(out.direct, model, rng);

  out.noise_power_w = noise_w;
  return out;
}

}  // namespace risim
