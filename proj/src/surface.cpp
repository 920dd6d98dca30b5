#include "risim/surface.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "risim/units.hpp"

namespace risim {

void BlockLayout::validate() const {
  if (block_rows < 1 || block_cols < 1) {
    throw std::invalid_argument("block layout: dimensions must be >= 1");
  }
  if (block_count() > 16) {
    throw std::invalid_argument("block layout: at most 16 blocks per surface");
  }
}

RisSurface tile_blocks(const BlockLayout& layout, const Vec3& center,
                       const Vec3& normal) {
  layout.validate();
  const Vec3 n = normalized(normal);

  // In-plane basis: u runs along element columns, v along rows (upward).
  const Vec3 up = std::fabs(n.z) < 0.99 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 u = normalized(cross(up, n));
  const Vec3 v = cross(n, u);

  const int elem_rows = layout.block_rows * BlockLayout::kBlockDim;
  const int elem_cols = layout.block_cols * BlockLayout::kBlockDim;
  const double pitch = BlockLayout::kElementPitchM;
  const double mid_col = (elem_cols - 1) / 2.0;
  const double mid_row = (elem_rows - 1) / 2.0;

  RisSurface surface;
  surface.layout = layout;
  surface.center = center;
  surface.normal = n;
  surface.element_positions.reserve(layout.element_count());
  for (int br = 0; br < layout.block_rows; ++br) {
    for (int bc = 0; bc < layout.block_cols; ++bc) {
      for (int er = 0; er < BlockLayout::kBlockDim; ++er) {
        for (int ec = 0; ec < BlockLayout::kBlockDim; ++ec) {
          const int row = br * BlockLayout::kBlockDim + er;
          const int col = bc * BlockLayout::kBlockDim + ec;
          const double du = (col - mid_col) * pitch;
          const double dv = (mid_row - row) * pitch;
          surface.element_positions.push_back(center + u * du + v * dv);
        }
      }
    }
  }
  surface.config.assign(layout.element_count(), 0);
  return surface;
}

double received_signal_power_w(const ChannelRealization& realization,
                               std::span<const std::uint8_t> config,
                               double tx_power_w) {
  const std::size_t n = realization.h.size();
  if (realization.g.size() != n || config.size() != n) {
    throw std::invalid_argument(
        "received_signal_power_w: config length does not match channel size");
  }
  std::complex<double> sum =
      std::polar(realization.direct.amplitude, -realization.direct.phase);
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> c = cascade_phasor(realization.h[i], realization.g[i]);
    sum += config[i] ? -c : c;
  }
  return tx_power_w * std::norm(sum);
}

double received_signal_power_w(const ChannelRealization& realization,
                               const RisSurface& surface, double tx_power_w) {
  return received_signal_power_w(realization, std::span(surface.config),
                                 tx_power_w);
}

double received_snr_db(const ChannelRealization& realization,
                       const RisSurface& surface, double tx_power_w) {
  if (!(realization.noise_power_w > 0.0)) {
    throw std::invalid_argument("received_snr_db: noise power must be positive");
  }
  return linear_to_db(received_signal_power_w(realization, surface, tx_power_w) /
                      realization.noise_power_w);
}

double optimal_continuous_power_w(const ChannelRealization& realization,
                                  double tx_power_w) {
  if (realization.g.size() != realization.h.size()) {
    throw std::invalid_argument(
        "optimal_continuous_power_w: mismatched coefficient lists");
  }
  double aligned = 0.0;
  for (std::size_t i = 0; i < realization.h.size(); ++i) {
    aligned += realization.h[i].amplitude * realization.g[i].amplitude;
  }
  return tx_power_w * aligned * aligned;
}

std::string config_to_hex(std::span<const std::uint8_t> config) {
  static const char* kDigits = "0123456789abcdef";
  const std::size_t n_bytes = (config.size() + 7) / 8;
  std::vector<std::uint8_t> bytes(n_bytes, 0);
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config[i] > 1) {
      throw std::invalid_argument("config_to_hex: config entries must be 0 or 1");
    }
    bytes[i / 8] |= static_cast<std::uint8_t>(config[i] << (i % 8));
  }
  std::string out;
  out.reserve(2 * n_bytes);
  for (const std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> config_from_hex(const std::string& hex,
                                          int element_count) {
  if (element_count < 0) {
    throw std::invalid_argument("config_from_hex: negative element count");
  }
  const std::size_t n_bytes = (static_cast<std::size_t>(element_count) + 7) / 8;
  if (hex.size() != 2 * n_bytes) {
    throw std::invalid_argument("config_from_hex: hex string length mismatch");
  }
  const auto unhex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("config_from_hex: invalid hex digit");
  };
  std::vector<std::uint8_t> config(element_count, 0);
  for (std::size_t byte = 0; byte < n_bytes; ++byte) {
    const int value = (unhex(hex[2 * byte]) << 4) | unhex(hex[2 * byte + 1]);
    for (int bit = 0; bit < 8; ++bit) {
      const std::size_t index = byte * 8 + bit;
      const bool set = (value >> bit) & 1;
      if (index < static_cast<std::size_t>(element_count)) {
        config[index] = set ? 1 : 0;
      } else if (set) {
        throw std::invalid_argument("config_from_hex: nonzero padding bits");
      }
    }
  }
  return config;
}

}  // namespace risim
