#ifndef SAGUIN_LORA_PHY_HPP
#define SAGUIN_LORA_PHY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>

#include "saguin/error.hpp"

namespace saguin {

inline constexpr int min_sf = 7;
inline constexpr int max_sf = 12;

struct LoRaParams {
  int sf = 9;
  double bandwidth_hz = 125e3;
  int cr_denom_extra = 1;  // coding rate 4/(4 + cr_denom_extra)
  int app_payload_bytes = 10;
  int mac_overhead_bytes = 13;
  int preamble_symbols = 8;
  bool explicit_header = true;
  bool crc = true;
  std::optional<bool> ldro;  // unset: on for SF >= 11

  bool low_data_rate_optimize() const { return ldro.value_or(sf >= 11); }

  static LoRaParams defaults(int sf) {
    LoRaParams p;
    p.sf = sf;
    return p;
  }
};

inline void validate(const LoRaParams& p) {
  if (p.sf < min_sf || p.sf > max_sf) throw DomainError("spreading factor must lie in [7, 12]");
  if (!(p.bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  if (p.cr_denom_extra < 1 || p.cr_denom_extra > 4) throw DomainError("coding rate must be 4/5..4/8");
  if (p.app_payload_bytes < 1) throw DomainError("application payload must be >= 1 byte");
  if (p.mac_overhead_bytes < 0 || p.preamble_symbols < 0)
    throw DomainError("framing sizes must be non-negative");
}

inline double symbol_time(const LoRaParams& p) {
  return std::ldexp(1.0, p.sf) / p.bandwidth_hz;
}

/// Number of payload symbols (including the 8 fixed header symbols).
inline int payload_symbols(const LoRaParams& p) {
  const int pl = p.app_payload_bytes + p.mac_overhead_bytes;
  const int de = p.low_data_rate_optimize() ? 1 : 0;
  const int numerator =
      8 * pl - 4 * p.sf + 28 + 16 * (p.crc ? 1 : 0) - 20 * (p.explicit_header ? 0 : 1);
  const int denominator = 4 * (p.sf - 2 * de);
  // ceil for possibly negative numerators
  const int blocks = numerator > 0 ? (numerator + denominator - 1) / denominator : 0;
  return 8 + std::max(blocks * (4 + p.cr_denom_extra), 0);
}

/// Frame duration in seconds (preamble + header + payload).
inline double time_on_air(const LoRaParams& p) {
  validate(p);
  const double ts = symbol_time(p);
  return (p.preamble_symbols + 4.25) * ts + payload_symbols(p) * ts;
}

enum class ToaSource { computed, paper_table };

constexpr std::string_view to_string(ToaSource s) {
  return s == ToaSource::computed ? "computed" : "paper_table";
}

inline std::optional<ToaSource> parse_toa_source(std::string_view s) {
  if (s == "computed") return ToaSource::computed;
  if (s == "paper_table") return ToaSource::paper_table;
  return std::nullopt;
}

/// Published 10-byte uplink durations for SF7..SF12 at 125 kHz, CR 4/5 (s).
/// The SF9 entry is the payload-only duration; the computed value is 205.824 ms.
inline constexpr std::array<double, 6> published_toa_s = {0.061696, 0.113152, 0.155648,
                                                          0.370688, 0.823296, 1.482752};

inline double time_on_air(const LoRaParams& p, ToaSource source) {
  if (source == ToaSource::paper_table) {
    validate(p);
    return published_toa_s[static_cast<std::size_t>(p.sf - min_sf)];
  }
  return time_on_air(p);
}

struct DemodThresholds {
  std::array<double, 6> snr_threshold_db = {-6.0, -9.0, -12.0, -15.0, -17.5, -20.0};
  double sir_capture_db = 6.0;

  double snr_threshold(int sf) const {
    if (sf < min_sf || sf > max_sf) throw DomainError("spreading factor must lie in [7, 12]");
    return snr_threshold_db[static_cast<std::size_t>(sf - min_sf)];
  }
};

/// Boundary-inclusive SNR sensitivity check.
inline bool demod_ok(double snr_db, int sf, const DemodThresholds& t = {}) {
  return snr_db >= t.snr_threshold(sf);
}

}  // namespace saguin

#endif  // SAGUIN_LORA_PHY_HPP
