#pragma once

#include <cstdint>
#include <vector>

#include "tapscope/rng.hpp"

namespace tapscope {

// Parameters of the simulated amplified line. Power bookkeeping is done in
// dB/dBm; amplified spontaneous emission is accumulated in watts within the
// reference bandwidth and co-propagates through every loss and gain element
// downstream of the amplifier that emitted it.
struct LinkConfig {
  int n_spans = 4;
  std::vector<double> span_loss_db = {10.0, 10.0, 10.0, 10.0};
  double launch_power_dbm = 0.0;
  double booster_target_dbm = 0.0;
  /// Fixed insertion loss (mux + emulation attenuator pad) between the
  /// pre-booster monitor and the booster input. This is what gives the
  /// booster a real operating gain even when the transmitter already sits
  /// at the booster target power.
  double pre_booster_loss_db = 20.0;
  /// Shared by the booster and the in-line amplifiers.
  double noise_figure_db = 5.0;
  double center_frequency_thz = 193.41;
  double ref_bandwidth_ghz = 12.5;
  double symbol_rate_gbaud = 28.0;
  double power_noise_sigma_db = 0.02;
  double osnr_noise_sigma_db = 0.02;
  /// Bits compared per BER reading; measured BER is an error count over this.
  std::int64_t n_bits_per_ber = std::int64_t{1} << 23;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

enum class TapLocation { None, Transmitter, PreBooster, Span };

// A localized power loss. location == None iff loss_db == 0.
struct TapEvent {
  TapLocation location = TapLocation::None;
  int span_index = 0;  // 1-based, meaningful only when location == Span
  double loss_db = 0.0;

  static TapEvent none();
  static TapEvent transmitter(double loss_db);
  static TapEvent pre_booster(double loss_db);
  static TapEvent span(int index, double loss_db);

  /// Throws std::invalid_argument on inconsistent fields or span index
  /// outside [1, cfg.n_spans].
  void validate(const LinkConfig& cfg) const;
};

// One optical performance monitoring reading: receiver OSNR in the reference
// bandwidth, measured BER, and the channel powers along the line.
// p_span_dbm[i] is read at the fiber output of span i+1, before the in-line
// amplifier of that span.
struct OpmSample {
  double osnr_db = 0.0;
  double ber = 0.0;
  double p_rx_dbm = 0.0;
  double p_tx_dbm = 0.0;
  double p_link_dbm = 0.0;
  std::vector<double> p_span_dbm;
};

/// Noiseless link budget + ASE accumulation + analytic BER.
///
/// Signal path: transmitter (tap) -> p_tx -> (tap) -> p_link -> fixed pad ->
/// booster (constant output power, gain = booster_target - input) -> for each
/// span: fiber loss (tap applied after the full span loss) -> span monitor ->
/// in-line amplifier at fixed gain equal to that span's nominal loss -> next
/// span; receiver after the last amplifier. Each amplifier with linear gain
/// G > 1 adds F h nu B_ref (G - 1) of ASE; sub-unity gain adds none.
/// BER maps from the receiver OSNR as 0.5 erfc(sqrt(osnr_lin * B_ref / R_s)).
OpmSample propagate(const LinkConfig& cfg, const TapEvent& event);

/// propagate() plus measurement noise. Draw order per sample (fixed, part of
/// the determinism contract): osnr, p_rx, p_tx, p_link, p_span[0..n), then
/// one binomial error-count draw of n_bits_per_ber bits at the analytic BER.
/// Power noise uses power_noise_sigma_db, OSNR noise osnr_noise_sigma_db.
OpmSample sample_opm(const LinkConfig& cfg, const TapEvent& event, RandomStream& rng);

}
