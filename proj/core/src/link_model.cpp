#include "tapscope/link_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tapscope {

namespace {

constexpr double kPlanck = 6.62607015e-34;  // J s

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_w(double dbm) { return 1e-3 * db_to_lin(dbm); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void LinkConfig::validate() const {
  require(n_spans >= 1, "n_spans must be >= 1");
  require(span_loss_db.size() == static_cast<std::size_t>(n_spans),
          "span_loss_db must have n_spans entries");
  for (double l : span_loss_db)
    require(std::isfinite(l) && l > 0.0, "span losses must be positive");
  require(std::isfinite(launch_power_dbm), "launch_power_dbm must be finite");
  require(std::isfinite(booster_target_dbm), "booster_target_dbm must be finite");
  require(std::isfinite(pre_booster_loss_db) && pre_booster_loss_db >= 0.0,
          "pre_booster_loss_db must be >= 0");
  require(std::isfinite(noise_figure_db) && noise_figure_db > 0.0,
          "noise_figure_db must be positive");
  require(std::isfinite(center_frequency_thz) && center_frequency_thz > 0.0,
          "center_frequency_thz must be positive");
  require(std::isfinite(ref_bandwidth_ghz) && ref_bandwidth_ghz > 0.0,
          "ref_bandwidth_ghz must be positive");
  require(std::isfinite(symbol_rate_gbaud) && symbol_rate_gbaud > 0.0,
          "symbol_rate_gbaud must be positive");
  require(std::isfinite(power_noise_sigma_db) && power_noise_sigma_db >= 0.0,
          "power_noise_sigma_db must be >= 0");
  require(std::isfinite(osnr_noise_sigma_db) && osnr_noise_sigma_db >= 0.0,
          "osnr_noise_sigma_db must be >= 0");
  require(n_bits_per_ber >= 1, "n_bits_per_ber must be >= 1");
}

TapEvent TapEvent::none() { return {TapLocation::None, 0, 0.0}; }
TapEvent TapEvent::transmitter(double loss_db) {
  return {TapLocation::Transmitter, 0, loss_db};
}
TapEvent TapEvent::pre_booster(double loss_db) {
  return {TapLocation::PreBooster, 0, loss_db};
}
TapEvent TapEvent::span(int index, double loss_db) {
  return {TapLocation::Span, index, loss_db};
}

void TapEvent::validate(const LinkConfig& cfg) const {
  require(std::isfinite(loss_db), "tap loss must be finite");
  if (location == TapLocation::None) {
    require(loss_db == 0.0, "a no-tap event must have zero loss");
    require(span_index == 0, "a no-tap event must not carry a span index");
    return;
  }
  require(loss_db > 0.0, "a tap must have positive loss");
  if (location == TapLocation::Span) {
    require(span_index >= 1 && span_index <= cfg.n_spans,
            "span_index out of range");
  } else {
    require(span_index == 0, "span_index is only meaningful for span taps");
  }
}

OpmSample propagate(const LinkConfig& cfg, const TapEvent& event) {
  cfg.validate();
  event.validate(cfg);

  const double nu = cfg.center_frequency_thz * 1e12;
  const double b_ref = cfg.ref_bandwidth_ghz * 1e9;
  const double noise_factor = db_to_lin(cfg.noise_figure_db);
  const auto amp_ase_w = [&](double gain_db) {
    const double g = db_to_lin(gain_db);
    return g > 1.0 ? noise_factor * kPlanck * nu * b_ref * (g - 1.0) : 0.0;
  };

  OpmSample s;
  s.p_tx_dbm = cfg.launch_power_dbm -
               (event.location == TapLocation::Transmitter ? event.loss_db : 0.0);
  s.p_link_dbm = s.p_tx_dbm -
                 (event.location == TapLocation::PreBooster ? event.loss_db : 0.0);

  const double booster_in_dbm = s.p_link_dbm - cfg.pre_booster_loss_db;
  const double booster_gain_db = cfg.booster_target_dbm - booster_in_dbm;

  double sig_dbm = cfg.booster_target_dbm;  // constant-output-power booster
  double ase_w = amp_ase_w(booster_gain_db);

  s.p_span_dbm.resize(cfg.n_spans);
  for (int i = 0; i < cfg.n_spans; ++i) {
    const bool tapped =
        event.location == TapLocation::Span && event.span_index == i + 1;
    const double drop_db = cfg.span_loss_db[i] + (tapped ? event.loss_db : 0.0);
    sig_dbm -= drop_db;
    ase_w *= db_to_lin(-drop_db);
    s.p_span_dbm[i] = sig_dbm;  // monitor sits before the in-line amplifier

    const double gain_db = cfg.span_loss_db[i];  // fixed gain = nominal loss
    sig_dbm += gain_db;
    ase_w = ase_w * db_to_lin(gain_db) + amp_ase_w(gain_db);
  }

  s.p_rx_dbm = sig_dbm;
  const double osnr_lin = dbm_to_w(sig_dbm) / ase_w;
  s.osnr_db = 10.0 * std::log10(osnr_lin);
  const double r_s = cfg.symbol_rate_gbaud * 1e9;
  s.ber = 0.5 * std::erfc(std::sqrt(osnr_lin * b_ref / r_s));
  return s;
}

OpmSample sample_opm(const LinkConfig& cfg, const TapEvent& event,
                     RandomStream& rng) {
  OpmSample s = propagate(cfg, event);
  const double analytic_ber = s.ber;

  s.osnr_db = rng.next_gaussian(s.osnr_db, cfg.osnr_noise_sigma_db);
  s.p_rx_dbm = rng.next_gaussian(s.p_rx_dbm, cfg.power_noise_sigma_db);
  s.p_tx_dbm = rng.next_gaussian(s.p_tx_dbm, cfg.power_noise_sigma_db);
  s.p_link_dbm = rng.next_gaussian(s.p_link_dbm, cfg.power_noise_sigma_db);
  for (double& p : s.p_span_dbm)
    p = rng.next_gaussian(p, cfg.power_noise_sigma_db);

  const std::int64_t errors = rng.next_binomial(cfg.n_bits_per_ber, analytic_ber);
  s.ber = static_cast<double>(errors) / static_cast<double>(cfg.n_bits_per_ber);
  return s;
}

}  // namespace tapscope
