#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tapscope/link_model.hpp"

namespace tapscope {

// A labeled collection of OPM samples, one row per reading.
struct Dataset {
  std::vector<OpmSample> samples;
  std::vector<std::string> labels;  // case label per row
  std::vector<TapEvent> events;     // event per row
  std::vector<std::string> feature_names;

  std::size_t size() const { return samples.size(); }
};

/// Canonical feature order: osnr_db, ber, p_rx_dbm, p_tx_dbm, p_link_dbm,
/// p_span1_dbm .. p_span<n>_dbm.
std::vector<std::string> canonical_feature_names(int n_spans);

struct CaseSpec {
  std::string label;
  TapEvent event;
};

/// The seven standard cases: no tap, transmitter tap, pre-booster tap, and
/// one tap per span, all at loss_db.
std::vector<CaseSpec> default_case_set(const LinkConfig& cfg, double loss_db = 0.8);

/// Two-case set used for detection: no tap vs a pre-booster tap at loss_db.
std::vector<CaseSpec> severity_pair(double loss_db);

/// n_per_case noisy samples per case, in case order. Case i draws from
/// RandomStream::substream(seed, i); see rng.hpp for the fan-out contract.
Dataset generate_dataset(const LinkConfig& cfg, const std::vector<CaseSpec>& cases,
                         int n_per_case, std::uint64_t seed);

/// Like generate_dataset but with propagate() rows (no measurement noise,
/// analytic BER); every case collapses to one repeated point.
Dataset make_noiseless_dataset(const LinkConfig& cfg, const std::vector<CaseSpec>& cases,
                               int n_per_case);

struct FeatureOptions {
  /// Replace ber by log10(ber + 1e-12) at extraction. Off by default; the
  /// experiments cluster linear BER.
  bool log_ber = false;
};

// Row-major numeric matrix of selected features. After standardize(),
// means/stds hold the statistics of the input and constant_columns flags the
// zero-variance columns that were mapped to all-zeros.
struct FeatureMatrix {
  std::vector<double> values;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::string> feature_subset;
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::uint8_t> constant_columns;
  bool standardized = false;

  double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
  const double* row(std::size_t r) const { return values.data() + r * n_cols; }
};

/// Column order follows `subset`. Unknown names throw std::invalid_argument.
FeatureMatrix select_features(const Dataset& ds, const std::vector<std::string>& subset,
                              const FeatureOptions& opts = {});

/// Column-wise z-score with population (divide-by-n) standard deviation.
/// Requires >= 2 rows. Columns whose std is ~0 relative to their mean become
/// all-zeros and are flagged in constant_columns. Idempotent within 1e-9.
FeatureMatrix standardize(const FeatureMatrix& m);

/// CSV layout: header case_label,location,loss_db,<features...>; location
/// tokens none|tx|prebooster|span<i>; numerics printed with 17 significant
/// digits ('.' decimal, LF line endings). Lossless for doubles.
void to_csv(const Dataset& ds, std::ostream& out);
void to_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset from_csv(std::istream& in);
Dataset from_csv(const std::filesystem::path& path);

/// 17-significant-digit numeric formatting shared by every writer.
std::string format_double(double v);

}
