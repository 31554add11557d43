#pragma once

// Shared helpers for the unit suites and the acceptance runner: matrix
// literals, randomized-but-valid configs/events, an independent OSNR oracle
// (closed-form downstream-product ASE sum, deliberately not the library's
// stepwise accumulation), blob instances, a multi-restart Lloyd reference,
// and small brute-force oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tapscope/dataset.hpp"
#include "tapscope/link_model.hpp"
#include "tapscope/rng.hpp"

namespace tapsupport {

inline tapscope::FeatureMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  tapscope::FeatureMatrix m;
  m.n_rows = rows.size();
  m.n_cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m.n_cols) throw std::invalid_argument("ragged matrix literal");
    m.values.insert(m.values.end(), r.begin(), r.end());
  }
  for (std::size_t c = 0; c < m.n_cols; ++c)
    m.feature_subset.push_back("f" + std::to_string(c));
  return m;
}

// Valid config with a broad parameter spread. The pad bounds keep the booster
// gain positive for every event this file generates (gain = target - launch
// + pad + any pre-booster tap loss >= -3 - 4 + 12 > 0).
inline tapscope::LinkConfig random_config(tapscope::RandomStream& rng) {
  tapscope::LinkConfig cfg;
  cfg.n_spans = 2 + static_cast<int>(rng.next_u64() % 5);
  cfg.span_loss_db.clear();
  for (int i = 0; i < cfg.n_spans; ++i)
    cfg.span_loss_db.push_back(7.0 + 7.0 * rng.next_unit());
  cfg.launch_power_dbm = -4.0 + 8.0 * rng.next_unit();
  cfg.booster_target_dbm = -3.0 + 6.0 * rng.next_unit();
  cfg.pre_booster_loss_db = 12.0 + 18.0 * rng.next_unit();
  cfg.noise_figure_db = 4.0 + 4.0 * rng.next_unit();
  cfg.power_noise_sigma_db = 0.02;
  cfg.osnr_noise_sigma_db = 0.02;
  return cfg;
}

inline tapscope::TapEvent random_event(tapscope::RandomStream& rng,
                                       const tapscope::LinkConfig& cfg) {
  const double loss = 0.3 + 2.7 * rng.next_unit();
  switch (rng.next_u64() % 4) {
    case 0: return tapscope::TapEvent::none();
    case 1: return tapscope::TapEvent::transmitter(loss);
    case 2: return tapscope::TapEvent::pre_booster(loss);
    default:
      return tapscope::TapEvent::span(
          1 + static_cast<int>(rng.next_u64() % cfg.n_spans), loss);
  }
}

inline double db_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_w(double dbm) { return 1e-3 * db_lin(dbm); }

// Receiver OSNR by summing, per amplifier, its ASE contribution times the net
// linear transmission from that amplifier to the receiver. Closed-form in the
// element gains/losses; shares no code path with tapscope::propagate.
inline double oracle_osnr_db(const tapscope::LinkConfig& cfg,
                             const tapscope::TapEvent& ev) {
  constexpr double kPlanck = 6.62607015e-34;
  const double nu = cfg.center_frequency_thz * 1e12;
  const double bref = cfg.ref_bandwidth_ghz * 1e9;
  const double noise_factor = db_lin(cfg.noise_figure_db);
  const auto amp_ase = [&](double gain_db) {
    const double g = db_lin(gain_db);
    return g > 1.0 ? noise_factor * kPlanck * nu * bref * (g - 1.0) : 0.0;
  };

  const bool at_tx = ev.location == tapscope::TapLocation::Transmitter;
  const bool at_pre = ev.location == tapscope::TapLocation::PreBooster;
  const double p_link =
      cfg.launch_power_dbm - (at_tx || at_pre ? ev.loss_db : 0.0);
  const double booster_gain = cfg.booster_target_dbm - (p_link - cfg.pre_booster_loss_db);

  // dB drop of span i (fiber loss plus any tap) and the fixed inline gain.
  std::vector<double> drop(cfg.n_spans), gain(cfg.n_spans);
  for (int i = 0; i < cfg.n_spans; ++i) {
    drop[i] = cfg.span_loss_db[i];
    if (ev.location == tapscope::TapLocation::Span && ev.span_index == i + 1)
      drop[i] += ev.loss_db;
    gain[i] = cfg.span_loss_db[i];
  }

  // Net dB from just after amplifier j to the receiver: spans j+1..n for the
  // inline amp after span j, all spans for the booster (j = -1).
  const auto downstream_db = [&](int j) {
    double d = 0.0;
    for (int i = j + 1; i < cfg.n_spans; ++i) d += gain[i] - drop[i];
    return d;
  };

  double ase_w = amp_ase(booster_gain) * db_lin(downstream_db(-1));
  for (int j = 0; j < cfg.n_spans; ++j)
    ase_w += amp_ase(gain[j]) * db_lin(downstream_db(j));

  const double sig_rx_dbm = cfg.booster_target_dbm + downstream_db(-1);
  return 10.0 * std::log10(dbm_w(sig_rx_dbm) / ase_w);
}

inline double ber_of_osnr_db(const tapscope::LinkConfig& cfg, double osnr_db) {
  const double osnr_lin = db_lin(osnr_db);
  const double ratio = cfg.ref_bandwidth_ghz / cfg.symbol_rate_gbaud;
  return 0.5 * std::erfc(std::sqrt(osnr_lin * ratio));
}

// ---- clustering oracles ----

struct BlobInstance {
  tapscope::FeatureMatrix points;
  std::vector<int> truth;  // generating blob per row
  int k = 0;
};

// k Gaussian blobs with center spacing >= separation * std in every used
// axis, so the generating partition is unambiguously optimal.
inline BlobInstance make_blobs(int k, int dims, int per_blob, double separation,
                               tapscope::RandomStream& rng) {
  BlobInstance inst;
  inst.k = k;
  inst.points.n_cols = static_cast<std::size_t>(dims);
  inst.points.n_rows = static_cast<std::size_t>(k) * per_blob;
  for (int c = 0; c < dims; ++c)
    inst.points.feature_subset.push_back("f" + std::to_string(c));
  std::vector<std::vector<double>> centers;
  for (int b = 0; b < k; ++b) {
    std::vector<double> ctr(dims);
    for (int c = 0; c < dims; ++c)
      ctr[c] = (c % 2 ? -1.0 : 1.0) * separation * (b + 1) * (c + 1) * 0.5 +
               separation * b * (c == 0);
    centers.push_back(std::move(ctr));
  }
  for (int b = 0; b < k; ++b)
    for (int i = 0; i < per_blob; ++i) {
      for (int c = 0; c < dims; ++c)
        inst.points.values.push_back(rng.next_gaussian(centers[b][c], 1.0));
      inst.truth.push_back(b);
    }
  return inst;
}

inline double sse_of_partition(const tapscope::FeatureMatrix& m,
                               const std::vector<int>& assign, int k) {
  const std::size_t d = m.n_cols;
  std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
  std::vector<int> counts(k, 0);
  for (std::size_t r = 0; r < m.n_rows; ++r) {
    ++counts[assign[r]];
    for (std::size_t c = 0; c < d; ++c) sums[assign[r]][c] += m.at(r, c);
  }
  double total = 0.0;
  for (std::size_t r = 0; r < m.n_rows; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = m.at(r, c) - sums[assign[r]][c] / counts[assign[r]];
      total += diff * diff;
    }
  return total;
}

struct RefKmeans {
  double sse = std::numeric_limits<double>::infinity();
  std::vector<int> assignments;
};

// Plain Lloyd with distinct-random-row init and farthest-point repair,
// restarted `restarts` times; returns the best run. Reference for the
// bisecting implementation, written independently of it.
inline RefKmeans reference_kmeans(const tapscope::FeatureMatrix& m, int k,
                                  int restarts, tapscope::RandomStream& rng) {
  const std::size_t n = m.n_rows, d = m.n_cols;
  RefKmeans best;
  for (int trial = 0; trial < restarts; ++trial) {
    // init: k distinct rows by value
    std::vector<std::vector<double>> centers;
    std::set<std::vector<double>> seen;
    int guard = 0;
    while (centers.size() < static_cast<std::size_t>(k) && guard++ < 10000) {
      const std::size_t r = rng.next_u64() % n;
      std::vector<double> row(m.row(r), m.row(r) + d);
      if (seen.insert(row).second) centers.push_back(std::move(row));
    }
    if (centers.size() < static_cast<std::size_t>(k)) continue;
    std::vector<int> assign(n, 0);
    for (int it = 0; it < 200; ++it) {
      bool changed = false;
      for (std::size_t r = 0; r < n; ++r) {
        int bi = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
          double dist = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double t = m.at(r, j) - centers[c][j];
            dist += t * t;
          }
          if (dist < bd) { bd = dist; bi = c; }
        }
        if (assign[r] != bi) { assign[r] = bi; changed = true; }
      }
      std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
      std::vector<int> counts(k, 0);
      for (std::size_t r = 0; r < n; ++r) {
        ++counts[assign[r]];
        for (std::size_t j = 0; j < d; ++j) sums[assign[r]][j] += m.at(r, j);
      }
      for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) {
          // reseed on the row farthest from its center
          std::size_t far = 0;
          double fd = -1.0;
          for (std::size_t r = 0; r < n; ++r) {
            double dist = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
              const double t = m.at(r, j) - centers[assign[r]][j];
              dist += t * t;
            }
            if (dist > fd) { fd = dist; far = r; }
          }
          assign[far] = c;
          counts[c] = 1;
          for (std::size_t j = 0; j < d; ++j) sums[c][j] = m.at(far, j);
          changed = true;
        }
      }
      for (int c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j) centers[c][j] = sums[c][j] / counts[c];
      if (!changed) break;
    }
    const double total = sse_of_partition(m, assign, k);
    if (total < best.sse) {
      best.sse = total;
      best.assignments = assign;
    }
  }
  return best;
}

// Exact minimum SSE over every 2-partition (row 0 pinned to side A).
inline double best_two_partition_sse(const tapscope::FeatureMatrix& m) {
  const std::size_t n = m.n_rows;
  if (n < 2 || n > 20) throw std::invalid_argument("brute force needs 2..20 rows");
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t limit = 1u << (n - 1);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    std::vector<int> assign(n, 0);
    for (std::size_t r = 1; r < n; ++r) assign[r] = (mask >> (r - 1)) & 1u;
    best = std::min(best, sse_of_partition(m, assign, 2));
  }
  return best;
}

// Exact best one-to-one agreement by permuting a zero-padded square table.
inline std::int64_t brute_force_agreement(std::vector<std::vector<std::int64_t>> counts) {
  const std::size_t rows = counts.size();
  std::size_t cols = 0;
  for (const auto& r : counts) cols = std::max(cols, r.size());
  const std::size_t n = std::max(rows, cols);
  for (auto& r : counts) r.resize(n, 0);
  counts.resize(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = 0;
  do {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += counts[i][perm[i]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Partition equality up to label renaming.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> fwd, rev;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= static_cast<int>(fwd.size())) fwd.resize(a[i] + 1, -1);
    if (b[i] >= static_cast<int>(rev.size())) rev.resize(b[i] + 1, -1);
    if (fwd[a[i]] == -1 && rev[b[i]] == -1) {
      fwd[a[i]] = b[i];
      rev[b[i]] = a[i];
    } else if (fwd[a[i]] != b[i] || rev[b[i]] != a[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace tapsupport
