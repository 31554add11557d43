#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tapscope/clustering.hpp"
#include "tapscope/dataset.hpp"

namespace tapscope {

struct Contingency {
  std::vector<std::string> label_names;             // column order
  std::vector<std::vector<std::int64_t>> counts;    // [cluster][label]
};

struct MatchResult {
  double rate = 0.0;
  std::vector<int> cluster_to_label;  // index into label_names, -1 if unmatched
  Contingency table;
};

/// Highest-agreement one-to-one assignment of clusters to labels (rectangular
/// Hungarian; unmatched clusters or labels contribute zero). rate = matched
/// rows / total rows. Invariant under any relabeling of cluster ids.
MatchResult label_matching_rate(const std::vector<int>& assignments,
                                const std::vector<std::string>& labels);

/// Exposed for oracle tests: optimal assignment on a counts matrix,
/// returning (cluster -> label column or -1, total agreement).
std::pair<std::vector<int>, std::int64_t>
max_agreement_assignment(const std::vector<std::vector<std::int64_t>>& counts);

struct EvalReport {
  std::vector<std::string> feature_subset;
  int k = 0;
  double matching_rate = 0.0;
  double sse_total = 0.0;
  double sse_per_dimension = 0.0;  // sse_total / feature_subset.size()
  Contingency confusion;
};

// ---- detection ----

struct DetectionResult {
  double loss_db = 0.0;
  EvalReport report;
  FeatureMatrix points;          // standardized features fed to clustering
  std::vector<int> assignments;
  std::vector<std::string> labels;
};

/// For each loss level: generate the no-tap vs pre-booster pair, cluster the
/// standardized receiver features (osnr_db, ber, p_rx_dbm) with k = 2, score
/// against the two case labels. The same seed is passed to every level, so
/// the noise draws are shared across levels (substreams are keyed by case
/// index) and the SSE trend reflects the separations alone.
/// loss_levels must be non-empty and strictly positive.
std::vector<DetectionResult> detection_experiment(const LinkConfig& cfg,
                                                  const std::vector<double>& loss_levels,
                                                  int n_per_case, std::uint64_t seed);

// ---- localization ----

/// Label schemes used for scoring localization plans.
enum class LabelScheme {
  Case,           // the dataset's own case labels
  Coarse,         // normal | before_booster | after_booster
  BeforeBooster,  // normal | tx | prebooster | after_booster
  SpanOnly        // span<i>; rows outside spans excluded from scoring
};

struct PlanSpec {
  std::string name;
  std::string group;  // rough | before | after
  std::vector<std::string> features;
  int k = 0;
  LabelScheme scheme = LabelScheme::Coarse;
  bool cluster_span_rows_only = false;  // cluster only span-tap rows
  bool score_span_rows_only = false;    // score only span-tap rows
};

/// The standard plan set for a given span count:
///   rough:  receiver features k=3 (with and without ber), receiver k=n_spans
///           scored on span rows (expected to fail);
///   before: receiver + p_tx k=4, and the p_link variant (expected to fail);
///   after:  all span powers k=n_spans on span rows, plus every
///           drop-one-span-power variant.
std::vector<PlanSpec> default_plans(int n_spans);

/// Subset of default_plans with group in `groups` (empty = all).
std::vector<PlanSpec> select_plans(int n_spans, const std::vector<std::string>& groups);

struct PlanResult {
  PlanSpec plan;
  EvalReport report;
  FeatureMatrix points;             // standardized features of clustered rows
  std::vector<int> assignments;     // per clustered row
  std::vector<std::string> row_labels;  // case label per clustered row
};

/// Runs every plan against one shared dataset: the seven standard cases at a
/// 0.8 dB tap, n_per_case samples each.
std::vector<PlanResult> localization_experiment(const LinkConfig& cfg, int n_per_case,
                                                std::uint64_t seed,
                                                const std::vector<PlanSpec>& plans);

/// Scheme label for one event.
std::string scheme_label(const TapEvent& event, const std::string& case_label,
                         LabelScheme scheme);

// ---- report output ----

/// Columns: plan,group,features,k,label_matching_rate,sse_total,sse_per_dimension.
void write_localization_report(const std::vector<PlanResult>& results, std::ostream& out);

/// Columns: loss_db,label_matching_rate,sse_total.
void write_detection_report(const std::vector<DetectionResult>& results, std::ostream& out);

/// Standardized points with case label and cluster id, for scatter plots.
void write_points(const FeatureMatrix& points, const std::vector<int>& assignments,
                  const std::vector<std::string>& labels, std::ostream& out);

}
