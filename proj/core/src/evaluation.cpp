#include "tapscope/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace tapscope {

std::pair<std::vector<int>, std::int64_t>
max_agreement_assignment(const std::vector<std::vector<std::int64_t>>& counts) {
  const int rows = static_cast<int>(counts.size());
  if (rows == 0) return {{}, 0};
  const int cols = static_cast<int>(counts[0].size());
  for (const auto& r : counts)
    if (static_cast<int>(r.size()) != cols)
      throw std::invalid_argument("ragged contingency table");
  if (cols == 0) return {std::vector<int>(rows, -1), 0};

  std::int64_t max_cell = 0;
  for (const auto& r : counts)
    for (std::int64_t v : r) {
      if (v < 0) throw std::invalid_argument("negative contingency count");
      max_cell = std::max(max_cell, v);
    }

  // Pad to square and minimize (max_cell - count); padding cells cost
  // max_cell, i.e. zero agreement, which realizes "unmatched contributes
  // zero". Classic O(n^3) Hungarian with row/column potentials.
  const int n = std::max(rows, cols);
  const auto cost = [&](int i, int j) {
    return max_cell - (i < rows && j < cols ? counts[i][j] : 0);
  };
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      std::int64_t delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> cluster_to_label(rows, -1);
  std::int64_t agreement = 0;
  for (int j = 1; j <= n; ++j) {
    const int i = p[j];
    if (i >= 1 && i <= rows && j <= cols) {
      cluster_to_label[i - 1] = j - 1;
      agreement += counts[i - 1][j - 1];
    }
  }
  return {cluster_to_label, agreement};
}

MatchResult label_matching_rate(const std::vector<int>& assignments,
                                const std::vector<std::string>& labels) {
  if (assignments.size() != labels.size())
    throw std::invalid_argument("assignments/labels length mismatch");
  if (assignments.empty()) throw std::invalid_argument("empty inputs");

  MatchResult res;
  std::unordered_map<std::string, int> label_index;
  for (const auto& l : labels) {
    if (label_index.emplace(l, static_cast<int>(res.table.label_names.size())).second)
      res.table.label_names.push_back(l);
  }
  int n_clusters = 0;
  for (int a : assignments) {
    if (a < 0) throw std::invalid_argument("negative cluster id");
    n_clusters = std::max(n_clusters, a + 1);
  }

  res.table.counts.assign(n_clusters,
                          std::vector<std::int64_t>(res.table.label_names.size(), 0));
  for (std::size_t r = 0; r < assignments.size(); ++r)
    ++res.table.counts[assignments[r]][label_index[labels[r]]];

  auto [mapping, agreement] = max_agreement_assignment(res.table.counts);
  res.cluster_to_label = std::move(mapping);
  res.rate = static_cast<double>(agreement) / static_cast<double>(assignments.size());
  return res;
}

std::string scheme_label(const TapEvent& event, const std::string& case_label,
                         LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::Case:
      return case_label;
    case LabelScheme::Coarse:
      switch (event.location) {
        case TapLocation::None: return "normal";
        case TapLocation::Transmitter:
        case TapLocation::PreBooster: return "before_booster";
        case TapLocation::Span: return "after_booster";
      }
      break;
    case LabelScheme::BeforeBooster:
      switch (event.location) {
        case TapLocation::None: return "normal";
        case TapLocation::Transmitter: return "tx";
        case TapLocation::PreBooster: return "prebooster";
        case TapLocation::Span: return "after_booster";
      }
      break;
    case LabelScheme::SpanOnly:
      return event.location == TapLocation::Span
                 ? "span" + std::to_string(event.span_index)
                 : std::string{};
  }
  throw std::invalid_argument("bad label scheme");
}

namespace {

EvalReport make_report(const std::vector<std::string>& features, int k,
                       const MatchResult& mr, double sse_total) {
  EvalReport rep;
  rep.feature_subset = features;
  rep.k = k;
  rep.matching_rate = mr.rate;
  rep.sse_total = sse_total;
  rep.sse_per_dimension = sse_total / static_cast<double>(features.size());
  rep.confusion = mr.table;
  return rep;
}

}  // namespace

std::vector<DetectionResult> detection_experiment(const LinkConfig& cfg,
                                                  const std::vector<double>& loss_levels,
                                                  int n_per_case, std::uint64_t seed) {
  if (loss_levels.empty()) throw std::invalid_argument("loss_levels is empty");
  for (double l : loss_levels)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("loss levels must be positive");

  const std::vector<std::string> features = {"osnr_db", "ber", "p_rx_dbm"};
  std::vector<DetectionResult> results;
  results.reserve(loss_levels.size());
  for (double loss : loss_levels) {
    const Dataset ds = generate_dataset(cfg, severity_pair(loss), n_per_case, seed);
    const FeatureMatrix sm = standardize(select_features(ds, features));
    const ClusteringResult cr = bisect_kmeans(sm, 2);
    const MatchResult mr = label_matching_rate(cr.assignments, ds.labels);

    DetectionResult dr;
    dr.loss_db = loss;
    dr.report = make_report(features, 2, mr, cr.total_sse);
    dr.points = sm;
    dr.assignments = cr.assignments;
    dr.labels = ds.labels;
    results.push_back(std::move(dr));
  }
  return results;
}

std::vector<PlanSpec> default_plans(int n_spans) {
  if (n_spans < 1) throw std::invalid_argument("n_spans must be >= 1");
  const std::vector<std::string> receiver = {"osnr_db", "ber", "p_rx_dbm"};
  std::vector<std::string> spans;
  for (int i = 1; i <= n_spans; ++i)
    spans.push_back("p_span" + std::to_string(i) + "_dbm");

  std::vector<PlanSpec> plans;
  plans.push_back({"rough_full", "rough", receiver, 3, LabelScheme::Coarse,
                   false, false});
  plans.push_back({"rough_no_ber", "rough", {"osnr_db", "p_rx_dbm"}, 3,
                   LabelScheme::Coarse, false, false});
  // Receiver-only telemetry forced to resolve the individual spans; the
  // clustering runs on all rows but is scored on the span rows alone.
  plans.push_back({"receiver_span_split", "rough", receiver, std::max(2, n_spans),
                   LabelScheme::SpanOnly, false, true});

  plans.push_back({"before_with_p_tx", "before",
                   {"osnr_db", "ber", "p_rx_dbm", "p_tx_dbm"}, 4,
                   LabelScheme::BeforeBooster, false, false});
  plans.push_back({"before_with_p_link", "before",
                   {"osnr_db", "ber", "p_rx_dbm", "p_link_dbm"}, 4,
                   LabelScheme::BeforeBooster, false, false});

  plans.push_back({"spans_all", "after", spans, n_spans, LabelScheme::SpanOnly,
                   true, true});
  for (int drop = 1; drop <= n_spans; ++drop) {
    std::vector<std::string> subset;
    for (int i = 1; i <= n_spans; ++i)
      if (i != drop) subset.push_back("p_span" + std::to_string(i) + "_dbm");
    if (subset.empty()) continue;
    plans.push_back({"spans_drop" + std::to_string(drop), "after", subset, n_spans,
                     LabelScheme::SpanOnly, true, true});
  }
  return plans;
}

std::vector<PlanSpec> select_plans(int n_spans, const std::vector<std::string>& groups) {
  const std::vector<PlanSpec> all = default_plans(n_spans);
  if (groups.empty()) return all;
  for (const auto& g : groups)
    if (g != "rough" && g != "before" && g != "after")
      throw std::invalid_argument("unknown plan group: " + g);
  std::vector<PlanSpec> out;
  for (const auto& p : all)
    if (std::find(groups.begin(), groups.end(), p.group) != groups.end())
      out.push_back(p);
  return out;
}

std::vector<PlanResult> localization_experiment(const LinkConfig& cfg, int n_per_case,
                                                std::uint64_t seed,
                                                const std::vector<PlanSpec>& plans) {
  const Dataset ds = generate_dataset(cfg, default_case_set(cfg, 0.8), n_per_case, seed);

  std::vector<PlanResult> results;
  results.reserve(plans.size());
  for (const auto& plan : plans) {
    Dataset sub;
    sub.feature_names = ds.feature_names;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (plan.cluster_span_rows_only && ds.events[r].location != TapLocation::Span)
        continue;
      sub.samples.push_back(ds.samples[r]);
      sub.labels.push_back(ds.labels[r]);
      sub.events.push_back(ds.events[r]);
    }

    const FeatureMatrix sm = standardize(select_features(sub, plan.features));
    const ClusteringResult cr = bisect_kmeans(sm, plan.k);

    std::vector<int> score_assign;
    std::vector<std::string> score_labels;
    for (std::size_t r = 0; r < sub.size(); ++r) {
      if (plan.score_span_rows_only && sub.events[r].location != TapLocation::Span)
        continue;
      std::string lbl = scheme_label(sub.events[r], sub.labels[r], plan.scheme);
      if (lbl.empty()) continue;
      score_assign.push_back(cr.assignments[r]);
      score_labels.push_back(std::move(lbl));
    }
    const MatchResult mr = label_matching_rate(score_assign, score_labels);

    PlanResult pr;
    pr.plan = plan;
    pr.report = make_report(plan.features, plan.k, mr, cr.total_sse);
    pr.points = sm;
    pr.assignments = cr.assignments;
    pr.row_labels = sub.labels;
    results.push_back(std::move(pr));
  }
  return results;
}

namespace {

std::string join_features(const std::vector<std::string>& features) {
  std::string out;
  for (const auto& f : features) {
    if (!out.empty()) out += '+';
    out += f;
  }
  return out;
}

}  // namespace

void write_localization_report(const std::vector<PlanResult>& results,
                               std::ostream& out) {
  out << "plan,group,features,k,label_matching_rate,sse_total,sse_per_dimension\n";
  for (const auto& r : results) {
    out << r.plan.name << ',' << r.plan.group << ',' << join_features(r.plan.features)
        << ',' << r.plan.k << ',' << format_double(r.report.matching_rate) << ','
        << format_double(r.report.sse_total) << ','
        << format_double(r.report.sse_per_dimension) << '\n';
  }
}

void write_detection_report(const std::vector<DetectionResult>& results,
                            std::ostream& out) {
  out << "loss_db,label_matching_rate,sse_total\n";
  for (const auto& r : results) {
    out << format_double(r.loss_db) << ',' << format_double(r.report.matching_rate)
        << ',' << format_double(r.report.sse_total) << '\n';
  }
}

void write_points(const FeatureMatrix& points, const std::vector<int>& assignments,
                  const std::vector<std::string>& labels, std::ostream& out) {
  if (assignments.size() != points.n_rows || labels.size() != points.n_rows)
    throw std::invalid_argument("points/assignments/labels size mismatch");
  out << "case_label,cluster";
  for (const auto& f : points.feature_subset) out << ',' << f;
  out << '\n';
  for (std::size_t r = 0; r < points.n_rows; ++r) {
    out << labels[r] << ',' << assignments[r];
    for (std::size_t c = 0; c < points.n_cols; ++c)
      out << ',' << format_double(points.at(r, c));
    out << '\n';
  }
}

}  // namespace tapscope
