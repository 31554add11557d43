// Command-line front end: dataset generation, eavesdropping detection and
// localization experiments, and ad-hoc clustering of canonical OPM CSVs.
// Every command is a pure function of (config, seed, flags); reruns produce
// byte-identical outputs except the manifest's duration field.

#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tapscope/clustering.hpp"
#include "tapscope/config_io.hpp"
#include "tapscope/dataset.hpp"
#include "tapscope/errors.hpp"
#include "tapscope/evaluation.hpp"
#include "tapscope/version.hpp"

namespace {

using tapscope::ConfigError;
using tapscope::IoError;
using tapscope::LinkConfig;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int samples_per_case = 200;
};

LinkConfig resolve_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return LinkConfig{};
  return tapscope::load_link_config(opts.config_path);
}

nlohmann::json config_json(const LinkConfig& cfg) {
  return {
      {"n_spans", cfg.n_spans},
      {"span_loss_db", cfg.span_loss_db},
      {"launch_power_dbm", cfg.launch_power_dbm},
      {"booster_target_dbm", cfg.booster_target_dbm},
      {"pre_booster_loss_db", cfg.pre_booster_loss_db},
      {"noise_figure_db", cfg.noise_figure_db},
      {"center_frequency_thz", cfg.center_frequency_thz},
      {"ref_bandwidth_ghz", cfg.ref_bandwidth_ghz},
      {"symbol_rate_gbaud", cfg.symbol_rate_gbaud},
      {"power_noise_sigma_db", cfg.power_noise_sigma_db},
      {"osnr_noise_sigma_db", cfg.osnr_noise_sigma_db},
      {"n_bits_per_ber", cfg.n_bits_per_ber},
  };
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void write_manifest(const std::string& command, const CommonOpts& opts,
                    const LinkConfig& cfg, const std::vector<std::string>& outputs,
                    std::chrono::steady_clock::time_point start) {
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json manifest = {
      {"artifact_version", tapscope::artifact_version},
      {"command", command},
      {"seed", opts.seed},
      {"samples_per_case", opts.samples_per_case},
      {"config", config_json(cfg)},
      {"outputs", outputs},
      {"duration_seconds", duration},
  };
  auto out = open_out(std::filesystem::path(opts.out_dir) / "manifest.json");
  out << manifest.dump(2) << '\n';
}

void ensure_out_dir(const CommonOpts& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + opts.out_dir);
}

std::vector<double> parse_loss_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos])))
        ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad loss value: '" + item + "'");
    }
  }
  return out;
}

int cmd_generate(const CommonOpts& opts) {
  const auto start = std::chrono::steady_clock::now();
  const LinkConfig cfg = resolve_config(opts);
  ensure_out_dir(opts);

  const auto ds = tapscope::generate_dataset(cfg, tapscope::default_case_set(cfg),
                                             opts.samples_per_case, opts.seed);
  const auto csv_path = std::filesystem::path(opts.out_dir) / "dataset.csv";
  tapscope::to_csv(ds, csv_path);
  write_manifest("generate", opts, cfg, {"dataset.csv"}, start);
  std::cout << "wrote " << csv_path.string() << " (" << ds.size() << " rows)\n";
  return 0;
}

int cmd_detect(const CommonOpts& opts, const std::string& losses_text) {
  const auto start = std::chrono::steady_clock::now();
  const LinkConfig cfg = resolve_config(opts);
  const std::vector<double> losses = parse_loss_list(losses_text);
  ensure_out_dir(opts);

  const auto results =
      tapscope::detection_experiment(cfg, losses, opts.samples_per_case, opts.seed);

  std::vector<std::string> outputs = {"detection.csv"};
  {
    auto out = open_out(std::filesystem::path(opts.out_dir) / "detection.csv");
    tapscope::write_detection_report(results, out);
  }
  for (const auto& r : results) {
    const std::string name = "points_loss_" + tapscope::format_double(r.loss_db) + ".csv";
    auto out = open_out(std::filesystem::path(opts.out_dir) / name);
    tapscope::write_points(r.points, r.assignments, r.labels, out);
    outputs.push_back(name);
  }
  write_manifest("detect", opts, cfg, outputs, start);

  for (const auto& r : results)
    std::cout << "loss " << r.loss_db << " dB: rate "
              << r.report.matching_rate << ", sse " << r.report.sse_total << '\n';
  return 0;
}

int cmd_localize(const CommonOpts& opts, const std::string& plans_text) {
  const auto start = std::chrono::steady_clock::now();
  const LinkConfig cfg = resolve_config(opts);

  std::vector<std::string> groups;
  if (plans_text != "all") {
    std::stringstream ss(plans_text);
    std::string item;
    while (std::getline(ss, item, ',')) groups.push_back(item);
  }
  const auto plans = tapscope::select_plans(cfg.n_spans, groups);
  ensure_out_dir(opts);

  const auto results =
      tapscope::localization_experiment(cfg, opts.samples_per_case, opts.seed, plans);

  std::vector<std::string> outputs = {"localization.csv"};
  {
    auto out = open_out(std::filesystem::path(opts.out_dir) / "localization.csv");
    tapscope::write_localization_report(results, out);
  }
  for (const auto& r : results) {
    const std::string name = "points_" + r.plan.name + ".csv";
    auto out = open_out(std::filesystem::path(opts.out_dir) / name);
    tapscope::write_points(r.points, r.assignments, r.row_labels, out);
    outputs.push_back(name);
  }
  write_manifest("localize", opts, cfg, outputs, start);

  for (const auto& r : results)
    std::cout << r.plan.name << ": rate " << r.report.matching_rate << ", sse "
              << r.report.sse_total << '\n';
  return 0;
}

int cmd_cluster(const CommonOpts& opts, const std::string& input,
                const std::string& features_text, int k, bool log_ber,
                const std::string& labels_mode) {
  const auto start = std::chrono::steady_clock::now();
  const LinkConfig cfg = resolve_config(opts);

  std::vector<std::string> features;
  {
    std::stringstream ss(features_text);
    std::string item;
    while (std::getline(ss, item, ',')) features.push_back(item);
  }

  tapscope::LabelScheme scheme;
  if (labels_mode == "case") scheme = tapscope::LabelScheme::Case;
  else if (labels_mode == "coarse") scheme = tapscope::LabelScheme::Coarse;
  else if (labels_mode == "before") scheme = tapscope::LabelScheme::BeforeBooster;
  else if (labels_mode == "span") scheme = tapscope::LabelScheme::SpanOnly;
  else throw std::invalid_argument("--labels must be case|coarse|before|span");

  const auto ds = tapscope::from_csv(std::filesystem::path(input));
  tapscope::FeatureOptions fopts;
  fopts.log_ber = log_ber;
  const auto sm = tapscope::standardize(tapscope::select_features(ds, features, fopts));
  const auto cr = tapscope::bisect_kmeans(sm, k);

  // Score against the file's labels under the chosen grouping; the span
  // grouping scores span-tap rows only.
  std::vector<int> score_assign;
  std::vector<std::string> score_labels;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::string lbl = tapscope::scheme_label(ds.events[r], ds.labels[r], scheme);
    if (lbl.empty()) continue;
    score_assign.push_back(cr.assignments[r]);
    score_labels.push_back(std::move(lbl));
  }
  const auto mr = tapscope::label_matching_rate(score_assign, score_labels);

  ensure_out_dir(opts);
  {
    auto out = open_out(std::filesystem::path(opts.out_dir) / "assignments.csv");
    tapscope::write_points(sm, cr.assignments, ds.labels, out);
  }
  {
    auto out = open_out(std::filesystem::path(opts.out_dir) / "report.csv");
    out << "features,k,labels,label_matching_rate,sse_total,sse_per_dimension\n";
    std::string joined;
    for (const auto& f : features) {
      if (!joined.empty()) joined += '+';
      joined += f;
    }
    out << joined << ',' << k << ',' << labels_mode << ','
        << tapscope::format_double(mr.rate) << ','
        << tapscope::format_double(cr.total_sse) << ','
        << tapscope::format_double(cr.total_sse / static_cast<double>(features.size()))
        << '\n';
  }
  write_manifest("cluster", opts, cfg, {"assignments.csv", "report.csv"}, start);

  std::cout << "rate " << mr.rate << ", sse " << cr.total_sse << ", k " << k << '\n';
  return 0;
}

int cmd_report(const std::string& input) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + input);

  std::vector<std::vector<std::string>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(field);
    table.push_back(std::move(row));
  }
  if (table.empty()) throw tapscope::CsvFormatError("empty report: " + input);

  std::vector<std::size_t> widths;
  for (const auto& row : table) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  }
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c)
      std::cout << (c ? "  " : "") << std::left << std::setw(static_cast<int>(widths[c]))
                << row[c];
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical-line eavesdropping lab: OPM dataset simulation and "
               "deterministic bisecting k-means analysis"};
  app.require_subcommand(1);
  std::ostringstream version;
  version << "tapscope " << tapscope::artifact_version;
  app.set_version_flag("--version", version.str());

  CommonOpts opts;
  std::string losses = "0.5,0.8,1.0,1.5,2.0,3.0";
  std::string plans = "all";
  std::string cluster_input;
  std::string features;
  int k = 0;
  bool log_ber = false;
  std::string labels_mode = "case";
  std::string report_input;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "Link config file (key = value)");
    cmd->add_option("--seed", opts.seed, "Global RNG seed")->capture_default_str();
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--samples-per-case", opts.samples_per_case, "Samples per case")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* generate = app.add_subcommand(
      "generate", "Simulate the seven standard tap cases into a CSV dataset");
  add_common(generate);

  auto* detect = app.add_subcommand(
      "detect", "Two-cluster detection of a pre-booster tap across loss levels");
  add_common(detect);
  detect->add_option("--losses", losses, "Comma list of tap losses, dB")
      ->capture_default_str();

  auto* localize = app.add_subcommand(
      "localize", "Run the localization feature plans and report matching rates");
  add_common(localize);
  localize->add_option("--plans", plans, "all or comma list of rough|before|after")
      ->capture_default_str();

  auto* cluster = app.add_subcommand(
      "cluster", "Cluster a canonical OPM CSV with chosen features and k");
  add_common(cluster);
  cluster->add_option("input", cluster_input, "Canonical OPM CSV")->required();
  cluster->add_option("--features", features, "Comma list of feature names")->required();
  cluster->add_option("--k", k, "Number of clusters")->required()
      ->check(CLI::PositiveNumber);
  cluster->add_flag("--log-ber", log_ber, "Use log10(ber + 1e-12) instead of ber");
  cluster->add_option("--labels", labels_mode,
                      "Label grouping for scoring: case|coarse|before|span")
      ->capture_default_str();

  auto* report = app.add_subcommand(
      "report", "Pretty-print a report CSV produced by detect/localize/cluster");
  report->add_option("input", report_input, "Report CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*generate) return cmd_generate(opts);
    if (*detect) return cmd_detect(opts, losses);
    if (*localize) return cmd_localize(opts, plans);
    if (*cluster)
      return cmd_cluster(opts, cluster_input, features, k, log_ber, labels_mode);
    if (*report) return cmd_report(report_input);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
