#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tapscope/clustering.hpp"
#include "tapscope/dataset.hpp"
#include "tapscope/evaluation.hpp"
#include "tapscope/link_model.hpp"
#include "tapscope/rng.hpp"

namespace {

tapscope::LinkConfig config_with_spans(int n_spans) {
  tapscope::LinkConfig cfg;
  cfg.n_spans = n_spans;
  cfg.span_loss_db.assign(static_cast<std::size_t>(n_spans), 10.0);
  return cfg;
}

void bm_propagate(benchmark::State& state) {
  const auto cfg = config_with_spans(static_cast<int>(state.range(0)));
  const auto event = tapscope::TapEvent::span(1, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tapscope::propagate(cfg, event));
  }
}
BENCHMARK(bm_propagate)->Arg(4)->Arg(16)->Arg(64);

void bm_sample_opm(benchmark::State& state) {
  const auto cfg = config_with_spans(static_cast<int>(state.range(0)));
  const auto event = tapscope::TapEvent::pre_booster(1.0);
  tapscope::RandomStream rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tapscope::sample_opm(cfg, event, rng));
  }
}
BENCHMARK(bm_sample_opm)->Arg(4)->Arg(16)->Arg(64);

void bm_generate_dataset(benchmark::State& state) {
  const tapscope::LinkConfig cfg;
  const auto cases = tapscope::default_case_set(cfg, 0.8);
  const int n_per_case = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tapscope::generate_dataset(cfg, cases, n_per_case, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cases.size()) *
                          n_per_case);
}
BENCHMARK(bm_generate_dataset)->Arg(50)->Arg(200);

// Standardized three-feature matrix of the standard seven-case study;
// rows = 7 * n_per_case.
tapscope::FeatureMatrix study_matrix(int n_per_case) {
  const tapscope::LinkConfig cfg;
  const auto ds =
      tapscope::generate_dataset(cfg, tapscope::default_case_set(cfg, 0.8), n_per_case, 1);
  return tapscope::standardize(
      tapscope::select_features(ds, {"osnr_db", "ber", "p_rx_dbm"}, {}));
}

void bm_bisect_kmeans(benchmark::State& state) {
  const auto m = study_matrix(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tapscope::bisect_kmeans(m, k));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.n_rows));
}
BENCHMARK(bm_bisect_kmeans)
    ->Args({50, 3})
    ->Args({200, 3})
    ->Args({200, 7})
    ->Args({500, 7});

void bm_label_matching(benchmark::State& state) {
  const int n_per_case = static_cast<int>(state.range(0));
  const tapscope::LinkConfig cfg;
  const auto ds =
      tapscope::generate_dataset(cfg, tapscope::default_case_set(cfg, 0.8), n_per_case, 1);
  const auto m = tapscope::standardize(
      tapscope::select_features(ds, {"osnr_db", "ber", "p_rx_dbm"}, {}));
  const auto clustering = tapscope::bisect_kmeans(m, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tapscope::label_matching_rate(clustering.assignments, ds.labels));
  }
}
BENCHMARK(bm_label_matching)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
