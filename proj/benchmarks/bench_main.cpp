#include <bandforest/bands.hpp>
#include <bandforest/forest.hpp>
#include <bandforest/model.hpp>
#include <bandforest/persist.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace bandforest;

namespace {

// Gaussian blobs, one per category, clamped into [0,1].
LabeledTable blobs(std::size_t rows, std::size_t cols, std::size_t categories, double spread) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> centre(0.2, 0.8);
    std::normal_distribution<double> noise(0.0, spread);
    std::vector<std::vector<double>> centres(categories, std::vector<double>(cols));
    for (auto& c : centres) {
        for (auto& v : c) v = centre(rng);
    }
    LabeledTable t;
    t.features = FeatureMatrix(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto k = i % categories;
        for (std::size_t j = 0; j < cols; ++j) t.features.at(i, j) = std::clamp(centres[k][j] + noise(rng), 0.0, 1.0);
        t.labels.push_back(static_cast<CategoryId>(k));
    }
    for (std::size_t k = 0; k < categories; ++k) t.category_names.push_back("c" + std::to_string(k));
    for (std::size_t j = 0; j < cols; ++j) {
        t.feature_names.push_back("x" + std::to_string(j));
        t.stats.push_back({0.0, 1.0, {}});
    }
    return t;
}

void BM_TrainForest(benchmark::State& state) {
    const auto t = blobs(static_cast<std::size_t>(state.range(0)), 8, 4, 0.15);
    ForestParams p;
    p.scheme = DesiredScheme::spread;
    for (auto _ : state) benchmark::DoNotOptimize(train_forest(t, p));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainForest)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
    const auto t = blobs(4096, 8, 4, 0.15);
    ForestParams p;
    p.scheme = DesiredScheme::spread;
    const auto f = train_forest(t, p);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(f, t.row(i)));
        i = (i + 1) % t.size();
    }
    state.counters["nodes"] = static_cast<double>(f.node_count);
}
BENCHMARK(BM_Predict);

void BM_BuildGraph(benchmark::State& state) {
    const auto t = blobs(static_cast<std::size_t>(state.range(0)), 16, 26, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildGraph)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_BandClassify(benchmark::State& state) {
    const auto t = blobs(4096, 16, 26, 0.1);
    const auto g = build_graph(t);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(band_classify(g, t.row(i)));
        i = (i + 1) % t.size();
    }
}
BENCHMARK(BM_BandClassify);

void BM_SaveLoad(benchmark::State& state) {
    const auto t = blobs(4096, 8, 4, 0.15);
    TrainOptions o;
    o.forest.scheme = DesiredScheme::spread;
    o.bands = true;
    const auto m = train_model(t, o);
    for (auto _ : state) benchmark::DoNotOptimize(load_from_string(save_to_string(m)));
}
BENCHMARK(BM_SaveLoad)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
