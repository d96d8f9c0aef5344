#ifndef BANDFOREST_MODEL_HPP
#define BANDFOREST_MODEL_HPP

#include "bandforest/bands.hpp"
#include "bandforest/dataset.hpp"
#include "bandforest/forest.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bandforest {

struct Provenance {
    std::string source;
    std::size_t rows = 0;
    std::size_t columns = 0;

    bool operator==(const Provenance&) const = default;
};

/// Everything needed to classify raw rows: normalization, categories, forest, optional bands.
struct Model {
    std::vector<std::string> feature_names;
    std::vector<ColumnStats> stats;
    std::vector<std::string> categories;
    Forest forest;
    std::optional<BandGraph> bands;
    bool residual_training = true;
    Provenance provenance;
};

bool operator==(const ColumnStats& a, const ColumnStats& b);
bool operator==(const Model& a, const Model& b);

struct TrainOptions {
    ForestParams forest;
    bool bands = false;
    /// With bands on, train the forest only on rows the bands leave undecided.
    bool residual_training = true;
    double epsilon = default_band_epsilon;
};

struct TrainSummary {
    std::size_t band_decided = 0;
    std::size_t band_wrong = 0;
    std::size_t forest_rows = 0;
};

Model train_model(const LabeledTable& table, const TrainOptions& options, TrainSummary* summary = nullptr,
                  const std::string& source = {});

/// Bands first when present, forest on no-decision.
Prediction classify(const Forest& forest, const BandGraph* bands, std::span<const double> row,
                    Descent descent = Descent::closest_path);
Prediction classify(const Model& model, std::span<const double> row, Descent descent = Descent::closest_path);

} // namespace bandforest

#endif // BANDFOREST_MODEL_HPP
