#include "bandforest/model.hpp"

#include "bandforest/error.hpp"

#include <numeric>

namespace bandforest {

bool operator==(const ColumnStats& a, const ColumnStats& b) {
    return a.min == b.min && a.max == b.max && a.levels == b.levels;
}

bool operator==(const Model& a, const Model& b) {
    return a.feature_names == b.feature_names && a.stats == b.stats && a.categories == b.categories &&
           a.forest == b.forest && a.bands == b.bands && a.residual_training == b.residual_training &&
           a.provenance == b.provenance;
}

Model train_model(const LabeledTable& table, const TrainOptions& options, TrainSummary* summary,
                  const std::string& source) {
    check_normalized(table);
    Model model;
    model.feature_names = table.feature_names;
    model.stats = table.stats;
    model.categories = table.category_names;
    model.residual_training = options.residual_training;
    model.provenance = Provenance{source, table.size(), table.column_count()};

    std::vector<std::size_t> rows(table.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    TrainSummary local;
    if (options.bands) {
        model.bands = build_graph(table, options.epsilon);
        auto split = split_by_bands(*model.bands, table);
        local.band_decided = split.decided.size();
        local.band_wrong = split.wrong;
        // every row band-decided leaves nothing to train on; fall back to the full table
        if (options.residual_training && !split.residual.empty()) rows = std::move(split.residual);
    }
    local.forest_rows = rows.size();
    model.forest = train_forest(table, rows, options.forest);
    if (summary) *summary = local;
    return model;
}

Prediction classify(const Forest& forest, const BandGraph* bands, std::span<const double> row, Descent descent) {
    if (bands) {
        if (auto p = band_classify(*bands, row)) return *p;
    }
    return predict(forest, row, descent);
}

Prediction classify(const Model& model, std::span<const double> row, Descent descent) {
    return classify(model.forest, model.bands ? &*model.bands : nullptr, row, descent);
}

} // namespace bandforest
