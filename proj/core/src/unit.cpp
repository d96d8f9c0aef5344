#include "bandforest/unit.hpp"

#include "bandforest/error.hpp"

#include <cmath>
#include <string>

namespace bandforest {

namespace {

CategoryAverage finish_average(CategoryAverage avg, CategoryId category) {
    if (avg.support == 0) {
        throw ConfigError("category " + std::to_string(category) + " has no rows to average");
    }
    for (auto& m : avg.means) m /= static_cast<double>(avg.support);
    return avg;
}

} // namespace

CategoryAverage batch_average(const LabeledTable& table, CategoryId category) {
    CategoryAverage avg{category, std::vector<double>(table.column_count(), 0.0), 0};
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table.labels[i] != category) continue;
        auto row = table.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) avg.means[j] += row[j];
        ++avg.support;
    }
    return finish_average(std::move(avg), category);
}

CategoryAverage batch_average(const LabeledTable& table, std::span<const std::size_t> rows, CategoryId category) {
    CategoryAverage avg{category, std::vector<double>(table.column_count(), 0.0), 0};
    for (auto i : rows) {
        if (table.labels[i] != category) continue;
        auto row = table.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) avg.means[j] += row[j];
        ++avg.support;
    }
    return finish_average(std::move(avg), category);
}

double aggregate(std::span<const double> values, std::span<const double> offsets) {
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) sum += values[j] + offsets[j];
    return sum / static_cast<double>(values.size());
}

UnitClassifier train_unit(const CategoryAverage& avg, double desired, const UnitParams& params) {
    UnitClassifier unit;
    unit.category = avg.category;
    unit.means = avg.means;
    unit.offsets.assign(avg.means.size(), 0.0);
    unit.desired = desired;
    unit.support = avg.support;

    for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
        const double error = desired - aggregate(unit.means, unit.offsets);
        const double step = std::abs(error);
        if (step <= params.tol) break;
        for (std::size_t j = 0; j < unit.means.size(); ++j) {
            // at-or-below takes the add branch
            if (unit.means[j] + unit.offsets[j] <= desired) {
                unit.offsets[j] += step;
            } else {
                unit.offsets[j] -= step;
            }
        }
    }
    unit.residual = std::abs(aggregate(unit.means, unit.offsets) - desired);
    return unit;
}

double score(const UnitClassifier& unit, std::span<const double> row) {
    if (row.size() != unit.offsets.size()) {
        throw ConfigError("row has " + std::to_string(row.size()) + " columns, classifier expects " +
                          std::to_string(unit.offsets.size()));
    }
    return std::abs(aggregate(row, unit.offsets) - unit.desired);
}

} // namespace bandforest
