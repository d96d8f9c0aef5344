#ifndef BANDFOREST_UNIT_HPP
#define BANDFOREST_UNIT_HPP

/*
 * Per-category batch classifier.
 *
 * Each category is collapsed to the column-wise mean of its rows. A unit then
 * learns one additive offset per column so that the aggregate output (the
 * arithmetic mean over columns of value + offset) reaches the category's
 * desired output. Each pass adds the current error magnitude to columns
 * sitting at or below the desired value and subtracts it from columns above,
 * so columns may move in opposite directions. When every column starts on
 * the same side this lands exactly in one pass.
 *
 * score() reports |aggregate(row + offsets) - desired|; lower is closer.
 */

#include "bandforest/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bandforest {

struct CategoryAverage {
    CategoryId category = 0;
    std::vector<double> means;
    std::size_t support = 0;
};

struct UnitParams {
    std::size_t max_iters = 10;
    double tol = 1e-12;
};

struct UnitClassifier {
    CategoryId category = 0;
    std::vector<double> means;
    std::vector<double> offsets;
    double desired = 0.5;
    double residual = 0.0;
    std::size_t support = 0;

    bool operator==(const UnitClassifier&) const = default;
};

/// Column means over every row of `category`; throws ConfigError if it has none.
CategoryAverage batch_average(const LabeledTable& table, CategoryId category);

/// Same, restricted to the listed row indices.
CategoryAverage batch_average(const LabeledTable& table, std::span<const std::size_t> rows, CategoryId category);

UnitClassifier train_unit(const CategoryAverage& avg, double desired, const UnitParams& params = {});

/// Mean over columns of (values[j] + offsets[j]).
double aggregate(std::span<const double> values, std::span<const double> offsets);

/// Throws ConfigError on a length mismatch.
double score(const UnitClassifier& unit, std::span<const double> row);

} // namespace bandforest

#endif // BANDFOREST_UNIT_HPP
