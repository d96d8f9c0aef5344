#ifndef BANDFOREST_BANDS_HPP
#define BANDFOREST_BANDS_HPP

/*
 * Fixed value bands per column.
 *
 * A column's (value, label) pairs are sorted by value (stable in row order)
 * and scanned. A run grows while the label stays the same. At a label change
 * the run closes, unless the two neighbouring values are equal within
 * epsilon: then both labels share one band and the scan carries on to the
 * next clean break. Band bounds are the smallest and largest training value
 * inside them and are inclusive.
 *
 * Bands in adjacent columns are linked whenever a training row falls in both.
 * A row is decided by bands alone when its per-column bands form a linked
 * chain and their category sets intersect in exactly one category.
 */

#include "bandforest/dataset.hpp"
#include "bandforest/forest.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bandforest {

inline constexpr double default_band_epsilon = 1e-9;

struct Band {
    std::size_t column = 0;
    double low = 0.0;
    double high = 0.0;
    std::vector<CategoryId> categories; // ascending, nonempty

    bool contains(double value, double epsilon) const { return value >= low - epsilon && value <= high + epsilon; }
    bool operator==(const Band&) const = default;
};

using BandLink = std::pair<std::size_t, std::size_t>; // band index in column j, band index in column j + 1

struct BandGraph {
    double epsilon = default_band_epsilon;
    std::vector<std::vector<Band>> columns;
    std::vector<std::vector<BandLink>> links; // links[j] joins column j to j + 1, ascending

    std::size_t column_count() const { return columns.size(); }
    std::size_t band_count() const;
    std::size_t link_count() const;

    /// Index of the band of `column` containing `value`, if any.
    std::optional<std::size_t> locate(std::size_t column, double value) const;
    bool linked(std::size_t column, std::size_t from, std::size_t to) const;

    bool operator==(const BandGraph&) const = default;
};

struct BandSplit {
    std::vector<std::size_t> decided;  // rows a band path resolves to one category
    std::vector<std::size_t> residual; // everything else, left for the forest
    std::size_t wrong = 0;             // decided rows whose band label disagrees with the row label
};

std::vector<Band> build_bands(const LabeledTable& table, std::size_t column, double epsilon = default_band_epsilon);

BandGraph build_graph(const LabeledTable& table, double epsilon = default_band_epsilon);

/// Returns a band decision or nullopt when the path is broken or ambiguous.
std::optional<Prediction> band_classify(const BandGraph& graph, std::span<const double> row);

BandSplit split_by_bands(const BandGraph& graph, const LabeledTable& table);

/// Throws IntegrityError when bands overlap, are unsorted, or links point outside a column.
void check_graph(const BandGraph& graph);

/// Per-column band listing with category names and link counts.
std::string render_band_report(const BandGraph& graph, const std::vector<std::string>& category_names,
                               const std::vector<std::string>& column_names = {});

} // namespace bandforest

#endif // BANDFOREST_BANDS_HPP
