#ifndef BANDFOREST_DATASET_HPP
#define BANDFOREST_DATASET_HPP

/*
 * Delimited-text ingestion and [0,1] min-max normalization.
 *
 * A training file goes through parse_delimited() then encode_and_normalize(),
 * which records per-column statistics. Held-out files reuse those statistics
 * through apply_stats(), so train and test rows share one coordinate system.
 * Nominal (non-numeric) feature columns are encoded ordinally in order of
 * first appearance and the level list is kept in ColumnStats.
 */

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bandforest {

using CategoryId = std::uint32_t;

/// Label column selector: by zero-based index, by header name, or the last column.
struct LabelColumn {
    std::variant<std::monostate, std::size_t, std::string> selector;

    static LabelColumn last() { return {}; }
    static LabelColumn index(std::size_t i) { return {i}; }
    static LabelColumn name(std::string n) { return {std::move(n)}; }

    /// Parses "last", a non-negative integer, or anything else as a column name.
    static LabelColumn parse(const std::string& text);
};

struct IngestOptions {
    char delimiter = ',';
    bool has_header = true;
    LabelColumn label = LabelColumn::last();
    /// When nonempty, pins category ids to this order instead of first appearance.
    std::vector<std::string> category_order;
    /// False for feature-only files: every column is a feature and `label` is ignored.
    bool labeled = true;
};

struct RawRow {
    std::vector<std::string> features;
    std::string label;
    std::size_t line = 0; // 1-based source line
};

struct RawTable {
    std::vector<std::string> column_names; // all columns, label included
    std::vector<RawRow> rows;
    std::size_t label_column = 0; // equals column_names.size() for unlabeled tables

    std::size_t feature_count() const {
        return label_column < column_names.size() ? column_names.size() - 1 : column_names.size();
    }
    std::vector<std::string> feature_names() const;
};

struct ColumnStats {
    double min = 0.0;
    double max = 0.0;
    /// Ordinal levels of a nominal column, empty for numeric columns.
    std::vector<std::string> levels;

    bool is_constant() const { return min == max; }
    bool is_nominal() const { return !levels.empty(); }
    double normalize(double v) const;
};

/// Row-major matrix of normalized feature values.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : cols_(cols), values_(rows * cols, 0.0) {}

    std::size_t rows() const { return cols_ == 0 ? 0 : values_.size() / cols_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    void append_row(std::span<const double> values);

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

struct LabeledTable {
    FeatureMatrix features;
    std::vector<CategoryId> labels;
    std::vector<std::string> category_names;
    std::vector<std::string> feature_names;
    std::vector<ColumnStats> stats;

    std::size_t size() const { return labels.size(); }
    std::size_t column_count() const { return features.cols(); }
    std::size_t category_count() const { return category_names.size(); }
    std::span<const double> row(std::size_t i) const { return features.row(i); }

    /// Table restricted to the given row indices (same categories and stats).
    LabeledTable subset(std::span<const std::size_t> rows) const;
};

RawTable parse_delimited(std::istream& source, const IngestOptions& options);
RawTable read_delimited_file(const std::string& path, const IngestOptions& options);

/// Builds a normalized table and its statistics from training data.
LabeledTable encode_and_normalize(const RawTable& raw,
                                  const std::vector<std::string>& category_order = {});

/// Normalizes held-out rows with training statistics; out-of-range values clamp to [0,1].
LabeledTable apply_stats(const RawTable& raw, const std::vector<ColumnStats>& stats,
                         const std::vector<std::string>& categories);

/// Feature-only variant of apply_stats for unlabeled rows.
FeatureMatrix normalize_features(const std::vector<std::vector<std::string>>& rows,
                                 const std::vector<ColumnStats>& stats);

/// Rejects NaN and values outside [0,1]; throws IngestError.
void check_normalized(const LabeledTable& table);

std::optional<double> parse_real(const std::string& cell);

} // namespace bandforest

#endif // BANDFOREST_DATASET_HPP
