#ifndef BANDFOREST_TESTS_FIXTURE_HPP
#define BANDFOREST_TESTS_FIXTURE_HPP

#include <bandforest/dataset.hpp>
#include <bandforest/forest.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace bandforest::fixture {

/// Table over already-normalized values; stats are the identity {0,1} per column.
inline LabeledTable make_table(const std::vector<std::vector<double>>& rows, const std::vector<CategoryId>& labels,
                               std::vector<std::string> names = {}) {
    LabeledTable t;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    t.features = FeatureMatrix(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) t.features.at(i, j) = rows[i][j];
    }
    t.labels = labels;
    CategoryId top = 0;
    for (auto l : labels) top = std::max<CategoryId>(top, l + 1);
    if (names.empty()) {
        for (CategoryId c = 0; c < top; ++c) names.push_back(std::string(1, static_cast<char>('A' + c)));
    }
    t.category_names = std::move(names);
    for (std::size_t j = 0; j < cols; ++j) {
        t.feature_names.push_back("x" + std::to_string(j));
        t.stats.push_back(ColumnStats{0.0, 1.0, {}});
    }
    return t;
}

/// Random table with every category present and no feature vector shared across rows.
inline LabeledTable random_table(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols,
                                 std::size_t max_categories) {
    std::uniform_int_distribution<std::size_t> cat_count(1, max_categories);
    std::uniform_int_distribution<std::size_t> col_count(1, max_cols);
    const auto k = cat_count(rng);
    const auto cols = col_count(rng);
    std::uniform_int_distribution<std::size_t> row_count(k, std::max(k, max_rows));
    const auto n = row_count(rng);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_int_distribution<CategoryId> label(0, static_cast<CategoryId>(k - 1));

    std::set<std::vector<double>> seen;
    std::vector<std::vector<double>> rows;
    std::vector<CategoryId> labels;
    while (rows.size() < n) {
        std::vector<double> r(cols);
        for (auto& v : r) v = value(rng);
        if (!seen.insert(r).second) continue;
        // first k rows pin one of each category so ids stay dense
        labels.push_back(rows.size() < k ? static_cast<CategoryId>(rows.size()) : label(rng));
        rows.push_back(std::move(r));
    }
    return make_table(rows, labels);
}

/// Outcome of replaying every claim step of a trained forest by brute force.
struct ClaimAudit {
    std::size_t impure_leaf_rows = 0; // training rows claimed by a leaf of another category
    std::vector<std::string> violations;
};

namespace detail {

inline double naive_score(const UnitClassifier& u, std::span<const double> row) {
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] + u.offsets[j];
    return std::fabs(s / static_cast<double>(row.size()) - u.desired);
}

inline void audit_layer(const LabeledTable& t, const std::vector<ClassifierNode>& layer,
                        const std::vector<std::size_t>& rows, std::size_t depth, std::size_t max_depth,
                        ClaimAudit& audit) {
    std::set<CategoryId> present;
    for (auto i : rows) present.insert(t.labels[i]);
    std::vector<CategoryId> want(present.begin(), present.end());
    std::vector<CategoryId> have;
    for (const auto& n : layer) have.push_back(n.category());
    if (have != want) {
        audit.violations.push_back("layer at depth " + std::to_string(depth) + " has the wrong categories");
        return;
    }
    std::vector<std::vector<std::size_t>> claims(layer.size());
    for (auto i : rows) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < layer.size(); ++k) {
            if (naive_score(layer[k].unit, t.row(i)) < naive_score(layer[best].unit, t.row(i))) best = k;
        }
        claims[best].push_back(i);
    }
    for (std::size_t k = 0; k < layer.size(); ++k) {
        const auto& node = layer[k];
        const auto& claimed = claims[k];
        std::size_t foreign = 0;
        for (auto i : claimed) foreign += t.labels[i] != node.category();
        const std::string where = "node depth " + std::to_string(depth) + " category " + std::to_string(node.category());
        if (node.depth != depth) audit.violations.push_back(where + ": depth field wrong");
        std::size_t support = 0;
        std::vector<double> sums(t.column_count(), 0.0);
        for (auto i : rows) {
            if (t.labels[i] != node.category()) continue;
            ++support;
            for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += t.features.at(i, j);
        }
        if (node.unit.support != support) audit.violations.push_back(where + ": support differs from its layer rows");
        for (std::size_t j = 0; j < sums.size() && support > 0; ++j) {
            if (std::fabs(sums[j] / static_cast<double>(support) - node.unit.means[j]) > 1e-12) {
                audit.violations.push_back(where + ": mean differs from its layer rows");
                break;
            }
        }
        if (node.is_leaf()) {
            const bool stop = foreign == 0 || claimed.size() == rows.size() || depth >= max_depth;
            if (!stop) audit.violations.push_back(where + ": should have branched");
            audit.impure_leaf_rows += foreign;
        } else {
            if (foreign == 0) audit.violations.push_back(where + ": pure claim but has children");
            if (claimed.size() == rows.size()) audit.violations.push_back(where + ": branched without progress");
            audit_layer(t, node.children, claimed, depth + 1, max_depth, audit);
        }
    }
}

} // namespace detail

inline ClaimAudit audit_claims(const LabeledTable& t, const Forest& forest,
                               std::size_t max_depth = BranchLimits{}.max_depth) {
    ClaimAudit audit;
    std::vector<std::size_t> rows(t.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    detail::audit_layer(t, forest.roots, rows, 0, max_depth, audit);
    return audit;
}

inline std::string data_path(const std::string& file) {
    return (std::filesystem::path(BANDFOREST_TEST_DATA_DIR) / file).string();
}

inline bool have_data(const std::string& file) { return std::filesystem::exists(data_path(file)); }

inline LabeledTable load_data(const std::string& file) {
    return encode_and_normalize(read_delimited_file(data_path(file), IngestOptions{}));
}

} // namespace bandforest::fixture

#endif
