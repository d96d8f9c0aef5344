#include "bandforest/forest.hpp"

#include "bandforest/error.hpp"

#include <algorithm>
#include <numeric>

namespace bandforest {

namespace {

std::size_t closest(std::span<const ClassifierNode> layer, std::span<const double> row, double* best_score = nullptr) {
    std::size_t best = 0;
    double best_value = score(layer[0].unit, row);
    for (std::size_t k = 1; k < layer.size(); ++k) {
        const double s = score(layer[k].unit, row);
        if (s < best_value) {
            best_value = s;
            best = k;
        }
    }
    if (best_score) *best_score = best_value;
    return best;
}

const ClassifierNode& closest_leaf(const ClassifierNode& start, std::span<const double> row) {
    const ClassifierNode* node = &start;
    while (!node->is_leaf()) node = &node->children[closest(node->children, row)];
    return *node;
}

std::vector<ClassifierNode> train_layer(const LabeledTable& table, std::span<const std::size_t> rows,
                                        std::size_t depth, const ForestParams& params) {
    std::vector<CategoryId> categories;
    categories.reserve(rows.size());
    for (auto i : rows) categories.push_back(table.labels[i]);
    std::ranges::sort(categories);
    categories.erase(std::unique(categories.begin(), categories.end()), categories.end());

    const auto desired = assign_desired(categories.size(), params.scheme);
    std::vector<ClassifierNode> layer;
    layer.reserve(categories.size());
    for (std::size_t k = 0; k < categories.size(); ++k) {
        auto avg = batch_average(table, rows, categories[k]);
        layer.push_back(ClassifierNode{train_unit(avg, desired[k], params.unit), {}, depth});
    }

    std::vector<std::vector<std::size_t>> claims(layer.size());
    for (auto i : rows) claims[closest(layer, table.row(i))].push_back(i);

    for (std::size_t k = 0; k < layer.size(); ++k) {
        const auto& claimed = claims[k];
        const bool own_only = std::ranges::all_of(claimed, [&](std::size_t i) { return table.labels[i] == categories[k]; });
        if (own_only) continue;
        if (claimed.size() == rows.size()) continue; // no progress: the layer's whole input came back
        if (depth >= params.limits.max_depth) continue;
        layer[k].children = train_layer(table, claimed, depth + 1, params);
    }
    return layer;
}

void count_nodes(const ClassifierNode& node, std::size_t& count, std::size_t& deepest) {
    ++count;
    deepest = std::max(deepest, node.depth);
    for (const auto& child : node.children) count_nodes(child, count, deepest);
}

void check_row(const Forest& forest, std::span<const double> row) {
    if (forest.empty()) throw IntegrityError("cannot predict with an empty forest");
    if (row.size() != forest.column_count) {
        throw ConfigError("row has " + std::to_string(row.size()) + " columns, forest expects " +
                          std::to_string(forest.column_count));
    }
}

} // namespace

std::string_view to_string(DesiredScheme scheme) {
    return scheme == DesiredScheme::spread ? "spread" : "centred";
}

std::optional<DesiredScheme> parse_scheme(std::string_view text) {
    if (text == "spread") return DesiredScheme::spread;
    if (text == "centred" || text == "centered") return DesiredScheme::centred;
    return std::nullopt;
}

std::string_view to_string(DecisionSource source) {
    return source == DecisionSource::band ? "band" : "classifier";
}

std::string_view to_string(Descent descent) {
    return descent == Descent::per_root ? "per-root" : "closest-path";
}

std::optional<Descent> parse_descent(std::string_view text) {
    if (text == "closest-path") return Descent::closest_path;
    if (text == "per-root") return Descent::per_root;
    return std::nullopt;
}

std::vector<double> assign_desired(std::size_t categories, DesiredScheme scheme) {
    if (scheme == DesiredScheme::centred || categories <= 1) return std::vector<double>(categories, 0.5);
    std::vector<double> out(categories);
    const double last = static_cast<double>(categories - 1);
    for (std::size_t i = 0; i < categories; ++i) out[i] = static_cast<double>(i) / last;
    return out;
}

Forest train_forest(const LabeledTable& table, const ForestParams& params) {
    std::vector<std::size_t> rows(table.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return train_forest(table, rows, params);
}

Forest train_forest(const LabeledTable& table, std::span<const std::size_t> rows, const ForestParams& params) {
    if (rows.empty()) throw ConfigError("cannot train a forest on zero rows");
    Forest forest;
    forest.scheme = params.scheme;
    forest.column_count = table.column_count();
    forest.roots = train_layer(table, rows, 0, params);
    refresh_counts(forest);
    return forest;
}

void refresh_counts(Forest& forest) {
    forest.node_count = 0;
    forest.max_depth = 0;
    for (const auto& root : forest.roots) count_nodes(root, forest.node_count, forest.max_depth);
}

Prediction predict(const Forest& forest, std::span<const double> row, Descent descent) {
    check_row(forest, row);
    Prediction out;
    std::vector<CategoryId> ties;

    if (descent == Descent::per_root) {
        std::vector<std::pair<double, CategoryId>> leaves;
        for (const auto& root : forest.roots) {
            const auto& leaf = closest_leaf(root, row);
            leaves.emplace_back(score(leaf.unit, row), leaf.category());
        }
        auto best = std::ranges::min_element(leaves);
        out.category = best->second;
        out.error = best->first;
        for (const auto& [s, c] : leaves) {
            if (s == out.error) ties.push_back(c);
        }
    } else {
        std::span<const ClassifierNode> level = forest.roots;
        const ClassifierNode* node = nullptr;
        double node_score = 0.0;
        while (true) {
            const std::size_t k = closest(level, row, &node_score);
            for (std::size_t other = 0; other < level.size(); ++other) {
                if (other != k && score(level[other].unit, row) == node_score) {
                    ties.push_back(closest_leaf(level[other], row).category());
                }
            }
            node = &level[k];
            if (node->is_leaf()) break;
            level = node->children;
        }
        out.category = node->category();
        out.error = node_score;
        ties.push_back(out.category);
    }

    std::ranges::sort(ties);
    ties.erase(std::unique(ties.begin(), ties.end()), ties.end());
    out.tie_set = std::move(ties);
    out.tied = out.tie_set.size() > 1;
    out.source = DecisionSource::classifier;
    return out;
}

} // namespace bandforest
