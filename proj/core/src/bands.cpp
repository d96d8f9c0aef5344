#include "bandforest/bands.hpp"

#include "bandforest/error.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace bandforest {

namespace {

void add_category(std::vector<CategoryId>& set, CategoryId c) {
    auto it = std::ranges::lower_bound(set, c);
    if (it == set.end() || *it != c) set.insert(it, c);
}

std::vector<CategoryId> intersect(const std::vector<CategoryId>& a, const std::vector<CategoryId>& b) {
    std::vector<CategoryId> out;
    std::ranges::set_intersection(a, b, std::back_inserter(out));
    return out;
}

} // namespace

std::size_t BandGraph::band_count() const {
    return std::accumulate(columns.begin(), columns.end(), std::size_t{0},
                           [](std::size_t n, const auto& c) { return n + c.size(); });
}

std::size_t BandGraph::link_count() const {
    return std::accumulate(links.begin(), links.end(), std::size_t{0},
                           [](std::size_t n, const auto& l) { return n + l.size(); });
}

std::optional<std::size_t> BandGraph::locate(std::size_t column, double value) const {
    const auto& bands = columns.at(column);
    // first band whose upper edge reaches the value
    auto it = std::ranges::lower_bound(bands, value, {}, [this](const Band& b) { return b.high + epsilon; });
    if (it != bands.end() && it->contains(value, epsilon)) return static_cast<std::size_t>(it - bands.begin());
    return std::nullopt;
}

bool BandGraph::linked(std::size_t column, std::size_t from, std::size_t to) const {
    return std::ranges::binary_search(links.at(column), BandLink{from, to});
}

std::vector<Band> build_bands(const LabeledTable& table, std::size_t column, double epsilon) {
    if (column >= table.column_count()) throw ConfigError("band column out of range");
    std::vector<std::size_t> order(table.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, {}, [&](std::size_t i) { return table.features.at(i, column); });

    std::vector<Band> bands;
    double prev_value = 0.0;
    CategoryId prev_label = 0;
    for (auto i : order) {
        const double value = table.features.at(i, column);
        const CategoryId label = table.labels[i];
        const bool extend = !bands.empty() && (label == prev_label || value - prev_value <= epsilon);
        if (extend) {
            bands.back().high = value;
            add_category(bands.back().categories, label);
        } else {
            bands.push_back(Band{column, value, value, {label}});
        }
        prev_value = value;
        prev_label = label;
    }

    // Bands whose ranges touch within epsilon merge.
    std::vector<Band> merged;
    for (auto& band : bands) {
        if (!merged.empty() && band.low - merged.back().high <= epsilon) {
            merged.back().high = band.high;
            for (auto c : band.categories) add_category(merged.back().categories, c);
        } else {
            merged.push_back(std::move(band));
        }
    }
    return merged;
}

BandGraph build_graph(const LabeledTable& table, double epsilon) {
    if (table.size() == 0) throw ConfigError("cannot build bands from an empty table");
    BandGraph graph;
    graph.epsilon = epsilon;
    const std::size_t cols = table.column_count();
    for (std::size_t j = 0; j < cols; ++j) graph.columns.push_back(build_bands(table, j, epsilon));
    graph.links.resize(cols > 0 ? cols - 1 : 0);

    std::vector<std::size_t> path(cols);
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto row = table.row(i);
        for (std::size_t j = 0; j < cols; ++j) {
            auto band = graph.locate(j, row[j]);
            if (!band) {
                throw IntegrityError("training value " + std::to_string(row[j]) + " of column " + std::to_string(j) +
                                     " falls in no band");
            }
            path[j] = *band;
        }
        for (std::size_t j = 0; j + 1 < cols; ++j) graph.links[j].emplace_back(path[j], path[j + 1]);
    }
    for (auto& l : graph.links) {
        std::ranges::sort(l);
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return graph;
}

std::optional<Prediction> band_classify(const BandGraph& graph, std::span<const double> row) {
    if (row.size() != graph.column_count()) {
        throw ConfigError("row has " + std::to_string(row.size()) + " columns, band graph expects " +
                          std::to_string(graph.column_count()));
    }
    std::vector<CategoryId> candidates;
    std::size_t prev = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        auto band = graph.locate(j, row[j]);
        if (!band) return std::nullopt;
        if (j > 0 && !graph.linked(j - 1, prev, *band)) return std::nullopt;
        const auto& cats = graph.columns[j][*band].categories;
        candidates = j == 0 ? cats : intersect(candidates, cats);
        if (candidates.empty()) return std::nullopt;
        prev = *band;
    }
    if (candidates.size() != 1) return std::nullopt;
    Prediction p;
    p.category = candidates.front();
    p.error = 0.0;
    p.tied = false;
    p.tie_set = candidates;
    p.source = DecisionSource::band;
    return p;
}

BandSplit split_by_bands(const BandGraph& graph, const LabeledTable& table) {
    BandSplit split;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (auto p = band_classify(graph, table.row(i))) {
            split.decided.push_back(i);
            if (p->category != table.labels[i]) ++split.wrong;
        } else {
            split.residual.push_back(i);
        }
    }
    return split;
}

void check_graph(const BandGraph& graph) {
    if (!(graph.epsilon >= 0.0)) throw IntegrityError("band epsilon must be non-negative");
    if (graph.links.size() + 1 != std::max<std::size_t>(graph.columns.size(), 1)) {
        throw IntegrityError("band graph needs one link list per adjacent column pair");
    }
    for (std::size_t j = 0; j < graph.columns.size(); ++j) {
        const auto& bands = graph.columns[j];
        for (std::size_t b = 0; b < bands.size(); ++b) {
            const auto& band = bands[b];
            if (band.column != j) throw IntegrityError("band lists the wrong column");
            if (!(band.low <= band.high)) throw IntegrityError("band has low > high");
            if (band.categories.empty()) throw IntegrityError("band has no categories");
            if (!std::ranges::is_sorted(band.categories) ||
                std::adjacent_find(band.categories.begin(), band.categories.end()) != band.categories.end()) {
                throw IntegrityError("band categories must be ascending and unique");
            }
            if (b > 0 && !(bands[b - 1].high < band.low)) {
                throw IntegrityError("bands of column " + std::to_string(j) + " overlap or are unsorted");
            }
        }
    }
    for (std::size_t j = 0; j < graph.links.size(); ++j) {
        const auto& l = graph.links[j];
        if (!std::ranges::is_sorted(l) || std::adjacent_find(l.begin(), l.end()) != l.end()) {
            throw IntegrityError("links must be ascending and unique");
        }
        for (const auto& [from, to] : l) {
            if (from >= graph.columns[j].size() || to >= graph.columns[j + 1].size()) {
                throw IntegrityError("link points outside its column");
            }
        }
    }
}

std::string render_band_report(const BandGraph& graph, const std::vector<std::string>& category_names,
                               const std::vector<std::string>& column_names) {
    std::ostringstream out;
    out << "bands: " << graph.band_count() << "  links: " << graph.link_count() << "  epsilon: " << graph.epsilon
        << '\n';
    for (std::size_t j = 0; j < graph.columns.size(); ++j) {
        out << "column " << j;
        if (j < column_names.size()) out << " (" << column_names[j] << ')';
        out << ": " << graph.columns[j].size() << " bands";
        if (j + 1 < graph.columns.size()) out << ", " << graph.links[j].size() << " links to column " << j + 1;
        out << '\n';
        for (std::size_t b = 0; b < graph.columns[j].size(); ++b) {
            const auto& band = graph.columns[j][b];
            out << "  band " << std::setw(3) << b + 1 << "  [" << band.low << ", " << band.high << "]  {";
            for (std::size_t k = 0; k < band.categories.size(); ++k) {
                const auto c = band.categories[k];
                out << (k ? ", " : "") << (c < category_names.size() ? category_names[c] : std::to_string(c));
            }
            out << "}\n";
        }
    }
    return out.str();
}

} // namespace bandforest
