#include "bandforest/dataset.hpp"

#include "bandforest/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace bandforest {

namespace {

std::string trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

// Splits one record; a cell wrapped in double quotes may contain the delimiter
// and escapes a quote by doubling it.
std::vector<std::string> split_record(const std::string& line, char delimiter, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && trim(cell).empty()) {
            quoted = true;
            was_quoted = true;
            cell.clear();
        } else if (c == delimiter) {
            cells.push_back(was_quoted ? cell : trim(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell += c;
        }
    }
    if (quoted) {
        throw IngestError("line " + std::to_string(line_no) + ": unterminated quoted cell");
    }
    cells.push_back(was_quoted ? cell : trim(cell));
    return cells;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::size_t resolve_label(const LabelColumn& label, const std::vector<std::string>& names, bool has_header) {
    const std::size_t n = names.size();
    return std::visit(
        [&](const auto& sel) -> std::size_t {
            using T = std::decay_t<decltype(sel)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return n - 1;
            } else if constexpr (std::is_same_v<T, std::size_t>) {
                if (sel >= n) {
                    throw ConfigError("label column index " + std::to_string(sel) + " out of range (file has " +
                                      std::to_string(n) + " columns)");
                }
                return sel;
            } else {
                if (!has_header) {
                    throw ConfigError("label column '" + sel + "' given by name but the file has no header");
                }
                auto it = std::find(names.begin(), names.end(), sel);
                if (it == names.end()) throw ConfigError("label column '" + sel + "' not found in header");
                return static_cast<std::size_t>(it - names.begin());
            }
        },
        label.selector);
}

struct EncodedColumn {
    std::vector<double> values;
    ColumnStats stats;
};

EncodedColumn encode_column(const RawTable& raw, std::size_t j) {
    EncodedColumn out;
    out.values.reserve(raw.rows.size());
    std::size_t numeric = 0;
    for (const auto& row : raw.rows) {
        if (parse_real(row.features[j])) ++numeric;
    }
    const auto name = raw.feature_names()[j];
    if (numeric == raw.rows.size()) {
        for (const auto& row : raw.rows) out.values.push_back(*parse_real(row.features[j]));
    } else if (numeric == 0) {
        std::unordered_map<std::string, std::size_t> index;
        for (const auto& row : raw.rows) {
            const auto& cell = row.features[j];
            auto [it, inserted] = index.try_emplace(cell, out.stats.levels.size());
            if (inserted) out.stats.levels.push_back(cell);
            out.values.push_back(static_cast<double>(it->second));
        }
    } else {
        auto bad = std::find_if(raw.rows.begin(), raw.rows.end(),
                                [&](const RawRow& r) { return !parse_real(r.features[j]); });
        throw IngestError("column '" + name + "' mixes numeric and non-numeric cells (line " +
                          std::to_string(bad->line) + ": '" + bad->features[j] + "')");
    }
    auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
    out.stats.min = *lo;
    out.stats.max = *hi;
    return out;
}

double encode_cell(const std::string& cell, const ColumnStats& stats, const std::string& column, std::size_t line) {
    if (stats.is_nominal()) {
        auto it = std::find(stats.levels.begin(), stats.levels.end(), cell);
        return static_cast<double>(it - stats.levels.begin());
    }
    auto v = parse_real(cell);
    if (!v) {
        throw IngestError("line " + std::to_string(line) + ": column '" + column + "' expects a number, got '" +
                          cell + "'");
    }
    return *v;
}

} // namespace

LabelColumn LabelColumn::parse(const std::string& text) {
    if (text.empty() || text == "last") return last();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) return index(value);
    return name(text);
}

std::vector<std::string> RawTable::feature_names() const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        if (j != label_column) out.push_back(column_names[j]);
    }
    return out;
}

double ColumnStats::normalize(double v) const {
    if (is_constant()) return 0.0;
    const double t = (v - min) / (max - min);
    return std::clamp(t, 0.0, 1.0);
}

void FeatureMatrix::append_row(std::span<const double> values) {
    if (values_.empty()) cols_ = values.size();
    if (values.size() != cols_) throw IntegrityError("row width does not match matrix column count");
    values_.insert(values_.end(), values.begin(), values.end());
}

LabeledTable LabeledTable::subset(std::span<const std::size_t> rows) const {
    LabeledTable out;
    out.features = FeatureMatrix(rows.size(), column_count());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::ranges::copy(row(rows[k]), out.features.row(k).begin());
        out.labels.push_back(labels[rows[k]]);
    }
    out.category_names = category_names;
    out.feature_names = feature_names;
    out.stats = stats;
    return out;
}

std::optional<double> parse_real(const std::string& cell) {
    std::string_view s = cell;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

RawTable parse_delimited(std::istream& source, const IngestOptions& options) {
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header_pending = options.has_header;
    while (std::getline(source, line)) {
        ++line_no;
        if (blank(line)) continue;
        auto cells = split_record(line, options.delimiter, line_no);
        if (header_pending) {
            table.column_names = std::move(cells);
            width = table.column_names.size();
            header_pending = false;
            table.label_column = options.labeled ? resolve_label(options.label, table.column_names, true) : width;
            continue;
        }
        if (width == 0) {
            width = cells.size();
            for (std::size_t j = 0; j < width; ++j) table.column_names.push_back("c" + std::to_string(j));
            table.label_column = options.labeled ? resolve_label(options.label, table.column_names, false) : width;
        }
        if (cells.size() != width) {
            throw IngestError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                              " cells, found " + std::to_string(cells.size()));
        }
        RawRow row;
        row.line = line_no;
        for (std::size_t j = 0; j < width; ++j) {
            if (cells[j].empty()) {
                throw IngestError("line " + std::to_string(line_no) + ": empty cell in column '" +
                                  table.column_names[j] + "' (missing values are not supported)");
            }
            if (j == table.label_column) {
                row.label = std::move(cells[j]);
            } else {
                row.features.push_back(std::move(cells[j]));
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (options.labeled && width < 2 && !table.rows.empty()) {
        throw IngestError("need at least one feature column besides the label");
    }
    return table;
}

RawTable read_delimited_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    try {
        return parse_delimited(in, options);
    } catch (const IngestError& e) {
        throw IngestError(path + ": " + e.what());
    }
}

LabeledTable encode_and_normalize(const RawTable& raw, const std::vector<std::string>& category_order) {
    if (raw.rows.empty()) throw IngestError("table has no data rows");
    const std::size_t cols = raw.feature_count();
    LabeledTable out;
    out.feature_names = raw.feature_names();
    out.features = FeatureMatrix(raw.rows.size(), cols);
    for (std::size_t j = 0; j < cols; ++j) {
        auto column = encode_column(raw, j);
        for (std::size_t i = 0; i < raw.rows.size(); ++i) {
            out.features.at(i, j) = column.stats.normalize(column.values[i]);
        }
        out.stats.push_back(std::move(column.stats));
    }

    out.category_names = category_order;
    std::unordered_map<std::string, CategoryId> ids;
    for (std::size_t c = 0; c < category_order.size(); ++c) ids.emplace(category_order[c], static_cast<CategoryId>(c));
    for (const auto& row : raw.rows) {
        auto it = ids.find(row.label);
        if (it == ids.end()) {
            if (!category_order.empty()) {
                throw IngestError("line " + std::to_string(row.line) + ": label '" + row.label +
                                  "' is not in the pinned category order");
            }
            it = ids.emplace(row.label, static_cast<CategoryId>(out.category_names.size())).first;
            out.category_names.push_back(row.label);
        }
        out.labels.push_back(it->second);
    }
    return out;
}

LabeledTable apply_stats(const RawTable& raw, const std::vector<ColumnStats>& stats,
                         const std::vector<std::string>& categories) {
    if (raw.feature_count() != stats.size()) {
        throw IngestError("table has " + std::to_string(raw.feature_count()) + " feature columns, model expects " +
                          std::to_string(stats.size()));
    }
    LabeledTable out;
    out.feature_names = raw.feature_names();
    out.stats = stats;
    out.category_names = categories;
    out.features = FeatureMatrix(raw.rows.size(), stats.size());
    const auto names = raw.feature_names();
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        const auto& row = raw.rows[i];
        for (std::size_t j = 0; j < stats.size(); ++j) {
            out.features.at(i, j) = stats[j].normalize(encode_cell(row.features[j], stats[j], names[j], row.line));
        }
        auto it = std::find(categories.begin(), categories.end(), row.label);
        if (it == categories.end()) {
            throw IngestError("line " + std::to_string(row.line) + ": label '" + row.label +
                              "' was not seen in training");
        }
        out.labels.push_back(static_cast<CategoryId>(it - categories.begin()));
    }
    return out;
}

FeatureMatrix normalize_features(const std::vector<std::vector<std::string>>& rows,
                                 const std::vector<ColumnStats>& stats) {
    FeatureMatrix out(rows.size(), stats.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != stats.size()) {
            throw IngestError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                              " cells, model expects " + std::to_string(stats.size()));
        }
        for (std::size_t j = 0; j < stats.size(); ++j) {
            out.at(i, j) = stats[j].normalize(encode_cell(rows[i][j], stats[j], "c" + std::to_string(j), i + 1));
        }
    }
    return out;
}

void check_normalized(const LabeledTable& table) {
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (double v : table.row(i)) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw IngestError("row " + std::to_string(i) + " holds a value outside [0,1]");
            }
        }
        if (table.labels[i] >= table.category_count()) {
            throw IngestError("row " + std::to_string(i) + " references an unknown category");
        }
    }
}

} // namespace bandforest
