#include "bandforest/persist.hpp"

#include "bandforest/error.hpp"
#include "bandforest/eval.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bandforest {

namespace {

constexpr const char* magic = "bandforest-model";

void write_reals(std::ostream& out, const char* key, const std::vector<double>& values) {
    out << key;
    for (double v : values) out << ' ' << format_real(v);
    out << '\n';
}

void write_node(std::ostream& out, const ClassifierNode& node) {
    const auto& u = node.unit;
    out << "node " << node.depth << ' ' << u.category << ' ' << format_real(u.desired) << ' '
        << format_real(u.residual) << ' ' << u.support << ' ' << node.children.size() << '\n';
    write_reals(out, "means", u.means);
    write_reals(out, "offsets", u.offsets);
    for (const auto& child : node.children) write_node(out, child);
}

// Line-oriented reader that tags every failure with the section being parsed.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void section(std::string name) { section_ = std::move(name); }

    std::istringstream& next() {
        std::string line;
        do {
            if (!std::getline(in_, line)) fail("unexpected end of file");
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
        } while (line.empty());
        current_.clear();
        current_.str(line);
        return current_;
    }

    std::istringstream& expect(const std::string& keyword) {
        auto& s = next();
        std::string word;
        s >> word;
        if (word != keyword) fail("expected '" + keyword + "', found '" + word + "'");
        return s;
    }

    template <typename T>
    T read(std::istringstream& s, const char* what) {
        if constexpr (std::is_same_v<T, double>) {
            std::string tok;
            if (!(s >> tok)) fail(std::string("missing ") + what);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(std::string("bad ") + what + " '" + tok + "'");
            return v;
        } else if constexpr (std::is_same_v<T, std::string>) {
            std::string v;
            if (!(s >> std::quoted(v))) fail(std::string("missing ") + what);
            return v;
        } else {
            long long v = 0;
            if (!(s >> v) || v < 0) fail(std::string("bad ") + what);
            return static_cast<T>(v);
        }
    }

    void keyword(std::istringstream& s, const std::string& expected) {
        std::string word;
        s >> word;
        if (word != expected) fail("expected '" + expected + "', found '" + word + "'");
    }

    void done(std::istringstream& s) {
        std::string extra;
        if (s >> extra) fail("unexpected trailing token '" + extra + "'");
    }

    std::vector<double> reals(const std::string& key, std::size_t count) {
        auto& s = expect(key);
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t j = 0; j < count; ++j) out.push_back(read<double>(s, key.c_str()));
        done(s);
        return out;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("model file, section '" + section_ + "', line " + std::to_string(line_no_) + ": " + message);
    }

private:
    std::istream& in_;
    std::istringstream current_;
    std::string section_ = "header";
    std::size_t line_no_ = 0;
};

ClassifierNode read_node(Reader& r, std::size_t columns) {
    auto& s = r.expect("node");
    ClassifierNode node;
    node.depth = r.read<std::size_t>(s, "depth");
    node.unit.category = r.read<CategoryId>(s, "category");
    node.unit.desired = r.read<double>(s, "desired");
    node.unit.residual = r.read<double>(s, "residual");
    node.unit.support = r.read<std::size_t>(s, "support");
    const auto children = r.read<std::size_t>(s, "child count");
    r.done(s);
    node.unit.means = r.reals("means", columns);
    node.unit.offsets = r.reals("offsets", columns);
    node.children.reserve(children);
    for (std::size_t k = 0; k < children; ++k) node.children.push_back(read_node(r, columns));
    return node;
}

void check_node(const ClassifierNode& node, std::size_t expected_depth, const Model& model) {
    const auto& u = node.unit;
    const std::string where = "node at depth " + std::to_string(node.depth) + " category " + std::to_string(u.category);
    if (node.depth != expected_depth) {
        throw IntegrityError(where + ": depth should be " + std::to_string(expected_depth));
    }
    if (u.category >= model.categories.size()) throw IntegrityError(where + ": unknown category");
    if (u.means.size() != model.stats.size() || u.offsets.size() != model.stats.size()) {
        throw IntegrityError(where + ": means/offsets length differs from column count");
    }
    if (!(u.desired >= 0.0 && u.desired <= 1.0)) throw IntegrityError(where + ": desired value outside [0,1]");
    if (u.support == 0) throw IntegrityError(where + ": zero support");
    if (std::abs(aggregate(u.means, u.offsets) - u.desired) != u.residual) {
        throw IntegrityError(where + ": residual does not match means, offsets and desired value");
    }
    bool foreign = false;
    for (std::size_t k = 0; k < node.children.size(); ++k) {
        if (k > 0 && !(node.children[k - 1].category() < node.children[k].category())) {
            throw IntegrityError(where + ": children must be ascending by category");
        }
        foreign |= node.children[k].category() != u.category;
        check_node(node.children[k], expected_depth + 1, model);
    }
    if (!node.children.empty() && !foreign) {
        throw IntegrityError(where + ": branches without any competing category");
    }
}

} // namespace

void check_model(const Model& model) {
    if (model.categories.empty()) throw IntegrityError("model has no categories");
    if (model.stats.empty()) throw IntegrityError("model has no feature columns");
    if (model.feature_names.size() != model.stats.size()) throw IntegrityError("feature names and stats disagree");
    for (const auto& s : model.stats) {
        if (!(s.min <= s.max)) throw IntegrityError("column stats have min > max");
    }
    const auto& forest = model.forest;
    if (forest.empty()) throw IntegrityError("model has an empty forest");
    if (forest.column_count != model.stats.size()) throw IntegrityError("forest column count differs from stats");
    for (std::size_t k = 0; k < forest.roots.size(); ++k) {
        if (k > 0 && !(forest.roots[k - 1].category() < forest.roots[k].category())) {
            throw IntegrityError("roots must be ascending by category with one root per category");
        }
        check_node(forest.roots[k], 0, model);
    }
    Forest counted = forest;
    refresh_counts(counted);
    if (counted.node_count != forest.node_count) throw IntegrityError("node count does not match the node records");
    if (counted.max_depth != forest.max_depth) throw IntegrityError("max depth does not match the node records");
    if (model.bands) {
        check_graph(*model.bands);
        if (model.bands->column_count() != model.stats.size()) throw IntegrityError("band columns differ from stats");
        for (const auto& column : model.bands->columns) {
            for (const auto& band : column) {
                if (band.categories.back() >= model.categories.size()) {
                    throw IntegrityError("band references an unknown category");
                }
            }
        }
    }
}

void save(const Model& model, std::ostream& out) {
    if (model.forest.empty() || model.categories.empty()) throw IntegrityError("cannot save an untrained model");
    check_model(model);

    out << magic << ' ' << model_format_version << '\n';
    out << "source " << std::quoted(model.provenance.source) << " rows " << model.provenance.rows << " columns "
        << model.provenance.columns << '\n';
    out << "residual_training " << (model.residual_training ? 1 : 0) << '\n';

    out << "features " << model.stats.size() << '\n';
    for (std::size_t j = 0; j < model.stats.size(); ++j) {
        const auto& s = model.stats[j];
        out << "feature " << std::quoted(model.feature_names[j]) << ' ' << format_real(s.min) << ' '
            << format_real(s.max) << ' ' << s.levels.size();
        for (const auto& level : s.levels) out << ' ' << std::quoted(level);
        out << '\n';
    }

    out << "categories " << model.categories.size() << '\n';
    for (const auto& c : model.categories) out << "category " << std::quoted(c) << '\n';

    const auto& f = model.forest;
    out << "forest scheme " << to_string(f.scheme) << " columns " << f.column_count << " nodes " << f.node_count
        << " max_depth " << f.max_depth << " roots " << f.roots.size() << '\n';
    for (const auto& root : f.roots) write_node(out, root);

    if (!model.bands) {
        out << "bands none\n";
    } else {
        const auto& g = *model.bands;
        out << "bands epsilon " << format_real(g.epsilon) << " columns " << g.columns.size() << '\n';
        for (std::size_t j = 0; j < g.columns.size(); ++j) {
            out << "column " << j << " bands " << g.columns[j].size() << '\n';
            for (const auto& band : g.columns[j]) {
                out << "band " << format_real(band.low) << ' ' << format_real(band.high) << ' '
                    << band.categories.size();
                for (auto c : band.categories) out << ' ' << c;
                out << '\n';
            }
        }
        for (std::size_t j = 0; j < g.links.size(); ++j) {
            out << "links " << j << " count " << g.links[j].size() << '\n';
            for (const auto& [a, b] : g.links[j]) out << "link " << a << ' ' << b << '\n';
        }
    }
    out << "end\n";
    if (!out) throw Error("failed writing model");
}

std::string save_to_string(const Model& model) {
    std::ostringstream out;
    save(model, out);
    return out.str();
}

void save_file(const Model& model, const std::string& path) {
    const auto text = save_to_string(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw Error("failed writing '" + path + "'");
}

Model load(std::istream& source) {
    Reader r(source);
    Model model;

    {
        auto& s = r.next();
        std::string word;
        s >> word;
        if (word != magic) r.fail("not a bandforest model file");
        const int version = r.read<int>(s, "format version");
        if (version != model_format_version) {
            throw VersionError("unsupported model format version " + std::to_string(version) + " (this build reads " +
                               std::to_string(model_format_version) + ")");
        }
        r.done(s);
    }
    {
        auto& s = r.expect("source");
        model.provenance.source = r.read<std::string>(s, "source name");
        r.keyword(s, "rows");
        model.provenance.rows = r.read<std::size_t>(s, "row count");
        r.keyword(s, "columns");
        model.provenance.columns = r.read<std::size_t>(s, "column count");
        r.done(s);
        auto& t = r.expect("residual_training");
        model.residual_training = r.read<int>(t, "residual_training flag") != 0;
        r.done(t);
    }

    r.section("features");
    {
        auto& s = r.expect("features");
        const auto n = r.read<std::size_t>(s, "feature count");
        r.done(s);
        for (std::size_t j = 0; j < n; ++j) {
            auto& f = r.expect("feature");
            model.feature_names.push_back(r.read<std::string>(f, "feature name"));
            ColumnStats stats;
            stats.min = r.read<double>(f, "min");
            stats.max = r.read<double>(f, "max");
            const auto levels = r.read<std::size_t>(f, "level count");
            for (std::size_t k = 0; k < levels; ++k) stats.levels.push_back(r.read<std::string>(f, "level"));
            r.done(f);
            model.stats.push_back(std::move(stats));
        }
    }

    r.section("categories");
    {
        auto& s = r.expect("categories");
        const auto n = r.read<std::size_t>(s, "category count");
        r.done(s);
        for (std::size_t c = 0; c < n; ++c) {
            auto& line = r.expect("category");
            model.categories.push_back(r.read<std::string>(line, "category name"));
            r.done(line);
        }
    }

    r.section("forest");
    {
        auto& s = r.expect("forest");
        r.keyword(s, "scheme");
        const auto scheme = parse_scheme(r.read<std::string>(s, "scheme"));
        if (!scheme) r.fail("unknown desired scheme");
        model.forest.scheme = *scheme;
        r.keyword(s, "columns");
        model.forest.column_count = r.read<std::size_t>(s, "column count");
        r.keyword(s, "nodes");
        model.forest.node_count = r.read<std::size_t>(s, "node count");
        r.keyword(s, "max_depth");
        model.forest.max_depth = r.read<std::size_t>(s, "max depth");
        r.keyword(s, "roots");
        const auto roots = r.read<std::size_t>(s, "root count");
        r.done(s);
        for (std::size_t k = 0; k < roots; ++k) model.forest.roots.push_back(read_node(r, model.forest.column_count));
    }

    r.section("bands");
    {
        auto& s = r.expect("bands");
        std::string word;
        s >> word;
        if (word == "epsilon") {
            BandGraph g;
            g.epsilon = r.read<double>(s, "epsilon");
            r.keyword(s, "columns");
            const auto cols = r.read<std::size_t>(s, "column count");
            r.done(s);
            for (std::size_t j = 0; j < cols; ++j) {
                auto& c = r.expect("column");
                if (r.read<std::size_t>(c, "column index") != j) r.fail("columns out of order");
                r.keyword(c, "bands");
                const auto n = r.read<std::size_t>(c, "band count");
                r.done(c);
                std::vector<Band> bands;
                for (std::size_t b = 0; b < n; ++b) {
                    auto& line = r.expect("band");
                    Band band;
                    band.column = j;
                    band.low = r.read<double>(line, "low");
                    band.high = r.read<double>(line, "high");
                    const auto k = r.read<std::size_t>(line, "category count");
                    for (std::size_t q = 0; q < k; ++q) band.categories.push_back(r.read<CategoryId>(line, "category"));
                    r.done(line);
                    bands.push_back(std::move(band));
                }
                g.columns.push_back(std::move(bands));
            }
            for (std::size_t j = 0; j + 1 < cols; ++j) {
                auto& l = r.expect("links");
                if (r.read<std::size_t>(l, "link column") != j) r.fail("link lists out of order");
                r.keyword(l, "count");
                const auto n = r.read<std::size_t>(l, "link count");
                r.done(l);
                std::vector<BandLink> links;
                for (std::size_t q = 0; q < n; ++q) {
                    auto& line = r.expect("link");
                    const auto a = r.read<std::size_t>(line, "link source");
                    const auto b = r.read<std::size_t>(line, "link target");
                    r.done(line);
                    links.emplace_back(a, b);
                }
                g.links.push_back(std::move(links));
            }
            model.bands = std::move(g);
        } else if (word != "none") {
            r.fail("expected 'epsilon' or 'none'");
        }
    }

    r.section("end");
    r.done(r.expect("end"));
    check_model(model);
    return model;
}

Model load_from_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

Model load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open model file '" + path + "'");
    return load(in);
}

} // namespace bandforest
