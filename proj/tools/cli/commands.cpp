#include "commands.hpp"

#include <bandforest/error.hpp>
#include <bandforest/eval.hpp>
#include <bandforest/model.hpp>
#include <bandforest/persist.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>

namespace bandforest::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

IngestOptions ingest_options(const RunConfig& cfg, const std::string& label) {
    IngestOptions o;
    o.delimiter = cfg.delimiter;
    o.has_header = cfg.has_header;
    o.label = LabelColumn::parse(label);
    return o;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ConfigError(std::string("missing required option ") + flag);
}

std::string basename(const std::string& path) { return std::filesystem::path(path).filename().string(); }

void print_report(const EvalReport& report, const std::vector<std::string>& categories, Format format,
                  std::ostream& out) {
    out << (format == Format::kv ? render_kv(report, categories) : render_table(report, categories));
}

void print_time(const RunConfig& cfg, double ms, std::ostream& out) {
    if (!cfg.timing) return;
    if (cfg.format == Format::kv) {
        out << "time_ms=" << std::fixed << std::setprecision(1) << ms << '\n';
    } else {
        out << "time: " << std::fixed << std::setprecision(1) << ms << " ms\n";
    }
    out.unsetf(std::ios::floatfield);
}

} // namespace

TrainOptions train_options(const RunConfig& cfg, DesiredScheme scheme) {
    TrainOptions o;
    o.forest.scheme = scheme;
    o.forest.unit = cfg.unit;
    o.forest.limits = cfg.max_depth == 0 ? BranchLimits::unbounded() : BranchLimits{cfg.max_depth};
    o.bands = cfg.bands;
    o.residual_training = cfg.residual_training;
    o.epsilon = cfg.epsilon;
    return o;
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
    require(cfg.input, "--input");
    const auto start = Clock::now();
    const auto table = encode_and_normalize(read_delimited_file(cfg.input, ingest_options(cfg, cfg.label)));
    TrainSummary summary;
    const auto model = train_model(table, train_options(cfg, cfg.scheme), &summary, basename(cfg.input));
    if (!cfg.model_path.empty()) save_file(model, cfg.model_path);
    const auto report = evaluate(model, table, cfg.descent);
    const double ms = elapsed_ms(start);

    const auto& f = model.forest;
    if (cfg.format == Format::kv) {
        out << "rows=" << table.size() << '\n'
            << "columns=" << table.column_count() << '\n'
            << "categories=" << table.category_count() << '\n'
            << "scheme=" << to_string(f.scheme) << '\n'
            << "nodes=" << f.node_count << '\n'
            << "max_depth=" << f.max_depth << '\n';
        if (model.bands) {
            out << "bands=" << model.bands->band_count() << '\n'
                << "links=" << model.bands->link_count() << '\n'
                << "band_decided=" << summary.band_decided << '\n'
                << "band_wrong=" << summary.band_wrong << '\n';
        }
        out << "forest_rows=" << summary.forest_rows << '\n';
    } else {
        out << "trained on " << basename(cfg.input) << ": " << table.size() << " rows, " << table.column_count()
            << " columns, " << table.category_count() << " categories\n";
        out << "scheme: " << to_string(f.scheme) << "  nodes: " << f.node_count << "  max depth: " << f.max_depth
            << '\n';
        if (model.bands) {
            out << "bands: " << model.bands->band_count() << "  links: " << model.bands->link_count()
                << "  band-decided rows: " << summary.band_decided << " (wrong: " << summary.band_wrong << ")\n";
        }
        out << "forest training rows: " << summary.forest_rows << '\n';
        if (model.bands && cfg.show_bands) out << render_band_report(*model.bands, model.categories, model.feature_names);
    }
    print_report(report, model.categories, cfg.format, out);
    print_time(cfg, ms, out);
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
    require(cfg.model_path, "--model");
    const std::string& path = cfg.test.empty() ? cfg.input : cfg.test;
    require(path, "--test");
    const auto start = Clock::now();
    const auto model = load_file(cfg.model_path);
    const auto table = apply_stats(read_delimited_file(path, ingest_options(cfg, cfg.label)), model.stats,
                                   model.categories);
    const auto report = evaluate(model, table, cfg.descent);
    print_report(report, model.categories, cfg.format, out);
    print_time(cfg, elapsed_ms(start), out);
}

void cmd_predict(const RunConfig& cfg, std::ostream& out) {
    require(cfg.model_path, "--model");
    require(cfg.input, "--input");
    const auto model = load_file(cfg.model_path);
    auto options = ingest_options(cfg, cfg.label);
    options.labeled = !cfg.unlabeled;
    const auto raw = read_delimited_file(cfg.input, options);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(raw.rows.size());
    for (const auto& row : raw.rows) rows.push_back(row.features);
    const auto features = normalize_features(rows, model.stats);

    if (cfg.format == Format::table) out << "row\tcategory\terror\tsource\ttied_with\n";
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const auto p = classify(model, features.row(i), cfg.descent);
        const auto& name = model.categories[p.category];
        std::string ties;
        for (auto c : p.tie_set) {
            if (c == p.category) continue;
            if (!ties.empty()) ties += '|';
            ties += model.categories[c];
        }
        if (cfg.format == Format::kv) {
            const auto key = "row." + std::to_string(i + 1) + '.';
            out << key << "category=" << name << '\n'
                << key << "error=" << format_real(p.error) << '\n'
                << key << "source=" << to_string(p.source) << '\n';
            if (p.tied) out << key << "tied_with=" << ties << '\n';
        } else {
            out << i + 1 << '\t' << name << '\t' << format_real(p.error) << '\t' << to_string(p.source) << '\t'
                << (p.tied ? ties : "-") << '\n';
        }
    }
}

void cmd_bands(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.input.empty()) {
        const auto table = encode_and_normalize(read_delimited_file(cfg.input, ingest_options(cfg, cfg.label)));
        const auto graph = build_graph(table, cfg.epsilon);
        const auto split = split_by_bands(graph, table);
        out << render_band_report(graph, table.category_names, table.feature_names);
        out << "band-decided training rows: " << split.decided.size() << " of " << table.size()
            << " (wrong: " << split.wrong << ")\n";
        return;
    }
    require(cfg.model_path, "--input or --model");
    const auto model = load_file(cfg.model_path);
    if (!model.bands) throw ConfigError("model '" + cfg.model_path + "' was trained without bands");
    out << render_band_report(*model.bands, model.categories, model.feature_names);
}

namespace {

void add_data_options(CLI::App& cmd, RunConfig& cfg, std::string& delimiter, bool& no_header) {
    cmd.add_option("-l,--label", cfg.label, "Label column: 'last', zero-based index, or header name")
        ->capture_default_str();
    cmd.add_option("-d,--delimiter", delimiter, "Field delimiter (single character or 'tab')")->capture_default_str();
    cmd.add_flag("--no-header", no_header, "Input files have no header row");
}

void add_output_options(CLI::App& cmd, std::string& format, std::string& descent, bool& no_timing) {
    cmd.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"table", "kv"}))
        ->capture_default_str();
    cmd.add_option("--descent", descent, "Forest descent rule")
        ->check(CLI::IsMember({"closest-path", "per-root"}))
        ->capture_default_str();
    cmd.add_flag("--no-timing", no_timing, "Omit timing lines so output is byte-stable");
}

void add_training_options(CLI::App& cmd, RunConfig& cfg, std::string& scheme, bool& full_training) {
    cmd.add_option("--scheme", scheme, "Desired-output scheme")
        ->check(CLI::IsMember({"centred", "centered", "spread"}))
        ->capture_default_str();
    cmd.add_flag("--bands", cfg.bands, "Build value bands and consult them before the forest");
    cmd.add_flag("--full-training", full_training, "With --bands, train the forest on every row, not just residual ones");
    cmd.add_option("--max-iters", cfg.unit.max_iters, "Offset update passes per unit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--tol", cfg.unit.tol, "Stop updating once |error| is within this")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--epsilon", cfg.epsilon, "Band boundary tolerance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--max-depth", cfg.max_depth, "Branching depth limit (0 = unbounded)")->capture_default_str();
}

char parse_delimiter(const std::string& text) {
    if (text == "tab" || text == "\\t") return '\t';
    if (text.size() != 1) throw ConfigError("delimiter must be a single character, got '" + text + "'");
    return text[0];
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string delimiter = ",";
    std::string scheme = "centred";
    std::string format = "table";
    std::string descent = "closest-path";
    bool no_header = false;
    bool no_timing = false;
    bool full_training = false;

    CLI::App app{"bandforest: category classifier with branching forests and value bands"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bandforest 1.0.0");

    auto* train = app.add_subcommand("train", "Train a model on a labelled file and report training-set accuracy");
    train->add_option("-i,--input", cfg.input, "Training file")->required();
    train->add_option("-m,--model", cfg.model_path, "Write the trained model here");
    train->add_flag("--show-bands", cfg.show_bands, "Print the full band listing after training");
    add_data_options(*train, cfg, delimiter, no_header);
    add_training_options(*train, cfg, scheme, full_training);
    add_output_options(*train, format, descent, no_timing);

    auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a labelled file");
    eval->add_option("-m,--model", cfg.model_path, "Model file")->required();
    eval->add_option("-t,--test,-i,--input", cfg.test, "Labelled file to evaluate")->required();
    add_data_options(*eval, cfg, delimiter, no_header);
    add_output_options(*eval, format, descent, no_timing);

    auto* predict = app.add_subcommand("predict", "Classify the rows of a file with a saved model");
    predict->add_option("-m,--model", cfg.model_path, "Model file")->required();
    predict->add_option("-i,--input", cfg.input, "Rows to classify")->required();
    predict->add_flag("--unlabeled", cfg.unlabeled, "Every column is a feature; there is no label column");
    add_data_options(*predict, cfg, delimiter, no_header);
    add_output_options(*predict, format, descent, no_timing);

    auto* bands = app.add_subcommand("bands", "List the value bands of a training file or saved model");
    bands->add_option("-i,--input", cfg.input, "Training file");
    bands->add_option("-m,--model", cfg.model_path, "Model file trained with --bands");
    bands->add_option("--epsilon", cfg.epsilon, "Band boundary tolerance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_data_options(*bands, cfg, delimiter, no_header);

    auto* bench = app.add_subcommand("bench", "Run every dataset of a manifest in branch-only and bands modes");
    bench->add_option("manifest,--manifest", cfg.input, "Manifest file: name,train,label[,test[,scheme]]")
        ->required();
    bench->add_option("-o,--out-dir", cfg.out_dir, "Write each trained model here");
    bench->add_option("-j,--jobs", cfg.jobs, "Datasets run concurrently")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_data_options(*bench, cfg, delimiter, no_header);
    add_training_options(*bench, cfg, scheme, full_training);
    add_output_options(*bench, format, descent, no_timing);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        cfg.delimiter = parse_delimiter(delimiter);
        cfg.has_header = !no_header;
        cfg.scheme = *parse_scheme(scheme);
        cfg.format = format == "kv" ? Format::kv : Format::table;
        cfg.descent = *parse_descent(descent);
        cfg.timing = !no_timing;
        cfg.residual_training = !full_training;

        if (train->parsed()) {
            cfg.command = "train";
            cmd_train(cfg, out);
        } else if (eval->parsed()) {
            cfg.command = "eval";
            cmd_eval(cfg, out);
        } else if (predict->parsed()) {
            cfg.command = "predict";
            cmd_predict(cfg, out);
        } else if (bands->parsed()) {
            cfg.command = "bands";
            cmd_bands(cfg, out);
        } else {
            cfg.command = "bench";
            cmd_bench(cfg, out, err);
        }
    } catch (const IngestError& e) {
        err << "bandforest: input error: " << e.what() << '\n';
        return exit_ingest;
    } catch (const IntegrityError& e) {
        err << "bandforest: integrity error: " << e.what() << '\n';
        return exit_integrity;
    } catch (const ConfigError& e) {
        err << "bandforest: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "bandforest: " << e.what() << '\n';
        return exit_usage;
    }
    out.flush();
    return exit_ok;
}

} // namespace bandforest::cli
