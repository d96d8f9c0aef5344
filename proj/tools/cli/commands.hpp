#ifndef BANDFOREST_CLI_COMMANDS_HPP
#define BANDFOREST_CLI_COMMANDS_HPP

#include <bandforest/bands.hpp>
#include <bandforest/forest.hpp>
#include <bandforest/model.hpp>
#include <bandforest/unit.hpp>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bandforest::cli {

enum class Format { table, kv };

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_ingest = 2, exit_integrity = 3 };

struct RunConfig {
    std::string command; // train | eval | predict | bands | bench
    std::string input;
    std::string test;
    std::string model_path;
    std::string out_dir;
    std::string label = "last";
    char delimiter = ',';
    bool has_header = true;
    DesiredScheme scheme = DesiredScheme::centred;
    bool bands = false;
    bool residual_training = true;
    UnitParams unit;
    std::size_t max_depth = BranchLimits{}.max_depth; // 0 means unbounded
    double epsilon = default_band_epsilon;
    Descent descent = Descent::closest_path;
    Format format = Format::table;
    bool timing = true;
    bool unlabeled = false;
    bool show_bands = false;
    std::size_t jobs = 1;
};

/// One manifest entry: name, train path, label column, optional test path, optional scheme.
struct ManifestEntry {
    std::string name;
    std::string train;
    std::string label = "last";
    std::string test;
    std::optional<DesiredScheme> scheme;
};

/// Paths are resolved against the manifest's directory. Blank and '#' lines are skipped.
std::vector<ManifestEntry> read_manifest(const std::string& path, char delimiter);

/// Published figures for a dataset and mode, if known.
struct Reference {
    const char* error;
    std::size_t correct;
    std::size_t total;
};
std::optional<Reference> reference_figures(const std::string& dataset, bool bands);

/// Library training options from the flags, with an explicit scheme.
TrainOptions train_options(const RunConfig& cfg, DesiredScheme scheme);

void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_eval(const RunConfig& cfg, std::ostream& out);
void cmd_predict(const RunConfig& cfg, std::ostream& out);
void cmd_bands(const RunConfig& cfg, std::ostream& out);
void cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (without the program name) and dispatches; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bandforest::cli

#endif // BANDFOREST_CLI_COMMANDS_HPP
