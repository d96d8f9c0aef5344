#ifndef BANDFOREST_EVAL_HPP
#define BANDFOREST_EVAL_HPP

#include "bandforest/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bandforest {

struct CategoryTally {
    std::size_t correct = 0;
    std::size_t total = 0;

    bool operator==(const CategoryTally&) const = default;
};

struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    double avg_error = 0.0; // band-decided rows contribute 0
    std::size_t ties = 0;   // counted even when the tie-broken answer is right
    std::size_t by_band = 0;
    std::size_t by_classifier = 0;
    std::vector<CategoryTally> per_category;

    bool operator==(const EvalReport&) const = default;
};

EvalReport evaluate(const Forest& forest, const BandGraph* bands, const LabeledTable& table,
                    Descent descent = Descent::closest_path);
EvalReport evaluate(const Model& model, const LabeledTable& table, Descent descent = Descent::closest_path);

/// Aligned text table: Average Error, Correctly Classified, % Correct, then breakdowns.
std::string render_table(const EvalReport& report, const std::vector<std::string>& category_names);

/// One `key=value` metric per line.
std::string render_kv(const EvalReport& report, const std::vector<std::string>& category_names);

/// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

} // namespace bandforest

#endif // BANDFOREST_EVAL_HPP
