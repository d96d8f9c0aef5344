#ifndef BANDFOREST_FOREST_HPP
#define BANDFOREST_FOREST_HPP

/*
 * Branching classifier.
 *
 * Level 0 holds one unit per category. Every training row is claimed by the
 * unit that scores it lowest (ties go to the lowest category id). A node that
 * claims rows of another category grows a child layer trained on its claimed
 * rows only: one child per category present there, averaged over that subset,
 * with desired values re-assigned over the subset's categories. The child
 * layer then re-claims just those rows, and so on.
 *
 * Recursion stops at a node when
 *   - every claimed row has the node's own category (or it claimed nothing),
 *   - it claimed every row its layer was trained on (no progress), or
 *   - its depth reached BranchLimits::max_depth.
 *
 * Inference follows the closest unit at each level, starting from the
 * closest root, and reports the leaf's category and score.
 */

#include "bandforest/dataset.hpp"
#include "bandforest/unit.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bandforest {

enum class DesiredScheme { spread, centred };

std::string_view to_string(DesiredScheme scheme);
std::optional<DesiredScheme> parse_scheme(std::string_view text);

enum class DecisionSource { classifier, band };

std::string_view to_string(DecisionSource source);

/// How predict() walks the forest.
enum class Descent {
    closest_path, ///< pick the closest root, then the closest child at every level
    per_root,     ///< descend every root, then compare leaf scores across roots
};

std::string_view to_string(Descent descent);
std::optional<Descent> parse_descent(std::string_view text);

struct BranchLimits {
    std::size_t max_depth = 50;

    static BranchLimits unbounded() { return {std::numeric_limits<std::size_t>::max()}; }
};

struct ForestParams {
    DesiredScheme scheme = DesiredScheme::centred;
    UnitParams unit;
    BranchLimits limits;
};

struct ClassifierNode {
    UnitClassifier unit;
    std::vector<ClassifierNode> children; // ascending by category, empty at leaves
    std::size_t depth = 0;

    CategoryId category() const { return unit.category; }
    bool is_leaf() const { return children.empty(); }

    bool operator==(const ClassifierNode&) const = default;
};

struct Forest {
    std::vector<ClassifierNode> roots; // one per training category, ascending
    DesiredScheme scheme = DesiredScheme::centred;
    std::size_t column_count = 0;
    std::size_t node_count = 0;
    std::size_t max_depth = 0;

    bool empty() const { return roots.empty(); }
    bool operator==(const Forest&) const = default;
};

struct Prediction {
    CategoryId category = 0;
    double error = 0.0;
    bool tied = false;
    std::vector<CategoryId> tie_set; // ascending, always contains category
    DecisionSource source = DecisionSource::classifier;
};

/// Desired output per category: spread gives i/(k-1) (0.5 when k == 1), centred gives 0.5.
std::vector<double> assign_desired(std::size_t categories, DesiredScheme scheme);

Forest train_forest(const LabeledTable& table, const ForestParams& params = {});

/// Trains on the listed rows only; roots cover the categories present there.
Forest train_forest(const LabeledTable& table, std::span<const std::size_t> rows, const ForestParams& params = {});

Prediction predict(const Forest& forest, std::span<const double> row, Descent descent = Descent::closest_path);

/// Recomputes node_count and max_depth from the node structure.
void refresh_counts(Forest& forest);

} // namespace bandforest

#endif // BANDFOREST_FOREST_HPP
