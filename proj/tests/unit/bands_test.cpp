#include "fixture.hpp"

#include <bandforest/bands.hpp>
#include <bandforest/error.hpp>

#include <gtest/gtest.h>

#include <numeric>

using namespace bandforest;

namespace {

const LabeledTable figure_table() {
    return fixture::make_table({{0.1}, {0.2}, {0.3}, {0.4}, {0.5}, {0.5}, {0.6}}, {0, 0, 0, 1, 1, 2, 2});
}

// Maximal same-label runs over the sorted column, then repeated merging of neighbours that share a boundary.
std::vector<Band> oracle_bands(const LabeledTable& t, std::size_t column, double eps) {
    std::vector<std::pair<double, std::size_t>> sorted;
    for (std::size_t i = 0; i < t.size(); ++i) sorted.emplace_back(t.features.at(i, column), i);
    std::sort(sorted.begin(), sorted.end());
    std::vector<Band> runs;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const auto [v, i] = sorted[k];
        if (k > 0 && t.labels[i] == t.labels[sorted[k - 1].second]) {
            runs.back().high = v;
        } else {
            runs.push_back(Band{column, v, v, {t.labels[i]}});
        }
    }
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t b = 0; b + 1 < runs.size(); ++b) {
            if (runs[b + 1].low - runs[b].high <= eps) {
                runs[b].high = runs[b + 1].high;
                std::vector<CategoryId> u;
                std::set_union(runs[b].categories.begin(), runs[b].categories.end(), runs[b + 1].categories.begin(),
                               runs[b + 1].categories.end(), std::back_inserter(u));
                runs[b].categories = u;
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(b) + 1);
                merged = true;
                break;
            }
        }
    }
    return runs;
}

LabeledTable grid_table(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols, CategoryId k) {
    std::uniform_int_distribution<std::size_t> rows(1, max_rows), cols(1, max_cols);
    std::uniform_int_distribution<int> cell(0, 10);
    std::uniform_int_distribution<CategoryId> label(0, k - 1);
    const auto n = rows(rng);
    const auto c = cols(rng);
    std::vector<std::vector<double>> data(n, std::vector<double>(c));
    std::vector<CategoryId> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : data[i]) v = cell(rng) / 10.0;
        labels[i] = label(rng);
    }
    return fixture::make_table(data, labels, {"A", "B", "C"});
}

} // namespace

TEST(BuildBands, FigureTwoExample) {
    const auto bands = build_bands(figure_table(), 0);
    ASSERT_EQ(bands.size(), 2u);
    EXPECT_EQ(bands[0].low, 0.1);
    EXPECT_EQ(bands[0].high, 0.3);
    EXPECT_EQ(bands[0].categories, (std::vector<CategoryId>{0}));
    EXPECT_EQ(bands[1].low, 0.4);
    EXPECT_EQ(bands[1].high, 0.6);
    EXPECT_EQ(bands[1].categories, (std::vector<CategoryId>{1, 2}));
}

TEST(BuildBands, SingleCategoryColumn) {
    const auto bands = build_bands(fixture::make_table({{0.9}, {0.2}}, {0, 0}), 0);
    ASSERT_EQ(bands.size(), 1u);
    EXPECT_EQ(bands[0], (Band{0, 0.2, 0.9, {0}}));
}

TEST(BuildBands, AlternatingLabelsBreakCleanly) {
    const auto bands = build_bands(fixture::make_table({{0.1}, {0.2}, {0.3}}, {0, 1, 0}), 0);
    ASSERT_EQ(bands.size(), 3u);
    EXPECT_EQ(bands[0], (Band{0, 0.1, 0.1, {0}}));
    EXPECT_EQ(bands[1], (Band{0, 0.2, 0.2, {1}}));
    EXPECT_EQ(bands[2], (Band{0, 0.3, 0.3, {0}}));
}

TEST(BuildBands, ValuesWithinEpsilonShareABand) {
    const auto t = fixture::make_table({{0.1}, {0.1 + 1e-12}, {0.5}}, {0, 1, 0});
    const auto bands = build_bands(t, 0);
    ASSERT_EQ(bands.size(), 2u);
    EXPECT_EQ(bands[0].categories, (std::vector<CategoryId>{0, 1}));
    EXPECT_EQ(bands[1].categories, (std::vector<CategoryId>{0}));
    EXPECT_EQ(build_bands(t, 0, 0.0).size(), 3u);
}

TEST(BuildGraph, SingleRowSingleChain) {
    const auto g = build_graph(fixture::make_table({{0.3, 0.7}}, {0}));
    EXPECT_EQ(g.band_count(), 2u);
    ASSERT_EQ(g.links.size(), 1u);
    EXPECT_EQ(g.links[0], (std::vector<BandLink>{{0, 0}}));
}

TEST(BuildGraph, RowLinksItsOwnBands) {
    // row 0 sits in the first band of column 0, the second of column 1 and the fourth of column 2
    const auto t = fixture::make_table(
        {{0.1, 0.5, 0.7}, {0.6, 0.2, 0.1}, {0.7, 0.9, 0.3}, {0.8, 0.95, 0.5}}, {0, 1, 0, 1});
    const auto g = build_graph(t);
    EXPECT_EQ(g.locate(0, 0.1), 0u);
    EXPECT_EQ(g.locate(1, 0.5), 1u);
    EXPECT_EQ(g.locate(2, 0.7), 3u);
    EXPECT_TRUE(g.linked(0, 0, 1));
    EXPECT_TRUE(g.linked(1, 1, 3));
    EXPECT_EQ(g.link_count(), 8u);
    EXPECT_NO_THROW(check_graph(g));
}

TEST(BuildGraph, EmptyTableIsError) { EXPECT_THROW(build_graph(LabeledTable{}), ConfigError); }

TEST(BandClassify, DecidesCleanPath) {
    const auto g = build_graph(figure_table());
    const std::vector<double> row{0.25};
    const auto p = band_classify(g, row);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->category, 0u);
    EXPECT_EQ(p->error, 0.0);
    EXPECT_FALSE(p->tied);
    EXPECT_EQ(p->source, DecisionSource::band);
}

TEST(BandClassify, NoDecisionCases) {
    const auto g = build_graph(figure_table());
    EXPECT_FALSE(band_classify(g, std::vector<double>{0.35}).has_value()); // between bands
    EXPECT_FALSE(band_classify(g, std::vector<double>{0.95}).has_value()); // past every band
    EXPECT_FALSE(band_classify(g, std::vector<double>{0.5}).has_value());  // {B, C}
    EXPECT_TRUE(band_classify(g, std::vector<double>{0.3 + 1e-10}).has_value());
    EXPECT_THROW(band_classify(g, std::vector<double>{0.1, 0.2}), ConfigError);
}

TEST(BandClassify, OneCleanColumnIsEnough) {
    // column 0 mixes both categories, column 1 separates them
    const auto t = fixture::make_table({{0.5, 0.1}, {0.5, 0.9}}, {0, 1});
    const auto g = build_graph(t);
    const auto p = band_classify(g, t.row(1));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->category, 1u);
}

TEST(BandClassify, MissingLinkIsNoDecision) {
    const auto t = fixture::make_table({{0.1, 0.1}, {0.9, 0.9}}, {0, 1});
    const auto g = build_graph(t);
    EXPECT_FALSE(band_classify(g, std::vector<double>{0.1, 0.9}).has_value());
}

TEST(SplitByBands, SeparableAndOverlapping) {
    const auto clean = fixture::make_table({{0.1}, {0.2}, {0.8}, {0.9}}, {0, 0, 1, 1});
    const auto s = split_by_bands(build_graph(clean), clean);
    EXPECT_EQ(s.decided.size(), 4u);
    EXPECT_TRUE(s.residual.empty());
    EXPECT_EQ(s.wrong, 0u);

    const auto mixed = fixture::make_table({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, {0, 1, 0});
    const auto m = split_by_bands(build_graph(mixed), mixed);
    EXPECT_TRUE(m.decided.empty());
    EXPECT_EQ(m.residual.size(), 3u);
}

TEST(CheckGraph, RejectsBrokenGraphs) {
    auto g = build_graph(figure_table());
    auto overlapping = g;
    overlapping.columns[0][1].low = 0.2;
    EXPECT_THROW(check_graph(overlapping), IntegrityError);
    auto unsorted_cats = g;
    unsorted_cats.columns[0][1].categories = {2, 1};
    EXPECT_THROW(check_graph(unsorted_cats), IntegrityError);
    auto bad_link = build_graph(fixture::make_table({{0.3, 0.7}}, {0}));
    bad_link.links[0] = {{0, 5}};
    EXPECT_THROW(check_graph(bad_link), IntegrityError);
}

TEST(RenderBandReport, ListsRangesAndCategories) {
    const auto t = figure_table();
    const auto text = render_band_report(build_graph(t), t.category_names, t.feature_names);
    EXPECT_NE(text.find("[0.1, 0.3]  {A}"), std::string::npos) << text;
    EXPECT_NE(text.find("[0.4, 0.6]  {B, C}"), std::string::npos) << text;
}

TEST(BandProperties, MatchesBruteForceOracle) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const auto t = grid_table(rng, 20, 3, 3);
        for (std::size_t j = 0; j < t.column_count(); ++j) {
            ASSERT_EQ(build_bands(t, j), oracle_bands(t, j, default_band_epsilon)) << "trial " << trial;
        }
    }
}

TEST(BandProperties, DisjointCoveringAndSound) {
    std::mt19937_64 rng(78);
    for (int trial = 0; trial < 300; ++trial) {
        const auto t = trial % 2 ? grid_table(rng, 40, 4, 3) : fixture::random_table(rng, 40, 4, 3);
        const auto g = build_graph(t);
        EXPECT_NO_THROW(check_graph(g));
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = 0; j < t.column_count(); ++j) {
                std::size_t hits = 0;
                for (const auto& b : g.columns[j]) hits += b.contains(t.features.at(i, j), 0.0);
                EXPECT_EQ(hits, 1u);
            }
            if (auto p = band_classify(g, t.row(i))) EXPECT_EQ(p->category, t.labels[i]);
        }
        EXPECT_EQ(build_graph(t), g);
    }
}

TEST(BandDatasets, IrisSetosaSeparates) {
    if (!fixture::have_data("iris.csv")) GTEST_SKIP() << "run tools/fetch_datasets.py";
    const auto t = fixture::load_data("iris.csv");
    const auto g = build_graph(t);
    // petal length: the lowest band holds setosa alone
    EXPECT_EQ(g.columns[2].front().categories, (std::vector<CategoryId>{0}));
    const auto s = split_by_bands(g, t);
    std::size_t setosa = 0;
    for (auto i : s.decided) setosa += t.labels[i] == 0;
    EXPECT_EQ(setosa, 50u);
    EXPECT_EQ(s.wrong, 0u);
}
