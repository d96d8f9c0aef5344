#include "fixture.hpp"

#include <bandforest/error.hpp>
#include <bandforest/eval.hpp>
#include <bandforest/model.hpp>

#include <gtest/gtest.h>

using namespace bandforest;

namespace {

TrainOptions spread(bool bands) {
    TrainOptions o;
    o.forest.scheme = DesiredScheme::spread;
    o.bands = bands;
    return o;
}

} // namespace

TEST(Evaluate, SingleRowIdentity) {
    const auto t = fixture::make_table({{0.3, 0.8}}, {0});
    TrainOptions o;
    o.forest.scheme = DesiredScheme::centred;
    const auto m = train_model(t, o);
    const auto r = evaluate(m, t);
    EXPECT_EQ(r.total, 1u);
    EXPECT_EQ(r.correct, 1u);
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.avg_error, m.forest.roots[0].unit.residual);
}

TEST(Evaluate, BandRowsCarryNoError) {
    const auto t = fixture::make_table({{0.1}, {0.2}, {0.8}, {0.9}}, {0, 0, 1, 1});
    const auto m = train_model(t, spread(true));
    const auto r = evaluate(m, t);
    EXPECT_EQ(r.by_band, 4u);
    EXPECT_EQ(r.by_classifier, 0u);
    EXPECT_EQ(r.avg_error, 0.0);
    EXPECT_EQ(r.correct, 4u);
}

TEST(Evaluate, TiesCountedEvenWhenRight) {
    const auto t = fixture::make_table({{0.25}, {0.75}, {0.5}}, {0, 1, 0});
    const auto f = train_forest(fixture::make_table({{0.25}, {0.75}}, {0, 1}), ForestParams{DesiredScheme::spread, {}, {}});
    const auto r = evaluate(f, nullptr, t);
    EXPECT_EQ(r.ties, 1u);
    EXPECT_EQ(r.correct, 3u);
}

TEST(Evaluate, ColumnMismatch) {
    const auto m = train_model(fixture::make_table({{0.3, 0.8}}, {0}), {});
    EXPECT_THROW(evaluate(m, fixture::make_table({{0.3}}, {0})), ConfigError);
}

TEST(Evaluate, ReportInvariants) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto train = fixture::random_table(rng, 30, 4, 3);
        const auto m = train_model(train, spread(trial % 2 == 0));
        std::uniform_real_distribution<double> v(0.0, 1.0);
        std::vector<std::vector<double>> rows(25, std::vector<double>(train.column_count()));
        std::vector<CategoryId> labels;
        for (auto& r : rows) {
            for (auto& x : r) x = v(rng);
            labels.push_back(static_cast<CategoryId>(labels.size() % train.category_count()));
        }
        auto test = fixture::make_table(rows, labels);
        test.category_names = train.category_names;
        for (const LabeledTable* t : {&train, static_cast<const LabeledTable*>(&test)}) {
            const auto r = evaluate(m, *t);
            EXPECT_LE(r.correct, r.total);
            EXPECT_EQ(r.by_band + r.by_classifier, r.total);
            EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(r.correct) / static_cast<double>(r.total));
            EXPECT_GE(r.avg_error, 0.0);
            std::size_t total = 0, correct = 0;
            for (const auto& c : r.per_category) {
                total += c.total;
                correct += c.correct;
            }
            EXPECT_EQ(total, r.total);
            EXPECT_EQ(correct, r.correct);
            EXPECT_EQ(evaluate(m, *t), r);
        }
    }
}

TEST(Render, TableAndKv) {
    EvalReport r;
    r.total = 150;
    r.correct = 149;
    r.accuracy = 149.0 / 150.0;
    r.avg_error = 0.0125;
    r.ties = 2;
    r.by_band = 68;
    r.by_classifier = 82;
    r.per_category = {{50, 50}, {49, 50}, {50, 50}};
    const std::vector<std::string> names{"setosa", "versicolor", "virginica"};
    const auto table = render_table(r, names);
    EXPECT_NE(table.find("Average Error"), std::string::npos);
    EXPECT_NE(table.find("Correctly Classified"), std::string::npos);
    EXPECT_NE(table.find("% Correct"), std::string::npos);
    EXPECT_NE(table.find("149 from 150"), std::string::npos);
    EXPECT_NE(table.find("99.33%"), std::string::npos);
    const auto kv = render_kv(r, names);
    EXPECT_NE(kv.find("correct=149\n"), std::string::npos);
    EXPECT_NE(kv.find("avg_error=0.0125\n"), std::string::npos);
    EXPECT_NE(kv.find("category.versicolor.correct=49\n"), std::string::npos);
}

TEST(Render, FormatRealRoundTrips) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = v(rng);
        EXPECT_EQ(std::stod(format_real(x)), x);
    }
    EXPECT_EQ(format_real(0.1), "0.1");
    EXPECT_EQ(format_real(0.0), "0");
}

TEST(TrainModel, ResidualTrainingUsesUndecidedRows) {
    const auto t = fixture::make_table({{0.1, 0.5}, {0.2, 0.5}, {0.5, 0.5}, {0.5, 0.9}, {0.5, 0.1}, {0.5, 0.5}},
                                       {0, 0, 1, 2, 1, 2});
    TrainSummary s;
    const auto m = train_model(t, spread(true), &s);
    EXPECT_GT(s.forest_rows, 0u);
    EXPECT_EQ(s.band_decided + s.forest_rows, t.size());
    EXPECT_EQ(s.band_wrong, 0u);
    TrainOptions full = spread(true);
    full.residual_training = false;
    TrainSummary fs;
    const auto all = train_model(t, full, &fs);
    EXPECT_EQ(fs.forest_rows, t.size());
    EXPECT_FALSE(all.residual_training);
}

TEST(TrainModel, EveryRowBandDecidedFallsBackToFullTable) {
    const auto t = fixture::make_table({{0.1}, {0.9}}, {0, 1});
    TrainSummary s;
    const auto m = train_model(t, spread(true), &s);
    EXPECT_EQ(s.band_decided, 2u);
    EXPECT_EQ(s.forest_rows, 2u);
    EXPECT_EQ(m.forest.roots.size(), 2u);
}

TEST(TrainModel, RejectsUnnormalizedInput) {
    auto t = fixture::make_table({{0.1}, {0.9}}, {0, 1});
    t.features.at(0, 0) = 1.5;
    EXPECT_THROW(train_model(t, {}), IngestError);
}
