#include "bandforest/eval.hpp"

#include "bandforest/error.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

namespace bandforest {

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("cannot format value");
    return std::string(buf, ptr);
}

EvalReport evaluate(const Forest& forest, const BandGraph* bands, const LabeledTable& table, Descent descent) {
    if (table.column_count() != forest.column_count) {
        throw ConfigError("table has " + std::to_string(table.column_count()) + " columns, model expects " +
                          std::to_string(forest.column_count));
    }
    EvalReport report;
    report.total = table.size();
    report.per_category.resize(table.category_count());
    double error_sum = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto p = classify(forest, bands, table.row(i), descent);
        const auto label = table.labels[i];
        const bool hit = p.category == label;
        report.correct += hit;
        report.per_category[label].total += 1;
        report.per_category[label].correct += hit;
        report.ties += p.tied;
        if (p.source == DecisionSource::band) {
            ++report.by_band;
        } else {
            ++report.by_classifier;
            error_sum += p.error;
        }
    }
    if (report.total > 0) {
        report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
        report.avg_error = error_sum / static_cast<double>(report.total);
    }
    return report;
}

EvalReport evaluate(const Model& model, const LabeledTable& table, Descent descent) {
    return evaluate(model.forest, model.bands ? &*model.bands : nullptr, table, descent);
}

std::string render_table(const EvalReport& report, const std::vector<std::string>& category_names) {
    std::ostringstream out;
    out << std::left << std::setw(15) << "Average Error" << std::setw(24) << "Correctly Classified"
        << "% Correct\n";
    std::ostringstream correct;
    correct << report.correct << " from " << report.total;
    out << std::setw(15) << std::fixed << std::setprecision(4) << report.avg_error << std::setw(24) << correct.str()
        << std::setprecision(2) << report.accuracy * 100.0 << "%\n";
    out << "ties: " << report.ties << "  decided by band: " << report.by_band
        << "  decided by classifier: " << report.by_classifier << '\n';
    for (std::size_t c = 0; c < report.per_category.size(); ++c) {
        const auto& t = report.per_category[c];
        if (t.total == 0) continue;
        out << "  " << std::setw(20) << (c < category_names.size() ? category_names[c] : std::to_string(c)) << t.correct
            << " from " << t.total << '\n';
    }
    return out.str();
}

std::string render_kv(const EvalReport& report, const std::vector<std::string>& category_names) {
    std::ostringstream out;
    out << "total=" << report.total << '\n'
        << "correct=" << report.correct << '\n'
        << "accuracy=" << format_real(report.accuracy) << '\n'
        << "avg_error=" << format_real(report.avg_error) << '\n'
        << "ties=" << report.ties << '\n'
        << "by_band=" << report.by_band << '\n'
        << "by_classifier=" << report.by_classifier << '\n';
    for (std::size_t c = 0; c < report.per_category.size(); ++c) {
        const auto& name = c < category_names.size() ? category_names[c] : std::to_string(c);
        out << "category." << name << ".correct=" << report.per_category[c].correct << '\n'
            << "category." << name << ".total=" << report.per_category[c].total << '\n';
    }
    return out.str();
}

} // namespace bandforest
