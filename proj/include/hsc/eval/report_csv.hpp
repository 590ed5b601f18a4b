#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/error.hpp"
#include "hsc/eval/metrics.hpp"

namespace hsc::eval {

namespace detail {

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Undefined metrics render as an em dash, distinct from a true zero.
inline std::string cell(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : std::string("—");
}

} // namespace detail

// Confusion matrix in the transposed audit layout: printed rows are PREDICTED
// classes, printed columns are TRUE classes, a trailing per-row Precision
// column and a bottom per-column Sensitivity row (both in percent). The
// in-memory matrix stays rows=true; this writer flips it for display.
inline std::string confusion_csv(const ConfusionMatrix& cm, const EvalReport& report,
                                 const std::vector<std::string>& names) {
    if (names.size() != cm.classes || report.per_class.size() != cm.classes)
        throw DataError("confusion report: class-count mismatch");
    std::string out = "Classes";
    for (const auto& n : names) out += "," + n;
    out += ",Precision\n";
    for (std::size_t p = 0; p < cm.classes; ++p) {
        out += names[p];
        for (std::size_t t = 0; t < cm.classes; ++t)
            out += "," + std::to_string(cm.at(t, p));
        out += "," + detail::cell(report.per_class[p].precision, 1) + "\n";
    }
    out += "Sensitivity";
    for (std::size_t t = 0; t < cm.classes; ++t)
        out += "," + detail::cell(report.per_class[t].sensitivity, 1);
    out += ",\n";
    return out;
}

// Aggregate metrics as self-describing name,value rows.
inline std::string metrics_csv(const EvalReport& r, const std::string& model,
                               const std::string& classes_mode) {
    std::string out = "name,value\n";
    out += "model," + model + "\n";
    out += "classes," + classes_mode + "\n";
    out += "averaging," + averaging_name(r.averaging) + "\n";
    out += "accuracy_pct," + detail::fixed(r.accuracy, 2) + "\n";
    out += "precision_pct," + detail::cell(r.precision, 2) + "\n";
    out += "sensitivity_pct," + detail::cell(r.sensitivity, 2) + "\n";
    out += "specificity_pct," + detail::cell(r.specificity, 2) + "\n";
    out += "f1_pct," + detail::cell(r.f1, 2) + "\n";
    out += "kappa_pct," + detail::cell(r.kappa, 2) + "\n";
    out += "undefined_excluded," + std::to_string(r.undefined_excluded) + "\n";
    return out;
}

// Cross-validation table, one row per fold plus mean/std rows.
// Twelve-class layout: percent values, two decimals, columns AC PR SE F1 SP K.
// Binary layout: fractional values, four decimals, columns
// Accuracy Sensitivity Specificity Precision F1-Score Kappa.
inline std::string folds_csv(const std::vector<EvalReport>& folds, const FoldAggregate& agg,
                             dataset::ClassMode mode) {
    std::string out;
    if (mode == dataset::ClassMode::twelve) {
        out = "Fold,AC (%),PR (%),SE (%),F1 (%),SP (%),K (%)\n";
        auto row = [&](const std::string& label, double ac, std::optional<double> pr,
                       std::optional<double> se, std::optional<double> f1,
                       std::optional<double> sp, std::optional<double> k) {
            out += label + "," + detail::fixed(ac, 2) + "," + detail::cell(pr, 2) + "," +
                   detail::cell(se, 2) + "," + detail::cell(f1, 2) + "," + detail::cell(sp, 2) +
                   "," + detail::cell(k, 2) + "\n";
        };
        for (std::size_t i = 0; i < folds.size(); ++i) {
            const EvalReport& r = folds[i];
            row("Fold " + std::to_string(i + 1), r.accuracy, r.precision, r.sensitivity, r.f1,
                r.specificity, r.kappa);
        }
        auto arow = [&](const std::string& label, auto pick) {
            out += label + "," + detail::cell(pick(agg.accuracy), 2) + "," +
                   detail::cell(pick(agg.precision), 2) + "," + detail::cell(pick(agg.sensitivity), 2) +
                   "," + detail::cell(pick(agg.f1), 2) + "," + detail::cell(pick(agg.specificity), 2) +
                   "," + detail::cell(pick(agg.kappa), 2) + "\n";
        };
        arow("Mean", [](const MeanStd& m) { return m.mean; });
        arow("Std", [](const MeanStd& m) { return m.std; });
    } else {
        out = "Fold,Accuracy,Sensitivity,Specificity,Precision,F1-Score,Kappa\n";
        auto frac = [](const std::optional<double>& pct) -> std::optional<double> {
            if (!pct) return std::nullopt;
            return *pct / 100.0;
        };
        for (std::size_t i = 0; i < folds.size(); ++i) {
            const EvalReport& r = folds[i];
            out += std::to_string(i + 1) + "," + detail::fixed(r.accuracy / 100.0, 4) + "," +
                   detail::cell(frac(r.sensitivity), 4) + "," + detail::cell(frac(r.specificity), 4) +
                   "," + detail::cell(frac(r.precision), 4) + "," + detail::cell(frac(r.f1), 4) +
                   "," + detail::cell(frac(r.kappa), 4) + "\n";
        }
        auto arow = [&](const std::string& label, auto pick) {
            out += label + "," + detail::cell(frac(pick(agg.accuracy)), 4) + "," +
                   detail::cell(frac(pick(agg.sensitivity)), 4) + "," +
                   detail::cell(frac(pick(agg.specificity)), 4) + "," +
                   detail::cell(frac(pick(agg.precision)), 4) + "," +
                   detail::cell(frac(pick(agg.f1)), 4) + "," + detail::cell(frac(pick(agg.kappa)), 4) +
                   "\n";
        };
        arow("Mean", [](const MeanStd& m) { return m.mean; });
        arow("Std", [](const MeanStd& m) { return m.std; });
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary); // binary: byte-stable newlines
    if (!os) throw DataError("report: cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw DataError("report: write to '" + path + "' failed");
}

} // namespace hsc::eval
