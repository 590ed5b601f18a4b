#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/eval/confusion.hpp"

namespace hsc::eval {

enum class Averaging : unsigned char { macro, weighted };

inline std::string averaging_name(Averaging a) {
    return a == Averaging::macro ? "macro" : "weighted";
}

// Per-class one-vs-rest metrics, as percentages; nullopt = undefined
// (zero denominator), which reports must render distinctly from 0.
struct ClassMetrics {
    std::optional<double> precision, sensitivity, specificity, f1;
};

// Metric suite for one evaluation: overall accuracy, aggregated per-class
// metrics (macro or frequency-weighted means), and chance-corrected kappa.
// All values are percentages.
struct EvalReport {
    std::size_t classes = 0;
    double accuracy = 0.0;
    std::optional<double> precision, sensitivity, specificity, f1, kappa;
    std::vector<ClassMetrics> per_class;
    Averaging averaging = Averaging::macro;
    std::size_t undefined_excluded = 0; // per-class values dropped from the aggregate
};

namespace detail {

inline std::optional<double> ratio_pct(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

inline std::optional<double> f1_from(std::optional<double> pr, std::optional<double> se) {
    if (!pr || !se) return std::nullopt;
    if (*pr + *se == 0.0) return std::nullopt;
    return 2.0 * (*pr) * (*se) / (*pr + *se);
}

} // namespace detail

// Chance-corrected agreement: kappa = (OA - P_e) / (1 - P_e) with
// P_e = sum_i row_i * col_i / N^2. Undefined when P_e = 1 (all mass in one
// row/column pairing leaves no room for chance correction). Raw value in
// [-1, 1], not a percentage.
inline std::optional<double> kappa(const ConfusionMatrix& cm) {
    const std::uint64_t n = cm.total();
    if (n == 0) throw DataError("kappa: empty confusion matrix");
    const double nn = static_cast<double>(n);
    double pe = 0.0;
    for (std::size_t i = 0; i < cm.classes; ++i)
        pe += (static_cast<double>(cm.row_sum(i)) / nn) *
              (static_cast<double>(cm.col_sum(i)) / nn);
    const double oa = static_cast<double>(cm.trace()) / nn;
    if (pe >= 1.0) return std::nullopt;
    return (oa - pe) / (1.0 - pe);
}

// Two-class metrics with Abnormal (index 1) as the positive class:
//   AC = (TP+TN)/total, SE = TP/(TP+FN), SP = TN/(TN+FP), PR = TP/(TP+FP),
//   F1 = harmonic mean of PR and SE; all x100.
inline EvalReport binary_metrics(const ConfusionMatrix& cm) {
    if (cm.classes != 2)
        throw DataError("binary metrics: expected a 2x2 matrix, got " +
                        std::to_string(cm.classes) + " classes");
    const std::uint64_t tn = cm.at(0, 0), fp = cm.at(0, 1), fn = cm.at(1, 0), tp = cm.at(1, 1);
    const std::uint64_t n = tn + fp + fn + tp;
    if (n == 0) throw DataError("binary metrics: empty confusion matrix");

    EvalReport r;
    r.classes = 2;
    r.accuracy = 100.0 * static_cast<double>(tp + tn) / static_cast<double>(n);
    r.sensitivity = detail::ratio_pct(tp, tp + fn);
    r.specificity = detail::ratio_pct(tn, tn + fp);
    r.precision = detail::ratio_pct(tp, tp + fp);
    r.f1 = detail::f1_from(r.precision, r.sensitivity);
    if (const auto k = kappa(cm)) r.kappa = 100.0 * *k;

    // Per-class view (class 0 = Normal treats Normal as its own positive).
    r.per_class.resize(2);
    r.per_class[1] = {r.precision, r.sensitivity, r.specificity, r.f1};
    ClassMetrics& neg = r.per_class[0];
    neg.precision = detail::ratio_pct(tn, tn + fn);
    neg.sensitivity = detail::ratio_pct(tn, tn + fp);
    neg.specificity = detail::ratio_pct(tp, tp + fn);
    neg.f1 = detail::f1_from(neg.precision, neg.sensitivity);
    return r;
}

// One-vs-rest metrics per class, aggregated by unweighted (macro) or
// frequency-weighted means over the classes where the metric is defined;
// dropped values are counted in undefined_excluded.
inline EvalReport multiclass_metrics(const ConfusionMatrix& cm,
                                     Averaging averaging = Averaging::macro) {
    if (cm.classes < 2) throw DataError("multiclass metrics: need at least 2 classes");
    const std::uint64_t n = cm.total();
    if (n == 0) throw DataError("multiclass metrics: empty confusion matrix");

    EvalReport r;
    r.classes = cm.classes;
    r.averaging = averaging;
    r.accuracy = 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(n);
    if (const auto k = kappa(cm)) r.kappa = 100.0 * *k;
    r.per_class.resize(cm.classes);

    struct Acc {
        double sum = 0.0, wsum = 0.0;
        bool any = false;
        void add(std::optional<double> v, double w, std::size_t& excluded) {
            if (!v) {
                ++excluded;
                return;
            }
            sum += *v * w;
            wsum += w;
            any = true;
        }
        std::optional<double> mean() const {
            if (!any || wsum == 0.0) return std::nullopt;
            return sum / wsum;
        }
    };
    Acc apr, ase, asp, af1;

    for (std::size_t c = 0; c < cm.classes; ++c) {
        const std::uint64_t tp = cm.at(c, c);
        const std::uint64_t row = cm.row_sum(c), col = cm.col_sum(c);
        const std::uint64_t fn = row - tp, fp = col - tp;
        const std::uint64_t tn = n - tp - fn - fp;
        ClassMetrics& m = r.per_class[c];
        m.precision = detail::ratio_pct(tp, tp + fp);
        m.sensitivity = detail::ratio_pct(tp, tp + fn);
        m.specificity = detail::ratio_pct(tn, tn + fp);
        m.f1 = detail::f1_from(m.precision, m.sensitivity);

        const double w = averaging == Averaging::macro
                             ? 1.0
                             : static_cast<double>(row) / static_cast<double>(n);
        apr.add(m.precision, w, r.undefined_excluded);
        ase.add(m.sensitivity, w, r.undefined_excluded);
        asp.add(m.specificity, w, r.undefined_excluded);
        af1.add(m.f1, w, r.undefined_excluded);
    }
    r.precision = apr.mean();
    r.sensitivity = ase.mean();
    r.specificity = asp.mean();
    r.f1 = af1.mean();
    return r;
}

// Mean and sample (n-1) standard deviation of each aggregate metric across
// folds. A metric undefined in some folds aggregates over the defined ones;
// std needs at least two defined values.
struct MeanStd {
    std::optional<double> mean, std;
};

struct FoldAggregate {
    MeanStd accuracy, precision, sensitivity, specificity, f1, kappa;
};

namespace detail {

inline MeanStd mean_std(const std::vector<std::optional<double>>& xs) {
    std::vector<double> v;
    for (const auto& x : xs)
        if (x) v.push_back(*x);
    MeanStd out;
    if (v.empty()) return out;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    out.mean = m;
    if (v.size() >= 2) {
        double s2 = 0.0;
        for (double x : v) s2 += (x - m) * (x - m);
        out.std = std::sqrt(s2 / static_cast<double>(v.size() - 1));
    }
    return out;
}

} // namespace detail

inline FoldAggregate aggregate_folds(const std::vector<EvalReport>& reports) {
    if (reports.size() < 2) throw DataError("aggregate: need at least 2 fold reports");
    for (const auto& r : reports)
        if (r.classes != reports[0].classes)
            throw DataError("aggregate: fold reports mix class counts (" +
                            std::to_string(reports[0].classes) + " vs " +
                            std::to_string(r.classes) + ")");
    auto pull = [&](auto getter) {
        std::vector<std::optional<double>> xs;
        for (const auto& r : reports) xs.push_back(getter(r));
        return detail::mean_std(xs);
    };
    FoldAggregate agg;
    agg.accuracy = pull([](const EvalReport& r) { return std::optional<double>(r.accuracy); });
    agg.precision = pull([](const EvalReport& r) { return r.precision; });
    agg.sensitivity = pull([](const EvalReport& r) { return r.sensitivity; });
    agg.specificity = pull([](const EvalReport& r) { return r.specificity; });
    agg.f1 = pull([](const EvalReport& r) { return r.f1; });
    agg.kappa = pull([](const EvalReport& r) { return r.kappa; });
    return agg;
}

} // namespace hsc::eval
