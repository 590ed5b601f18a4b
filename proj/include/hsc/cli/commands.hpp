#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsc/cli/config.hpp"
#include "hsc/dataset/class_weights.hpp"
#include "hsc/dataset/label.hpp"
#include "hsc/dataset/manifest.hpp"
#include "hsc/dataset/segment.hpp"
#include "hsc/dataset/split.hpp"
#include "hsc/dsp/butterworth.hpp"
#include "hsc/dsp/normalize.hpp"
#include "hsc/dsp/psd_cache.hpp"
#include "hsc/dsp/resample.hpp"
#include "hsc/dsp/welch.hpp"
#include "hsc/error.hpp"
#include "hsc/eval/confusion.hpp"
#include "hsc/eval/metrics.hpp"
#include "hsc/eval/report_csv.hpp"
#include "hsc/models/build.hpp"
#include "hsc/models/descriptor.hpp"
#include "hsc/nn/checkpoint.hpp"
#include "hsc/train/trainer.hpp"

namespace hsc::cli {

// ---------------------------------------------------------------------------
// Segment index: the CSV that pairs cache rows with their identity and label.
// Row order matches the spectrum order in the PSD cache exactly.
// ---------------------------------------------------------------------------

struct SegmentIndexRow {
    std::string segment_id;
    std::string source_id;
    dataset::ClassLabel label{};
};

inline void save_segment_index(const std::string& path,
                               const std::vector<SegmentIndexRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("segment index: cannot open '" + path + "' for writing");
    os << "segment_id,source_id,label\n";
    for (const auto& r : rows)
        os << r.segment_id << "," << r.source_id << "," << r.label.code() << "\n";
    if (!os) throw DataError("segment index: write to '" + path + "' failed");
}

inline std::vector<SegmentIndexRow> load_segment_index(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("segment index: cannot open '" + path + "'");
    std::vector<SegmentIndexRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "segment_id,source_id,label")
                throw DataError("segment index: '" + path +
                                "' line 1: expected header 'segment_id,source_id,label'");
            continue;
        }
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw DataError("segment index: '" + path + "' line " + std::to_string(line_no) +
                            ": expected 3 fields");
        SegmentIndexRow r;
        r.segment_id = line.substr(0, c1);
        r.source_id = line.substr(c1 + 1, c2 - c1 - 1);
        try {
            r.label = dataset::label_from_code(line.substr(c2 + 1));
        } catch (const DataError& e) {
            throw DataError("segment index: '" + path + "' line " + std::to_string(line_no) +
                            ": " + e.what());
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw DataError("segment index: '" + path + "' contains no segments");
    return rows;
}

namespace detail {

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
}

inline void write_config_snapshot(const RunConfig& cfg) {
    eval::write_text_file(cfg.out_dir + "/config.txt", cfg.snapshot());
}

// Segment position within its recording, from the "<source>#<k>" id.
inline std::size_t segment_ordinal(const std::string& segment_id) {
    const std::size_t hash = segment_id.rfind('#');
    if (hash == std::string::npos || hash + 1 == segment_id.size())
        throw DataError("segment index: malformed segment id '" + segment_id + "'");
    std::size_t v = 0;
    for (std::size_t i = hash + 1; i < segment_id.size(); ++i) {
        if (segment_id[i] < '0' || segment_id[i] > '9')
            throw DataError("segment index: malformed segment id '" + segment_id + "'");
        v = v * 10 + static_cast<std::size_t>(segment_id[i] - '0');
    }
    return v;
}

} // namespace detail

// ---------------------------------------------------------------------------
// preprocess: WAV -> conditioned segments -> Welch spectra cache + index
// ---------------------------------------------------------------------------

struct PreprocessSummary {
    std::size_t recordings = 0; // manifest rows seen
    std::size_t processed = 0;  // recordings conditioned successfully
    std::size_t failures = 0;
    std::size_t segments = 0;
    std::size_t degenerate = 0; // constant segments, zeroed by normalization
    std::size_t bins = 0;
};

// Condition one recording to the segment rate: low-pass at the native rate,
// then rational resampling. A recording already at the target rate passes
// through untouched; a lower-rate recording is rejected (no upsampling).
inline dataset::AudioRecording condition_recording(const dataset::AudioRecording& rec,
                                                   const RunConfig& cfg) {
    if (rec.sample_rate == cfg.target_rate_hz) return rec;
    if (rec.sample_rate < cfg.target_rate_hz)
        throw DataError("record '" + rec.id + "': sample rate " +
                        std::to_string(rec.sample_rate) + " Hz is below the target " +
                        std::to_string(cfg.target_rate_hz) + " Hz (upsampling not supported)");
    dsp::IirFilter lp = dsp::design_butterworth_lowpass(
        static_cast<unsigned>(cfg.filter_order), cfg.filter_cutoff_hz,
        static_cast<double>(rec.sample_rate));
    dataset::AudioRecording out;
    out.id = rec.id;
    out.label = rec.label;
    out.sample_rate = static_cast<std::uint32_t>(cfg.target_rate_hz);
    out.samples = dsp::resample(lp.apply(rec.samples), rec.sample_rate, cfg.target_rate_hz);
    return out;
}

inline PreprocessSummary run_preprocess(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.manifest.empty())
        throw ConfigError("preprocess: no manifest path (config key 'manifest')");
    if (cfg.audio_dir.empty())
        throw ConfigError("preprocess: no audio directory (config key 'audio_dir')");
    detail::ensure_dir(cfg.out_dir);

    const auto rows = dataset::parse_manifest(cfg.manifest);
    const dsp::WelchConfig wcfg = cfg.welch();

    PreprocessSummary sum;
    sum.recordings = rows.size();
    dsp::PsdBatch batch;
    std::vector<SegmentIndexRow> index;

    for (const auto& row : rows) {
        try {
            const dataset::AudioRecording rec =
                condition_recording(dataset::load_recording(cfg.audio_dir, row), cfg);
            const auto segments = dataset::segment_recording(rec);
            for (const auto& seg : segments) {
                bool degenerate = false;
                const std::vector<double> norm = dsp::energy_normalize(seg.samples, &degenerate);
                if (degenerate) {
                    ++sum.degenerate;
                    log << "segment '" << seg.id() << "': constant signal, normalized to zero\n";
                }
                batch.append(dsp::welch_psd(norm, static_cast<double>(cfg.target_rate_hz), wcfg).psd);
                index.push_back({seg.id(), seg.source_id, seg.label});
            }
            sum.segments += segments.size();
            ++sum.processed;
        } catch (const Error& e) {
            ++sum.failures;
            log << "record '" << row.record_id << "': FAILED: " << e.what() << "\n";
        }
    }

    if (sum.failures > 0 && !cfg.skip_bad)
        throw DataError("preprocess: " + std::to_string(sum.failures) + " of " +
                        std::to_string(sum.recordings) +
                        " recordings failed (rerun with skip_bad to continue past them)");
    if (index.empty()) throw DataError("preprocess: no segments produced");

    dsp::save_psd_cache(cfg.resolved_cache(), batch);
    save_segment_index(cfg.segment_index_path(), index);
    detail::write_config_snapshot(cfg);

    sum.bins = batch.bins;
    log << "preprocess: " << sum.processed << "/" << sum.recordings << " recordings -> "
        << sum.segments << " segments, " << sum.bins << " spectrum bins"
        << (sum.failures ? " (" + std::to_string(sum.failures) + " failed, skipped)" : "")
        << "\n";
    return sum;
}

// ---------------------------------------------------------------------------
// Shared loading for train/evaluate: cache + index + deterministic split
// ---------------------------------------------------------------------------

struct LoadedDataset {
    dsp::PsdBatch batch;
    std::vector<SegmentIndexRow> rows;
    std::unordered_map<std::string, std::size_t> position; // segment_id -> cache row
    dataset::SplitPlan plan;
};

inline LoadedDataset load_dataset(const RunConfig& cfg) {
    LoadedDataset d;
    d.batch = dsp::load_psd_cache(cfg.resolved_cache());
    d.rows = load_segment_index(cfg.segment_index_path());
    if (d.batch.size() != d.rows.size())
        throw DataError("dataset: cache '" + cfg.resolved_cache() + "' holds " +
                        std::to_string(d.batch.size()) + " spectra but index '" +
                        cfg.segment_index_path() + "' lists " + std::to_string(d.rows.size()) +
                        " segments (re-run preprocess)");
    d.position.reserve(d.rows.size());
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        if (!d.position.emplace(d.rows[i].segment_id, i).second)
            throw DataError("dataset: duplicate segment id '" + d.rows[i].segment_id + "'");
    }

    // Rebuild lightweight segments so the split is a pure function of
    // (index contents, seed, mode) — identical for train and evaluate.
    std::vector<dataset::Segment> stubs(d.rows.size());
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        stubs[i].source_id = d.rows[i].source_id;
        stubs[i].index = detail::segment_ordinal(d.rows[i].segment_id);
        stubs[i].label = d.rows[i].label;
        if (stubs[i].id() != d.rows[i].segment_id)
            throw DataError("dataset: segment id '" + d.rows[i].segment_id +
                            "' does not match source '" + d.rows[i].source_id + "'");
    }
    d.plan = dataset::make_split(stubs, cfg.seed, cfg.class_mode(), cfg.split_by_recording);
    return d;
}

inline train::Examples<float> gather_examples(const LoadedDataset& d,
                                              const std::vector<std::string>& ids,
                                              dataset::ClassMode mode) {
    train::Examples<float> ex;
    ex.features = d.batch.bins;
    ex.data.reserve(ids.size() * d.batch.bins);
    ex.labels.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = d.position.find(id);
        if (it == d.position.end())
            throw DataError("dataset: split references unknown segment '" + id + "'");
        const std::size_t b = it->second;
        for (std::size_t f = 0; f < d.batch.bins; ++f)
            ex.data.push_back(static_cast<float>(d.batch.data[b * d.batch.bins + f]));
        ex.labels.push_back(d.rows[b].label.index(mode));
    }
    return ex;
}

inline std::vector<float> resolve_class_weights(const LoadedDataset& d,
                                                const std::vector<std::string>& train_ids,
                                                const RunConfig& cfg) {
    const std::size_t C = dataset::class_count(cfg.class_mode());
    if (!cfg.class_weighting) return std::vector<float>(C, 1.0f);
    std::vector<dataset::ClassLabel> labels;
    labels.reserve(train_ids.size());
    for (const auto& id : train_ids) labels.push_back(d.rows[d.position.at(id)].label);
    const auto w = dataset::class_weights_from_counts(
        dataset::count_classes(labels, cfg.class_mode()), cfg.class_mode());
    std::vector<float> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = static_cast<float>(w[i]);
    return out;
}

// ---------------------------------------------------------------------------
// train: SGDM on the 70% split, best-validation checkpoint + epoch log
// ---------------------------------------------------------------------------

struct TrainSummary {
    std::size_t best_epoch = 0;
    double best_val_accuracy = 0.0; // fraction
    std::string checkpoint_path;
};

inline TrainSummary run_train(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    detail::ensure_dir(cfg.out_dir);
    const LoadedDataset d = load_dataset(cfg);
    const dataset::ClassMode mode = cfg.class_mode();

    const train::Examples<float> train_ex = gather_examples(d, d.plan.train_ids, mode);
    const train::Examples<float> val_ex = gather_examples(d, d.plan.val_ids, mode);
    const std::vector<float> weights = resolve_class_weights(d, d.plan.train_ids, cfg);

    models::ModelGraph<float> model =
        models::build_model<float>(cfg.model, d.batch.bins, cfg.classes, cfg.seed);
    log << "train: model " << cfg.model << " (" << model.param_count() << " parameters), "
        << train_ex.size() << " train / " << val_ex.size() << " val segments\n";

    train::TrainOptions opt;
    opt.epochs = cfg.epochs;
    opt.batch_size = cfg.batch_size;
    opt.learning_rate = cfg.learning_rate;
    opt.momentum = cfg.momentum;
    // Distinct deterministic stream from the model-init seed.
    opt.shuffle_seed = cfg.seed + 0x9E3779B97F4A7C15ULL;
    opt.progress = &log;

    const train::TrainResult<float> result = train::train_model(model, train_ex, val_ex, weights, opt);

    const std::string ckpt = cfg.resolved_checkpoint();
    nn::save_records(ckpt, result.best_snapshot);
    models::save_descriptor(ckpt + ".json", model);
    eval::write_text_file(cfg.out_dir + "/train_log.csv", result.log_csv);
    dataset::save_split(cfg.out_dir + "/split.csv", d.plan);
    detail::write_config_snapshot(cfg);

    log << "train: best validation accuracy " << result.best_val_accuracy * 100.0 << "% at epoch "
        << result.best_epoch << "; checkpoint " << ckpt << "\n";
    if (result.clamped_probs > 0)
        log << "train: warning: " << result.clamped_probs
            << " probability values hit the loss floor\n";
    return {result.best_epoch, result.best_val_accuracy, ckpt};
}

// ---------------------------------------------------------------------------
// evaluate: held-out test metrics for a trained checkpoint
// ---------------------------------------------------------------------------

struct EvaluateSummary {
    eval::EvalReport report;           // in the configured class mode
    eval::ConfusionMatrix confusion{2};
};

inline EvaluateSummary run_evaluate(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    detail::ensure_dir(cfg.out_dir);
    const LoadedDataset d = load_dataset(cfg);
    const dataset::ClassMode mode = cfg.class_mode();
    const std::size_t C = dataset::class_count(mode);

    const std::string ckpt = cfg.resolved_checkpoint();
    // A checkpoint may only be restored into the architecture that wrote it.
    models::check_descriptor(models::load_descriptor(ckpt + ".json"), cfg.model, cfg.classes,
                             d.batch.bins);
    models::ModelGraph<float> model =
        models::build_model<float>(cfg.model, d.batch.bins, cfg.classes, cfg.seed);
    nn::load_model(ckpt, model.body());

    const train::Examples<float> test_ex = gather_examples(d, d.plan.test_ids, mode);
    const std::vector<float> ones(C, 1.0f);
    const train::EvalPass<float> pass =
        train::evaluate_examples(model, test_ex, ones, cfg.batch_size);

    const eval::ConfusionMatrix cm = eval::confusion(test_ex.labels, pass.predictions, C);
    const eval::Averaging avg =
        cfg.averaging == "weighted" ? eval::Averaging::weighted : eval::Averaging::macro;

    EvaluateSummary out;
    out.confusion = cm;
    if (mode == dataset::ClassMode::twelve) {
        out.report = eval::multiclass_metrics(cm, avg);
        std::vector<std::string> names(C);
        for (std::size_t i = 0; i < C; ++i) names[i] = dataset::class_name(mode, i);
        eval::write_text_file(cfg.out_dir + "/confusion_twelve.csv",
                              eval::confusion_csv(cm, out.report, names));
        eval::write_text_file(cfg.out_dir + "/metrics_twelve.csv",
                              eval::metrics_csv(out.report, cfg.model, "twelve"));
        // Binary projection of the same predictions.
        const eval::ConfusionMatrix cm2 = eval::project_binary(cm);
        const eval::EvalReport rep2 = eval::binary_metrics(cm2);
        const std::vector<std::string> bnames = {dataset::class_name(dataset::ClassMode::binary, 0),
                                                 dataset::class_name(dataset::ClassMode::binary, 1)};
        eval::write_text_file(cfg.out_dir + "/confusion_binary.csv",
                              eval::confusion_csv(cm2, rep2, bnames));
        eval::write_text_file(cfg.out_dir + "/metrics_binary.csv",
                              eval::metrics_csv(rep2, cfg.model, "binary"));
    } else {
        out.report = eval::binary_metrics(cm);
        const std::vector<std::string> bnames = {dataset::class_name(mode, 0),
                                                 dataset::class_name(mode, 1)};
        eval::write_text_file(cfg.out_dir + "/confusion_binary.csv",
                              eval::confusion_csv(cm, out.report, bnames));
        eval::write_text_file(cfg.out_dir + "/metrics_binary.csv",
                              eval::metrics_csv(out.report, cfg.model, "binary"));
    }
    detail::write_config_snapshot(cfg);

    log << "evaluate: " << test_ex.size() << " test segments, accuracy " << out.report.accuracy
        << "%\n";
    return out;
}

// ---------------------------------------------------------------------------
// crossval: five independent splits (seed..seed+4), aggregated report
// ---------------------------------------------------------------------------

inline constexpr std::size_t kCrossvalFolds = 5;

template <class Fn>
auto with_fold_context(std::size_t fold, std::uint64_t seed, Fn&& fn) {
    const std::string prefix =
        "crossval: fold " + std::to_string(fold) + " (seed " + std::to_string(seed) + "): ";
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const NumericError& e) {
        throw NumericError(prefix + e.what());
    } catch (const ShapeError& e) {
        throw ShapeError(prefix + e.what());
    } catch (const StateError& e) {
        throw StateError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    }
}

inline std::vector<eval::EvalReport> run_crossval(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    detail::ensure_dir(cfg.out_dir);
    std::vector<eval::EvalReport> reports;
    reports.reserve(kCrossvalFolds);
    for (std::size_t fold = 0; fold < kCrossvalFolds; ++fold) {
        RunConfig fcfg = cfg;
        fcfg.seed = cfg.seed + fold;
        fcfg.out_dir = cfg.out_dir + "/fold" + std::to_string(fold);
        fcfg.cache = cfg.resolved_cache(); // folds share the preprocessed features
        fcfg.checkpoint.clear();           // per-fold checkpoint inside the fold directory
        log << "crossval: fold " << fold << " (seed " << fcfg.seed << ")\n";
        reports.push_back(with_fold_context(fold, fcfg.seed, [&] {
            run_train(fcfg, log);
            return run_evaluate(fcfg, log).report;
        }));
    }
    const eval::FoldAggregate agg = eval::aggregate_folds(reports);
    eval::write_text_file(cfg.out_dir + "/crossval_metrics.csv",
                          eval::folds_csv(reports, agg, cfg.class_mode()));
    detail::write_config_snapshot(cfg);
    log << "crossval: mean accuracy " << agg.accuracy.mean.value_or(0.0) << "% over "
        << kCrossvalFolds << " folds\n";
    return reports;
}

} // namespace hsc::cli
