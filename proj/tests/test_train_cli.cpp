// Training loop, run configuration, and the batch pipeline commands driven
// end to end on a synthetic two-class corpus in a temporary directory.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hsc/cli/commands.hpp"
#include "hsc/cli/config.hpp"
#include "hsc/models/build.hpp"
#include "hsc/rng.hpp"
#include "hsc/synth.hpp"
#include "hsc/train/trainer.hpp"

using hsc::Rng;
using hsc::Tensor;
using hsc::train::Examples;
using hsc::train::TrainOptions;

namespace {

namespace fs = std::filesystem;

std::string fresh_dir(const std::string& name) {
    const std::string path = testing::TempDir() + "/" + name;
    fs::remove_all(path);
    fs::create_directories(path);
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    EXPECT_TRUE(is.good()) << path;
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

// Linearly separable toy set: class = sign of the first feature.
Examples<float> toy_examples(std::size_t features, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Examples<float> ex;
    ex.features = features;
    for (std::size_t i = 0; i < n; ++i) {
        const double lead = rng.uniform(-1.0, 1.0);
        ex.labels.push_back(lead > 0 ? 1u : 0u);
        ex.data.push_back(static_cast<float>(lead));
        for (std::size_t f = 1; f < features; ++f)
            ex.data.push_back(static_cast<float>(0.1 * rng.uniform(-1.0, 1.0)));
    }
    return ex;
}

} // namespace

// ---------------------------------------------------------------------------
// Trainer pieces
// ---------------------------------------------------------------------------

TEST(Trainer, GatherBatchProducesFeatureMajorColumns) {
    Examples<float> ex;
    ex.features = 3;
    ex.data = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    ex.labels = {0, 1, 0, 1};
    const Tensor<float> t = hsc::train::gather_batch(ex, {2, 0});
    ASSERT_EQ(t.rank(), 3u);
    EXPECT_EQ(t.dim(0), 1u);
    EXPECT_EQ(t.dim(1), 3u);
    EXPECT_EQ(t.dim(2), 2u);
    const std::vector<float> want = {7, 1, 8, 2, 9, 3};
    EXPECT_EQ(t.data, want);
}

TEST(Trainer, ArgmaxBreaksTiesTowardTheLowestIndex) {
    Tensor<float> probs({3, 2});
    // column 0: tie between rows 0 and 1; column 1: clear winner at row 2
    probs.at(0, 0) = 0.4f; probs.at(1, 0) = 0.4f; probs.at(2, 0) = 0.2f;
    probs.at(0, 1) = 0.1f; probs.at(1, 1) = 0.2f; probs.at(2, 1) = 0.7f;
    const auto pred = hsc::train::argmax_columns(probs);
    ASSERT_EQ(pred.size(), 2u);
    EXPECT_EQ(pred[0], 0u);
    EXPECT_EQ(pred[1], 2u);
}

TEST(Trainer, ExamplesRejectInconsistentSizes) {
    Examples<float> ex;
    ex.features = 4;
    ex.data.resize(9, 0.0f); // not a multiple of 4
    ex.labels = {0, 1};
    EXPECT_THROW(ex.check(), hsc::ShapeError);
    ex.data.resize(8);
    EXPECT_NO_THROW(ex.check());
}

TEST(Trainer, EvaluationIsIndependentOfBatchPartitioning) {
    auto model = hsc::models::build_mlp<float>(24, 2, 5);
    const Examples<float> ex = toy_examples(24, 23, 11);
    const std::vector<float> ones = {1.0f, 1.0f};
    const auto small = hsc::train::evaluate_examples(model, ex, ones, 4);
    const auto large = hsc::train::evaluate_examples(model, ex, ones, 64);
    ASSERT_EQ(small.predictions.size(), ex.size());
    EXPECT_EQ(small.predictions, large.predictions);
    EXPECT_NEAR(small.loss, large.loss, 1e-5);
    EXPECT_DOUBLE_EQ(small.accuracy, large.accuracy);
    // Reported accuracy is exactly the fraction of matching predictions.
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ex.size(); ++i)
        if (small.predictions[i] == ex.labels[i]) ++correct;
    EXPECT_DOUBLE_EQ(small.accuracy, double(correct) / double(ex.size()));
}

TEST(Trainer, IdenticalSeedsReproduceTheRunBitForBit) {
    const Examples<float> train = toy_examples(16, 30, 2);
    const Examples<float> val = toy_examples(16, 10, 3);
    const std::vector<float> ones = {1.0f, 1.0f};
    TrainOptions opt;
    opt.epochs = 3;
    opt.batch_size = 8;
    opt.learning_rate = 0.05;
    opt.shuffle_seed = 77;

    auto m1 = hsc::models::build_mlp<float>(16, 2, 9);
    auto m2 = hsc::models::build_mlp<float>(16, 2, 9);
    const auto r1 = hsc::train::train_model(m1, train, val, ones, opt);
    const auto r2 = hsc::train::train_model(m2, train, val, ones, opt);

    EXPECT_EQ(r1.log_csv, r2.log_csv);
    EXPECT_EQ(r1.best_epoch, r2.best_epoch);
    ASSERT_EQ(r1.best_snapshot.size(), r2.best_snapshot.size());
    for (std::size_t i = 0; i < r1.best_snapshot.size(); ++i) {
        EXPECT_EQ(r1.best_snapshot[i].name, r2.best_snapshot[i].name);
        EXPECT_EQ(r1.best_snapshot[i].value.data, r2.best_snapshot[i].value.data);
    }

    // Log format: header plus one line per epoch.
    std::size_t lines = 0;
    for (char c : r1.log_csv)
        if (c == '\n') ++lines;
    EXPECT_EQ(lines, 1u + opt.epochs);
    EXPECT_EQ(r1.log_csv.rfind("epoch,train_loss,train_acc,val_loss,val_acc\n", 0), 0u);
    EXPECT_GE(r1.best_epoch, 1u);
    EXPECT_LE(r1.best_epoch, opt.epochs);
}

TEST(Trainer, ZeroLearningRateLeavesParametersUntouched) {
    const Examples<float> train = toy_examples(16, 20, 4);
    const Examples<float> val = toy_examples(16, 8, 5);
    const std::vector<float> ones = {1.0f, 1.0f};
    TrainOptions opt;
    opt.epochs = 2;
    opt.batch_size = 5;
    opt.learning_rate = 0.0;
    opt.shuffle_seed = 1;

    auto model = hsc::models::build_mlp<float>(16, 2, 42);
    const auto before = hsc::nn::snapshot_model(model.body());
    (void)hsc::train::train_model(model, train, val, ones, opt);
    const auto after = hsc::nn::snapshot_model(model.body());
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t i = 0; i < before.size(); ++i)
        EXPECT_EQ(before[i].value.data, after[i].value.data) << before[i].name;
}

TEST(Trainer, NonFiniteLossAbortsWithCoordinates) {
    const Examples<float> train = toy_examples(16, 8, 6);
    const Examples<float> val = toy_examples(16, 4, 7);
    const std::vector<float> inf = {std::numeric_limits<float>::infinity(),
                                    std::numeric_limits<float>::infinity()};
    TrainOptions opt;
    opt.epochs = 1;
    opt.batch_size = 4;
    auto model = hsc::models::build_mlp<float>(16, 2, 1);
    try {
        (void)hsc::train::train_model(model, train, val, inf, opt);
        FAIL() << "expected NumericError";
    } catch (const hsc::NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("non-finite loss at epoch 1, batch 0"),
                  std::string::npos)
            << e.what();
    }
}

TEST(Trainer, RejectsMismatchedInputsAndDegenerateOptions) {
    auto model = hsc::models::build_mlp<float>(16, 2, 1);
    const Examples<float> good = toy_examples(16, 8, 1);
    const Examples<float> narrow = toy_examples(8, 8, 1);
    const std::vector<float> ones = {1.0f, 1.0f};
    TrainOptions opt;
    opt.epochs = 1;
    opt.batch_size = 4;

    EXPECT_THROW(hsc::train::train_model(model, narrow, good, ones, opt), hsc::ShapeError);
    const std::vector<float> three = {1.0f, 1.0f, 1.0f};
    EXPECT_THROW(hsc::train::train_model(model, good, good, three, opt), hsc::ShapeError);

    TrainOptions tiny = opt;
    tiny.batch_size = 1;
    EXPECT_THROW(hsc::train::train_model(model, good, good, ones, tiny), hsc::ConfigError);
    TrainOptions lazy = opt;
    lazy.epochs = 0;
    EXPECT_THROW(hsc::train::train_model(model, good, good, ones, lazy), hsc::ConfigError);

    // A single training sample never fills a 2-sample batch: nothing trains.
    const Examples<float> lone = toy_examples(16, 1, 1);
    EXPECT_THROW(hsc::train::train_model(model, lone, good, ones, opt), hsc::DataError);
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

TEST(Config, DefaultsMatchTheTrainingRecipe) {
    const hsc::cli::RunConfig cfg = hsc::cli::parse_config_text("");
    EXPECT_EQ(cfg.model, "lscn");
    EXPECT_EQ(cfg.classes, 12u);
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_EQ(cfg.epochs, 40u);
    EXPECT_DOUBLE_EQ(cfg.learning_rate, 0.01);
    EXPECT_DOUBLE_EQ(cfg.momentum, 0.9);
    EXPECT_EQ(cfg.batch_size, 64u);
    EXPECT_FALSE(cfg.class_weighting);
    EXPECT_FALSE(cfg.split_by_recording);
    EXPECT_FALSE(cfg.skip_bad);
    EXPECT_DOUBLE_EQ(cfg.filter_cutoff_hz, 900.0);
    EXPECT_EQ(cfg.filter_order, 4u);
    EXPECT_EQ(cfg.target_rate_hz, 2000u);
    EXPECT_EQ(cfg.welch_window, 256u);
    EXPECT_EQ(cfg.welch_overlap, 128u);
    EXPECT_EQ(cfg.welch_fft, 256u);
    EXPECT_EQ(cfg.averaging, "macro");
    EXPECT_EQ(cfg.out_dir, "out");
    EXPECT_EQ(cfg.resolved_cache(), "out/psd_cache.bin");
    EXPECT_EQ(cfg.resolved_checkpoint(), "out/lscn.ckpt");
    EXPECT_EQ(cfg.segment_index_path(), "out/segments.csv");
    EXPECT_EQ(cfg.welch().bins(), 129u);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, ParsesKeysCommentsAndWhitespace) {
    const std::string text =
        "# run settings\r\n"
        "model = mbdcn\n"
        "  classes=2   # binary task\n"
        "\n"
        "seed = 9\n"
        "epochs = 3\n"
        "learning_rate = 0.05\n"
        "batch_size = 8\n"
        "class_weighting = true\n"
        "out_dir = runs/a\n"
        "checkpoint = runs/a/custom.ckpt\n"
        "cache = runs/shared.bin\n"
        "averaging = weighted\n"
        "split_by_recording = true\n";
    const hsc::cli::RunConfig cfg = hsc::cli::parse_config_text(text);
    EXPECT_EQ(cfg.model, "mbdcn");
    EXPECT_EQ(cfg.classes, 2u);
    EXPECT_EQ(cfg.class_mode(), hsc::dataset::ClassMode::binary);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.epochs, 3u);
    EXPECT_DOUBLE_EQ(cfg.learning_rate, 0.05);
    EXPECT_EQ(cfg.batch_size, 8u);
    EXPECT_TRUE(cfg.class_weighting);
    EXPECT_TRUE(cfg.split_by_recording);
    EXPECT_EQ(cfg.averaging, "weighted");
    EXPECT_EQ(cfg.resolved_checkpoint(), "runs/a/custom.ckpt");
    EXPECT_EQ(cfg.resolved_cache(), "runs/shared.bin");
    // The index always sits next to the cache it describes.
    EXPECT_EQ(cfg.segment_index_path(), "runs/segments.csv");
}

TEST(Config, SnapshotRoundTripsThroughTheParser) {
    hsc::cli::RunConfig cfg = hsc::cli::parse_config_text("model = cnn1d\nclasses = 2\nseed = 4\n");
    const std::string snap = cfg.snapshot();
    const hsc::cli::RunConfig back = hsc::cli::parse_config_text(snap);
    EXPECT_EQ(back.snapshot(), snap);
    EXPECT_EQ(back.model, "cnn1d");
    EXPECT_EQ(back.classes, 2u);
    EXPECT_EQ(back.seed, 4u);
}

TEST(Config, BadLinesReportTheirLineNumber) {
    try {
        hsc::cli::parse_config_text("model = mlp\nlr = 0.1\n");
        FAIL() << "expected ConfigError";
    } catch (const hsc::ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("unknown key 'lr'"), std::string::npos) << msg;
    }
    EXPECT_THROW(hsc::cli::parse_config_text("epochs\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::parse_config_text(" = 5\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::parse_config_text("epochs = soon\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::parse_config_text("learning_rate = fast\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::parse_config_text("skip_bad = yes\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::parse_config_text("seed = -4\n"), hsc::ConfigError);
    EXPECT_THROW(hsc::cli::load_config("/nonexistent/config.txt"), hsc::ConfigError);
}

TEST(Config, ValidationCatchesOutOfRangeSettings) {
    auto reject = [](const std::string& line) {
        hsc::cli::RunConfig cfg = hsc::cli::parse_config_text(line);
        EXPECT_THROW(cfg.validate(), hsc::ConfigError) << line;
    };
    reject("model = vgg\n");
    reject("classes = 5\n");
    reject("averaging = median\n");
    reject("epochs = 0\n");
    reject("learning_rate = 0\n");
    reject("momentum = 1.0\n");
    reject("momentum = -0.1\n");
    reject("batch_size = 1\n");
    reject("filter_order = 0\n");
    reject("filter_cutoff_hz = 0\n");
    reject("target_rate_hz = 4000\n");
    reject("welch_overlap = 300\n"); // overlap >= window
    reject("out_dir =\n");
}

// ---------------------------------------------------------------------------
// Segment index file
// ---------------------------------------------------------------------------

TEST(SegmentIndex, RoundTripsAndValidates) {
    const std::string dir = fresh_dir("segidx");
    const std::string path = dir + "/segments.csv";
    std::vector<hsc::cli::SegmentIndexRow> rows;
    rows.push_back({"rec1#0", "rec1", hsc::dataset::label_from_code("AA")});
    rows.push_back({"rec1#1", "rec1", hsc::dataset::label_from_code("CN")});
    rows.push_back({"rec2#0", "rec2", hsc::dataset::label_from_code("FN")});
    hsc::cli::save_segment_index(path, rows);
    const auto back = hsc::cli::load_segment_index(path);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].segment_id, rows[i].segment_id);
        EXPECT_EQ(back[i].source_id, rows[i].source_id);
        EXPECT_EQ(back[i].label.code(), rows[i].label.code());
    }

    EXPECT_THROW(hsc::cli::load_segment_index(dir + "/missing.csv"), hsc::DataError);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream os(dir + "/" + name, std::ios::binary);
        os << body;
        return dir + "/" + name;
    };
    EXPECT_THROW(hsc::cli::load_segment_index(
                     write("badhdr.csv", "id,source,label\nrec1#0,rec1,AA\n")),
                 hsc::DataError);
    EXPECT_THROW(hsc::cli::load_segment_index(
                     write("short.csv", "segment_id,source_id,label\nrec1#0,rec1\n")),
                 hsc::DataError);
    EXPECT_THROW(hsc::cli::load_segment_index(
                     write("badlabel.csv", "segment_id,source_id,label\nrec1#0,rec1,ZZ\n")),
                 hsc::DataError);
    EXPECT_THROW(hsc::cli::load_segment_index(
                     write("empty.csv", "segment_id,source_id,label\n")),
                 hsc::DataError);
}

// ---------------------------------------------------------------------------
// Pipeline commands on a generated corpus
// ---------------------------------------------------------------------------

namespace {

hsc::cli::RunConfig corpus_config(const std::string& corpus, const std::string& out) {
    hsc::cli::RunConfig cfg;
    cfg.manifest = corpus + "/manifest.csv";
    cfg.audio_dir = corpus;
    cfg.out_dir = out;
    cfg.model = "mbdcn";
    cfg.classes = 2;
    cfg.seed = 3;
    cfg.epochs = 10;
    cfg.batch_size = 8;
    cfg.learning_rate = 0.01;
    return cfg;
}

} // namespace

TEST(Pipeline, PreprocessTrainEvaluateOnSeparableCorpus) {
    const std::string corpus = fresh_dir("corpus_main");
    hsc::synth::SynthConfig synth;
    synth.segments = 24;
    synth.seed = 7;
    hsc::synth::generate_corpus(corpus, synth);

    const std::string out = fresh_dir("run_main");
    hsc::cli::RunConfig cfg = corpus_config(corpus, out);
    std::ostringstream log;

    const auto pre = hsc::cli::run_preprocess(cfg, log);
    EXPECT_EQ(pre.recordings, 24u);
    EXPECT_EQ(pre.processed, 24u);
    EXPECT_EQ(pre.failures, 0u);
    EXPECT_EQ(pre.segments, 24u); // each record holds exactly one window
    EXPECT_EQ(pre.bins, 129u);
    EXPECT_TRUE(fs::exists(cfg.resolved_cache()));
    EXPECT_TRUE(fs::exists(cfg.segment_index_path()));
    EXPECT_TRUE(fs::exists(out + "/config.txt"));

    // Re-running the same preprocess rewrites the cache byte for byte.
    const std::string cache_before = read_file(cfg.resolved_cache());
    (void)hsc::cli::run_preprocess(cfg, log);
    EXPECT_EQ(read_file(cfg.resolved_cache()), cache_before);

    // The loaded dataset splits 24 segments (12 per class) into 16/4/4.
    const auto d = hsc::cli::load_dataset(cfg);
    EXPECT_EQ(d.batch.bins, 129u);
    EXPECT_EQ(d.plan.train_ids.size(), 16u);
    EXPECT_EQ(d.plan.val_ids.size(), 4u);
    EXPECT_EQ(d.plan.test_ids.size(), 4u);
    const auto train_ex = hsc::cli::gather_examples(d, d.plan.train_ids, cfg.class_mode());
    EXPECT_EQ(train_ex.features, 129u);
    EXPECT_EQ(train_ex.size(), 16u);
    for (auto l : train_ex.labels) EXPECT_LT(l, 2u);

    // Class weights: ones when disabled, exact inverse frequency when enabled.
    EXPECT_EQ(hsc::cli::resolve_class_weights(d, d.plan.train_ids, cfg),
              (std::vector<float>{1.0f, 1.0f}));
    hsc::cli::RunConfig weighted = cfg;
    weighted.class_weighting = true;
    EXPECT_EQ(hsc::cli::resolve_class_weights(d, d.plan.train_ids, weighted),
              (std::vector<float>{1.0f, 1.0f})); // balanced corpus

    const auto trained = hsc::cli::run_train(cfg, log);
    EXPECT_GE(trained.best_epoch, 1u);
    EXPECT_LE(trained.best_epoch, cfg.epochs);
    EXPECT_TRUE(fs::exists(trained.checkpoint_path));
    EXPECT_TRUE(fs::exists(trained.checkpoint_path + ".json"));
    EXPECT_TRUE(fs::exists(out + "/train_log.csv"));
    EXPECT_TRUE(fs::exists(out + "/split.csv"));

    const auto summary = hsc::cli::run_evaluate(cfg, log);
    EXPECT_EQ(summary.confusion.total(), 4u);
    // Spiky versus smooth spectra are trivially separable.
    EXPECT_GE(summary.report.accuracy, 75.0);
    EXPECT_TRUE(fs::exists(out + "/confusion_binary.csv"));
    EXPECT_TRUE(fs::exists(out + "/metrics_binary.csv"));

    // Same seeds, fresh directory: the whole run reproduces bit for bit.
    const std::string out2 = fresh_dir("run_main_repeat");
    hsc::cli::RunConfig cfg2 = corpus_config(corpus, out2);
    std::ostringstream log2;
    (void)hsc::cli::run_preprocess(cfg2, log2);
    (void)hsc::cli::run_train(cfg2, log2);
    (void)hsc::cli::run_evaluate(cfg2, log2);
    EXPECT_EQ(read_file(cfg2.resolved_cache()), cache_before);
    EXPECT_EQ(read_file(out2 + "/train_log.csv"), read_file(out + "/train_log.csv"));
    EXPECT_EQ(read_file(cfg2.resolved_checkpoint()), read_file(cfg.resolved_checkpoint()));
    EXPECT_EQ(read_file(out2 + "/metrics_binary.csv"), read_file(out + "/metrics_binary.csv"));

    // A checkpoint only restores into the architecture that wrote it.
    hsc::cli::RunConfig wrong = cfg;
    wrong.model = "mlp";
    wrong.checkpoint = cfg.resolved_checkpoint();
    EXPECT_THROW(hsc::cli::run_evaluate(wrong, log), hsc::DataError);

    // Cache and index must agree; a trimmed index is refused.
    std::string index_text = read_file(cfg.segment_index_path());
    index_text.erase(index_text.rfind("noise"));
    {
        std::ofstream os(cfg.segment_index_path(), std::ios::binary);
        os << index_text;
    }
    EXPECT_THROW(hsc::cli::load_dataset(cfg), hsc::DataError);
}

TEST(Pipeline, PreprocessHandlesDegenerateAndBrokenRecordings) {
    const std::string corpus = fresh_dir("corpus_bad");
    hsc::synth::SynthConfig synth;
    synth.segments = 4;
    synth.seed = 1;
    hsc::synth::generate_corpus(corpus, synth);

    // One silent (constant) recording and one unreadable file.
    hsc::dataset::write_wav_pcm16(corpus + "/flat0000.wav",
                                  std::vector<double>(10000, 0.0), 2000);
    {
        std::ofstream os(corpus + "/broken0000.wav", std::ios::binary);
        os << "this is not audio";
    }
    {
        std::ofstream os(corpus + "/manifest.csv", std::ios::binary | std::ios::app);
        os << "flat0000,B,Normal\nbroken0000,B,Abnormal\n";
    }

    const std::string out = fresh_dir("run_bad");
    hsc::cli::RunConfig cfg = corpus_config(corpus, out);
    std::ostringstream log;

    // Without skip_bad the broken recording is fatal.
    EXPECT_THROW(hsc::cli::run_preprocess(cfg, log), hsc::DataError);

    cfg.skip_bad = true;
    std::ostringstream log2;
    const auto sum = hsc::cli::run_preprocess(cfg, log2);
    EXPECT_EQ(sum.recordings, 6u);
    EXPECT_EQ(sum.processed, 5u);
    EXPECT_EQ(sum.failures, 1u);
    EXPECT_EQ(sum.segments, 5u);
    EXPECT_EQ(sum.degenerate, 1u);
    const std::string text = log2.str();
    EXPECT_NE(text.find("record 'broken0000': FAILED"), std::string::npos) << text;
    EXPECT_NE(text.find("constant signal"), std::string::npos) << text;
}

TEST(Pipeline, PreprocessRefusesIncompleteConfiguration) {
    std::ostringstream log;
    hsc::cli::RunConfig no_manifest;
    no_manifest.audio_dir = "somewhere";
    EXPECT_THROW(hsc::cli::run_preprocess(no_manifest, log), hsc::ConfigError);
    hsc::cli::RunConfig no_audio;
    no_audio.manifest = "somewhere/manifest.csv";
    EXPECT_THROW(hsc::cli::run_preprocess(no_audio, log), hsc::ConfigError);
    hsc::cli::RunConfig missing = corpus_config("/nonexistent_corpus", fresh_dir("run_missing"));
    EXPECT_THROW(hsc::cli::run_preprocess(missing, log), hsc::DataError);
}

TEST(Pipeline, CrossValidationTrainsFiveIndependentFolds) {
    const std::string corpus = fresh_dir("corpus_cv");
    hsc::synth::SynthConfig synth;
    synth.segments = 24;
    synth.seed = 13;
    hsc::synth::generate_corpus(corpus, synth);

    const std::string out = fresh_dir("run_cv");
    hsc::cli::RunConfig cfg = corpus_config(corpus, out);
    cfg.epochs = 2; // keep the fold loop cheap; convergence is not the point
    std::ostringstream log;
    (void)hsc::cli::run_preprocess(cfg, log);

    const auto reports = hsc::cli::run_crossval(cfg, log);
    ASSERT_EQ(reports.size(), 5u);
    for (const auto& r : reports) {
        EXPECT_GE(r.accuracy, 0.0);
        EXPECT_LE(r.accuracy, 100.0);
    }
    for (std::size_t fold = 0; fold < 5; ++fold) {
        const std::string fdir = out + "/fold" + std::to_string(fold);
        EXPECT_TRUE(fs::exists(fdir + "/mbdcn.ckpt")) << fdir;
        EXPECT_TRUE(fs::exists(fdir + "/metrics_binary.csv")) << fdir;
    }
    const std::string agg = read_file(out + "/crossval_metrics.csv");
    EXPECT_NE(agg.find("Mean"), std::string::npos) << agg;

    // Every fold re-splits with its own seed: fold directories hold
    // independent split files, and at least two of them differ.
    std::size_t distinct = 0;
    const std::string first = read_file(out + "/fold0/split.csv");
    for (std::size_t fold = 1; fold < 5; ++fold)
        if (read_file(out + "/fold" + std::to_string(fold) + "/split.csv") != first) ++distinct;
    EXPECT_GE(distinct, 1u);
}
