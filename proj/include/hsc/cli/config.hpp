#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "hsc/dataset/label.hpp"
#include "hsc/dataset/segment.hpp"
#include "hsc/dsp/welch.hpp"
#include "hsc/error.hpp"

namespace hsc::cli {

// Line-oriented run configuration: one `key = value` per line, `#` starts a
// comment, blank lines ignored. Unknown keys are rejected so typos fail loud.
struct RunConfig {
    // data
    std::string manifest;  // CSV: record_id,group,condition
    std::string audio_dir; // directory holding <record_id>.wav
    std::string out_dir = "out";
    std::string cache;      // PSD cache path; default <out_dir>/psd_cache.bin
    std::string checkpoint; // model weights path; default <out_dir>/<model>.ckpt

    // model + splits
    std::string model = "lscn"; // mbdcn | lscn | cnn1d | mlp
    std::size_t classes = 12;   // 12 | 2
    std::uint64_t seed = 1;
    bool split_by_recording = false;
    std::string averaging = "macro"; // macro | weighted

    // training
    std::size_t epochs = 40;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t batch_size = 64;
    bool class_weighting = false;

    // conditioning + features
    double filter_cutoff_hz = 900.0;
    std::size_t filter_order = 4;
    std::size_t target_rate_hz = 2000;
    std::size_t welch_window = 256;
    std::size_t welch_overlap = 128;
    std::size_t welch_fft = 256;

    // error handling
    bool skip_bad = false; // preprocess: log per-file failures and continue

    std::string resolved_cache() const {
        return cache.empty() ? out_dir + "/psd_cache.bin" : cache;
    }
    std::string resolved_checkpoint() const {
        return checkpoint.empty() ? out_dir + "/" + model + ".ckpt" : checkpoint;
    }
    // The segment index lives next to the cache it describes (row order is
    // shared between the two files).
    std::string segment_index_path() const {
        const std::string c = resolved_cache();
        const std::size_t slash = c.rfind('/');
        return slash == std::string::npos ? "segments.csv" : c.substr(0, slash + 1) + "segments.csv";
    }

    dataset::ClassMode class_mode() const {
        return classes == 2 ? dataset::ClassMode::binary : dataset::ClassMode::twelve;
    }
    dsp::WelchConfig welch() const {
        dsp::WelchConfig w;
        w.window_len = welch_window;
        w.overlap = welch_overlap;
        w.fft_len = welch_fft;
        return w;
    }

    void validate() const {
        if (model != "mbdcn" && model != "lscn" && model != "cnn1d" && model != "mlp")
            throw ConfigError("config: unknown model '" + model +
                              "' (expected mbdcn, lscn, cnn1d or mlp)");
        if (classes != 12 && classes != 2)
            throw ConfigError("config: classes must be 12 or 2, got " + std::to_string(classes));
        if (averaging != "macro" && averaging != "weighted")
            throw ConfigError("config: averaging must be macro or weighted, got '" + averaging +
                              "'");
        if (epochs < 1) throw ConfigError("config: epochs must be at least 1");
        if (!(learning_rate > 0.0))
            throw ConfigError("config: learning_rate must be positive");
        if (!(momentum >= 0.0) || momentum >= 1.0)
            throw ConfigError("config: momentum must be in [0, 1)");
        if (batch_size < 2)
            throw ConfigError("config: batch_size must be at least 2 (batch statistics)");
        if (filter_order < 1) throw ConfigError("config: filter_order must be at least 1");
        if (!(filter_cutoff_hz > 0.0))
            throw ConfigError("config: filter_cutoff_hz must be positive");
        if (target_rate_hz != dataset::kSegmentRate)
            throw ConfigError("config: target_rate_hz must be " +
                              std::to_string(dataset::kSegmentRate) +
                              " (segments are defined at that rate)");
        try {
            welch().validate();
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
    }

    // Canonical snapshot of the resolved configuration, one key per line.
    std::string snapshot() const {
        std::ostringstream os;
        os << "manifest = " << manifest << "\n";
        os << "audio_dir = " << audio_dir << "\n";
        os << "out_dir = " << out_dir << "\n";
        os << "cache = " << resolved_cache() << "\n";
        os << "checkpoint = " << resolved_checkpoint() << "\n";
        os << "model = " << model << "\n";
        os << "classes = " << classes << "\n";
        os << "seed = " << seed << "\n";
        os << "split_by_recording = " << (split_by_recording ? "true" : "false") << "\n";
        os << "averaging = " << averaging << "\n";
        os << "epochs = " << epochs << "\n";
        os << "learning_rate = " << learning_rate << "\n";
        os << "momentum = " << momentum << "\n";
        os << "batch_size = " << batch_size << "\n";
        os << "class_weighting = " << (class_weighting ? "true" : "false") << "\n";
        os << "filter_cutoff_hz = " << filter_cutoff_hz << "\n";
        os << "filter_order = " << filter_order << "\n";
        os << "target_rate_hz = " << target_rate_hz << "\n";
        os << "welch_window = " << welch_window << "\n";
        os << "welch_overlap = " << welch_overlap << "\n";
        os << "welch_fft = " << welch_fft << "\n";
        os << "skip_bad = " << (skip_bad ? "true" : "false") << "\n";
        return os.str();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + " must be true or false, got '" + v + "'");
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(key + " must be a non-negative integer, got '" + v + "'");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError(key + " out of range: '" + v + "'");
    }
}

inline double parse_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size() || v.empty())
        throw ConfigError(key + " must be a number, got '" + v + "'");
    return d;
}

} // namespace detail

// Apply one key/value pair; throws ConfigError on unknown keys or bad values.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_u64;
    if (key == "manifest") cfg.manifest = value;
    else if (key == "audio_dir") cfg.audio_dir = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "cache") cfg.cache = value;
    else if (key == "checkpoint") cfg.checkpoint = value;
    else if (key == "model") cfg.model = value;
    else if (key == "classes") cfg.classes = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "seed") cfg.seed = parse_u64(value, key);
    else if (key == "split_by_recording") cfg.split_by_recording = parse_bool(value, key);
    else if (key == "averaging") cfg.averaging = value;
    else if (key == "epochs") cfg.epochs = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "learning_rate") cfg.learning_rate = parse_double(value, key);
    else if (key == "momentum") cfg.momentum = parse_double(value, key);
    else if (key == "batch_size") cfg.batch_size = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "class_weighting") cfg.class_weighting = parse_bool(value, key);
    else if (key == "filter_cutoff_hz") cfg.filter_cutoff_hz = parse_double(value, key);
    else if (key == "filter_order") cfg.filter_order = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "target_rate_hz") cfg.target_rate_hz = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "welch_window") cfg.welch_window = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "welch_overlap") cfg.welch_overlap = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "welch_fft") cfg.welch_fft = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "skip_bad") cfg.skip_bad = parse_bool(value, key);
    else throw ConfigError("unknown key '" + key + "'");
}

// Parse `key = value` lines; `#` starts a comment anywhere on a line.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: line " + std::to_string(lineno) + ": empty key");
        try {
            apply_config_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config: line " + std::to_string(lineno) + ": " +
                              std::string(e.what()));
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace hsc::cli
