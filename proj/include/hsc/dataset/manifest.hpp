#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/dataset/wav.hpp"
#include "hsc/error.hpp"

namespace hsc::dataset {

struct AudioRecording {
    std::string id;
    std::vector<double> samples;
    std::uint32_t sample_rate = 0;
    ClassLabel label{};
};

struct ManifestRow {
    std::string record_id;
    ClassLabel label{};
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace detail

// Parse a manifest CSV with header `record_id,group,condition`. Blank lines
// are skipped; any malformed row fails with its line number.
inline std::vector<ManifestRow> parse_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("manifest: cannot open '" + path + "'");
    std::vector<ManifestRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const auto fields = detail::split_csv_line(t);
        if (!saw_header) {
            if (fields.size() != 3 || fields[0] != "record_id" || fields[1] != "group" ||
                fields[2] != "condition")
                throw DataError("manifest: '" + path + "' line " + std::to_string(line_no) +
                                ": expected header 'record_id,group,condition'");
            saw_header = true;
            continue;
        }
        if (fields.size() != 3)
            throw DataError("manifest: '" + path + "' line " + std::to_string(line_no) + ": got " +
                            std::to_string(fields.size()) + " fields, expected 3");
        if (fields[0].empty())
            throw DataError("manifest: '" + path + "' line " + std::to_string(line_no) +
                            ": empty record_id");
        ManifestRow row;
        row.record_id = fields[0];
        try {
            row.label = ClassLabel{parse_group(fields[1]), parse_condition(fields[2])};
        } catch (const DataError& e) {
            throw DataError("manifest: '" + path + "' line " + std::to_string(line_no) + ": " +
                            e.what());
        }
        rows.push_back(std::move(row));
    }
    if (!saw_header) throw DataError("manifest: '" + path + "' is empty");
    return rows;
}

// Load the WAV behind one manifest row. The file is <audio_dir>/<record_id>.wav.
inline AudioRecording load_recording(const std::string& audio_dir, const ManifestRow& row) {
    const std::string path = audio_dir + "/" + row.record_id + ".wav";
    WavData wav;
    try {
        wav = read_wav(path);
    } catch (const DataError& e) {
        throw DataError("record '" + row.record_id + "': " + e.what());
    }
    AudioRecording rec;
    rec.id = row.record_id;
    rec.samples = std::move(wav.samples);
    rec.sample_rate = wav.sample_rate;
    rec.label = row.label;
    return rec;
}

// Load every manifest row strictly, in manifest order.
inline std::vector<AudioRecording> load_manifest(const std::string& manifest_path,
                                                 const std::string& audio_dir) {
    const auto rows = parse_manifest(manifest_path);
    std::vector<AudioRecording> recs;
    recs.reserve(rows.size());
    for (const auto& row : rows) recs.push_back(load_recording(audio_dir, row));
    return recs;
}

} // namespace hsc::dataset
