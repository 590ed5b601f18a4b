#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/dataset/segment.hpp"
#include "hsc/error.hpp"
#include "hsc/rng.hpp"

namespace hsc::dataset {

struct SplitPlan {
    std::uint64_t seed = 0;
    std::vector<std::string> train_ids, val_ids, test_ids;
};

// Split n items 70/15/15 by largest-remainder apportionment: each set gets
// the floor of its exact share, and leftover items go to the sets with the
// largest fractional remainders (ties favor test, then val). Integer
// arithmetic throughout, so the result is exact for every n. This keeps every
// set within one item of its share, which a plain floor/floor/remainder rule
// does not (e.g. n=13 would put 3 of 13 items in test, off by more than 1/13).
inline std::array<std::size_t, 3> apportion_70_15_15(std::size_t n) {
    constexpr std::array<std::size_t, 3> pct = {70, 15, 15}; // train, val, test
    std::array<std::size_t, 3> counts{};
    std::array<std::size_t, 3> frac{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t scaled = pct[i] * n;
        counts[i] = scaled / 100;
        frac[i] = scaled % 100;
        assigned += counts[i];
    }
    std::size_t rem = n - assigned;
    while (rem > 0) {
        // Pick the set with the largest remaining fraction; tie order test > val > train.
        std::size_t best = 2;
        for (std::size_t i = 2; i-- > 0;)
            if (frac[i] > frac[best]) best = i;
        counts[best] += 1;
        frac[best] = 0;
        --rem;
    }
    return counts;
}

// Stratified 70/15/15 split over segments, deterministic under the seed.
// Stratification runs per class of the chosen mode, and every class of that
// mode must be present. With by_recording, whole recordings are apportioned
// instead, so sibling segments never straddle sets; the plan still lists
// segment ids.
inline SplitPlan make_split(const std::vector<Segment>& segments, std::uint64_t seed,
                            ClassMode mode, bool by_recording = false) {
    const std::size_t C = class_count(mode);

    SplitPlan plan;
    plan.seed = seed;
    Rng rng(seed);

    if (!by_recording) {
        std::vector<std::vector<std::size_t>> by_class(C);
        for (std::size_t i = 0; i < segments.size(); ++i)
            by_class[segments[i].label.index(mode)].push_back(i);
        for (std::size_t c = 0; c < C; ++c)
            if (by_class[c].empty())
                throw DataError("split: no segments of class " + class_name(mode, c));
        for (std::size_t c = 0; c < C; ++c) {
            auto& idx = by_class[c];
            rng.shuffle(idx);
            const auto [nt, nv, ns] = apportion_70_15_15(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const std::string id = segments[idx[k]].id();
                if (k < nt)
                    plan.train_ids.push_back(id);
                else if (k < nt + nv)
                    plan.val_ids.push_back(id);
                else
                    plan.test_ids.push_back(id);
            }
        }
        return plan;
    }

    // Recording-level: group segment indices by source, stratify the sources.
    std::vector<std::string> order;                       // first-seen source order
    std::map<std::string, std::vector<std::size_t>> segs; // source -> segment indices
    for (std::size_t i = 0; i < segments.size(); ++i) {
        auto [it, inserted] = segs.try_emplace(segments[i].source_id);
        if (inserted) order.push_back(segments[i].source_id);
        it->second.push_back(i);
    }
    std::vector<std::vector<std::size_t>> by_class(C); // indices into `order`
    for (std::size_t r = 0; r < order.size(); ++r) {
        const Segment& first = segments[segs[order[r]].front()];
        by_class[first.label.index(mode)].push_back(r);
    }
    for (std::size_t c = 0; c < C; ++c)
        if (by_class[c].empty())
            throw DataError("split: no recordings of class " + class_name(mode, c));
    for (std::size_t c = 0; c < C; ++c) {
        auto& idx = by_class[c];
        rng.shuffle(idx);
        const auto [nt, nv, ns] = apportion_70_15_15(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto& target = k < nt ? plan.train_ids : (k < nt + nv ? plan.val_ids : plan.test_ids);
            for (std::size_t si : segs[order[idx[k]]]) target.push_back(segments[si].id());
        }
    }
    return plan;
}

// Audit serialization: header then one `set,segment_id` row per segment.
inline void save_split(const std::string& path, const SplitPlan& plan) {
    std::ofstream os(path);
    if (!os) throw DataError("split: cannot open '" + path + "' for writing");
    os << "set,segment_id\n";
    for (const auto& id : plan.train_ids) os << "train," << id << "\n";
    for (const auto& id : plan.val_ids) os << "val," << id << "\n";
    for (const auto& id : plan.test_ids) os << "test," << id << "\n";
    if (!os) throw DataError("split: write to '" + path + "' failed");
}

inline SplitPlan load_split(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("split: cannot open '" + path + "'");
    SplitPlan plan;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "set,segment_id")
                throw DataError("split: '" + path + "' line 1: expected header 'set,segment_id'");
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("split: '" + path + "' line " + std::to_string(line_no) +
                            ": missing comma");
        const std::string set = line.substr(0, comma);
        const std::string id = line.substr(comma + 1);
        if (set == "train")
            plan.train_ids.push_back(id);
        else if (set == "val")
            plan.val_ids.push_back(id);
        else if (set == "test")
            plan.test_ids.push_back(id);
        else
            throw DataError("split: '" + path + "' line " + std::to_string(line_no) +
                            ": unknown set '" + set + "'");
    }
    return plan;
}

} // namespace hsc::dataset
