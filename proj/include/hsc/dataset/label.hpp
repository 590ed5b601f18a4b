#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "hsc/error.hpp"

namespace hsc::dataset {

enum class Group : unsigned char { A, B, C, D, E, F };
enum class Condition : unsigned char { Abnormal, Normal };

// Number of source groups and the two class views.
inline constexpr std::size_t kGroups = 6;
inline constexpr std::size_t kTwelveClasses = 12;
inline constexpr std::size_t kBinaryClasses = 2;

enum class ClassMode : unsigned char { twelve, binary };

// A recording label: source group A-F plus Normal/Abnormal condition.
// The twelve-class code is the group letter followed by the condition
// initial ("AA", "AN", ..., "FN"); class indices run group-major with the
// abnormal code first (AA=0, AN=1, BA=2, ...). The binary view collapses to
// Normal=0, Abnormal=1.
struct ClassLabel {
    Group group;
    Condition condition;

    std::string code() const {
        std::string s;
        s += static_cast<char>('A' + static_cast<unsigned char>(group));
        s += condition == Condition::Abnormal ? 'A' : 'N';
        return s;
    }

    std::size_t index12() const {
        return static_cast<std::size_t>(group) * 2 +
               (condition == Condition::Normal ? 1 : 0);
    }

    std::size_t index2() const { return condition == Condition::Abnormal ? 1 : 0; }

    std::size_t index(ClassMode mode) const {
        return mode == ClassMode::twelve ? index12() : index2();
    }

    bool operator==(const ClassLabel&) const = default;
};

inline std::size_t class_count(ClassMode mode) {
    return mode == ClassMode::twelve ? kTwelveClasses : kBinaryClasses;
}

// Display name for class index i under the given mode.
inline std::string class_name(ClassMode mode, std::size_t i) {
    if (mode == ClassMode::binary) {
        if (i == 0) return "Normal";
        if (i == 1) return "Abnormal";
        throw DataError("label: binary class index " + std::to_string(i) + " out of range");
    }
    if (i >= kTwelveClasses)
        throw DataError("label: class index " + std::to_string(i) + " out of range");
    std::string s;
    s += static_cast<char>('A' + i / 2);
    s += (i % 2 == 0) ? 'A' : 'N';
    return s;
}

inline ClassLabel label_from_index12(std::size_t i) {
    if (i >= kTwelveClasses)
        throw DataError("label: class index " + std::to_string(i) + " out of range");
    return ClassLabel{static_cast<Group>(i / 2),
                      i % 2 == 0 ? Condition::Abnormal : Condition::Normal};
}

// Inverse of ClassLabel::code(): "AA".."FN" (case tolerant).
inline ClassLabel label_from_code(const std::string& s) {
    if (s.size() == 2) {
        const char g = static_cast<char>(s[0] >= 'a' && s[0] <= 'z' ? s[0] - 'a' + 'A' : s[0]);
        const char c = static_cast<char>(s[1] >= 'a' && s[1] <= 'z' ? s[1] - 'a' + 'A' : s[1]);
        if (g >= 'A' && g <= 'F' && (c == 'A' || c == 'N'))
            return ClassLabel{static_cast<Group>(g - 'A'),
                              c == 'A' ? Condition::Abnormal : Condition::Normal};
    }
    throw DataError("label: unknown class code '" + s + "' (expected group A-F + A/N, e.g. AN)");
}

inline Group parse_group(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'F')
        return static_cast<Group>(s[0] - 'A');
    if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'f')
        return static_cast<Group>(s[0] - 'a');
    throw DataError("label: unknown group '" + s + "' (expected A-F)");
}

inline Condition parse_condition(const std::string& s) {
    std::string low;
    for (char ch : s) low += static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch);
    if (low == "normal") return Condition::Normal;
    if (low == "abnormal") return Condition::Abnormal;
    throw DataError("label: unknown condition '" + s + "' (expected Normal or Abnormal)");
}

} // namespace hsc::dataset
