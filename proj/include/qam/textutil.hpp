#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qam {

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
        --end;
    return std::string(s.substr(begin, end - begin));
}

// Canonical form for categorical values (brand, color, categories):
// lowercased, whitespace-trimmed, inner runs of whitespace collapsed.
inline std::string normalize_categorical(std::string_view s) {
    std::string lowered = to_lower(trim(s));
    std::string out;
    out.reserve(lowered.size());
    bool in_space = false;
    for (char c : lowered) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty())
            out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

// Splits into maximal alphanumeric runs, lowercased. This is the tokenization
// every text-matching component shares; see lexical::Tokenizer for the
// configurable wrapper.
inline std::vector<std::string> split_alnum_lower(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

// FNV-1a, 64-bit. Used for version stamps and the hashing embedder; the seed
// makes the embedder's bucket assignment explicit and reproducible.
constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kFnvOffsetBasis) {
    std::uint64_t hash = seed;
    for (char c : data) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= kFnvPrime;
    }
    return hash;
}

inline std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

// Fixed color vocabulary shared by attribute extraction and the query grammar.
inline const std::vector<std::string>& color_lexicon() {
    static const std::vector<std::string> colors = {
        "black", "white",  "red",    "blue", "green",  "yellow", "pink",
        "purple", "orange", "brown", "grey", "gray",   "silver", "gold",
        "beige",  "navy",   "teal",  "ivory", "maroon", "turquoise"};
    return colors;
}

} // namespace qam
