#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qam {

// One entry of a ranked result list. Ranks are 1-based; within a list the
// order is (score descending, product_id ascending) and ranks are contiguous.
struct RankedResult {
    std::string product_id;
    double score = 0.0;
    int rank = 0;
};

using RankedList = std::vector<RankedResult>;

class IngestError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LookupError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class QueryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sorts (id, score) pairs into a ranked list: score descending, id ascending,
// truncated to n. Every ranking operation in the engine funnels through this
// so the tie rule is identical everywhere.
inline RankedList rank_top_n(std::vector<std::pair<std::string, double>> scored, int n) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    if (n >= 0 && scored.size() > static_cast<std::size_t>(n))
        scored.resize(static_cast<std::size_t>(n));
    RankedList out;
    out.reserve(scored.size());
    int rank = 1;
    for (auto& [id, score] : scored)
        out.push_back(RankedResult{std::move(id), score, rank++});
    return out;
}

} // namespace qam
