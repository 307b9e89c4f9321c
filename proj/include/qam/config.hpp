#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qam/filter.hpp"
#include "qam/lexical.hpp"
#include "qam/pipeline.hpp"
#include "qam/semantic.hpp"

namespace qam {

// Flat key=value configuration. Every key has a default, so an absent or
// empty file is a valid configuration. Unknown keys are rejected rather than
// silently ignored.
struct Config {
    std::string catalog_path = "data/sample_catalog.jsonl";
    std::string catalog_format = "jsonl"; // jsonl | csv
    std::string csv_mapping_path;

    std::vector<std::string> lexical_fields = {"title", "description"};
    std::vector<std::string> semantic_fields = {"title", "description", "reviews"};

    double bm25_k1 = 1.2;
    double bm25_b = 0.75;
    bool tokenizer_stem = false;

    std::string embedding_provider = "hashing";
    int embedding_dimension = 256;
    std::string embedding_granularity = "product"; // product | per_review

    double filter_numeric_slack = 0.20;
    double filter_around_slack = 0.20;
    std::string filter_missing_field = "exclude"; // exclude | include
    bool filter_age_slack = false;

    double top_rated_threshold = 4.0;
    std::size_t judge_min_overlap = 1;

    double rrf_k = 60.0;
    int keyword_shortlist = 50;
    int semantic_shortlist = 50;
    int qam_shortlist = 50;
    int result_size = 10;

    std::vector<int> k_set = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::uint64_t seed = 42;

    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text); // throws ConfigError

    FilterPolicy filter_policy() const;
    Bm25Params bm25_params() const;
    Tokenizer tokenizer() const;
    EngineDefaults engine_defaults() const;
    EmbeddingGranularity granularity() const;
};

} // namespace qam
