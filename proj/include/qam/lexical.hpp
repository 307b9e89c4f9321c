#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/catalog.hpp"
#include "qam/types.hpp"

namespace qam {

// Lowercase alphanumeric-run tokenizer. Stemming is a naive plural stripper
// and is off by default; keeping it off makes every score hand-checkable.
struct Tokenizer {
    bool lowercase = true;
    bool stem = false;

    std::vector<std::string> tokenize(std::string_view text) const;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::string product_id;
    std::uint32_t tf = 0;
};

// Term -> postings map over a fixed field selection of a catalog. Immutable
// once built; postings are sorted by product id.
class InvertedIndex {
public:
    InvertedIndex() = default;

    double bm25_score(const std::vector<std::string>& query_tokens,
                      const std::string& product_id) const;

    RankedList search(std::string_view query, int n) const;

    std::size_t doc_count() const { return doc_lengths_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    const Bm25Params& params() const { return params_; }
    const Tokenizer& tokenizer() const { return tokenizer_; }
    const std::string& catalog_stamp() const { return catalog_stamp_; }
    const std::vector<std::string>& fields() const { return fields_; }

    bool contains(const std::string& product_id) const {
        return doc_lengths_.count(product_id) > 0;
    }
    const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }

    nlohmann::json to_json() const;
    static InvertedIndex from_json(const nlohmann::json& doc);

    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

    friend InvertedIndex build_index(const Catalog& catalog,
                                     const std::vector<std::string>& fields, Bm25Params params,
                                     Tokenizer tokenizer);

private:
    std::map<std::string, std::vector<Posting>> postings_;
    std::map<std::string, std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    Bm25Params params_;
    Tokenizer tokenizer_;
    std::vector<std::string> fields_;
    std::string catalog_stamp_;
};

// Indexes the concatenation of the named text fields ("title", "description",
// "reviews") per product. Unknown field names throw ConfigError; an empty
// catalog throws IngestError.
InvertedIndex build_index(const Catalog& catalog, const std::vector<std::string>& fields,
                          Bm25Params params = {}, Tokenizer tokenizer = {});

double bm25_score(const InvertedIndex& index, const std::vector<std::string>& query_tokens,
                  const std::string& product_id);

// Top-n by BM25, ties broken by ascending product id; zero-score documents
// are never returned.
RankedList search_keyword(const InvertedIndex& index, std::string_view query, int n);

// Concatenated text of the selected fields for one product; shared with the
// vector index builder so both sides index identical text.
std::string gather_product_text(const Product& p, const std::vector<std::string>& fields);

} // namespace qam
