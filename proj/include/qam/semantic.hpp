#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/catalog.hpp"
#include "qam/lexical.hpp"
#include "qam/types.hpp"

namespace qam {

// Embeds text into a fixed-dimension vector. Outputs are L2-normalized, or
// all-zero when the text has no tokens.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<double> embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::string id() const = 0;
};

// Signed feature hashing over the token bag: each token lands in one of
// `dimension` buckets with weight +1 or -1, then the vector is normalized.
// Token order never matters. The hash seed is fixed so vectors are stable
// across platforms and runs.
class HashingEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDefaultDimension = 256;
    static constexpr std::uint64_t kHashSeed = 0x716d73656d766563ULL;

    explicit HashingEmbedder(std::size_t dimension = kDefaultDimension, Tokenizer tokenizer = {});

    std::vector<double> embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }
    std::string id() const override;

private:
    std::size_t dimension_;
    Tokenizer tokenizer_;
};

// dot(a,b) / (|a||b|); 0 when either vector is zero. Dimension mismatch
// throws ConfigError. Result clamped to [-1, 1].
double cosine(const std::vector<double>& a, const std::vector<double>& b);

enum class EmbeddingGranularity {
    product,   // one vector per product over title + description + reviews
    per_review // one vector per review plus one for title + description;
               // query similarity is the max over a product's vectors
};

class VectorIndex {
public:
    VectorIndex() = default;

    const std::string& provider_id() const { return provider_id_; }
    std::size_t dimension() const { return dimension_; }
    const std::string& catalog_stamp() const { return catalog_stamp_; }
    const std::vector<std::string>& source_fields() const { return source_fields_; }
    EmbeddingGranularity granularity() const { return granularity_; }
    std::size_t size() const { return entries_.size(); }

    const std::map<std::string, std::vector<std::vector<double>>>& entries() const {
        return entries_;
    }

    // Max cosine between `query_vec` and the product's vectors.
    double similarity(const std::string& product_id, const std::vector<double>& query_vec) const;

    nlohmann::json to_json() const;
    static VectorIndex from_json(const nlohmann::json& doc);

    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

    friend VectorIndex build_vector_index(const Catalog& catalog,
                                          const EmbeddingProvider& provider,
                                          const std::vector<std::string>& fields,
                                          EmbeddingGranularity granularity);

private:
    std::map<std::string, std::vector<std::vector<double>>> entries_;
    std::string provider_id_;
    std::size_t dimension_ = 0;
    std::vector<std::string> source_fields_;
    EmbeddingGranularity granularity_ = EmbeddingGranularity::product;
    std::string catalog_stamp_;
};

VectorIndex build_vector_index(const Catalog& catalog, const EmbeddingProvider& provider,
                               const std::vector<std::string>& fields = {"title", "description",
                                                                         "reviews"},
                               EmbeddingGranularity granularity = EmbeddingGranularity::product);

// Exact top-n by cosine over `candidates` (or the whole index when null);
// ties broken by ascending product id. The provider must match the one the
// index was built with.
RankedList search_semantic(const VectorIndex& index, const EmbeddingProvider& provider,
                           std::string_view query_text, int n,
                           const std::vector<std::string>* candidates = nullptr);

// Adapter for external embedding services speaking the batch wire shape
// {texts: [string]} -> {vectors: [[number]]}. Vector count and dimension are
// validated on every response.
class ExternalEmbeddingProvider final : public EmbeddingProvider {
public:
    using Transport = std::function<nlohmann::json(const nlohmann::json& request)>;

    ExternalEmbeddingProvider(std::string id, std::size_t dimension, Transport transport);

    std::vector<double> embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }
    std::string id() const override { return id_; }

private:
    std::string id_;
    std::size_t dimension_;
    Transport transport_;
};

} // namespace qam
