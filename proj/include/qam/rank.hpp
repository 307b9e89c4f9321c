#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/catalog.hpp"
#include "qam/lexical.hpp"
#include "qam/types.hpp"

namespace qam {

// Joint (query, product) relevance scorer; higher is more relevant.
class InteractionScorer {
public:
    virtual ~InteractionScorer() = default;
    virtual double score(std::string_view query, const Product& p) const = 0;
    virtual std::string id() const = 0;
};

struct OverlapScorerWeights {
    double f1_weight = 0.7;
    double title_weight = 0.3;
};

// Deterministic stand-in for a cross-encoder:
//   f1_weight * token-overlap F1(query, title+description+reviews)
// + title_weight * fraction of distinct query tokens found in the title.
// Result is in [0, 1].
class TokenOverlapScorer final : public InteractionScorer {
public:
    explicit TokenOverlapScorer(OverlapScorerWeights weights = {}, Tokenizer tokenizer = {});

    double score(std::string_view query, const Product& p) const override;
    std::string id() const override { return "token-overlap-v1"; }

private:
    OverlapScorerWeights weights_;
    Tokenizer tokenizer_;
};

// Scores every candidate and returns the top n (score desc, id asc).
// A candidate id missing from the catalog throws LookupError.
RankedList rerank(const InteractionScorer& scorer, std::string_view query,
                  const std::vector<std::string>& candidates, const Catalog& catalog, int n);

// Reciprocal Rank Fusion: fused(d) = sum over lists containing d of
// 1 / (k_rrf + rank(d)). Documents absent from a list simply contribute
// nothing for it. Top-n by fused score, ties by ascending id.
RankedList rrf_fuse(const std::vector<RankedList>& lists, double k_rrf, int n);

// Adapter for reranker services speaking {query, passages: [string]} ->
// {scores: [number]}; rejects responses whose score count disagrees with the
// passage count.
class ExternalInteractionScorer final : public InteractionScorer {
public:
    using Transport = std::function<nlohmann::json(const nlohmann::json& request)>;

    ExternalInteractionScorer(std::string id, Transport transport,
                              std::vector<std::string> passage_fields = {"title", "description",
                                                                         "reviews"});

    double score(std::string_view query, const Product& p) const override;
    std::string id() const override { return id_; }

private:
    std::string id_;
    Transport transport_;
    std::vector<std::string> passage_fields_;
};

} // namespace qam
