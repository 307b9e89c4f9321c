#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/catalog.hpp"
#include "qam/filter.hpp"
#include "qam/lexical.hpp"
#include "qam/query.hpp"
#include "qam/rank.hpp"
#include "qam/semantic.hpp"
#include "qam/types.hpp"

namespace qam {

// The five retrieval strategies.
enum class StrategyId { keyword, semantic, rerank, hybrid, qam };

std::string to_string(StrategyId id);
// Throws QueryError listing the valid names on unknown input.
StrategyId strategy_from_string(const std::string& name);
const std::vector<StrategyId>& all_strategies();

struct EngineDefaults {
    int result_size = 10;
    int keyword_shortlist = 50; // list fed into hybrid fusion
    int semantic_shortlist = 50;
    int qam_shortlist = 50; // cap on candidates reranked after filtering
    double rrf_k = 60.0;
    bool fallback_unfiltered = false; // rescue mode when the filter empties
};

// Per-query audit record: what was decomposed, how many candidates survived
// each stage, and anything unusual that happened.
struct StageTrace {
    std::vector<Constraint> constraints;
    std::string semantic_residual;
    std::size_t filtered_count = 0;
    std::map<std::string, std::size_t> stage_counts;
    std::vector<std::string> flags; // "filter_empty", "fallback_unfiltered",
                                    // "decomposer_fallback", "exhausted"

    bool has_flag(std::string_view flag) const;
};

nlohmann::json trace_to_json(const StageTrace& trace);

struct SearchOutput {
    RankedList results;
    StageTrace trace;
};

// Owns the catalog and both indexes; immutable after construction, so
// concurrent searches are safe. Construction fails if the index stamps do
// not all match the catalog.
class SearchEngine {
public:
    SearchEngine(Catalog catalog, InvertedIndex lexical, VectorIndex vectors,
                 std::shared_ptr<const EmbeddingProvider> provider,
                 std::shared_ptr<const InteractionScorer> scorer, FilterPolicy policy,
                 EngineDefaults defaults = {},
                 std::shared_ptr<const Decomposer> external_decomposer = nullptr);

    SearchOutput search(StrategyId strategy, std::string_view query, int n) const;

    // Decomposition plus stage candidate counts, skipping the final ranking.
    SearchOutput explain(std::string_view query) const;

    // The decomposition the qam strategy would use: the external decomposer
    // when set and valid, otherwise the rule-based grammar.
    DecomposedQuery decompose_checked(std::string_view query,
                                      std::vector<std::string>* flags = nullptr) const;

    const Catalog& catalog() const { return catalog_; }
    const FilterPolicy& policy() const { return policy_; }
    const EngineDefaults& defaults() const { return defaults_; }
    const InvertedIndex& lexical_index() const { return lexical_; }
    const VectorIndex& vector_index() const { return vectors_; }

private:
    Catalog catalog_;
    InvertedIndex lexical_;
    VectorIndex vectors_;
    std::shared_ptr<const EmbeddingProvider> provider_;
    std::shared_ptr<const InteractionScorer> scorer_;
    FilterPolicy policy_;
    EngineDefaults defaults_;
    RuleBasedDecomposer rule_decomposer_;
    std::shared_ptr<const Decomposer> external_decomposer_;

    SearchOutput search_qam(std::string_view query, int n) const;
};

// One run-file line: {query_id, strategy, results, trace}.
struct RunRecord {
    std::string query_id;
    StrategyId strategy = StrategyId::keyword;
    RankedList results;
    StageTrace trace;
};

nlohmann::json run_record_to_json(const RunRecord& record);

} // namespace qam
