#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/filter.hpp"
#include "qam/pipeline.hpp"
#include "qam/query.hpp"

namespace qam {

struct Judgment {
    std::string query_id;
    std::string product_id;
    bool relevant = false;
    std::string judge_id;
};

// Binary relevance oracle. The built-in implementation is deterministic;
// an LLM judge plugs in behind the same interface.
class Judge {
public:
    virtual ~Judge() = default;
    virtual bool judge(const std::string& raw_query, const DecomposedQuery& d,
                       const Product& p) const = 0;
    virtual std::string id() const = 0;
};

struct JudgeConfig {
    // Minimum count of non-stopword residual tokens that must appear in the
    // product text for semantic alignment. Queries whose residual is all
    // stopwords pass vacuously.
    std::size_t min_residual_overlap = 1;
};

// Relevant iff every constraint is satisfied under the shared FilterPolicy
// and the semantic residual overlaps the product text.
class DeterministicJudge final : public Judge {
public:
    explicit DeterministicJudge(FilterPolicy policy, JudgeConfig config = {},
                                Tokenizer tokenizer = {});

    bool judge(const std::string& raw_query, const DecomposedQuery& d,
               const Product& p) const override;
    std::string id() const override { return "deterministic-v1"; }

    const FilterPolicy& policy() const { return policy_; }

private:
    FilterPolicy policy_;
    JudgeConfig config_;
    Tokenizer tokenizer_;
};

const std::vector<std::string>& judge_stopwords();

// --- Rank metrics ------------------------------------------------------
// Lists shorter than k count the missing tail as non-relevant. Accumulation
// runs in extended precision so textbook fractions come out exact.

double precision_at_k(const std::vector<bool>& labels, int k);

// (1/min(k, total_relevant)) * sum_{i<=k} P(i) * rel(i); 0 when
// total_relevant is 0.
double ap_at_k(const std::vector<bool>& labels, int total_relevant, int k);

// Arithmetic mean; throws QueryError on an empty list.
double map_at_k(const std::vector<double>& per_query_ap);

// --- Evaluation --------------------------------------------------------

struct EvalQuery {
    std::string id;
    std::string text;
    bool has_ground_truth = false;
    std::vector<std::string> relevant_ids; // sorted ascending when present
};

struct SyntheticCorpus {
    Catalog catalog;
    std::vector<EvalQuery> queries;
};

// Seeded catalog + query-set generator. Products draw brand/color/price/age/
// rating from fixed lexicons; queries are templated constraint phrases over a
// sampled product, and ground truth is the exhaustive application of the
// deterministic relevance rule. Queries whose ground truth would be empty are
// regenerated. Byte-identical output for equal arguments.
SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, int n_products, int n_queries);

struct StrategyMetrics {
    std::map<int, double> precision;     // k -> mean P@k over included queries
    std::map<int, double> mean_ap;       // k -> mAP@k over included queries
    std::map<int, int> included_queries; // k -> queries meeting availability
    std::map<std::string, std::map<int, double>> per_query_ap;
};

struct MetricReport {
    std::vector<int> k_set;
    std::size_t query_count = 0;
    std::vector<std::string> strategy_order;
    std::map<std::string, StrategyMetrics> strategies;

    nlohmann::json to_json() const;
    static MetricReport from_json(const nlohmann::json& doc);

    // Plain-text table: rows = strategies, columns = P@k / mAP@k percentages.
    std::string render_table() const;
};

struct EvalOutputs {
    std::vector<RunRecord> runs;     // per strategy, per query, in order
    std::vector<Judgment> judgments; // pooled over all strategies
};

// Runs every strategy over every query, judges the pooled results, and
// computes the metric report. total_relevant comes from ground truth when
// the query carries one, otherwise from the pooled-union count of
// judged-relevant results. Queries with fewer than k relevant items are
// excluded from the k-level aggregates.
MetricReport evaluate(const SearchEngine& engine, const std::vector<StrategyId>& strategies,
                      const std::vector<EvalQuery>& queries, const Judge& judge,
                      const std::vector<int>& k_set, EvalOutputs* outputs = nullptr);

nlohmann::json eval_query_to_json(const EvalQuery& q);
EvalQuery eval_query_from_json(const nlohmann::json& doc);
nlohmann::json judgment_to_json(const Judgment& j);

} // namespace qam
