#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/catalog.hpp"

namespace qam {

enum class ConstraintKind { equals, at_most, at_least, between, around };

std::string to_string(ConstraintKind kind);
ConstraintKind constraint_kind_from_string(const std::string& name);

// One typed predicate over a schema field.
//   equals   -> categorical_value set
//   at_most  -> numeric_high set (only)
//   at_least -> numeric_low set (only)
//   between  -> numeric_low <= numeric_high
//   around   -> center stored in numeric_low
struct Constraint {
    std::string field;
    ConstraintKind kind = ConstraintKind::equals;
    std::optional<std::string> categorical_value;
    std::optional<double> numeric_low;
    std::optional<double> numeric_high;

    static Constraint equals(std::string field, std::string value);
    static Constraint at_most(std::string field, double bound);
    static Constraint at_least(std::string field, double bound);
    static Constraint between(std::string field, double low, double high);
    static Constraint around(std::string field, double center);
};

struct DecomposedQuery {
    std::string raw;
    std::vector<Constraint> constraints;
    // Raw query with consumed constraint spans removed; lowercase tokens
    // joined by single spaces, so it is a token subsequence of `raw`.
    std::string semantic_residual;
};

// Slot for an external decomposition service (e.g. an LLM). Outputs are
// untrusted: the pipeline validates them and falls back to the rule-based
// decomposer on violation.
class Decomposer {
public:
    virtual ~Decomposer() = default;
    virtual DecomposedQuery decompose(std::string_view raw) const = 0;
    virtual std::string id() const = 0;
};

struct DecomposerConfig {
    double top_rated_threshold = 4.0; // "top-rated" -> rating at_least this
};

// Deterministic grammar over brand/color/price/age/rating phrases. The brand
// lexicon comes from the catalog; unknown brands are never invented.
class RuleBasedDecomposer final : public Decomposer {
public:
    RuleBasedDecomposer(const Catalog& catalog, DecomposerConfig config = {});
    RuleBasedDecomposer(AttributeSchema schema, std::vector<std::string> brand_lexicon,
                        DecomposerConfig config = {});

    DecomposedQuery decompose(std::string_view raw) const override;
    std::string id() const override { return "rule-based-v1"; }

private:
    AttributeSchema schema_;
    std::vector<std::string> brands_; // normalized, longest-first
    DecomposerConfig config_;
};

// Returns every invariant violation of `d` against `schema`; empty means ok.
std::vector<std::string> validate_decomposition(const DecomposedQuery& d,
                                                const AttributeSchema& schema);

// Wire shape used by external decomposers and --explain output:
// {raw, constraints: [{field, kind, value|low|high}], semantic_residual}.
nlohmann::json decomposition_to_json(const DecomposedQuery& d);
DecomposedQuery decomposition_from_json(const nlohmann::json& doc);
nlohmann::json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const nlohmann::json& doc);

// Adapts any callable speaking the wire shape into a Decomposer.
class ExternalDecomposer final : public Decomposer {
public:
    using Transport = std::function<nlohmann::json(const nlohmann::json& request)>;

    ExternalDecomposer(std::string id, Transport transport);

    DecomposedQuery decompose(std::string_view raw) const override;
    std::string id() const override { return id_; }

private:
    std::string id_;
    Transport transport_;
};

} // namespace qam
