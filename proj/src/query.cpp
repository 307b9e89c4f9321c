#include "qam/query.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qam/textutil.hpp"

namespace qam {

using nlohmann::json;

std::string to_string(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::equals:
        return "equals";
    case ConstraintKind::at_most:
        return "at_most";
    case ConstraintKind::at_least:
        return "at_least";
    case ConstraintKind::between:
        return "between";
    case ConstraintKind::around:
        return "around";
    }
    return "unknown";
}

ConstraintKind constraint_kind_from_string(const std::string& name) {
    if (name == "equals")
        return ConstraintKind::equals;
    if (name == "at_most")
        return ConstraintKind::at_most;
    if (name == "at_least")
        return ConstraintKind::at_least;
    if (name == "between")
        return ConstraintKind::between;
    if (name == "around")
        return ConstraintKind::around;
    throw QueryError("unknown constraint kind: " + name);
}

Constraint Constraint::equals(std::string field, std::string value) {
    Constraint c;
    c.field = std::move(field);
    c.kind = ConstraintKind::equals;
    c.categorical_value = normalize_categorical(value);
    return c;
}

Constraint Constraint::at_most(std::string field, double bound) {
    Constraint c;
    c.field = std::move(field);
    c.kind = ConstraintKind::at_most;
    c.numeric_high = bound;
    return c;
}

Constraint Constraint::at_least(std::string field, double bound) {
    Constraint c;
    c.field = std::move(field);
    c.kind = ConstraintKind::at_least;
    c.numeric_low = bound;
    return c;
}

Constraint Constraint::between(std::string field, double low, double high) {
    Constraint c;
    c.field = std::move(field);
    c.kind = ConstraintKind::between;
    c.numeric_low = low;
    c.numeric_high = high;
    return c;
}

Constraint Constraint::around(std::string field, double center) {
    Constraint c;
    c.field = std::move(field);
    c.kind = ConstraintKind::around;
    c.numeric_low = center;
    return c;
}

RuleBasedDecomposer::RuleBasedDecomposer(const Catalog& catalog, DecomposerConfig config)
    : RuleBasedDecomposer(catalog.schema(), catalog.brand_values(), config) {}

RuleBasedDecomposer::RuleBasedDecomposer(AttributeSchema schema,
                                         std::vector<std::string> brand_lexicon,
                                         DecomposerConfig config)
    : schema_(std::move(schema)), brands_(std::move(brand_lexicon)), config_(config) {
    for (auto& b : brands_)
        b = normalize_categorical(b);
    // Longest first so "lego duplo" wins over "lego".
    std::sort(brands_.begin(), brands_.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size())
            return a.size() > b.size();
        return a < b;
    });
    brands_.erase(std::unique(brands_.begin(), brands_.end()), brands_.end());
}

namespace {

struct Span {
    std::size_t begin;
    std::size_t end; // half-open
};

bool overlaps(const std::vector<Span>& spans, std::size_t begin, std::size_t end) {
    for (const auto& s : spans)
        if (begin < s.end && s.begin < end)
            return true;
    return false;
}

// Applies `re` everywhere it matches outside already-consumed spans and
// hands each match to `emit`. `emit` returns false to reject the match
// (leaving the text unconsumed).
template <typename Fn>
void scan(const std::string& text, const std::regex& re, std::vector<Span>& consumed, Fn emit) {
    auto begin = std::sregex_iterator(text.begin(), text.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        std::size_t pos = static_cast<std::size_t>(it->position(0));
        std::size_t end = pos + static_cast<std::size_t>(it->length(0));
        if (overlaps(consumed, pos, end))
            continue;
        if (emit(*it))
            consumed.push_back(Span{pos, end});
    }
}

double parse_amount(const std::string& s) {
    return std::stod(s);
}

std::string escape_regex(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos)
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

const std::string kNumber = R"((\d+(?:\.\d+)?))";

} // namespace

DecomposedQuery RuleBasedDecomposer::decompose(std::string_view raw) const {
    if (trim(raw).empty())
        throw QueryError("empty query");

    DecomposedQuery result;
    result.raw = std::string(raw);

    // Lowercased working copy; same length as raw, so spans line up.
    const std::string text = to_lower(raw);
    std::vector<Span> consumed;
    std::vector<Constraint>& constraints = result.constraints;

    // --- price -----------------------------------------------------------
    static const std::regex price_between(
        R"((?:priced\s+)?between\s+\$?)" + kNumber + R"(\s+and\s+\$?)" + kNumber,
        std::regex::icase);
    static const std::regex price_budget(
        R"(within\s+a\s+budget\s+of\s+\$?)" + kNumber, std::regex::icase);
    static const std::regex price_at_most(
        R"((?:priced\s+)?(?:under|below|at\s+most|no\s+more\s+than|up\s+to|less\s+than)\s+\$?)" +
            kNumber,
        std::regex::icase);
    static const std::regex price_around(
        R"((?:priced\s+|costing\s+)?(?:around|about|approximately|roughly)\s+\$?)" + kNumber,
        std::regex::icase);

    scan(text, price_between, consumed, [&](const std::smatch& m) {
        double lo = parse_amount(m[1].str());
        double hi = parse_amount(m[2].str());
        if (lo > hi)
            std::swap(lo, hi);
        constraints.push_back(Constraint::between("price", lo, hi));
        return true;
    });
    scan(text, price_budget, consumed, [&](const std::smatch& m) {
        constraints.push_back(Constraint::at_most("price", parse_amount(m[1].str())));
        return true;
    });
    scan(text, price_at_most, consumed, [&](const std::smatch& m) {
        constraints.push_back(Constraint::at_most("price", parse_amount(m[1].str())));
        return true;
    });
    scan(text, price_around, consumed, [&](const std::smatch& m) {
        // "around" with no dollar sign reads as an age or count as easily as
        // a price; require the $ unless the phrase says "priced"/"costing".
        std::string match = m[0].str();
        if (match.find('$') == std::string::npos &&
            match.find("priced") == std::string::npos &&
            match.find("costing") == std::string::npos)
            return false;
        constraints.push_back(Constraint::around("price", parse_amount(m[1].str())));
        return true;
    });

    // --- age ---------------------------------------------------------------
    // All age phrasings produce a coverage constraint on the "age" field: the
    // product's recommended range must intersect the queried range.
    static const std::regex age_child(
        R"((?:for\s+my\s+|for\s+an?\s+)?(\d{1,2})\s*[- ]\s*year[- ]old(?:s)?)", std::regex::icase);
    static const std::regex age_kids_range(
        R"((?:for\s+)?(?:kids?|children|child|toddlers?)\s+aged?\s+(\d{1,2})\s*(?:-|to|through)\s*(\d{1,2}))",
        std::regex::icase);
    static const std::regex age_range(R"(ages?\s+(\d{1,2})\s*(?:-|to)\s*(\d{1,2}))",
                                      std::regex::icase);
    static const std::regex age_years_range(R"((\d{1,2})\s+to\s+(\d{1,2})\s+years?(?:\s+old)?)",
                                            std::regex::icase);
    static const std::regex age_open(R"(ages?\s+(\d{1,2})\s*\+)", std::regex::icase);
    static const std::regex age_up(R"((\d{1,2})\s+years?\s+and\s+up)", std::regex::icase);
    static const std::regex age_suitable(
        R"((?:suitable\s+)?for\s+(?:kids?|children)\s+aged?\s+(\d{1,2})\s*\+)", std::regex::icase);

    scan(text, age_kids_range, consumed, [&](const std::smatch& m) {
        constraints.push_back(
            Constraint::between("age", parse_amount(m[1].str()), parse_amount(m[2].str())));
        return true;
    });
    scan(text, age_suitable, consumed, [&](const std::smatch& m) {
        constraints.push_back(Constraint::at_least("age", parse_amount(m[1].str())));
        return true;
    });
    scan(text, age_range, consumed, [&](const std::smatch& m) {
        constraints.push_back(
            Constraint::between("age", parse_amount(m[1].str()), parse_amount(m[2].str())));
        return true;
    });
    scan(text, age_years_range, consumed, [&](const std::smatch& m) {
        constraints.push_back(
            Constraint::between("age", parse_amount(m[1].str()), parse_amount(m[2].str())));
        return true;
    });
    scan(text, age_child, consumed, [&](const std::smatch& m) {
        double n = parse_amount(m[1].str());
        constraints.push_back(Constraint::between("age", n, n));
        return true;
    });
    scan(text, age_open, consumed, [&](const std::smatch& m) {
        constraints.push_back(Constraint::at_least("age", parse_amount(m[1].str())));
        return true;
    });
    scan(text, age_up, consumed, [&](const std::smatch& m) {
        constraints.push_back(Constraint::at_least("age", parse_amount(m[1].str())));
        return true;
    });

    // --- rating ------------------------------------------------------------
    static const std::regex top_rated(R"(top[- ]rated)", std::regex::icase);
    scan(text, top_rated, consumed, [&](const std::smatch&) {
        constraints.push_back(Constraint::at_least("rating", config_.top_rated_threshold));
        return true;
    });

    // --- brand (catalog lexicon; never guessed) ------------------------------
    for (const auto& brand : brands_) {
        std::string b = escape_regex(brand);
        // Multi-word brands may be separated by any whitespace run.
        std::string pattern;
        for (char c : b)
            pattern += (c == ' ') ? std::string(R"(\s+)") : std::string(1, c);
        bool matched = false;
        std::regex with_prep(R"((?:from|by)\s+)" + pattern + R"(\b)", std::regex::icase);
        scan(text, with_prep, consumed, [&](const std::smatch&) {
            if (matched)
                return false;
            constraints.push_back(Constraint::equals("brand", brand));
            matched = true;
            return true;
        });
        std::regex bare(R"(\b)" + pattern + R"(\b)", std::regex::icase);
        scan(text, bare, consumed, [&](const std::smatch&) {
            if (matched)
                return false;
            constraints.push_back(Constraint::equals("brand", brand));
            matched = true;
            return true;
        });
    }

    // --- color (fixed lexicon) ----------------------------------------------
    for (const auto& color : color_lexicon()) {
        bool matched = false;
        std::regex re(R"(\b)" + color + R"(\b)", std::regex::icase);
        scan(text, re, consumed, [&](const std::smatch&) {
            if (matched)
                return false;
            constraints.push_back(Constraint::equals("color", color));
            matched = true;
            return true;
        });
    }

    // --- residual ------------------------------------------------------------
    std::string remaining = text;
    for (const auto& span : consumed)
        std::fill(remaining.begin() + static_cast<std::ptrdiff_t>(span.begin),
                  remaining.begin() + static_cast<std::ptrdiff_t>(span.end), ' ');
    std::string residual;
    for (const auto& token : split_alnum_lower(remaining)) {
        if (!residual.empty())
            residual.push_back(' ');
        residual += token;
    }
    result.semantic_residual = residual;

    // Stable constraint order regardless of grammar application order.
    std::stable_sort(constraints.begin(), constraints.end(),
                     [](const Constraint& a, const Constraint& b) { return a.field < b.field; });
    return result;
}

namespace {

bool is_token_subsequence(const std::vector<std::string>& needle,
                          const std::vector<std::string>& haystack) {
    std::size_t i = 0;
    for (const auto& tok : haystack) {
        if (i < needle.size() && needle[i] == tok)
            ++i;
    }
    return i == needle.size();
}

} // namespace

std::vector<std::string> validate_decomposition(const DecomposedQuery& d,
                                                const AttributeSchema& schema) {
    std::vector<std::string> violations;
    for (const auto& c : d.constraints) {
        auto type = schema.type_of(c.field);
        if (!type) {
            violations.push_back("unknown field: " + c.field);
            continue;
        }
        switch (c.kind) {
        case ConstraintKind::equals:
            if (*type != FieldType::categorical)
                violations.push_back("equals on numeric field: " + c.field);
            if (!c.categorical_value || c.categorical_value->empty())
                violations.push_back("equals without categorical value on " + c.field);
            if (c.numeric_low || c.numeric_high)
                violations.push_back("equals with numeric bounds on " + c.field);
            break;
        case ConstraintKind::at_most:
            if (*type != FieldType::numeric)
                violations.push_back("at_most on categorical field: " + c.field);
            if (!c.numeric_high || c.numeric_low)
                violations.push_back("at_most requires exactly one upper bound on " + c.field);
            break;
        case ConstraintKind::at_least:
            if (*type != FieldType::numeric)
                violations.push_back("at_least on categorical field: " + c.field);
            if (!c.numeric_low || c.numeric_high)
                violations.push_back("at_least requires exactly one lower bound on " + c.field);
            break;
        case ConstraintKind::between:
            if (*type != FieldType::numeric)
                violations.push_back("between on categorical field: " + c.field);
            if (!c.numeric_low || !c.numeric_high)
                violations.push_back("between requires both bounds on " + c.field);
            else if (*c.numeric_low > *c.numeric_high)
                violations.push_back("inverted range on " + c.field);
            break;
        case ConstraintKind::around:
            if (*type != FieldType::numeric)
                violations.push_back("around on categorical field: " + c.field);
            if (!c.numeric_low || c.numeric_high)
                violations.push_back("around requires a single center on " + c.field);
            break;
        }
    }
    if (!is_token_subsequence(split_alnum_lower(d.semantic_residual), split_alnum_lower(d.raw)))
        violations.push_back("residual is not a token subsequence of the raw query");
    return violations;
}

json constraint_to_json(const Constraint& c) {
    json doc;
    doc["field"] = c.field;
    doc["kind"] = to_string(c.kind);
    switch (c.kind) {
    case ConstraintKind::equals:
        doc["value"] = c.categorical_value.value_or("");
        break;
    case ConstraintKind::at_most:
        doc["high"] = c.numeric_high.value_or(0.0);
        break;
    case ConstraintKind::at_least:
        doc["low"] = c.numeric_low.value_or(0.0);
        break;
    case ConstraintKind::between:
        doc["low"] = c.numeric_low.value_or(0.0);
        doc["high"] = c.numeric_high.value_or(0.0);
        break;
    case ConstraintKind::around:
        doc["value"] = c.numeric_low.value_or(0.0);
        break;
    }
    return doc;
}

Constraint constraint_from_json(const json& doc) {
    Constraint c;
    c.field = doc.at("field").get<std::string>();
    c.kind = constraint_kind_from_string(doc.at("kind").get<std::string>());
    switch (c.kind) {
    case ConstraintKind::equals:
        c.categorical_value = normalize_categorical(doc.at("value").get<std::string>());
        break;
    case ConstraintKind::at_most:
        c.numeric_high = doc.at("high").get<double>();
        break;
    case ConstraintKind::at_least:
        c.numeric_low = doc.at("low").get<double>();
        break;
    case ConstraintKind::between:
        c.numeric_low = doc.at("low").get<double>();
        c.numeric_high = doc.at("high").get<double>();
        break;
    case ConstraintKind::around:
        c.numeric_low = doc.at("value").get<double>();
        break;
    }
    return c;
}

json decomposition_to_json(const DecomposedQuery& d) {
    json doc;
    doc["raw"] = d.raw;
    json constraints = json::array();
    for (const auto& c : d.constraints)
        constraints.push_back(constraint_to_json(c));
    doc["constraints"] = constraints;
    doc["semantic_residual"] = d.semantic_residual;
    return doc;
}

DecomposedQuery decomposition_from_json(const json& doc) {
    DecomposedQuery d;
    d.raw = doc.at("raw").get<std::string>();
    for (const auto& c : doc.at("constraints"))
        d.constraints.push_back(constraint_from_json(c));
    d.semantic_residual = doc.at("semantic_residual").get<std::string>();
    return d;
}

ExternalDecomposer::ExternalDecomposer(std::string id, Transport transport)
    : id_(std::move(id)), transport_(std::move(transport)) {
    if (!transport_)
        throw ConfigError("external decomposer requires a transport");
}

DecomposedQuery ExternalDecomposer::decompose(std::string_view raw) const {
    if (trim(raw).empty())
        throw QueryError("empty query");
    json request;
    request["raw"] = std::string(raw);
    json response = transport_(request);
    return decomposition_from_json(response);
}

} // namespace qam
