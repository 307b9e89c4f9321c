#include "qam/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qam/textutil.hpp"

namespace qam {

using nlohmann::json;

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.empty())
            return;
        if (stem && current.size() > 3 && current.back() == 's' &&
            current[current.size() - 2] != 's')
            current.pop_back();
        tokens.push_back(std::move(current));
        current.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(lowercase
                                  ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                  : c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::string gather_product_text(const Product& p, const std::vector<std::string>& fields) {
    std::string text;
    auto append = [&](std::string_view part) {
        if (part.empty())
            return;
        if (!text.empty())
            text.push_back(' ');
        text += part;
    };
    for (const auto& field : fields) {
        if (field == "title") {
            append(p.title);
        } else if (field == "description") {
            append(p.description);
        } else if (field == "reviews") {
            for (const auto& r : p.reviews)
                append(r.text);
        } else {
            throw ConfigError("unknown text field: " + field +
                              " (expected title, description, or reviews)");
        }
    }
    return text;
}

InvertedIndex build_index(const Catalog& catalog, const std::vector<std::string>& fields,
                          Bm25Params params, Tokenizer tokenizer) {
    if (fields.empty())
        throw ConfigError("build_index requires at least one text field");
    if (catalog.empty())
        throw IngestError("cannot index an empty catalog");

    InvertedIndex index;
    index.params_ = params;
    index.tokenizer_ = tokenizer;
    index.fields_ = fields;
    index.catalog_stamp_ = catalog.version_stamp();

    std::uint64_t total_length = 0;
    for (const auto& p : catalog.products()) {
        auto tokens = tokenizer.tokenize(gather_product_text(p, fields));
        index.doc_lengths_[p.id] = static_cast<std::uint32_t>(tokens.size());
        total_length += tokens.size();

        std::map<std::string, std::uint32_t> tf;
        for (const auto& t : tokens)
            ++tf[t];
        for (const auto& [term, count] : tf)
            index.postings_[term].push_back(Posting{p.id, count});
    }
    // Products are iterated in id order, so postings are already sorted.
    index.avg_doc_length_ =
        index.doc_lengths_.empty()
            ? 0.0
            : static_cast<double>(total_length) / static_cast<double>(index.doc_lengths_.size());
    return index;
}

double InvertedIndex::bm25_score(const std::vector<std::string>& query_tokens,
                                 const std::string& product_id) const {
    auto dl_it = doc_lengths_.find(product_id);
    if (dl_it == doc_lengths_.end())
        throw LookupError("product not indexed: " + product_id);

    const double n_docs = static_cast<double>(doc_lengths_.size());
    const double dl = static_cast<double>(dl_it->second);

    double score = 0.0;
    for (const auto& term : query_tokens) {
        auto post_it = postings_.find(term);
        if (post_it == postings_.end())
            continue;
        const auto& postings = post_it->second;
        auto p = std::lower_bound(postings.begin(), postings.end(), product_id,
                                  [](const Posting& lhs, const std::string& id) {
                                      return lhs.product_id < id;
                                  });
        if (p == postings.end() || p->product_id != product_id)
            continue;
        const double tf = static_cast<double>(p->tf);
        const double df = static_cast<double>(postings.size());
        // Nonnegative IDF: ln(1 + (N - df + 0.5) / (df + 0.5)).
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        const double norm = params_.k1 * (1.0 - params_.b + params_.b * dl / avg_doc_length_);
        score += idf * (tf * (params_.k1 + 1.0)) / (tf + norm);
    }
    return score;
}

RankedList InvertedIndex::search(std::string_view query, int n) const {
    auto tokens = tokenizer_.tokenize(query);

    // Union of postings: only documents containing at least one query term
    // can score above zero.
    std::vector<std::string> candidates;
    for (const auto& term : tokens) {
        auto it = postings_.find(term);
        if (it == postings_.end())
            continue;
        for (const auto& posting : it->second)
            candidates.push_back(posting.product_id);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(candidates.size());
    for (auto& id : candidates) {
        double s = bm25_score(tokens, id);
        if (s > 0.0)
            scored.emplace_back(std::move(id), s);
    }
    return rank_top_n(std::move(scored), n);
}

double bm25_score(const InvertedIndex& index, const std::vector<std::string>& query_tokens,
                  const std::string& product_id) {
    return index.bm25_score(query_tokens, product_id);
}

RankedList search_keyword(const InvertedIndex& index, std::string_view query, int n) {
    if (n < 1)
        throw QueryError("result size must be >= 1");
    return index.search(query, n);
}

json InvertedIndex::to_json() const {
    json doc;
    doc["format_version"] = 1;
    doc["catalog_stamp"] = catalog_stamp_;
    doc["k1"] = params_.k1;
    doc["b"] = params_.b;
    doc["fields"] = fields_;
    doc["tokenizer"] = {{"lowercase", tokenizer_.lowercase}, {"stem", tokenizer_.stem}};
    doc["avg_doc_length"] = avg_doc_length_;
    json lengths = json::object();
    for (const auto& [id, dl] : doc_lengths_)
        lengths[id] = dl;
    doc["doc_lengths"] = lengths;
    json postings = json::object();
    for (const auto& [term, list] : postings_) {
        json entries = json::array();
        for (const auto& p : list)
            entries.push_back(json::array({p.product_id, p.tf}));
        postings[term] = entries;
    }
    doc["postings"] = postings;
    return doc;
}

InvertedIndex InvertedIndex::from_json(const json& doc) {
    if (!doc.contains("format_version") || doc["format_version"].get<int>() != 1)
        throw ConfigError("unsupported lexical index format_version");
    InvertedIndex index;
    index.catalog_stamp_ = doc.at("catalog_stamp").get<std::string>();
    index.params_.k1 = doc.at("k1").get<double>();
    index.params_.b = doc.at("b").get<double>();
    index.fields_ = doc.at("fields").get<std::vector<std::string>>();
    index.tokenizer_.lowercase = doc.at("tokenizer").at("lowercase").get<bool>();
    index.tokenizer_.stem = doc.at("tokenizer").at("stem").get<bool>();
    index.avg_doc_length_ = doc.at("avg_doc_length").get<double>();
    for (const auto& [id, dl] : doc.at("doc_lengths").items())
        index.doc_lengths_[id] = dl.get<std::uint32_t>();
    for (const auto& [term, entries] : doc.at("postings").items()) {
        auto& list = index.postings_[term];
        for (const auto& e : entries)
            list.push_back(Posting{e.at(0).get<std::string>(), e.at(1).get<std::uint32_t>()});
    }
    return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write index file: " + path.string());
    out << to_json().dump(2) << '\n';
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read index file: " + path.string());
    return from_json(json::parse(in));
}

} // namespace qam
