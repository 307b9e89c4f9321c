#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qam/types.hpp"

namespace qam {

struct Review {
    std::string product_id;
    std::string text;
    std::optional<double> rating; // [0, 5] when present
};

struct Product {
    std::string id;
    std::string title;
    std::string description;
    std::optional<std::string> brand; // normalized (lowercase, trimmed)
    std::optional<std::string> color; // normalized
    std::optional<double> price;      // >= 0 when present
    std::optional<double> rating;     // [0, 5] when present
    std::optional<int> min_age;       // years; min_age <= max_age when both present
    std::optional<int> max_age;
    std::vector<std::string> categories; // normalized
    std::vector<Review> reviews;
};

// Returns every invariant violation; empty means the record is well-formed.
std::vector<std::string> validate_product(const Product& p);

enum class FieldType { categorical, numeric };

// Declares which fields constraints may reference and how they compare.
// "age" is the numeric field backing the min_age/max_age coverage check.
struct AttributeSchema {
    std::map<std::string, FieldType> fields;

    static AttributeSchema standard();

    bool declares(const std::string& field) const { return fields.count(field) > 0; }
    std::optional<FieldType> type_of(const std::string& field) const;
};

struct IngestStats {
    std::size_t records_seen = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<std::string> warnings;
};

// Immutable after ingest; products are held sorted by id so iteration order
// is a pure function of the id set.
class Catalog {
public:
    Catalog() : schema_(AttributeSchema::standard()) {}
    explicit Catalog(AttributeSchema schema) : schema_(std::move(schema)) {}

    // Rejects duplicates (returns false) and keeps the store sorted.
    bool insert(Product p);

    const Product* find(const std::string& id) const;
    const Product& at(const std::string& id) const; // throws LookupError

    const std::vector<Product>& products() const { return products_; }
    std::vector<std::string> ids() const;
    std::size_t size() const { return products_.size(); }
    bool empty() const { return products_.empty(); }

    const AttributeSchema& schema() const { return schema_; }

    // Distinct normalized brand values, sorted; feeds the query grammar's
    // brand lexicon.
    std::vector<std::string> brand_values() const;

    // Content hash of the canonical serialization. Indexes record this stamp
    // and refuse to pair with a catalog that hashes differently.
    std::string version_stamp() const;

    nlohmann::json to_json() const;
    static Catalog from_json(const nlohmann::json& doc);

private:
    std::vector<Product> products_;
    AttributeSchema schema_;
};

enum class CatalogFormat { jsonl, csv };

// CSV ingestion requires an explicit column mapping (product field -> column
// header); nothing is inferred from header names.
struct CsvMapping {
    std::map<std::string, std::string> field_to_column;

    static CsvMapping load(const std::filesystem::path& path);
};

// Loads a catalog file. Malformed records are counted in `stats` and skipped;
// an unreadable file or a file with zero valid records throws IngestError.
Catalog ingest_catalog(const std::filesystem::path& path, CatalogFormat format,
                       IngestStats* stats = nullptr, const CsvMapping* mapping = nullptr);

struct ExtractedAttributes {
    std::optional<std::string> brand;
    std::optional<std::string> color;
    std::optional<int> min_age;
    std::optional<int> max_age;

    bool empty() const { return !brand && !color && !min_age && !max_age; }
};

// Pattern-based attribute extraction from free text ("Ages 5-8", "by LEGO").
// Fields with no matching pattern stay absent.
ExtractedAttributes extract_attributes(std::string_view description, std::string_view title);

} // namespace qam
