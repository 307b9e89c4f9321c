#include "qam/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qam/textutil.hpp"

namespace qam {

using nlohmann::json;

std::vector<std::string> validate_product(const Product& p) {
    std::vector<std::string> violations;
    if (p.id.empty())
        violations.push_back("empty id");
    if (p.price && *p.price < 0.0)
        violations.push_back("negative price");
    if (p.rating && (*p.rating < 0.0 || *p.rating > 5.0))
        violations.push_back("rating outside [0, 5]");
    if (p.min_age && p.max_age && *p.min_age > *p.max_age)
        violations.push_back("min_age greater than max_age");
    if (p.min_age && *p.min_age < 0)
        violations.push_back("negative min_age");
    if (p.max_age && *p.max_age < 0)
        violations.push_back("negative max_age");
    for (const auto& r : p.reviews) {
        if (r.rating && (*r.rating < 0.0 || *r.rating > 5.0)) {
            violations.push_back("review rating outside [0, 5]");
            break;
        }
    }
    return violations;
}

AttributeSchema AttributeSchema::standard() {
    AttributeSchema schema;
    schema.fields = {
        {"brand", FieldType::categorical}, {"color", FieldType::categorical},
        {"category", FieldType::categorical}, {"price", FieldType::numeric},
        {"rating", FieldType::numeric},    {"age", FieldType::numeric},
    };
    return schema;
}

std::optional<FieldType> AttributeSchema::type_of(const std::string& field) const {
    auto it = fields.find(field);
    if (it == fields.end())
        return std::nullopt;
    return it->second;
}

bool Catalog::insert(Product p) {
    auto pos = std::lower_bound(products_.begin(), products_.end(), p.id,
                                [](const Product& lhs, const std::string& id) {
                                    return lhs.id < id;
                                });
    if (pos != products_.end() && pos->id == p.id)
        return false;
    products_.insert(pos, std::move(p));
    return true;
}

const Product* Catalog::find(const std::string& id) const {
    auto pos = std::lower_bound(products_.begin(), products_.end(), id,
                                [](const Product& lhs, const std::string& key) {
                                    return lhs.id < key;
                                });
    if (pos == products_.end() || pos->id != id)
        return nullptr;
    return &*pos;
}

const Product& Catalog::at(const std::string& id) const {
    const Product* p = find(id);
    if (!p)
        throw LookupError("unknown product id: " + id);
    return *p;
}

std::vector<std::string> Catalog::ids() const {
    std::vector<std::string> out;
    out.reserve(products_.size());
    for (const auto& p : products_)
        out.push_back(p.id);
    return out;
}

std::vector<std::string> Catalog::brand_values() const {
    std::vector<std::string> brands;
    for (const auto& p : products_)
        if (p.brand && !p.brand->empty())
            brands.push_back(*p.brand);
    std::sort(brands.begin(), brands.end());
    brands.erase(std::unique(brands.begin(), brands.end()), brands.end());
    return brands;
}

namespace {

json review_to_json(const Review& r) {
    json doc;
    doc["text"] = r.text;
    if (r.rating)
        doc["rating"] = *r.rating;
    return doc;
}

json product_to_json(const Product& p) {
    json doc;
    doc["id"] = p.id;
    doc["title"] = p.title;
    doc["description"] = p.description;
    if (p.brand)
        doc["brand"] = *p.brand;
    if (p.color)
        doc["color"] = *p.color;
    if (p.price)
        doc["price"] = *p.price;
    if (p.rating)
        doc["rating"] = *p.rating;
    if (p.min_age)
        doc["min_age"] = *p.min_age;
    if (p.max_age)
        doc["max_age"] = *p.max_age;
    if (!p.categories.empty())
        doc["categories"] = p.categories;
    if (!p.reviews.empty()) {
        json reviews = json::array();
        for (const auto& r : p.reviews)
            reviews.push_back(review_to_json(r));
        doc["reviews"] = reviews;
    }
    return doc;
}

// Throws json exceptions on shape errors; ingest turns those into warnings.
Product product_from_json(const json& doc) {
    Product p;
    p.id = doc.at("id").get<std::string>();
    p.title = doc.value("title", std::string{});
    p.description = doc.value("description", std::string{});
    if (doc.contains("brand") && !doc["brand"].is_null())
        p.brand = normalize_categorical(doc["brand"].get<std::string>());
    if (doc.contains("color") && !doc["color"].is_null())
        p.color = normalize_categorical(doc["color"].get<std::string>());
    if (doc.contains("price") && !doc["price"].is_null())
        p.price = doc["price"].get<double>();
    if (doc.contains("rating") && !doc["rating"].is_null())
        p.rating = doc["rating"].get<double>();
    if (doc.contains("min_age") && !doc["min_age"].is_null())
        p.min_age = doc["min_age"].get<int>();
    if (doc.contains("max_age") && !doc["max_age"].is_null())
        p.max_age = doc["max_age"].get<int>();
    if (doc.contains("categories")) {
        for (const auto& c : doc["categories"])
            p.categories.push_back(normalize_categorical(c.get<std::string>()));
    }
    if (doc.contains("reviews")) {
        for (const auto& r : doc["reviews"]) {
            Review review;
            review.product_id = p.id;
            review.text = r.value("text", std::string{});
            if (r.contains("rating") && !r["rating"].is_null())
                review.rating = r["rating"].get<double>();
            p.reviews.push_back(std::move(review));
        }
    }
    return p;
}

// Fill brand/color/age fields the record left blank from patterns in its own
// text. Declared fields always win over extracted ones.
void enrich_from_text(Product& p) {
    ExtractedAttributes found = extract_attributes(p.description, p.title);
    if (!p.brand && found.brand)
        p.brand = found.brand;
    if (!p.color && found.color)
        p.color = found.color;
    if (!p.min_age && found.min_age)
        p.min_age = found.min_age;
    if (!p.max_age && found.max_age)
        p.max_age = found.max_age;
    // An extracted max below a declared min would violate the age invariant;
    // drop the extracted half rather than reject the record.
    if (p.min_age && p.max_age && *p.min_age > *p.max_age) {
        if (found.max_age && p.max_age == found.max_age)
            p.max_age.reset();
        else if (found.min_age && p.min_age == found.min_age)
            p.min_age.reset();
    }
}

} // namespace

std::string Catalog::version_stamp() const {
    std::uint64_t hash = kFnvOffsetBasis;
    for (const auto& p : products_)
        hash = fnv1a64(product_to_json(p).dump(), hash);
    return to_hex(hash);
}

json Catalog::to_json() const {
    json doc;
    doc["format_version"] = 1;
    doc["stamp"] = version_stamp();
    json products = json::array();
    for (const auto& p : products_)
        products.push_back(product_to_json(p));
    doc["products"] = products;
    return doc;
}

Catalog Catalog::from_json(const json& doc) {
    if (!doc.contains("format_version") || doc["format_version"].get<int>() != 1)
        throw IngestError("unsupported catalog format_version");
    Catalog catalog;
    for (const auto& entry : doc.at("products")) {
        Product p = product_from_json(entry);
        if (!catalog.insert(std::move(p)))
            throw IngestError("duplicate product id in catalog artifact");
    }
    return catalog;
}

CsvMapping CsvMapping::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read csv mapping file: " + path.string());
    CsvMapping mapping;
    std::string line;
    while (std::getline(in, line)) {
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("csv mapping line missing '=': " + stripped);
        mapping.field_to_column[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }
    return mapping;
}

namespace {

// Minimal RFC-4180 row parser (quoted fields, embedded commas and quotes).
std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::optional<double> parse_optional_double(const std::string& s) {
    std::string t = trim(s);
    if (t.empty())
        return std::nullopt;
    std::size_t used = 0;
    double value = std::stod(t, &used);
    if (used != t.size())
        throw IngestError("not a number: " + t);
    return value;
}

std::optional<int> parse_optional_int(const std::string& s) {
    std::string t = trim(s);
    if (t.empty())
        return std::nullopt;
    std::size_t used = 0;
    int value = std::stoi(t, &used);
    if (used != t.size())
        throw IngestError("not an integer: " + t);
    return value;
}

Product product_from_csv(const std::vector<std::string>& header,
                         const std::vector<std::string>& cells, const CsvMapping& mapping) {
    auto cell_for = [&](const std::string& field) -> std::optional<std::string> {
        auto it = mapping.field_to_column.find(field);
        if (it == mapping.field_to_column.end())
            return std::nullopt;
        auto col = std::find(header.begin(), header.end(), it->second);
        if (col == header.end())
            throw IngestError("mapped column not in header: " + it->second);
        std::size_t idx = static_cast<std::size_t>(col - header.begin());
        if (idx >= cells.size())
            return std::nullopt;
        return cells[idx];
    };

    Product p;
    if (auto v = cell_for("id"))
        p.id = trim(*v);
    if (auto v = cell_for("title"))
        p.title = trim(*v);
    if (auto v = cell_for("description"))
        p.description = trim(*v);
    if (auto v = cell_for("brand"); v && !trim(*v).empty())
        p.brand = normalize_categorical(*v);
    if (auto v = cell_for("color"); v && !trim(*v).empty())
        p.color = normalize_categorical(*v);
    if (auto v = cell_for("price"))
        p.price = parse_optional_double(*v);
    if (auto v = cell_for("rating"))
        p.rating = parse_optional_double(*v);
    if (auto v = cell_for("min_age"))
        p.min_age = parse_optional_int(*v);
    if (auto v = cell_for("max_age"))
        p.max_age = parse_optional_int(*v);
    if (auto v = cell_for("categories")) {
        std::stringstream ss(*v);
        std::string part;
        while (std::getline(ss, part, ';')) {
            std::string norm = normalize_categorical(part);
            if (!norm.empty())
                p.categories.push_back(norm);
        }
    }
    if (auto v = cell_for("review_text"); v && !trim(*v).empty()) {
        Review r;
        r.product_id = p.id;
        r.text = trim(*v);
        if (auto rating = cell_for("review_rating"))
            r.rating = parse_optional_double(*rating);
        p.reviews.push_back(std::move(r));
    }
    return p;
}

} // namespace

Catalog ingest_catalog(const std::filesystem::path& path, CatalogFormat format,
                       IngestStats* stats, const CsvMapping* mapping) {
    std::ifstream in(path);
    if (!in)
        throw IngestError("cannot read catalog file: " + path.string());

    IngestStats local;
    IngestStats& s = stats ? *stats : local;
    Catalog catalog;

    auto try_insert = [&](Product p, std::size_t line_no) {
        auto violations = validate_product(p);
        if (!violations.empty()) {
            ++s.rejected;
            s.warnings.push_back("line " + std::to_string(line_no) + ": record '" + p.id +
                                 "' rejected: " + violations.front());
            return;
        }
        enrich_from_text(p);
        std::string id = p.id;
        if (!catalog.insert(std::move(p))) {
            ++s.rejected;
            s.warnings.push_back("line " + std::to_string(line_no) + ": duplicate id '" + id +
                                 "' skipped");
            return;
        }
        ++s.accepted;
    };

    std::string line;
    std::size_t line_no = 0;

    if (format == CatalogFormat::jsonl) {
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty())
                continue;
            ++s.records_seen;
            try {
                try_insert(product_from_json(json::parse(line)), line_no);
            } catch (const json::exception& e) {
                ++s.rejected;
                s.warnings.push_back("line " + std::to_string(line_no) +
                                     ": malformed record: " + e.what());
            }
        }
    } else {
        if (!mapping)
            throw ConfigError("csv ingestion requires a column mapping file");
        if (!std::getline(in, line))
            throw IngestError("csv file has no header row: " + path.string());
        std::vector<std::string> header = parse_csv_row(line);
        for (auto& h : header)
            h = trim(h);
        ++line_no;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty())
                continue;
            ++s.records_seen;
            try {
                try_insert(product_from_csv(header, parse_csv_row(line), *mapping), line_no);
            } catch (const std::exception& e) {
                ++s.rejected;
                s.warnings.push_back("line " + std::to_string(line_no) +
                                     ": malformed record: " + e.what());
            }
        }
    }

    if (catalog.empty())
        throw IngestError("no valid records in catalog file: " + path.string());
    return catalog;
}

ExtractedAttributes extract_attributes(std::string_view description, std::string_view title) {
    ExtractedAttributes out;
    std::string text = std::string(title) + " " + std::string(description);

    // Age grammar: "Ages X-Y", "X to Y years", "Ages X+", "X years and up".
    static const std::regex range1(R"#(\bages?\s+(\d{1,2})\s*(?:-|to)\s*(\d{1,2})\b)#",
                                   std::regex::icase);
    static const std::regex range2(R"#(\b(\d{1,2})\s+to\s+(\d{1,2})\s+years?\b)#",
                                   std::regex::icase);
    static const std::regex open1(R"#(\bages?\s+(\d{1,2})\s*\+)#", std::regex::icase);
    static const std::regex open2(R"#(\b(\d{1,2})\s+years?\s+and\s+(?:up|older|above)\b)#",
                                  std::regex::icase);

    std::smatch m;
    if (std::regex_search(text, m, range1) || std::regex_search(text, m, range2)) {
        int lo = std::stoi(m[1].str());
        int hi = std::stoi(m[2].str());
        if (lo <= hi) {
            out.min_age = lo;
            out.max_age = hi;
        }
    } else if (std::regex_search(text, m, open1) || std::regex_search(text, m, open2)) {
        out.min_age = std::stoi(m[1].str());
    }

    // Brand: "by <ProperName>" / "from <ProperName>", capitalized token(s).
    static const std::regex brand_re(
        R"#(\b(?:by|from)\s+([A-Z][A-Za-z0-9&'-]*(?:\s+[A-Z][A-Za-z0-9&'-]*)*)\b)#");
    if (std::regex_search(text, m, brand_re))
        out.brand = normalize_categorical(m[1].str());

    // Color: first fixed-lexicon word, title scanned before description.
    for (const std::string& source :
         {to_lower(title), to_lower(description)}) {
        if (out.color)
            break;
        for (const auto& token : split_alnum_lower(source)) {
            const auto& colors = color_lexicon();
            if (std::find(colors.begin(), colors.end(), token) != colors.end()) {
                out.color = token;
                break;
            }
        }
    }
    return out;
}

} // namespace qam
