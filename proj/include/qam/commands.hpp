#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qam/config.hpp"

namespace qam {

// Artifact layout inside a workspace directory. Every artifact carries a
// format_version field and the catalog's version stamp where applicable.
struct Workspace {
    std::filesystem::path root;

    std::filesystem::path catalog_file() const { return root / "catalog.json"; }
    std::filesystem::path lexical_index_file() const { return root / "lexical_index.json"; }
    std::filesystem::path vector_index_file() const { return root / "vector_index.json"; }
    std::filesystem::path eval_dir() const { return root / "eval"; }
    std::filesystem::path run_file(const std::string& strategy) const {
        return eval_dir() / ("run_" + strategy + ".jsonl");
    }
    std::filesystem::path judgments_file() const { return eval_dir() / "judgments.jsonl"; }
    std::filesystem::path report_json_file() const { return eval_dir() / "report.json"; }
    std::filesystem::path report_table_file() const { return eval_dir() / "report.txt"; }
    std::filesystem::path queries_file() const { return eval_dir() / "queries.jsonl"; }
    std::filesystem::path lock_file() const { return root / ".lock"; }
};

struct EvalRequest {
    std::vector<std::string> strategies; // empty = all five
    std::string queries_path;            // JSONL {query_id, text, relevant_ids?}
    bool synthetic = false;
    int synthetic_products = 200;
    int synthetic_queries = 50;
};

// Subcommand entry points. Each returns a process exit code and reports
// through the provided streams, so tests can drive them directly.
int cmd_ingest(const Config& config, const Workspace& ws, std::ostream& out, std::ostream& err);
int cmd_index(const Config& config, const Workspace& ws, std::ostream& out, std::ostream& err);
int cmd_search(const Config& config, const Workspace& ws, const std::string& strategy,
               const std::string& query, int n, bool explain, bool fallback, std::ostream& out,
               std::ostream& err);
int cmd_eval(const Config& config, const Workspace& ws, const EvalRequest& request,
             std::ostream& out, std::ostream& err);
int cmd_report(const Workspace& ws, std::ostream& out, std::ostream& err);

} // namespace qam
