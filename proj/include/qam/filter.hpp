#pragma once

#include <string>
#include <vector>

#include "qam/catalog.hpp"
#include "qam/query.hpp"

namespace qam {

enum class MissingFieldBehavior { exclude, include };

// Numeric tolerance applied to range constraints. The same policy object is
// shared by the filter and the deterministic judge so neither can disagree
// with the other about what "close enough" means.
struct FilterPolicy {
    double numeric_slack = 0.20; // at_most v passes field <= v*(1+slack), etc.
    double around_slack = 0.20;  // around v passes field in [v*(1-s), v*(1+s)]
    MissingFieldBehavior missing_field = MissingFieldBehavior::exclude;
    bool apply_slack_to_age = false; // age coverage is exact unless enabled
};

// Does product `p` satisfy constraint `c` under `policy`?
// Field semantics: brand/color are categorical equality, "category" matches
// any of the product's categories, price/rating compare numerically, and
// "age" checks that the product's [min_age, max_age] intersects the queried
// range. A product missing the constrained field follows
// policy.missing_field (default: excluded).
bool satisfies(const Product& p, const Constraint& c, const FilterPolicy& policy);

// Ids of products satisfying every constraint (conjunction), ascending.
// An empty constraint list returns the full id set.
std::vector<std::string> filter_catalog(const Catalog& catalog,
                                        const std::vector<Constraint>& constraints,
                                        const FilterPolicy& policy);

} // namespace qam
