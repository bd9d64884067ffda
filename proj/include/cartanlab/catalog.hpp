#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cartanlab {

/// Bundled input document, addressable as "catalog:<name>".
struct CatalogEntry {
    std::string name;
    std::string kind;  ///< document kind, see document_kind
    std::string description;
    std::string toml;
};

/// Stable order: sorted by name.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog(std::string_view name);

}  // namespace cartanlab
