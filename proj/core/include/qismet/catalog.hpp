#ifndef QISMET_CATALOG_HPP
#define QISMET_CATALOG_HPP

#include <string>
#include <vector>

#include "qismet/definition.hpp"

namespace qismet {

/// A built-in, ready-to-load definition.  Entries live as ordinary files in
/// core/data/catalog and are compiled in verbatim: loading always goes
/// through parse_definition, the same path user files take.
struct CatalogEntry {
    std::string name;
    std::string provenance;
    Definition definition;

    const ManifoldEntry& primary() const { return definition.manifolds.front(); }
    bool has_embedding() const { return !definition.embeddings.empty(); }
};

std::vector<std::string> catalog_names();

/// Raw definition text of an entry (exactly the shipped file).
std::string catalog_text(const std::string& name);

CatalogEntry catalog_load(const std::string& name);

} // namespace qismet

#endif // QISMET_CATALOG_HPP
