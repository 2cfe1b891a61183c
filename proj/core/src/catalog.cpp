#include "qismet/catalog.hpp"

#include "qismet/catalog_data.hpp"

namespace qismet {

namespace {

const char* provenance_note(std::string_view name) {
    if (name == "m1_corrected")
        return "worked-example source manifold with structure tensors fixed to satisfy "
               "the almost contact metric axioms (the printed tensors do not)";
    if (name == "m1_literal")
        return "worked-example source manifold with the structure tensors exactly as "
               "printed; fails the axiom battery (eta(xi) = 1/2, compatibility breaks)";
    if (name == "m2")
        return "worked-example target manifold: orthonormal-frame metric on the strip "
               "1 < y < 2, z != 0";
    if (name == "pair_example_5_1")
        return "worked-example quasi-isometry: identity base map on the overlap strip, "
               "frame pushforward, declared constants A = 2, B = 1";
    if (name == "sphere3")
        return "unit round 3-sphere chart with its standard Sasakian structure: "
               "Einstein (r = 6), N(1), concircularly and projectively flat";
    if (name == "euclidean3")
        return "flat baseline with eta = dz; almost contact metric but not contact; "
               "N(0) since R = 0";
    return "";
}

} // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : catalog_data::kEntries) names.emplace_back(name);
    return names;
}

std::string catalog_text(const std::string& name) {
    for (const auto& [n, text] : catalog_data::kEntries)
        if (n == name) return std::string(text);
    throw DefinitionError("unknown catalog entry '" + name + "'");
}

CatalogEntry catalog_load(const std::string& name) {
    CatalogEntry e;
    e.name = name;
    e.provenance = provenance_note(name);
    e.definition = parse_definition(catalog_text(name));
    return e;
}

} // namespace qismet
