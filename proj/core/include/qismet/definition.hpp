#ifndef QISMET_DEFINITION_HPP
#define QISMET_DEFINITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "qismet/qisom.hpp"
#include "qismet/structure.hpp"

namespace qismet {

/// Parsed contents of one definition file: any number of manifolds (with
/// optional structures) and embeddings between them.
///
/// File format (plain text, line-based sections; '#' starts a comment):
///
///   [manifold]
///   name = m1
///   dim = 3
///   coords = x, y, z
///   domain = x:(-inf,inf) y:(1,2) z:(-inf,inf)!0
///
///   [metric]              # or [frame] with orthonormal = true
///   g(1,1) = y^2/4 + 1/4  # symmetric completion automatic; unset = 0
///   ...
///
///   [structure]
///   xi = (0, 0, 2)
///   eta = (-y/2, 0, 1/2)
///   phi(2,1) = -1         # column j = components of phi(d_j); unset = 0
///
///   [embedding]           # source = enclosing manifold
///   target = m2           # may reference a manifold defined later
///   F = (x, y, z)
///   J(1,1) = y/2
///   A = 2
///   B = 1
///   D = 3                 # optional
///
/// Indices are 1-based.
struct Definition {
    struct EmbeddingBlock {
        std::string source;
        std::string target;
        std::vector<Expr> F;
        ExprMatrix J;
        double A = 1.0;
        double B = 0.0;
        std::optional<double> D;
    };

    std::vector<ManifoldEntry> manifolds;
    std::vector<EmbeddingBlock> embeddings;

    const ManifoldEntry* find(const std::string& name) const;

    /// Resolve embedding block `idx` against the manifolds in this file.
    Embedding make_embedding(std::size_t idx = 0) const;
};

Definition parse_definition(const std::string& text);

/// Canonical text form; printing is a fixed point of parse-then-print.
std::string print_definition(const Definition& def);

} // namespace qismet

#endif // QISMET_DEFINITION_HPP
