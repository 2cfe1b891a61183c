#ifndef QISMET_CLI_HPP
#define QISMET_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qismet {

/// One CLI invocation.  `run` executes the subcommand against the loaded
/// definitions and writes the report stream; identical configs produce
/// byte-identical records output.
struct RunConfig {
    std::string subcommand;  // verify|classify|curvature|embed-check|estimate|
                             // quasi-dense|theorem|catalog
    std::string manifold_uri;  // catalog:<name> or a file path
    std::string pair_uri;
    std::string theorem_id;

    int samples = 500;
    int pairs = 200;
    std::uint64_t seed = 42;
    double coeff_bound = 1.0;
    double window = 5.0;
    double margin = 1e-3;
    std::optional<double> tol;  // overrides the per-check default
    bool records = false;       // machine-readable JSONL instead of text
    bool force = false;
    std::optional<double> A, B, D;
};

/// Exit codes: 0 pass, 1 fail, 2 not-applicable or indeterminate,
/// 64 usage/input error (also used for file and parse errors).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace qismet

#endif // QISMET_CLI_HPP
