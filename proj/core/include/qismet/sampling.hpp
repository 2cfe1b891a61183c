#ifndef QISMET_SAMPLING_HPP
#define QISMET_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qismet {

/// splitmix64: tiny, deterministic, platform-independent generator.
/// std::uniform_real_distribution is implementation-defined, and check
/// reports promise byte-identical reruns, so we roll the mapping by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

/// Coefficient vectors with components in [-bound, bound].  The head of the
/// list is deterministic (signed coordinate axes), the tail seeded-random;
/// canonical directions keep extreme configurations in every sample set.
std::vector<Eigen::VectorXd> sample_vectors(int dim, int count, double bound,
                                            std::uint64_t seed);

struct VectorPair {
    Eigen::VectorXd x, y;
};

/// Pairs (X, Y) with the same canonical-head scheme: all ordered pairs of
/// coordinate axes first (so probes like (e1, e1) are always present), then
/// independent uniform pairs.
std::vector<VectorPair> sample_vector_pairs(int dim, int count, double bound,
                                            std::uint64_t seed);

/// Diagonal pairs (X, X); the base values g(X, X) are then nonnegative.
std::vector<VectorPair> sample_diagonal_pairs(int dim, int count, double bound,
                                              std::uint64_t seed);

struct VectorTriple {
    Eigen::VectorXd x, y, w;
};

std::vector<VectorTriple> sample_vector_triples(int dim, int count, double bound,
                                                std::uint64_t seed);

} // namespace qismet

#endif // QISMET_SAMPLING_HPP
