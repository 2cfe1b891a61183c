#include "qismet/sampling.hpp"

namespace qismet {

namespace {

Eigen::VectorXd random_vector(Rng& rng, int dim, double bound) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.next_in(-bound, bound);
    return v;
}

std::vector<Eigen::VectorXd> axis_vectors(int dim, double bound) {
    std::vector<Eigen::VectorXd> head;
    for (int s : {+1, -1})
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
            v[i] = s * bound;
            head.push_back(v);
        }
    return head;
}

} // namespace

std::vector<Eigen::VectorXd> sample_vectors(int dim, int count, double bound,
                                            std::uint64_t seed) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (const auto& v : axis_vectors(dim, bound)) {
        if (static_cast<int>(out.size()) >= count) return out;
        out.push_back(v);
    }
    Rng rng(seed ^ 0x76656374ULL);
    while (static_cast<int>(out.size()) < count) out.push_back(random_vector(rng, dim, bound));
    return out;
}

std::vector<VectorPair> sample_vector_pairs(int dim, int count, double bound,
                                            std::uint64_t seed) {
    std::vector<VectorPair> out;
    out.reserve(static_cast<std::size_t>(count));
    // All ordered axis pairs (e_i, e_j), positive orientation.
    for (int i = 0; i < dim && static_cast<int>(out.size()) < count; ++i)
        for (int j = 0; j < dim && static_cast<int>(out.size()) < count; ++j) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
            Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
            a[i] = bound;
            b[j] = bound;
            out.push_back({a, b});
        }
    Rng rng(seed ^ 0x70616972ULL);
    while (static_cast<int>(out.size()) < count)
        out.push_back({random_vector(rng, dim, bound), random_vector(rng, dim, bound)});
    return out;
}

std::vector<VectorPair> sample_diagonal_pairs(int dim, int count, double bound,
                                              std::uint64_t seed) {
    std::vector<VectorPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (const auto& v : axis_vectors(dim, bound)) {
        if (static_cast<int>(out.size()) >= count) return out;
        out.push_back({v, v});
    }
    Rng rng(seed ^ 0x64696167ULL);
    while (static_cast<int>(out.size()) < count) {
        Eigen::VectorXd v = random_vector(rng, dim, bound);
        out.push_back({v, v});
    }
    return out;
}

std::vector<VectorTriple> sample_vector_triples(int dim, int count, double bound,
                                                std::uint64_t seed) {
    std::vector<VectorTriple> out;
    out.reserve(static_cast<std::size_t>(count));
    // Axis triples (e_i, e_j, e_k) up front.
    for (int i = 0; i < dim && static_cast<int>(out.size()) < count; ++i)
        for (int j = 0; j < dim && static_cast<int>(out.size()) < count; ++j)
            for (int k = 0; k < dim && static_cast<int>(out.size()) < count; ++k) {
                Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
                Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
                Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
                a[i] = bound;
                b[j] = bound;
                c[k] = bound;
                out.push_back({a, b, c});
            }
    Rng rng(seed ^ 0x74726970ULL);
    while (static_cast<int>(out.size()) < count)
        out.push_back({random_vector(rng, dim, bound), random_vector(rng, dim, bound),
                       random_vector(rng, dim, bound)});
    return out;
}

} // namespace qismet
