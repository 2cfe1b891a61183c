#include "qismet/qisom.hpp"

#include <algorithm>
#include <cmath>

namespace qismet {

Eigen::VectorXd Embedding::map_point(const Eigen::VectorXd& p) const {
    return eval_vector(F, p);
}

Eigen::VectorXd Embedding::pushforward_at(const Eigen::VectorXd& p,
                                          const Eigen::VectorXd& v) const {
    Eigen::VectorXd q = map_point(p);
    if (!target.manifold.domain().contains(q))
        throw DefinitionError("base map leaves the target domain");
    return J.eval(p) * v;
}

namespace {

// Upper/lower sandwich lines for a base value that has already been
// canonicalized to be >= 0.
inline double upper_line(double base, double A, double B) { return A * base + B; }
inline double lower_line(double base, double A, double B) { return base / A - B; }

struct PairData {
    double u, v;
};

// Evaluate u = g1(X,Y) at p and v = g2(J X, J Y) at F(p), sign-canonicalized
// so u >= 0 (flip Y; both u and v are linear in Y).
std::vector<PairData> embedding_samples(const Embedding& E,
                                        const std::vector<Eigen::VectorXd>& points,
                                        const std::vector<VectorPair>& pairs) {
    std::vector<PairData> out;
    out.reserve(points.size() * pairs.size());
    for (const auto& p : points) {
        Eigen::MatrixXd g1 = E.source.manifold.metric_at(p);
        Eigen::VectorXd q = E.map_point(p);
        if (!E.target.manifold.domain().contains(q))
            throw DefinitionError("base map leaves the target domain");
        Eigen::MatrixXd g2 = E.target.manifold.metric_at(q);
        Eigen::MatrixXd Jp = E.J.eval(p);
        Eigen::MatrixXd pulled = Jp.transpose() * g2 * Jp;
        for (const auto& [x, y] : pairs) {
            double u = x.dot(g1 * y);
            double v = x.dot(pulled * y);
            if (u < 0.0) {
                u = -u;
                v = -v;
            }
            out.push_back({u, v});
        }
    }
    return out;
}

} // namespace

CheckReport check_embedding(const Embedding& E, const std::vector<Eigen::VectorXd>& points,
                            const std::vector<VectorPair>& pairs, double A, double B,
                            double tol) {
    CheckReport rep;
    rep.id = "embed-check";
    rep.points = static_cast<long>(points.size());
    rep.pairs = static_cast<long>(pairs.size());
    rep.tol = tol;
    rep.max_upper_violation = -std::numeric_limits<double>::infinity();
    rep.max_lower_violation = -std::numeric_limits<double>::infinity();
    if (A < 1.0 || B < 0.0) throw DefinitionError("need A >= 1 and B >= 0");

    for (const PairData& s : embedding_samples(E, points, pairs)) {
        rep.max_upper_violation =
            std::max(rep.max_upper_violation, s.v - upper_line(s.u, A, B));
        rep.max_lower_violation =
            std::max(rep.max_lower_violation, lower_line(s.u, A, B) - s.v);
    }
    rep.verdict = (rep.max_upper_violation <= tol && rep.max_lower_violation <= tol)
                      ? Verdict::Pass
                      : Verdict::Fail;
    return rep;
}

CheckReport check_embedding(const Embedding& E, const SampleSpec& spec, double tol) {
    auto points = E.source.manifold.sample_points(spec.points, spec.seed, spec.point_options);
    auto pairs = sample_vector_pairs(E.source.manifold.dim(), spec.tuples, spec.coeff_bound,
                                     spec.seed);
    CheckReport rep = check_embedding(E, points, pairs, E.A, E.B, tol);
    rep.seed = spec.seed;
    rep.coeff_bound = spec.coeff_bound;
    rep.window = spec.point_options.window;
    return rep;
}

bool check_structure_preserving(const Embedding& E,
                                const std::vector<Eigen::VectorXd>& points, double tol) {
    if (!E.source.structure || !E.target.structure)
        throw DefinitionError("structure preservation needs structures on both manifolds");
    for (const auto& p : points) {
        Eigen::VectorXd xi1 = E.source.structure->xi_at(p);
        Eigen::VectorXd q = E.map_point(p);
        Eigen::VectorXd pushed = E.pushforward_at(p, xi1);
        Eigen::VectorXd xi2 = E.target.structure->xi_at(q);
        Eigen::MatrixXd g2 = E.target.manifold.metric_at(q);
        Eigen::VectorXd diff = pushed - xi2;
        if (std::sqrt(diff.dot(g2 * diff)) > tol) return false;
    }
    return true;
}

double embedding_b_min(const Embedding& E, const std::vector<Eigen::VectorXd>& points,
                       const std::vector<VectorPair>& pairs, double A) {
    double b = 0.0;
    for (const PairData& s : embedding_samples(E, points, pairs)) {
        b = std::max(b, s.v - A * s.u);
        b = std::max(b, s.u / A - s.v);
    }
    return b;
}

ConstantsEstimate estimate_constants(const Embedding& E,
                                     const std::vector<Eigen::VectorXd>& points,
                                     const std::vector<VectorPair>& pairs) {
    std::vector<PairData> samples = embedding_samples(E, points, pairs);
    if (samples.empty()) throw DefinitionError("estimate_constants needs samples");

    auto b_min = [&](double A) {
        double b = 0.0;
        for (const PairData& s : samples) {
            b = std::max(b, s.v - A * s.u);
            b = std::max(b, s.u / A - s.v);
        }
        return b;
    };

    // Three grid levels over [1, 100], x10 resolution each; ties toward
    // smaller A (strict improvement required to move).
    double lo = 1.0, hi = 100.0, step = 0.1;
    double best_a = 1.0, best_b = b_min(1.0);
    for (int level = 0; level < 3; ++level) {
        for (double a = lo; a <= hi + 0.5 * step; a += step) {
            double aa = std::max(1.0, a);
            double b = b_min(aa);
            if (b < best_b - 0.0) {
                best_b = b;
                best_a = aa;
            }
        }
        lo = std::max(1.0, best_a - step);
        hi = std::min(100.0, best_a + step);
        step /= 10.0;
    }
    return {best_a, std::max(0.0, best_b), std::max(0.0, best_b)};
}

QuasiDenseResult check_quasi_dense(const Embedding& E,
                                   const std::vector<Eigen::VectorXd>& z_pool,
                                   const std::vector<Eigen::VectorXd>& x_pool,
                                   const std::vector<Eigen::VectorXd>& points,
                                   std::optional<double> declared_d) {
    if (z_pool.empty() || x_pool.empty() || points.empty())
        throw DefinitionError("quasi-dense check needs nonempty pools and points");

    QuasiDenseResult res;
    std::vector<Eigen::MatrixXd> pairing;  // g2(F(p)) J(p) per point
    pairing.reserve(points.size());
    for (const auto& p : points) {
        Eigen::VectorXd q = E.map_point(p);
        if (!E.target.manifold.domain().contains(q))
            throw DefinitionError("base map leaves the target domain");
        pairing.push_back(E.target.manifold.metric_at(q) * E.J.eval(p));
    }
    double d_star = -std::numeric_limits<double>::infinity();
    for (const auto& z : z_pool) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& x : x_pool) {
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& m : pairing) worst = std::max(worst, z.dot(m * x));
            best = std::min(best, worst);
        }
        d_star = std::max(d_star, best);
    }
    res.d_star = d_star;
    if (declared_d) {
        res.declared_d = *declared_d;
        res.quasi_dense = d_star <= *declared_d;
    }
    return res;
}

} // namespace qismet
