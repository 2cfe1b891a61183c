#include <algorithm>
#include <cmath>

#include "qismet/qisom.hpp"

namespace qismet {

std::optional<TheoremId> theorem_id_from_string(const std::string& s) {
    for (TheoremId id : all_theorem_ids())
        if (s == theorem_id_name(id)) return id;
    return std::nullopt;
}

const char* theorem_id_name(TheoremId id) {
    switch (id) {
        case TheoremId::T3_1_1: return "T3.1.1";
        case TheoremId::T3_1_2: return "T3.1.2";
        case TheoremId::T3_1_3: return "T3.1.3";
        case TheoremId::T3_1_4: return "T3.1.4";
        case TheoremId::T4_1: return "T4.1";
        case TheoremId::C4_1: return "C4.1";
        case TheoremId::C4_2: return "C4.2";
        case TheoremId::T4_2: return "T4.2";
        case TheoremId::T4_3: return "T4.3";
        case TheoremId::T4_4: return "T4.4";
        case TheoremId::R4_1: return "R4.1";
        case TheoremId::T5_2_1: return "T5.2.1";
        case TheoremId::T5_2_2: return "T5.2.2";
        case TheoremId::T6_1: return "T6.1";
    }
    return "?";
}

std::vector<TheoremId> all_theorem_ids() {
    return {TheoremId::T3_1_1, TheoremId::T3_1_2, TheoremId::T3_1_3, TheoremId::T3_1_4,
            TheoremId::T4_1,   TheoremId::C4_1,   TheoremId::C4_2,   TheoremId::T4_2,
            TheoremId::T4_3,   TheoremId::T4_4,   TheoremId::R4_1,   TheoremId::T5_2_1,
            TheoremId::T5_2_2, TheoremId::T6_1};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Accumulates sandwich violations.  `add` applies the sign
/// canonicalization described at check_embedding (flip the sample so the
/// base value is nonnegative; middles are linear in the flipped slot, so
/// flipping base and middle together is the flipped sample's check).
struct Violations {
    double upper = -kInf;
    double lower = -kInf;
    long count = 0;

    void add(double base, double middle, double A, double B) {
        if (base < 0.0) {
            base = -base;
            middle = -middle;
        }
        add_literal(base / A - B, middle, A * base + B);
    }

    void add_literal(double lo, double middle, double hi) {
        upper = std::max(upper, middle - hi);
        lower = std::max(lower, lo - middle);
        ++count;
    }
};

struct Context {
    const Embedding& E;
    const TheoremOptions& opt;
    double A, B;
    std::optional<double> D;
    int dim;
    double n;  // dim = 2n+1

    std::vector<Eigen::VectorXd> points;
    std::vector<VectorTriple> triples;
    std::vector<CurvatureBundle> bundles;   // source curvature at p
    std::vector<Eigen::MatrixXd> pulled;    // J^T g2(F(p)) J
    std::vector<Eigen::MatrixXd> Jmat;      // J(p)
    std::vector<Eigen::MatrixXd> g2F;       // g2 at F(p)
    std::vector<Eigen::VectorXd> Fp;        // F(p)

    Context(const Embedding& e, const TheoremOptions& o) : E(e), opt(o) {
        A = opt.A_override.value_or(E.A);
        B = opt.B_override.value_or(E.B);
        D = opt.D_override ? opt.D_override : E.D;
        dim = E.source.manifold.dim();
        n = (dim - 1) / 2.0;
        points = E.source.manifold.sample_points(opt.samples.points, opt.samples.seed,
                                                 opt.samples.point_options);
        triples = sample_vector_triples(dim, opt.samples.tuples, opt.samples.coeff_bound,
                                        opt.samples.seed);
        bundles.reserve(points.size());
        for (const auto& p : points) {
            bundles.push_back(curvature_at(E.source.manifold, p));
            Eigen::VectorXd q = E.map_point(p);
            if (!E.target.manifold.domain().contains(q))
                throw DefinitionError("base map leaves the target domain");
            Eigen::MatrixXd g2 = E.target.manifold.metric_at(q);
            Eigen::MatrixXd J = E.J.eval(p);
            Fp.push_back(q);
            g2F.push_back(g2);
            Jmat.push_back(J);
            pulled.push_back(J.transpose() * g2 * J);
        }
    }

    const ContactStructure& src_structure() const {
        if (!E.source.structure)
            throw DefinitionError("theorem requires a contact structure on the source");
        return *E.source.structure;
    }

    /// eta1(R1(Y,X)W) at point index s.
    double eta_R(std::size_t s, const Eigen::VectorXd& Y, const Eigen::VectorXd& X,
                 const Eigen::VectorXd& W, const Eigen::VectorXd& eta) const {
        Eigen::VectorXd v = bundles[s].riemann_apply(Y, X, W);
        return eta.dot(v);
    }
};

struct HypothesisSet {
    std::vector<HypothesisStatus> list;
    bool all_ok = true;

    void add(const std::string& name, bool ok) {
        list.push_back({name, ok ? HypothesisState::Ok : HypothesisState::Failed});
        all_ok = all_ok && ok;
    }
    void warn(const std::string& name, bool ok) {
        list.push_back({name, ok ? HypothesisState::Ok : HypothesisState::Warning});
    }
};

bool flatness_from_bundles(DerivedKind kind, const Context& ctx, double tol) {
    double worst = 0.0;
    for (const auto& b : ctx.bundles) {
        Tensor4 low = lower_first_index(derived_tensor(kind, b), b.g);
        worst = std::max(worst, low.max_abs());
        if (worst > tol) return false;
    }
    return worst <= tol;
}

} // namespace

CheckReport check_theorem(TheoremId id, const Embedding& E, const TheoremOptions& opt) {
    Context ctx(E, opt);
    const int d = ctx.dim;

    CheckReport rep;
    rep.id = theorem_id_name(id);
    rep.points = static_cast<long>(ctx.points.size());
    rep.pairs = 0;
    rep.coeff_bound = opt.samples.coeff_bound;
    rep.window = opt.samples.point_options.window;
    rep.seed = opt.samples.seed;
    rep.tol = opt.tol;
    rep.forced = opt.force;

    HypothesisSet hyp;

    // Every theorem presumes the embedding itself satisfies Definition 3.1
    // with the constants in play.
    {
        auto pairs = sample_vector_pairs(d, opt.samples.tuples, opt.samples.coeff_bound,
                                         opt.samples.seed);
        CheckReport emb = check_embedding(E, ctx.points, pairs, ctx.A, ctx.B, opt.tol);
        hyp.add("quasi-isometric-embedding", emb.verdict == Verdict::Pass);
    }

    NkResult nk;
    bool need_structure = id != TheoremId::T6_1;
    const ContactStructure* S = nullptr;
    if (need_structure) S = &ctx.src_structure();

    auto classify_source = [&]() {
        nk = classify_nk(*S, ctx.points, opt.classify_tol);
        hyp.add("source-N(k)", nk.is_nk && !nk.indeterminate);
    };
    auto flat = [&](DerivedKind kind, const char* name) {
        hyp.add(name, flatness_from_bundles(kind, ctx, opt.flatness_tol));
    };
    auto einstein_src = [&]() {
        EinsteinFit fit = einstein_fit(*S, ctx.points, opt.classify_tol);
        hyp.add("einstein", fit.einstein);
    };
    auto sasakian_src = [&]() {
        SasakianReport s = verify_sasakian(*S, ctx.points, opt.classify_tol);
        hyp.add("sasakian", s.sasakian);
        nk.k = 1.0;  // Theorem 5.1: Sasakian <=> N(1)
    };
    auto structure_preserving = [&]() {
        bool ok = E.target.structure &&
                  check_structure_preserving(E, ctx.points, 1e-8);
        hyp.add("structure-preserving", ok);
    };
    auto flag_target_k = [&]() {
        if (!E.target.structure) {
            hyp.warn("target-N(k)-same-k", false);
            return;
        }
        auto tpoints = E.target.manifold.sample_points(
            std::min(opt.samples.points, 100), opt.samples.seed, opt.samples.point_options);
        NkResult tk = classify_nk(*E.target.structure, tpoints, opt.classify_tol);
        hyp.warn("target-N(k)-same-k",
                 tk.is_nk && std::abs(tk.k - nk.k) <= std::max(opt.classify_tol, 1e-6));
    };

    switch (id) {
        case TheoremId::T3_1_1:
        case TheoremId::T3_1_2:
        case TheoremId::T3_1_3:
        case TheoremId::T3_1_4:
            structure_preserving();
            break;
        case TheoremId::T4_1:
            classify_source();
            flat(DerivedKind::Weyl, "conformally-flat");
            flag_target_k();
            break;
        case TheoremId::C4_1:
            classify_source();
            flat(DerivedKind::Weyl, "conformally-flat");
            structure_preserving();
            hyp.add("k-nonzero", std::abs(nk.k) > opt.classify_tol);
            break;
        case TheoremId::C4_2:
            classify_source();
            flat(DerivedKind::Weyl, "conformally-flat");
            einstein_src();
            hyp.add("k-nonzero", std::abs(nk.k) > opt.classify_tol);
            break;
        case TheoremId::T4_2:
            classify_source();
            flat(DerivedKind::Concircular, "concircularly-flat");
            hyp.add("k-nonzero", std::abs(nk.k) > opt.classify_tol);
            flag_target_k();
            break;
        case TheoremId::T4_3:
            classify_source();
            flat(DerivedKind::Conharmonic, "conharmonically-flat");
            einstein_src();
            flag_target_k();
            break;
        case TheoremId::T4_4:
            classify_source();
            flat(DerivedKind::Projective, "projectively-flat");
            einstein_src();
            flag_target_k();
            break;
        case TheoremId::R4_1:
            classify_source();
            flat(DerivedKind::Weyl, "conformally-flat");
            hyp.add("D-declared", ctx.D.has_value());
            break;
        case TheoremId::T5_2_1: {
            sasakian_src();
            bool f = flatness_from_bundles(DerivedKind::Weyl, ctx, opt.flatness_tol) ||
                     flatness_from_bundles(DerivedKind::Concircular, ctx, opt.flatness_tol) ||
                     flatness_from_bundles(DerivedKind::Projective, ctx, opt.flatness_tol);
            hyp.add("flat(conformal|concircular|projective)", f);
            break;
        }
        case TheoremId::T5_2_2:
            sasakian_src();
            flat(DerivedKind::Conharmonic, "conharmonically-flat");
            einstein_src();
            break;
        case TheoremId::T6_1:
            break;
    }

    rep.hypotheses = hyp.list;
    if (!hyp.all_ok && !opt.force) {
        rep.verdict = Verdict::NotApplicable;
        return rep;
    }
    if (id == TheoremId::R4_1 && !ctx.D) {
        rep.verdict = Verdict::NotApplicable;  // nothing to evaluate against
        return rep;
    }
    // Forced runs still need the tensors the middle expressions reference.
    if ((id == TheoremId::T3_1_1 || id == TheoremId::T3_1_4 || id == TheoremId::C4_1) &&
        !E.target.structure)
        throw DefinitionError("theorem middle needs a structure on the target manifold");

    const double A = ctx.A, B = ctx.B;
    Violations v;

    auto for_each_sample = [&](auto&& fn) {
        for (std::size_t s = 0; s < ctx.points.size(); ++s)
            for (const auto& t : ctx.triples) fn(s, t);
    };

    switch (id) {
        case TheoremId::T3_1_1: {
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                Eigen::VectorXd eta2 =
                    E.target.structure->eta_at(ctx.Fp[s]);
                double base = eta1.dot(t.x);
                double middle = eta2.dot(ctx.Jmat[s] * t.x);
                v.add(base, middle, A, B);
            });
            break;
        }
        case TheoremId::T3_1_2: {
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::MatrixXd phi = S->phi_at(ctx.points[s]);
                double middle = (phi * t.x).dot(ctx.pulled[s] * t.x);
                v.add_literal(-B, middle, B);
            });
            break;
        }
        case TheoremId::T3_1_3: {
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::MatrixXd phi = S->phi_at(ctx.points[s]);
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                Eigen::MatrixXd g1 = ctx.bundles[s].g;
                double base = t.x.dot(g1 * t.y);
                double middle = (phi * t.x).dot(ctx.pulled[s] * (phi * t.y)) +
                                eta1.dot(t.x) * eta1.dot(t.y) / A;
                v.add(base, middle, A, B);
            });
            break;
        }
        case TheoremId::T3_1_4: {
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                Eigen::VectorXd eta2 = E.target.structure->eta_at(ctx.Fp[s]);
                Eigen::MatrixXd g1 = ctx.bundles[s].g;
                double e1x = eta1.dot(t.x), e1y = eta1.dot(t.y);
                double e2fx = eta2.dot(ctx.Jmat[s] * t.x);
                double e2fy = eta2.dot(ctx.Jmat[s] * t.y);
                double base = t.x.dot(g1 * t.y);
                double middle = t.x.dot(ctx.pulled[s] * t.y) - e1x * e2fy - e1y * e2fx +
                                e1x * e1y * (1.0 + 1.0 / A);
                v.add(base, middle, A, B);
            });
            break;
        }
        case TheoremId::T4_1:
        case TheoremId::C4_2:
        case TheoremId::T4_2:
        case TheoremId::T4_3:
        case TheoremId::T4_4:
        case TheoremId::T5_2_1:
        case TheoremId::T5_2_2: {
            const double k = nk.k;
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                double lambda = ctx.eta_R(s, t.y, t.x, t.w, eta1);
                double r = ctx.bundles[s].scalar;
                const double n = ctx.n;
                double coef = 1.0;
                switch (id) {
                    case TheoremId::C4_2:
                        coef = (2.0 * n * k - r / (2.0 * n) + r / (2.0 * n + 1.0)) /
                               (k * (2.0 * n - 1.0));
                        break;
                    case TheoremId::T4_2:
                        coef = r / (2.0 * n * k * (2.0 * n + 1.0));
                        break;
                    case TheoremId::T4_3:
                    case TheoremId::T5_2_2:
                        coef = 4.0 * n / (2.0 * n - 1.0);
                        break;
                    default:
                        break;
                }
                double kfac = (id == TheoremId::T5_2_1 || id == TheoremId::T5_2_2) ? 1.0 : k;
                double middle =
                    kfac * (eta1.dot(t.y) * t.x.dot(ctx.pulled[s] * t.w) -
                            eta1.dot(t.x) * t.y.dot(ctx.pulled[s] * t.w));
                v.add(coef * lambda, middle, A, B);
            });
            break;
        }
        case TheoremId::C4_1: {
            const double b1 = B / std::max(std::abs(nk.k), 1e-300);
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                Eigen::VectorXd xi2 = E.target.structure->xi_at(ctx.Fp[s]);
                Eigen::VectorXd gxi2 = ctx.g2F[s] * xi2;
                double middle = eta1.dot(t.y) * (ctx.Jmat[s] * t.x).dot(gxi2) -
                                eta1.dot(t.x) * (ctx.Jmat[s] * t.y).dot(gxi2);
                v.add_literal(-b1, middle, b1);
            });
            break;
        }
        case TheoremId::R4_1: {
            const double kD = nk.k * *ctx.D;
            for_each_sample([&](std::size_t s, const VectorTriple& t) {
                double vxw = t.x.dot(ctx.pulled[s] * t.w);
                double vyw = t.y.dot(ctx.pulled[s] * t.w);
                if (vxw > *ctx.D || vyw > *ctx.D) return;  // premise not met
                Eigen::VectorXd eta1 = S->eta_at(ctx.points[s]);
                double lambda = ctx.eta_R(s, t.y, t.x, t.w, eta1);
                double rhs = kD * (eta1.dot(t.y) - eta1.dot(t.x));
                v.add_literal(-kInf, lambda / A - B, rhs);
            });
            break;
        }
        case TheoremId::T6_1: {
            for (std::size_t s = 0; s < ctx.points.size(); ++s) {
                Eigen::MatrixXd frame = E.source.manifold.orthonormal_frame(ctx.points[s]);
                double sum = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        Eigen::VectorXd rv =
                            ctx.bundles[s].riemann_apply(frame.col(i), frame.col(j), frame.col(j));
                        sum += rv.dot(ctx.pulled[s] * frame.col(i));
                    }
                double r1 = ctx.bundles[s].scalar;
                double nn = static_cast<double>(d) * static_cast<double>(d);
                v.add_literal(r1 / A - nn * B, sum, A * r1 + nn * B);
            }
            break;
        }
    }

    rep.pairs = v.count;
    rep.max_upper_violation = (v.count > 0 && std::isfinite(v.upper)) ? v.upper : 0.0;
    rep.max_lower_violation = (v.count > 0 && std::isfinite(v.lower)) ? v.lower : 0.0;
    bool ok = rep.max_upper_violation <= opt.tol && rep.max_lower_violation <= opt.tol;
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return rep;
}

} // namespace qismet
