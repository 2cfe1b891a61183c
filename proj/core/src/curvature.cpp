#include "qismet/curvature.hpp"

#include <cmath>

#include "qismet/structure.hpp"

namespace qismet {

Eigen::VectorXd CurvatureBundle::riemann_apply(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& y,
                                               const Eigen::VectorXd& z) const {
    const int d = static_cast<int>(g.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    s += riem(l, i, j, k) * x[i] * y[j] * z[k];
        out[l] = s;
    }
    return out;
}

CurvatureBundle curvature_at(const ChartManifold& M, const Eigen::VectorXd& p) {
    const int d = M.dim();
    MetricJet jet = M.metric_jet(p);

    CurvatureBundle b;
    b.point = p;
    b.g = jet.g;
    Eigen::LLT<Eigen::MatrixXd> llt(jet.g);
    if (llt.info() != Eigen::Success)
        throw DefinitionError("metric not positive definite while computing curvature");
    b.ginv = llt.solve(Eigen::MatrixXd::Identity(d, d));

    // Γ^k_ij = 1/2 g^km (d_i g_jm + d_j g_im - d_m g_ij)
    b.gamma = Tensor3(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double s = 0.0;
                for (int m = 0; m < d; ++m)
                    s += b.ginv(k, m) *
                         (jet.dg[static_cast<std::size_t>(i)](j, m) +
                          jet.dg[static_cast<std::size_t>(j)](i, m) -
                          jet.dg[static_cast<std::size_t>(m)](i, j));
                b.gamma(k, i, j) = 0.5 * s;
                b.gamma(k, j, i) = 0.5 * s;
            }

    // d_l g^km = -(g^-1 (d_l g) g^-1)^km
    std::vector<Eigen::MatrixXd> dginv(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l)
        dginv[static_cast<std::size_t>(l)] = -b.ginv * jet.dg[static_cast<std::size_t>(l)] * b.ginv;

    // d_l Γ^k_ij
    std::vector<Tensor3> dgamma(static_cast<std::size_t>(d), Tensor3(d));
    for (int l = 0; l < d; ++l) {
        const Eigen::MatrixXd& dgi = dginv[static_cast<std::size_t>(l)];
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) {
                    double s = 0.0;
                    for (int m = 0; m < d; ++m) {
                        s += dgi(k, m) * (jet.dg[static_cast<std::size_t>(i)](j, m) +
                                          jet.dg[static_cast<std::size_t>(j)](i, m) -
                                          jet.dg[static_cast<std::size_t>(m)](i, j));
                        s += b.ginv(k, m) *
                             (jet.ddg[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)](j, m) +
                              jet.ddg[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)](i, m) -
                              jet.ddg[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)](i, j));
                    }
                    dgamma[static_cast<std::size_t>(l)](k, i, j) = 0.5 * s;
                    dgamma[static_cast<std::size_t>(l)](k, j, i) = 0.5 * s;
                }
    }

    // (R(∂_i,∂_j)∂_k)^l = d_i Γ^l_jk - d_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
    b.riem = Tensor4(d);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = dgamma[static_cast<std::size_t>(i)](l, j, k) -
                               dgamma[static_cast<std::size_t>(j)](l, i, k);
                    for (int m = 0; m < d; ++m)
                        s += b.gamma(l, i, m) * b.gamma(m, j, k) -
                             b.gamma(l, j, m) * b.gamma(m, i, k);
                    b.riem(l, i, j, k) = s;
                }

    // S_jk = R^i_ijk, Q = g^-1 S, r = tr Q
    b.ricci = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += b.riem(i, i, j, k);
            b.ricci(j, k) = s;
        }
    b.ricci_op = b.ginv * b.ricci;
    b.scalar = b.ricci_op.trace();
    return b;
}

const char* derived_kind_name(DerivedKind k) {
    switch (k) {
        case DerivedKind::Weyl: return "weyl";
        case DerivedKind::Concircular: return "concircular";
        case DerivedKind::Conharmonic: return "conharmonic";
        case DerivedKind::Projective: return "projective";
    }
    return "?";
}

Tensor4 derived_tensor(DerivedKind kind, const CurvatureBundle& b) {
    const int d = static_cast<int>(b.g.rows());
    if (d < 3) throw DefinitionError("derived curvature tensors need dim >= 3");
    const double n = (d - 1) / 2.0;
    const double r = b.scalar;

    // Coefficients multiplying the two correction blocks:
    //   block1(l,i,j,k) = S_jk δ^l_i - S_ik δ^l_j + g_jk Q^l_i - g_ik Q^l_j
    //   block2(l,i,j,k) = g_jk δ^l_i - g_ik δ^l_j
    double c1 = 0.0, c2 = 0.0;
    switch (kind) {
        case DerivedKind::Weyl:
            c1 = -1.0 / (2.0 * n - 1.0);
            c2 = r / (2.0 * n * (2.0 * n - 1.0));
            break;
        case DerivedKind::Concircular:
            c1 = 0.0;
            c2 = -r / (2.0 * n * (2.0 * n + 1.0));
            break;
        case DerivedKind::Conharmonic:
            c1 = -1.0 / (2.0 * n - 1.0);
            c2 = 0.0;
            break;
        case DerivedKind::Projective: {
            // P = R - 1/2n [S(Y,Z)X - S(X,Z)Y]; no Q/g block.
            Tensor4 t(d);
            for (int l = 0; l < d; ++l)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) {
                            double s = b.riem(l, i, j, k);
                            if (l == i) s -= b.ricci(j, k) / (2.0 * n);
                            if (l == j) s += b.ricci(i, k) / (2.0 * n);
                            t(l, i, j, k) = s;
                        }
            return t;
        }
    }

    Tensor4 t(d);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = b.riem(l, i, j, k);
                    double blk1 = 0.0;
                    if (c1 != 0.0) {
                        if (l == i) blk1 += b.ricci(j, k);
                        if (l == j) blk1 -= b.ricci(i, k);
                        blk1 += b.g(j, k) * b.ricci_op(l, i) - b.g(i, k) * b.ricci_op(l, j);
                    }
                    double blk2 = 0.0;
                    if (c2 != 0.0) {
                        if (l == i) blk2 += b.g(j, k);
                        if (l == j) blk2 -= b.g(i, k);
                    }
                    t(l, i, j, k) = s + c1 * blk1 + c2 * blk2;
                }
    return t;
}

Tensor4 derived_tensor(DerivedKind kind, const ChartManifold& M, const Eigen::VectorXd& p) {
    return derived_tensor(kind, curvature_at(M, p));
}

Tensor4 lower_first_index(const Tensor4& t, const Eigen::MatrixXd& g) {
    const int d = t.dim();
    Tensor4 out(d);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < d; ++m) s += g(l, m) * t(m, i, j, k);
                    out(l, i, j, k) = s;
                }
    return out;
}

FlatnessResult flatness_test(DerivedKind kind, const ChartManifold& M,
                             const std::vector<Eigen::VectorXd>& points, double tol) {
    FlatnessResult res;
    res.kind = kind;
    for (const auto& p : points) {
        CurvatureBundle b = curvature_at(M, p);
        Tensor4 low = lower_first_index(derived_tensor(kind, b), b.g);
        res.max_residual = std::max(res.max_residual, low.max_abs());
    }
    res.flat = res.max_residual <= tol;
    return res;
}

EinsteinFit einstein_fit(const ContactStructure& S,
                         const std::vector<Eigen::VectorXd>& points, double tol) {
    if (points.empty()) throw DefinitionError("einstein_fit needs at least one point");
    const ChartManifold& M = S.base();
    const int d = M.dim();

    // Normal equations for min ||S_ij - a g_ij - b eta_i eta_j||^2.
    double gg = 0.0, ge = 0.0, ee = 0.0, gs = 0.0, es = 0.0;
    struct Sample {
        Eigen::MatrixXd ric, g, ee;
    };
    std::vector<Sample> samples;
    samples.reserve(points.size());
    for (const auto& p : points) {
        CurvatureBundle b = curvature_at(M, p);
        Eigen::VectorXd eta = S.eta_at(p);
        Eigen::MatrixXd E = eta * eta.transpose();
        samples.push_back({b.ricci, b.g, E});
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                gg += b.g(i, j) * b.g(i, j);
                ge += b.g(i, j) * E(i, j);
                ee += E(i, j) * E(i, j);
                gs += b.g(i, j) * b.ricci(i, j);
                es += E(i, j) * b.ricci(i, j);
            }
    }
    double det = gg * ee - ge * ge;
    EinsteinFit fit;
    if (std::abs(det) < 1e-14 * std::max(1.0, gg * ee)) {
        // eta (x) eta is (numerically) proportional to g; fall back to a pure
        // Einstein fit with b = 0.
        fit.a = gs / gg;
        fit.b = 0.0;
    } else {
        fit.a = (gs * ee - es * ge) / det;
        fit.b = (es * gg - gs * ge) / det;
    }
    for (const auto& s : samples) {
        Eigen::MatrixXd resid = s.ric - fit.a * s.g - fit.b * s.ee;
        fit.residual = std::max(fit.residual, resid.cwiseAbs().maxCoeff());
    }
    fit.eta_einstein = fit.residual <= tol;
    fit.einstein = fit.eta_einstein && std::abs(fit.b) <= tol;
    return fit;
}

} // namespace qismet
