#include "qismet/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qismet {

ContactStructure::ContactStructure(ChartManifold base, ExprMatrix phi, std::vector<Expr> xi,
                                   std::vector<Expr> eta)
    : base_(std::move(base)), phi_(std::move(phi)), xi_(std::move(xi)), eta_(std::move(eta)) {
    const int d = base_.dim();
    if (phi_.rows() != d || phi_.cols() != d || static_cast<int>(xi_.size()) != d ||
        static_cast<int>(eta_.size()) != d)
        throw DefinitionError("structure tensor dimensions do not match the manifold");
    dphi_.assign(static_cast<std::size_t>(d), ExprMatrix(d, d));
    dxi_.assign(static_cast<std::size_t>(d), std::vector<Expr>(static_cast<std::size_t>(d)));
    deta_.assign(static_cast<std::size_t>(d), std::vector<Expr>(static_cast<std::size_t>(d)));
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                dphi_[static_cast<std::size_t>(k)](i, j) = phi_(i, j).diff(k);
            dxi_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = xi_[static_cast<std::size_t>(i)].diff(k);
            deta_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = eta_[static_cast<std::size_t>(i)].diff(k);
        }
    }
}

Eigen::MatrixXd ContactStructure::dphi_at(int k, const Eigen::VectorXd& p) const {
    return dphi_[static_cast<std::size_t>(k)].eval(p);
}

Eigen::VectorXd ContactStructure::dxi_at(int k, const Eigen::VectorXd& p) const {
    return eval_vector(dxi_[static_cast<std::size_t>(k)], p);
}

Eigen::VectorXd ContactStructure::deta_at(int k, const Eigen::VectorXd& p) const {
    return eval_vector(deta_[static_cast<std::size_t>(k)], p);
}

const AxiomResult& AxiomReport::operator[](const std::string& id) const {
    for (const auto& a : axioms)
        if (a.id == id) return a;
    throw Error("no such axiom id: " + id);
}

AxiomReport verify_axioms(const ContactStructure& S,
                          const std::vector<Eigen::VectorXd>& points, double tol) {
    const ChartManifold& M = S.base();
    const int d = M.dim();

    AxiomReport rep;
    rep.points = static_cast<long>(points.size());
    rep.tol = tol;
    rep.axioms = {
        {"2.1", "phi^2 = -I + eta(x)xi", 0.0, false},
        {"2.2", "eta(xi) = 1", 0.0, false},
        {"2.3", "phi(xi) = 0", 0.0, false},
        {"2.4", "eta o phi = 0", 0.0, false},
        {"2.5", "rank phi = dim-1", 0.0, false},
        {"2.6", "eta(X) = g(X, xi)", 0.0, false},
        {"2.7", "g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)", 0.0, false},
    };
    bool rank_ok = true;
    double sv_small = 0.0;

    for (const auto& p : points) {
        Eigen::MatrixXd g = M.metric_at(p);
        Eigen::MatrixXd phi = S.phi_at(p);
        Eigen::VectorXd xi = S.xi_at(p);
        Eigen::VectorXd eta = S.eta_at(p);

        Eigen::MatrixXd r1 = phi * phi + Eigen::MatrixXd::Identity(d, d) - xi * eta.transpose();
        rep.axioms[0].residual = std::max(rep.axioms[0].residual, r1.cwiseAbs().maxCoeff());

        rep.axioms[1].residual =
            std::max(rep.axioms[1].residual, std::abs(eta.dot(xi) - 1.0));

        rep.axioms[2].residual =
            std::max(rep.axioms[2].residual, (phi * xi).cwiseAbs().maxCoeff());

        rep.axioms[3].residual =
            std::max(rep.axioms[3].residual, (eta.transpose() * phi).cwiseAbs().maxCoeff());

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
        const auto& sv = svd.singularValues();
        sv_small = std::max(sv_small, sv[d - 1]);
        for (int i = 0; i + 1 < d; ++i)
            if (sv[i] <= std::sqrt(tol)) rank_ok = false;

        Eigen::VectorXd r6 = eta - g * xi;
        rep.axioms[5].residual = std::max(rep.axioms[5].residual, r6.cwiseAbs().maxCoeff());

        Eigen::MatrixXd r7 =
            phi.transpose() * g * phi - g + eta * eta.transpose();
        rep.axioms[6].residual = std::max(rep.axioms[6].residual, r7.cwiseAbs().maxCoeff());
    }

    rep.axioms[4].residual = sv_small;
    for (auto& a : rep.axioms) a.ok = a.residual <= tol;
    rep.axioms[4].ok = rank_ok && sv_small <= std::sqrt(tol);
    rep.pass = std::all_of(rep.axioms.begin(), rep.axioms.end(),
                           [](const AxiomResult& a) { return a.ok; });
    return rep;
}

namespace {

// k-forms on increasing index tuples, determinant convention for the wedge.
using Form = std::map<std::vector<int>, double>;

Form wedge(const Form& a, int ka, const Form& b, int kb) {
    Form out;
    for (const auto& [ia, va] : a)
        for (const auto& [ib, vb] : b) {
            std::vector<int> merged = ia;
            merged.insert(merged.end(), ib.begin(), ib.end());
            // sort with sign; repeated index kills the term
            double sign = 1.0;
            bool dup = false;
            for (std::size_t i = 1; i < merged.size() && !dup; ++i)
                for (std::size_t j = i; j > 0; --j) {
                    if (merged[j - 1] == merged[j]) { dup = true; break; }
                    if (merged[j - 1] > merged[j]) {
                        std::swap(merged[j - 1], merged[j]);
                        sign = -sign;
                    }
                }
            if (dup) continue;
            out[merged] += sign * va * vb;
        }
    (void)ka;
    (void)kb;
    return out;
}

} // namespace

ContactResult verify_contact(const ContactStructure& S,
                             const std::vector<Eigen::VectorXd>& points, double tol) {
    const int d = S.base().dim();
    const int n = (d - 1) / 2;
    ContactResult res;
    res.min_coefficient = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        Eigen::VectorXd eta = S.eta_at(p);
        // d eta(∂_i, ∂_j) = 1/2 (d_i eta_j - d_j eta_i) on coordinate fields.
        Form deta;
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd di = S.deta_at(i, p);
            for (int j = i + 1; j < d; ++j) {
                Eigen::VectorXd dj = S.deta_at(j, p);
                double w = 0.5 * (di[j] - dj[i]);
                if (w != 0.0) deta[{i, j}] = w;
            }
        }
        Form acc;
        acc[{}] = 1.0;
        for (int m = 0; m < n; ++m) acc = wedge(acc, 2 * m, deta, 2);
        Form etaf;
        for (int i = 0; i < d; ++i)
            if (eta[i] != 0.0) etaf[{i}] = eta[i];
        Form top = wedge(etaf, 1, acc, 2 * n);
        std::vector<int> all(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i;
        double coef = 0.0;
        auto it = top.find(all);
        if (it != top.end()) coef = it->second;
        res.min_coefficient = std::min(res.min_coefficient, std::abs(coef));
    }
    res.contact = res.min_coefficient >= tol;
    return res;
}

NkResult classify_nk(const ContactStructure& S,
                     const std::vector<Eigen::VectorXd>& points, double tol) {
    const ChartManifold& M = S.base();
    const int d = M.dim();

    struct Defect {
        Eigen::VectorXd lhs, basis;
        Eigen::MatrixXd g;
    };
    std::vector<Defect> defects;
    double num = 0.0, den = 0.0;
    for (const auto& p : points) {
        CurvatureBundle b = curvature_at(M, p);
        Eigen::VectorXd xi = S.xi_at(p);
        Eigen::VectorXd eta = S.eta_at(p);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                Eigen::VectorXd lhs = Eigen::VectorXd::Zero(d);
                for (int l = 0; l < d; ++l) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k) s += b.riem(l, i, j, k) * xi[k];
                    lhs[l] = s;
                }
                Eigen::VectorXd basis = Eigen::VectorXd::Zero(d);
                basis[i] += eta[j];
                basis[j] -= eta[i];
                num += lhs.dot(b.g * basis);
                den += basis.dot(b.g * basis);
                defects.push_back({lhs, basis, b.g});
            }
    }

    NkResult res;
    if (den < 1e-12) {
        res.indeterminate = true;
        return res;
    }
    res.k = num / den;
    for (const auto& dft : defects) {
        Eigen::VectorXd diff = dft.lhs - res.k * dft.basis;
        res.residual = std::max(res.residual, std::sqrt(diff.dot(dft.g * diff)));
    }
    res.is_nk = res.residual <= tol;
    return res;
}

SasakianReport verify_sasakian(const ContactStructure& S,
                               const std::vector<Eigen::VectorXd>& points, double tol) {
    const ChartManifold& M = S.base();
    const int d = M.dim();
    SasakianReport rep;
    for (const auto& p : points) {
        CurvatureBundle b = curvature_at(M, p);
        Eigen::MatrixXd phi = S.phi_at(p);
        Eigen::VectorXd xi = S.xi_at(p);
        Eigen::VectorXd eta = S.eta_at(p);

        for (int k = 0; k < d; ++k) {
            // (∇_{∂_k} phi)^i_j = d_k phi^i_j + Γ^i_km phi^m_j - Γ^m_kj phi^i_m
            Eigen::MatrixXd dphi = S.dphi_at(k, p);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double cov = dphi(i, j);
                    for (int m = 0; m < d; ++m)
                        cov += b.gamma(i, k, m) * phi(m, j) - b.gamma(m, k, j) * phi(i, m);
                    double target = b.g(k, j) * xi[i] - eta[j] * (i == k ? 1.0 : 0.0);
                    rep.nabla_phi_residual =
                        std::max(rep.nabla_phi_residual, std::abs(cov - target));
                }
            // (∇_{∂_k} xi)^i = d_k xi^i + Γ^i_km xi^m, must equal -phi^i_k
            Eigen::VectorXd dxi = S.dxi_at(k, p);
            for (int i = 0; i < d; ++i) {
                double cov = dxi[i];
                for (int m = 0; m < d; ++m) cov += b.gamma(i, k, m) * xi[m];
                rep.nabla_xi_residual =
                    std::max(rep.nabla_xi_residual, std::abs(cov + phi(i, k)));
            }
        }
    }
    rep.sasakian = rep.nabla_phi_residual <= tol && rep.nabla_xi_residual <= tol;
    return rep;
}

} // namespace qismet
