#ifndef QISMET_STRUCTURE_HPP
#define QISMET_STRUCTURE_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qismet/curvature.hpp"
#include "qismet/manifold.hpp"

namespace qismet {

/// Almost contact structure (phi, xi, eta) attached to a chart manifold.
/// phi is stored as a matrix of expressions whose column j holds the
/// components of phi(∂_j); xi is a vector field, eta a 1-form.
class ContactStructure {
public:
    ContactStructure(ChartManifold base, ExprMatrix phi, std::vector<Expr> xi,
                     std::vector<Expr> eta);

    const ChartManifold& base() const { return base_; }
    const ExprMatrix& phi_exprs() const { return phi_; }
    const std::vector<Expr>& xi_exprs() const { return xi_; }
    const std::vector<Expr>& eta_exprs() const { return eta_; }

    Eigen::MatrixXd phi_at(const Eigen::VectorXd& p) const { return phi_.eval(p); }
    Eigen::VectorXd xi_at(const Eigen::VectorXd& p) const { return eval_vector(xi_, p); }
    Eigen::VectorXd eta_at(const Eigen::VectorXd& p) const { return eval_vector(eta_, p); }

    /// d_k phi^i_j at p.
    Eigen::MatrixXd dphi_at(int k, const Eigen::VectorXd& p) const;
    /// d_k xi^i at p.
    Eigen::VectorXd dxi_at(int k, const Eigen::VectorXd& p) const;
    /// d_k eta_j at p.
    Eigen::VectorXd deta_at(int k, const Eigen::VectorXd& p) const;

private:
    ChartManifold base_;
    ExprMatrix phi_;
    std::vector<Expr> xi_, eta_;
    std::vector<ExprMatrix> dphi_;            // [k]
    std::vector<std::vector<Expr>> dxi_, deta_;  // [k]
};

/// A manifold with an optional attached structure, as loaded from a
/// definition file.
struct ManifoldEntry {
    ChartManifold manifold;
    std::optional<ContactStructure> structure;
};

/// One axiom of the almost contact metric battery.
struct AxiomResult {
    std::string id;      // "2.1" .. "2.7"
    std::string label;
    double residual = 0.0;
    bool ok = false;
};

struct AxiomReport {
    std::vector<AxiomResult> axioms;
    long points = 0;
    double tol = 0.0;
    bool pass = false;

    const AxiomResult& operator[](const std::string& id) const;
};

/// Check the structure axioms
///   (2.1) phi^2 = -I + eta (x) xi        (2.2) eta(xi) = 1
///   (2.3) phi(xi) = 0                    (2.4) eta o phi = 0
///   (2.5) rank phi = dim - 1             (2.6) eta(X) = g(X, xi)
///   (2.7) g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)
/// pointwise over the samples.  The rank check passes when dim-1 singular
/// values stay above sqrt(tol) and the smallest falls below it; its reported
/// residual is the smallest singular value.
AxiomReport verify_axioms(const ContactStructure& S,
                          const std::vector<Eigen::VectorXd>& points, double tol = 1e-8);

struct ContactResult {
    bool contact = false;
    double min_coefficient = 0.0;  // min |top-form coefficient| over points
};

/// Contact condition eta ∧ (d eta)^n != 0 with Blair's convention
/// d eta(X,Y) = 1/2 {X(eta(Y)) - Y(eta(X)) - eta([X,Y])}.
ContactResult verify_contact(const ContactStructure& S,
                             const std::vector<Eigen::VectorXd>& points, double tol = 1e-8);

struct NkResult {
    bool is_nk = false;
    bool indeterminate = false;  // degenerate normal equations
    double k = 0.0;
    double residual = 0.0;  // max g-norm defect of R(X,Y)xi - k[eta(Y)X - eta(X)Y]
};

/// Least-squares k over all coordinate index pairs and points for the
/// nullity condition R(X,Y)xi = k[eta(Y)X - eta(X)Y].
NkResult classify_nk(const ContactStructure& S,
                     const std::vector<Eigen::VectorXd>& points, double tol = 1e-6);

struct SasakianReport {
    bool sasakian = false;
    double nabla_phi_residual = 0.0;  // (∇_X phi)Y - [g(X,Y)xi - eta(Y)X]
    double nabla_xi_residual = 0.0;   // ∇_X xi + phi X
};

/// Theorem-2.2 characterization: (∇_X phi)Y = g(X,Y) xi - eta(Y) X, together
/// with ∇_X xi = -phi X.
SasakianReport verify_sasakian(const ContactStructure& S,
                               const std::vector<Eigen::VectorXd>& points, double tol = 1e-6);

} // namespace qismet

#endif // QISMET_STRUCTURE_HPP
