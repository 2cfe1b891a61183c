#ifndef QISMET_CURVATURE_HPP
#define QISMET_CURVATURE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qismet/manifold.hpp"

namespace qismet {

/// Dense rank-3 array, indices (i,j,k) in 0..dim-1.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int d) : d_(d), v_(static_cast<std::size_t>(d) * d * d, 0.0) {}
    int dim() const { return d_; }
    double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }

private:
    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * d_ + j) * d_ + k;
    }
    int d_ = 0;
    std::vector<double> v_;
};

/// Dense rank-4 array, indices (l,i,j,k).
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int d) : d_(d), v_(static_cast<std::size_t>(d) * d * d * d, 0.0) {}
    int dim() const { return d_; }
    double& operator()(int l, int i, int j, int k) { return v_[idx(l, i, j, k)]; }
    double operator()(int l, int i, int j, int k) const { return v_[idx(l, i, j, k)]; }
    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    std::size_t idx(int l, int i, int j, int k) const {
        return ((static_cast<std::size_t>(l) * d_ + i) * d_ + j) * d_ + k;
    }
    int d_ = 0;
    std::vector<double> v_;
};

/// All pointwise curvature data of a chart manifold.
///
/// Conventions: Gamma(k,i,j) = Γ^k_ij; riem(l,i,j,k) = (R(∂_i,∂_j)∂_k)^l with
/// R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z; ricci S_jk = R^i_ijk;
/// ricci_op Q = g^-1 S; scalar r = tr(Q).  These signs make the Sasakian
/// identities R(X,Y)ξ = η(Y)X − η(X)Y and S(X,ξ) = 2nk η(X) come out with
/// k = +1 on the catalog examples.
struct CurvatureBundle {
    Eigen::VectorXd point;
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    Tensor3 gamma;
    Tensor4 riem;
    Eigen::MatrixXd ricci;
    Eigen::MatrixXd ricci_op;
    double scalar = 0.0;

    /// (R(X,Y)Z)^l for coefficient vectors X, Y, Z.
    Eigen::VectorXd riemann_apply(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& z) const;
};

CurvatureBundle curvature_at(const ChartManifold& M, const Eigen::VectorXd& p);

enum class DerivedKind { Weyl, Concircular, Conharmonic, Projective };

const char* derived_kind_name(DerivedKind k);

/// The four curvature modifications, as (1,3)-component arrays in the same
/// index layout as CurvatureBundle::riem.  Requires dim >= 3.
Tensor4 derived_tensor(DerivedKind kind, const CurvatureBundle& b);
Tensor4 derived_tensor(DerivedKind kind, const ChartManifold& M, const Eigen::VectorXd& p);

/// Components with the upper index lowered by g, for scale-comparable norms.
Tensor4 lower_first_index(const Tensor4& t, const Eigen::MatrixXd& g);

struct FlatnessResult {
    DerivedKind kind;
    bool flat = false;
    double max_residual = 0.0;  // max |lowered component| over points
};

/// Flat iff the lowered derived tensor vanishes to `tol` at every point.
FlatnessResult flatness_test(DerivedKind kind, const ChartManifold& M,
                             const std::vector<Eigen::VectorXd>& points, double tol = 1e-7);

struct EinsteinFit {
    bool einstein = false;       // S = a g with |b| below tolerance
    bool eta_einstein = false;   // S = a g + b eta (x) eta
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;       // max |S - a g - b eta (x) eta| component
};

class ContactStructure;  // structure.hpp

/// Least-squares fit of S = a g + b eta(x)eta over all components at all
/// points.  The eta of the attached structure provides the second basis
/// tensor.
EinsteinFit einstein_fit(const ContactStructure& S,
                         const std::vector<Eigen::VectorXd>& points, double tol = 1e-6);

} // namespace qismet

#endif // QISMET_CURVATURE_HPP
