#ifndef QISMET_MANIFOLD_HPP
#define QISMET_MANIFOLD_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qismet/expr.hpp"

namespace qismet {

/// Per-coordinate open interval with excluded values (e.g. z != 0).
struct CoordinateRange {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::vector<double> excluded;
};

struct Domain {
    std::vector<CoordinateRange> ranges;

    /// True if p lies strictly inside the box and at distance >= margin
    /// from every excluded value and finite bound.
    bool contains(const Eigen::VectorXd& p, double margin = 0.0) const;
};

/// Options controlling point sampling.
struct SampleOptions {
    double margin = 1e-3;   ///< clearance from finite bounds and exclusions
    double window = 5.0;    ///< half-width used for unbounded coordinates
};

/// Square matrix of expressions (row-major), used for metrics, frames,
/// phi tensors and pushforwards.
class ExprMatrix {
public:
    ExprMatrix() = default;
    ExprMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Expr& operator()(int i, int j) { return data_[idx(i, j)]; }
    const Expr& operator()(int i, int j) const { return data_[idx(i, j)]; }

    Eigen::MatrixXd eval(const Eigen::VectorXd& p) const;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }
    int rows_ = 0, cols_ = 0;
    std::vector<Expr> data_;
};

Eigen::VectorXd eval_vector(const std::vector<Expr>& v, const Eigen::VectorXd& p);

/// Metric, first and second partial derivatives evaluated at one point.
/// dg[k](i,j) = d_k g_ij, ddg[l][k](i,j) = d_l d_k g_ij.
struct MetricJet {
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    std::vector<std::vector<Eigen::MatrixXd>> ddg;
};

/// Chart-defined Riemannian manifold.  The metric is given either as explicit
/// symmetric components g_ij or through a frame matrix E (columns = frame
/// vectors in the coordinate basis) declared orthonormal, in which case
/// g = (E E^T)^-1.  Immutable after construction; all evaluation is pure.
class ChartManifold {
public:
    /// Explicit-component metric.
    static ChartManifold with_metric(std::string name, std::vector<std::string> coords,
                                     Domain domain, ExprMatrix g);
    /// Orthonormal-frame metric.
    static ChartManifold with_frame(std::string name, std::vector<std::string> coords,
                                    Domain domain, ExprMatrix frame);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const std::vector<std::string>& coords() const { return coords_; }
    const Domain& domain() const { return domain_; }
    bool frame_spec() const { return frame_spec_; }
    const ExprMatrix& metric_exprs() const { return metric_; }
    const ExprMatrix& frame_exprs() const { return frame_; }

    /// Metric components at p.  Throws DefinitionError if the evaluation is
    /// not symmetric positive definite (reported with the point).
    Eigen::MatrixXd metric_at(const Eigen::VectorXd& p) const;

    /// Metric with first and second derivatives at p.
    MetricJet metric_jet(const Eigen::VectorXd& p) const;

    /// Deterministic sample: ceil(n/2) points from a uniform grid, the rest
    /// seeded uniform-random; all respect domain margins.  Unbounded
    /// coordinates are sampled inside (-window, window).
    std::vector<Eigen::VectorXd> sample_points(int n, std::uint64_t seed,
                                               const SampleOptions& opts = {}) const;

    /// Gram-Schmidt of the coordinate basis under metric_at(p); columns are
    /// g-orthonormal, processed in declared coordinate order.
    Eigen::MatrixXd orthonormal_frame(const Eigen::VectorXd& p) const;

private:
    ChartManifold() = default;

    std::string name_;
    int dim_ = 0;
    std::vector<std::string> coords_;
    Domain domain_;
    bool frame_spec_ = false;
    ExprMatrix metric_;                    // explicit g_ij, or G = E E^T for frame specs
    ExprMatrix frame_;                     // frame columns (frame specs only)
    std::vector<ExprMatrix> d_metric_;     // [k](i,j) = d_k of metric_
    std::vector<ExprMatrix> dd_metric_;    // [l*dim+k](i,j) = d_l d_k of metric_

    void build_derivative_tables();
};

} // namespace qismet

#endif // QISMET_MANIFOLD_HPP
