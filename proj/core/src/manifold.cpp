#include "qismet/manifold.hpp"

#include <cmath>
#include <sstream>

#include "qismet/sampling.hpp"

namespace qismet {

namespace {

std::string point_str(const Eigen::VectorXd& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

} // namespace

bool Domain::contains(const Eigen::VectorXd& p, double margin) const {
    if (static_cast<std::size_t>(p.size()) != ranges.size()) return false;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto& r = ranges[i];
        double v = p[static_cast<Eigen::Index>(i)];
        if (std::isfinite(r.lo) && v < r.lo + margin) return false;
        if (std::isfinite(r.hi) && v > r.hi - margin) return false;
        if (!std::isfinite(r.lo) && !(v > -std::numeric_limits<double>::infinity()))
            return false;
        for (double ex : r.excluded)
            if (std::abs(v - ex) < std::max(margin, 1e-12)) return false;
    }
    return true;
}

Eigen::MatrixXd ExprMatrix::eval(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd m(rows_, cols_);
    std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).eval(pt);
    return m;
}

Eigen::VectorXd eval_vector(const std::vector<Expr>& v, const Eigen::VectorXd& p) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    std::span<const double> pt(p.data(), static_cast<std::size_t>(p.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = v[i].eval(pt);
    return out;
}

ChartManifold ChartManifold::with_metric(std::string name, std::vector<std::string> coords,
                                         Domain domain, ExprMatrix g) {
    ChartManifold m;
    m.name_ = std::move(name);
    m.coords_ = std::move(coords);
    m.dim_ = static_cast<int>(m.coords_.size());
    m.domain_ = std::move(domain);
    if (g.rows() != m.dim_ || g.cols() != m.dim_)
        throw DefinitionError("metric dimensions do not match coordinate count");
    if (static_cast<int>(m.domain_.ranges.size()) != m.dim_)
        throw DefinitionError("domain does not cover every coordinate");
    m.metric_ = std::move(g);
    m.build_derivative_tables();
    return m;
}

ChartManifold ChartManifold::with_frame(std::string name, std::vector<std::string> coords,
                                        Domain domain, ExprMatrix frame) {
    ChartManifold m;
    m.name_ = std::move(name);
    m.coords_ = std::move(coords);
    m.dim_ = static_cast<int>(m.coords_.size());
    m.domain_ = std::move(domain);
    if (frame.rows() != m.dim_ || frame.cols() != m.dim_)
        throw DefinitionError("frame dimensions do not match coordinate count");
    if (static_cast<int>(m.domain_.ranges.size()) != m.dim_)
        throw DefinitionError("domain does not cover every coordinate");
    m.frame_spec_ = true;
    m.frame_ = frame;
    // G = E E^T is polynomial in the frame entries; the metric itself is
    // G^-1, recovered numerically pointwise.
    ExprMatrix G(m.dim_, m.dim_);
    for (int i = 0; i < m.dim_; ++i)
        for (int j = 0; j < m.dim_; ++j) {
            Expr s;
            for (int k = 0; k < m.dim_; ++k)
                s = s + frame(i, k) * frame(j, k);
            G(i, j) = s;
        }
    m.metric_ = std::move(G);
    m.build_derivative_tables();
    return m;
}

void ChartManifold::build_derivative_tables() {
    d_metric_.assign(static_cast<std::size_t>(dim_), ExprMatrix(dim_, dim_));
    dd_metric_.assign(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_),
                      ExprMatrix(dim_, dim_));
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                d_metric_[static_cast<std::size_t>(k)](i, j) = metric_(i, j).diff(k);
    for (int l = 0; l < dim_; ++l)
        for (int k = 0; k < dim_; ++k)
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j)
                    dd_metric_[static_cast<std::size_t>(l * dim_ + k)](i, j) =
                        d_metric_[static_cast<std::size_t>(k)](i, j).diff(l);
}

Eigen::MatrixXd ChartManifold::metric_at(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd base = metric_.eval(p);
    Eigen::MatrixXd g;
    if (frame_spec_) {
        // base = E E^T; the declared-orthonormal metric is its inverse.
        Eigen::LLT<Eigen::MatrixXd> llt(base);
        if (llt.info() != Eigen::Success)
            throw DefinitionError("frame degenerate (E E^T not SPD) at " + point_str(p));
        g = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
        g = 0.5 * (g + g.transpose().eval());
    } else {
        g = 0.5 * (base + base.transpose().eval());
    }
    Eigen::LLT<Eigen::MatrixXd> check(g);
    if (check.info() != Eigen::Success)
        throw DefinitionError("metric not positive definite at " + point_str(p));
    return g;
}

MetricJet ChartManifold::metric_jet(const Eigen::VectorXd& p) const {
    MetricJet jet;
    const int d = dim_;
    Eigen::MatrixXd base = metric_.eval(p);
    std::vector<Eigen::MatrixXd> dbase(static_cast<std::size_t>(d));
    std::vector<std::vector<Eigen::MatrixXd>> ddbase(
        static_cast<std::size_t>(d), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d)));
    for (int k = 0; k < d; ++k) dbase[static_cast<std::size_t>(k)] = d_metric_[static_cast<std::size_t>(k)].eval(p);
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k)
            ddbase[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
                dd_metric_[static_cast<std::size_t>(l * d + k)].eval(p);

    if (!frame_spec_) {
        jet.g = 0.5 * (base + base.transpose().eval());
        jet.dg = std::move(dbase);
        jet.ddg = std::move(ddbase);
        return jet;
    }

    // g = G^-1 with G = E E^T:
    //   d_k g     = -g (d_k G) g
    //   d_l d_k g = -[ (d_l g)(d_k G) g + g (d_l d_k G) g + g (d_k G)(d_l g) ]
    Eigen::LLT<Eigen::MatrixXd> llt(base);
    if (llt.info() != Eigen::Success)
        throw DefinitionError("frame degenerate (E E^T not SPD) at " + point_str(p));
    Eigen::MatrixXd g = llt.solve(Eigen::MatrixXd::Identity(d, d));
    g = 0.5 * (g + g.transpose().eval());
    jet.g = g;
    jet.dg.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
        jet.dg[static_cast<std::size_t>(k)] = -g * dbase[static_cast<std::size_t>(k)] * g;
    jet.ddg.assign(static_cast<std::size_t>(d),
                   std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d)));
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k) {
            const Eigen::MatrixXd& dgl = jet.dg[static_cast<std::size_t>(l)];
            const Eigen::MatrixXd& dGk = dbase[static_cast<std::size_t>(k)];
            jet.ddg[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
                -(dgl * dGk * g + g * ddbase[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] * g +
                  g * dGk * dgl);
        }
    return jet;
}

std::vector<Eigen::VectorXd> ChartManifold::sample_points(int n, std::uint64_t seed,
                                                          const SampleOptions& opts) const {
    if (n < 1) throw DefinitionError("sample count must be >= 1");
    const int d = dim_;

    // Effective sampling interval per coordinate.
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto& r = domain_.ranges[static_cast<std::size_t>(i)];
        lo[static_cast<std::size_t>(i)] = std::isfinite(r.lo) ? r.lo + opts.margin : -opts.window;
        hi[static_cast<std::size_t>(i)] = std::isfinite(r.hi) ? r.hi - opts.margin : opts.window;
        if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
            throw DefinitionError("empty feasible domain for coordinate '" +
                                  coords_[static_cast<std::size_t>(i)] + "'");
    }

    auto excluded = [&](int i, double v) {
        for (double ex : domain_.ranges[static_cast<std::size_t>(i)].excluded)
            if (std::abs(v - ex) < opts.margin) return true;
        return false;
    };

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(n));

    // Grid part: cell centers of an m^d lattice, first ceil(n/2) admissible.
    int n_grid = (n + 1) / 2;
    int m = 1;
    while (std::pow(m, d) < n_grid) ++m;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    bool done = false;
    while (!done && static_cast<int>(out.size()) < n_grid) {
        Eigen::VectorXd p(d);
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            double t = (idx[static_cast<std::size_t>(i)] + 0.5) / m;
            double v = lo[static_cast<std::size_t>(i)] +
                       t * (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]);
            if (excluded(i, v)) ok = false;
            p[i] = v;
        }
        if (ok) out.push_back(p);
        // lexicographic advance
        int i = d - 1;
        for (;;) {
            if (i < 0) { done = true; break; }
            if (++idx[static_cast<std::size_t>(i)] < m) break;
            idx[static_cast<std::size_t>(i)] = 0;
            --i;
        }
    }

    // Random remainder (also fills in if exclusions starved the grid).
    Rng rng(seed ^ 0x706f696e74ULL);
    int attempts = 0;
    while (static_cast<int>(out.size()) < n) {
        Eigen::VectorXd p(d);
        bool ok = true;
        for (int i = 0; i < d; ++i) {
            double v = rng.next_in(lo[static_cast<std::size_t>(i)], hi[static_cast<std::size_t>(i)]);
            if (excluded(i, v)) ok = false;
            p[i] = v;
        }
        if (ok) {
            out.push_back(p);
            attempts = 0;
        } else if (++attempts > 1000) {
            throw DefinitionError("empty feasible domain (exclusions reject all samples)");
        }
    }
    return out;
}

Eigen::MatrixXd ChartManifold::orthonormal_frame(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd g = metric_at(p);
    const int d = dim_;
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v[j] = 1.0;
        for (int i = 0; i < j; ++i) {
            double c = E.col(i).dot(g * v);
            v -= c * E.col(i);
        }
        double norm2 = v.dot(g * v);
        if (!(norm2 > 0.0))
            throw DefinitionError("Gram-Schmidt degenerate at " + point_str(p));
        E.col(j) = v / std::sqrt(norm2);
    }
    return E;
}

} // namespace qismet
