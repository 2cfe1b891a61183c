#ifndef QISMET_QISOM_HPP
#define QISMET_QISOM_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qismet/report.hpp"
#include "qismet/sampling.hpp"
#include "qismet/structure.hpp"

namespace qismet {

/// Pointwise-linear map between two chart manifolds: a base point map F
/// (source coords -> target coords) plus a pushforward matrix J whose
/// entries are expressions in the source coordinates; a tangent vector v at
/// p maps to J(p) v at F(p).  A and B are the candidate quasi-isometry
/// constants, D the optional quasi-density constant.
struct Embedding {
    ManifoldEntry source;
    ManifoldEntry target;
    std::vector<Expr> F;
    ExprMatrix J;
    double A = 1.0;
    double B = 0.0;
    std::optional<double> D;

    Eigen::VectorXd map_point(const Eigen::VectorXd& p) const;
    /// J(p) v.  Throws DefinitionError when F(p) leaves the target domain.
    Eigen::VectorXd pushforward_at(const Eigen::VectorXd& p, const Eigen::VectorXd& v) const;
};

/// Shared sampling configuration for the checks below.
struct SampleSpec {
    int points = 500;
    int tuples = 200;     // vector pairs / triples per run
    std::uint64_t seed = 42;
    double coeff_bound = 1.0;
    SampleOptions point_options{};
};

/// Definition-3.1 sandwich (1/A) g1(X,Y) - B <= g2(f*X, f*Y) <= A g1(X,Y) + B
/// over sampled points and coefficient-bounded vector pairs.
///
/// Samples are canonicalized by the sign symmetry (X,Y) -> (X,-Y) so that the
/// reference value g1(X,Y) is nonnegative before the bounds are formed; both
/// sides of a sign-flipped pair state the same inequality, and for A > 1 the
/// printed bounds are jointly infeasible on any negation-closed pool (take
/// Y -> -Y in the display above and intersect).  For nonnegative g1(X,Y) the
/// check is the printed one, verbatim.
CheckReport check_embedding(const Embedding& E, const std::vector<Eigen::VectorXd>& points,
                            const std::vector<VectorPair>& pairs, double A, double B,
                            double tol = 1e-9);

/// Same, with the embedding's declared constants and default samples.
CheckReport check_embedding(const Embedding& E, const SampleSpec& spec, double tol = 1e-9);

/// f*(xi1) = xi2 within tol (g2-norm of the defect at F(p)).
bool check_structure_preserving(const Embedding& E, const std::vector<Eigen::VectorXd>& points,
                                double tol = 1e-8);

struct ConstantsEstimate {
    double A = 1.0;
    double B = 0.0;
    /// B_min(A) on the sample set used for the estimate.
    double b_min_at_a = 0.0;
};

/// Grid-refined minimizer of B_min(A) = max(0, max_s(v_s - U_A(u_s)),
/// max_s(L_A(u_s) - v_s)) over A in [1, 100], where U_A/L_A are the upper and
/// lower sandwich lines (see check_embedding on sign handling); three
/// refinement levels, x10 resolution each, ties broken toward smaller A.
ConstantsEstimate estimate_constants(const Embedding& E,
                                     const std::vector<Eigen::VectorXd>& points,
                                     const std::vector<VectorPair>& pairs);

/// Recompute B_min(A) on explicit samples (feasibility re-verification).
double embedding_b_min(const Embedding& E, const std::vector<Eigen::VectorXd>& points,
                       const std::vector<VectorPair>& pairs, double A);

struct QuasiDenseResult {
    double d_star = 0.0;  // max over Z of min over X of sup over p of g2(Z, f*X)
    std::optional<bool> quasi_dense;  // set when a D is declared
    double declared_d = 0.0;
};

/// Literal Eq.-(3.2) check: every sampled target field Z admits a sampled
/// source field X with g2(Z, f*X) <= D at all points.
QuasiDenseResult check_quasi_dense(const Embedding& E,
                                   const std::vector<Eigen::VectorXd>& z_pool,
                                   const std::vector<Eigen::VectorXd>& x_pool,
                                   const std::vector<Eigen::VectorXd>& points,
                                   std::optional<double> declared_d);

/// Theorem-suite checker ids.
enum class TheoremId {
    T3_1_1,
    T3_1_2,
    T3_1_3,
    T3_1_4,
    T4_1,
    C4_1,
    C4_2,
    T4_2,
    T4_3,
    T4_4,
    R4_1,
    T5_2_1,
    T5_2_2,
    T6_1,
};

std::optional<TheoremId> theorem_id_from_string(const std::string& s);
const char* theorem_id_name(TheoremId id);
std::vector<TheoremId> all_theorem_ids();

struct TheoremOptions {
    SampleSpec samples{};
    double tol = 1e-9;       // sandwich slack
    double classify_tol = 1e-6;
    double flatness_tol = 1e-7;
    bool force = false;      // evaluate the conclusion even if hypotheses fail
    std::optional<double> A_override;
    std::optional<double> B_override;
    std::optional<double> D_override;
};

/// Verify the hypotheses of the given theorem on the embedding's source
/// (and the embedding itself), then evaluate the stated sandwich over the
/// samples.  Verdict is NotApplicable when a hypothesis fails, unless
/// `force` is set.
CheckReport check_theorem(TheoremId id, const Embedding& E, const TheoremOptions& opt = {});

} // namespace qismet

#endif // QISMET_QISOM_HPP
