#ifndef QISMET_REPORT_HPP
#define QISMET_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qismet {

enum class Verdict { Pass, Fail, NotApplicable };

const char* verdict_name(Verdict v);

enum class HypothesisState { Ok, Failed, Warning };

struct HypothesisStatus {
    std::string name;
    HypothesisState state = HypothesisState::Ok;

    bool ok() const { return state != HypothesisState::Failed; }
};

/// Result of one sandwich/residual check.  For two-sided checks the
/// violations are
///   max_upper_violation = max_s(middle_s - upper_s)
///   max_lower_violation = max_s(lower_s - middle_s)
/// (negative values = margin); for residual-style checks the residual is
/// reported as max_upper_violation with the lower one zero.
struct CheckReport {
    std::string id;
    Verdict verdict = Verdict::NotApplicable;
    double max_lower_violation = 0.0;
    double max_upper_violation = 0.0;
    std::vector<HypothesisStatus> hypotheses;
    long points = 0;
    long pairs = 0;          // vector tuples actually evaluated
    double coeff_bound = 0.0;
    double window = 0.0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool forced = false;

    bool hypotheses_ok() const {
        for (const auto& h : hypotheses)
            if (h.state == HypothesisState::Failed) return false;
        return true;
    }
};

} // namespace qismet

#endif // QISMET_REPORT_HPP
