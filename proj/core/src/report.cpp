#include "qismet/report.hpp"

namespace qismet {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

} // namespace qismet
