#include "nlb/thresholds.hpp"

#include "nlb/errors.hpp"

namespace nlb {

double s_alpha(double a) {
    if (!(a > 0 && a <= 1)) throw InvalidParams("alpha must lie in (0, 1]");
    if (a >= 2.0 / 3.0) return 1.0 - 0.75 * a;
    if (a >= 1.0 / 3.0) return 1.5 * (1.0 - a);
    return 1.5 - a / (1.0 - a);
}

double s_tilde_alpha(double a) {
    if (!(a > 0 && a <= 1)) throw InvalidParams("alpha must lie in (0, 1]");
    if (a >= 2.0 / 3.0) return 0.5 - 0.25 * a;
    if (a >= 0.5) return 1.0 - a;
    return 1.5 - a / (1.0 - a);
}

double threshold(double alpha, Threshold which) {
    return which == Threshold::s_alpha ? s_alpha(alpha) : s_tilde_alpha(alpha);
}

Threshold threshold_from_string(const std::string& s) {
    if (s == "s_alpha") return Threshold::s_alpha;
    if (s == "s_tilde_alpha") return Threshold::s_tilde_alpha;
    throw InvalidInput("unknown threshold: " + s);
}

}  // namespace nlb
