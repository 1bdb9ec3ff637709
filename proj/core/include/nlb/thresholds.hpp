#pragma once

#include <string>

namespace nlb {

enum class Threshold { s_alpha, s_tilde_alpha };

// Piecewise regularity thresholds for alpha in (0, 1].
//   s_alpha:       1 - 3a/4 on [2/3, 1], 3(1-a)/2 on [1/3, 2/3], 3/2 - a/(1-a) on (0, 1/3]
//   s_tilde_alpha: 1/2 - a/4 on [2/3, 1], 1 - a on [1/2, 2/3], 3/2 - a/(1-a) on (0, 1/2]
double threshold(double alpha, Threshold which);
double s_alpha(double alpha);
double s_tilde_alpha(double alpha);
Threshold threshold_from_string(const std::string& s);

}  // namespace nlb
