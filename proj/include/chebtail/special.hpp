#pragma once

#include <chebtail/constants.hpp>

#include <cmath>
#include <stdexcept>

namespace chebtail {

/// Phi(x).
inline double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// 2 (1 - Phi(x)) for x >= 0, computed without cancellation.
inline double normal_two_sided_tail(double x)
{
    return std::erfc(x / std::numbers::sqrt2);
}

inline double normal_pdf(double x)
{
    return inv_sqrt_two_pi_v<double> * std::exp(-0.5 * x * x);
}

/// Survival function 1 - F(x) of the chi-square law with an integer number of
/// degrees of freedom, via the finite closed forms:
///   even n = 2k:     exp(-x/2) sum_{j<k} (x/2)^j / j!
///   odd  n = 2k + 1: erfc(sqrt(x/2)) + exp(-x/2) sum_{j=1..k} (x/2)^{j-1/2} / Gamma(j+1/2)
inline double chi_square_survival(int dof, double x)
{
    if (dof < 1)
        throw std::domain_error("chi-square degrees of freedom must be positive");
    if (x <= 0.0)
        return 1.0;
    const double half = 0.5 * x;
    const double decay = std::exp(-half);
    if (dof % 2 == 0) {
        double term = 1.0;
        double sum = 1.0;
        for (int j = 1; j < dof / 2; ++j) {
            term *= half / j;
            sum += term;
        }
        return decay * sum;
    }
    // term_j = (x/2)^{j-1/2} / Gamma(j+1/2), term_1 = sqrt(x/2) / Gamma(3/2)
    double term = std::sqrt(half) / (0.5 * std::sqrt(pi_v<double>));
    double sum = 0.0;
    for (int j = 1; j <= dof / 2; ++j) {
        sum += term;
        term *= half / (j + 0.5);
    }
    return std::erfc(std::sqrt(half)) + decay * sum;
}

} // namespace chebtail
