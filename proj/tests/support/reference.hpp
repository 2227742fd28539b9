#pragma once

// Test-side references that share no code with the library: a plain
// bisection and the Cardano formula for the cubic, Boost special functions
// for the exact tails, and brute-force enumeration for pmfs.

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <functional>

namespace ref {

inline constexpr long double e_l = 2.718281828459045235360287471352662498L;
inline constexpr long double pi_l = 3.141592653589793238462643383279502884L;

inline long double cubic(long double eps, long double m, long double x)
{
    return x * x * x / (2 * pi_l * e_l) + eps / e_l * x * x + eps * eps * x - 1 / m;
}

inline long double alpha_bisection(long double eps, long double m)
{
    long double lo = 0;
    long double hi = 1;
    while (cubic(eps, m, hi) < 0)
        hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        if (cubic(eps, m, mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

inline long double alpha_cardano(long double eps, long double m)
{
    const long double a = 1 / (2 * pi_l * e_l);
    const long double b = eps / e_l / a;
    const long double c = eps * eps / a;
    const long double d = -1 / m / a;
    const long double p = c - b * b / 3;
    const long double q = 2 * b * b * b / 27 - b * c / 3 + d;
    const long double disc = q * q / 4 + p * p * p / 27;
    const long double u = std::cbrt(-q / 2 - std::copysign(std::sqrt(disc), q));
    return u - p / (3 * u) - b / 3;
}

inline double normal_tail(double eps)
{
    return boost::math::erfc(eps / std::sqrt(2.0));
}

inline double chi2_tail(int dof, double eps)
{
    return boost::math::gamma_q(0.5 * dof, 0.5 * eps * eps);
}

inline double poisson_pmf(double lambda, std::int64_t k)
{
    return k < 0 ? 0.0 : boost::math::pdf(boost::math::poisson_distribution<>(lambda), static_cast<double>(k));
}

inline double binomial_pmf(std::int64_t n, double p, std::int64_t k)
{
    return k < 0 || k > n ? 0.0
                          : boost::math::pdf(boost::math::binomial_distribution<>(static_cast<double>(n), p),
                                             static_cast<double>(k));
}

/// Sum of pmf(k) over k in [0, hi] satisfying pred.
inline double enumerate(const std::function<double(std::int64_t)>& pmf, std::int64_t hi,
                        const std::function<bool(std::int64_t)>& pred)
{
    double s = 0;
    for (std::int64_t k = 0; k <= hi; ++k) {
        if (pred(k))
            s += pmf(k);
    }
    return s;
}

} // namespace ref
