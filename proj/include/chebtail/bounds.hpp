#pragma once

// Tail-probability bounds for the event {(X-mu)^2 / sigma^2 >= eps^2} given the
// first two moments and the supremum of the density on that event.
//
// Everything here is a pure function of its arguments and is templated on the
// scalar type. No distribution knowledge lives in this header: the density
// supremum on the tail set is always an input.

#include <chebtail/constants.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace chebtail {

/// Deviation threshold in units of standard deviations. Always finite and > 0.
template <typename Scalar>
class Epsilon {
public:
    explicit Epsilon(Scalar value) : value_(value)
    {
        if (!(value > Scalar(0)) || !std::isfinite(value))
            throw std::domain_error("epsilon must be positive");
    }

    Scalar value() const noexcept { return value_; }
    operator Scalar() const noexcept { return value_; }

private:
    Scalar value_;
};

template <typename Scalar>
struct MomentSpec1D {
    Scalar mean;
    Scalar variance;
    Scalar sup_density_on_tail;

    MomentSpec1D(Scalar mean_, Scalar variance_, Scalar sup_)
        : mean(mean_), variance(variance_), sup_density_on_tail(sup_)
    {
        if (!std::isfinite(mean))
            throw std::domain_error("mean must be finite");
        if (!(variance > Scalar(0)) || !std::isfinite(variance))
            throw std::domain_error("variance must be positive");
        if (!(sup_density_on_tail >= Scalar(0)) || !std::isfinite(sup_density_on_tail))
            throw std::domain_error("density supremum must be nonnegative");
    }

    Scalar sigma() const { return std::sqrt(variance); }

    /// sigma * ||f||_{inf, D_eps}; dimensionless.
    Scalar m_eps() const { return sigma() * sup_density_on_tail; }
};

template <typename Scalar>
struct MomentSpecMulti {
    int dim;
    Scalar cov_det;
    Scalar sup_density_on_tail;

    MomentSpecMulti(int dim_, Scalar cov_det_, Scalar sup_)
        : dim(dim_), cov_det(cov_det_), sup_density_on_tail(sup_)
    {
        if (dim < 1)
            throw std::domain_error("dimension must be at least 1");
        if (!(cov_det > Scalar(0)) || !std::isfinite(cov_det))
            throw std::domain_error("covariance determinant must be positive");
        if (!(sup_density_on_tail >= Scalar(0)) || !std::isfinite(sup_density_on_tail))
            throw std::domain_error("density supremum must be nonnegative");
    }

    /// Builds a MomentSpec from a full covariance matrix; the matrix must be
    /// symmetric positive definite.
    template <typename Derived>
    static MomentSpecMulti from_covariance(const Eigen::MatrixBase<Derived>& cov, Scalar sup)
    {
        if (cov.rows() != cov.cols() || cov.rows() < 1)
            throw std::domain_error("covariance must be a non-empty square matrix");
        using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
        const Matrix m = cov.template cast<Scalar>();
        Eigen::LLT<Matrix> llt(m);
        if (llt.info() != Eigen::Success || !m.isApprox(m.transpose()))
            throw std::domain_error("covariance must be symmetric positive definite");
        const Scalar det = llt.matrixL().toDenseMatrix().diagonal().prod();
        return MomentSpecMulti(static_cast<int>(m.rows()), det * det, sup);
    }

    /// (det Sigma)^{1/2} * ||f||_{inf, D_eps}; dimensionless.
    Scalar m_eps() const { return std::sqrt(cov_det) * sup_density_on_tail; }
};

/// A probability together with whether it was capped at 1.
template <typename Scalar>
struct ClampedProbability {
    Scalar value;
    bool clamped;
};

template <typename Scalar>
ClampedProbability<Scalar> clamp_probability(Scalar raw)
{
    if (raw > Scalar(1))
        return {Scalar(1), true};
    return {std::max(raw, Scalar(0)), false};
}

/// T(x) = c3 x^3 + c2 x^2 + c1 x + c0.
template <typename Scalar>
struct CubicCoefficients {
    Scalar c3;
    Scalar c2;
    Scalar c1;
    Scalar c0;

    Scalar operator()(Scalar x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
    Scalar derivative(Scalar x) const { return (Scalar(3) * c3 * x + Scalar(2) * c2) * x + c1; }
};

/// Coefficients (1/(2 pi e), eps/e, eps^2, -1/m) of the cubic whose positive
/// root bounds Pr(D_eps) / m_eps. Empty when m_eps == 0 (no density on the
/// tail set, the constant term is singular).
template <typename Scalar>
std::optional<CubicCoefficients<Scalar>> cubic_coefficients(Epsilon<Scalar> eps, Scalar m_eps)
{
    if (!(m_eps >= Scalar(0)) || !std::isfinite(m_eps))
        throw std::domain_error("m_eps must be finite and nonnegative");
    if (m_eps == Scalar(0))
        return std::nullopt;
    const Scalar e = eps.value();
    return CubicCoefficients<Scalar>{Scalar(1) / two_pi_e_v<Scalar>, e / e_v<Scalar>, e * e,
                                     -Scalar(1) / m_eps};
}

/// Acceptance threshold on |T(alpha)|; scales with the constant term. For
/// scalars coarser than double the floor is a few units of round-off.
template <typename Scalar>
Scalar alpha_residual_tolerance(Scalar m_eps)
{
    const Scalar floor = std::max(Scalar(1e-12), Scalar(8) * std::numeric_limits<Scalar>::epsilon());
    return floor * std::max(Scalar(1), Scalar(1) / m_eps);
}

/// Right end of a bracket with T(0) < 0 < T(upper). Each of (2 pi e / m)^{1/3}
/// and 1/(eps^2 m) already makes T nonnegative on its own; the smaller one
/// plus 1 is strictly inside the positive region and never overflows first.
template <typename Scalar>
Scalar alpha_bracket(Epsilon<Scalar> eps, Scalar m_eps)
{
    const Scalar e = eps.value();
    const Scalar cubic_part = std::cbrt(two_pi_e_v<Scalar> / m_eps);
    const Scalar linear_part = Scalar(1) / (e * e * m_eps);
    return std::min(cubic_part, linear_part) + Scalar(1);
}

/// Unique positive root of T. T is convex and strictly increasing on
/// [0, inf), so Newton started at the right end of the bracket descends
/// monotonically onto the root; bisection takes over whenever a step leaves
/// the current bracket. Empty when m_eps == 0.
template <typename Scalar>
std::optional<Scalar> solve_alpha(Epsilon<Scalar> eps, Scalar m_eps)
{
    const auto coeffs = cubic_coefficients(eps, m_eps);
    if (!coeffs)
        return std::nullopt;
    const CubicCoefficients<Scalar>& poly = *coeffs;

    constexpr Scalar round_off = std::numeric_limits<Scalar>::epsilon();
    constexpr int max_iterations = 200;

    Scalar lo = Scalar(0);
    Scalar hi = alpha_bracket(eps, m_eps);
    Scalar x = hi;
    for (int iter = 0; iter < max_iterations; ++iter) {
        const Scalar fx = poly(x);
        if (fx == Scalar(0))
            return x;
        if (fx < Scalar(0))
            lo = x;
        else
            hi = x;

        Scalar next = x - fx / poly.derivative(x);
        if (!(next > lo && next < hi))
            next = lo + (hi - lo) / Scalar(2);
        const bool settled = std::abs(next - x) <= Scalar(4) * round_off * next
                             || hi - lo <= Scalar(2) * round_off * hi;
        x = next;
        if (settled)
            break;
    }

    if (!(std::abs(poly(x)) <= alpha_residual_tolerance(m_eps)))
        throw std::runtime_error("solve_alpha: residual tolerance not reached");
    return x;
}

template <typename Scalar>
std::optional<Scalar> solve_alpha(Scalar eps, Scalar m_eps)
{
    return solve_alpha(Epsilon<Scalar>(eps), m_eps);
}

/// min(1, 1/eps^2).
template <typename Scalar>
Scalar bound_chebyshev_classical(Epsilon<Scalar> eps)
{
    const Scalar e = eps.value();
    return std::min(Scalar(1), Scalar(1) / (e * e));
}

/// One-sided (Cantelli) bound 1/(1 + eps^2) on Pr((X - mu)/sigma >= eps).
template <typename Scalar>
Scalar bound_chebyshev_one_sided(Epsilon<Scalar> eps)
{
    const Scalar e = eps.value();
    return Scalar(1) / (Scalar(1) + e * e);
}

/// min(1, n/eps^2) for the Mahalanobis tail event.
template <typename Scalar>
Scalar bound_multivariate_chen(Epsilon<Scalar> eps, int dim)
{
    if (dim < 1)
        throw std::domain_error("dimension must be at least 1");
    const Scalar e = eps.value();
    return std::min(Scalar(1), static_cast<Scalar>(dim) / (e * e));
}

template <typename Scalar>
struct TheoremBound {
    Scalar m_eps;
    std::optional<Scalar> alpha; ///< empty when m_eps == 0
    Scalar value;                ///< clamp(alpha * m_eps)
    bool clamped;
};

/// alpha * m_eps, clamped to [0, 1]; zero when m_eps == 0.
template <typename Scalar>
TheoremBound<Scalar> theorem_bound_from_m_eps(Epsilon<Scalar> eps, Scalar m_eps)
{
    const std::optional<Scalar> alpha = solve_alpha(eps, m_eps);
    if (!alpha)
        return {m_eps, std::nullopt, Scalar(0), false};
    const auto clamped = clamp_probability(*alpha * m_eps);
    return {m_eps, alpha, clamped.value, clamped.clamped};
}

template <typename Scalar>
TheoremBound<Scalar> bound_1d_theorem(Epsilon<Scalar> eps, const MomentSpec1D<Scalar>& spec)
{
    return theorem_bound_from_m_eps(eps, spec.m_eps());
}

template <typename Scalar>
struct CorollaryBound {
    Scalar value; ///< min(chebyshev, term_sqrt, term_cuberoot)
    Scalar chebyshev;
    Scalar term_sqrt;
    Scalar term_cuberoot;
};

template <typename Scalar>
CorollaryBound<Scalar> corollary_bound_from_m_eps(Epsilon<Scalar> eps, Scalar m_eps)
{
    if (!(m_eps >= Scalar(0)) || !std::isfinite(m_eps))
        throw std::domain_error("m_eps must be finite and nonnegative");
    const Scalar e = eps.value();
    CorollaryBound<Scalar> out{};
    out.chebyshev = bound_chebyshev_classical(eps);
    out.term_sqrt = std::sqrt(e_v<Scalar> / e) * std::sqrt(m_eps);
    out.term_cuberoot = std::cbrt(two_pi_e_v<Scalar>) * std::cbrt(m_eps * m_eps);
    out.value = std::min({out.chebyshev, out.term_sqrt, out.term_cuberoot});
    return out;
}

template <typename Scalar>
CorollaryBound<Scalar> bound_1d_corollary(Epsilon<Scalar> eps, const MomentSpec1D<Scalar>& spec)
{
    return corollary_bound_from_m_eps(eps, spec.m_eps());
}

template <typename Scalar>
struct BoundReport {
    Scalar epsilon;
    Scalar m_eps;
    Scalar theorem_bound;
    Scalar corollary_bound;
    Scalar chebyshev;
    Scalar term_sqrt;
    Scalar term_cuberoot;
    bool clamped;
};

template <typename Scalar>
BoundReport<Scalar> bound_report_from_m_eps(Epsilon<Scalar> eps, Scalar m_eps)
{
    const auto theorem = theorem_bound_from_m_eps(eps, m_eps);
    const auto corollary = corollary_bound_from_m_eps(eps, m_eps);
    const Scalar e = eps.value();
    const bool chebyshev_capped = Scalar(1) / (e * e) > Scalar(1);
    return {e,
            m_eps,
            theorem.value,
            corollary.value,
            corollary.chebyshev,
            corollary.term_sqrt,
            corollary.term_cuberoot,
            theorem.clamped || chebyshev_capped};
}

template <typename Scalar>
BoundReport<Scalar> bound_1d(Epsilon<Scalar> eps, const MomentSpec1D<Scalar>& spec)
{
    return bound_report_from_m_eps(eps, spec.m_eps());
}

template <typename Scalar>
struct MultiBoundReport {
    Scalar epsilon;
    int dim;
    Scalar m_eps;
    Scalar chen;          ///< min(1, n/eps^2)
    Scalar improved_term; ///< (2 pi e)^{n/(n+2)} m^{2/(n+2)}, unclamped
    Scalar bound;         ///< min(chen, improved_term)
    bool clamped;
};

template <typename Scalar>
MultiBoundReport<Scalar> multivariate_bound_from_m_eps(Epsilon<Scalar> eps, int dim, Scalar m_eps)
{
    if (!(m_eps >= Scalar(0)) || !std::isfinite(m_eps))
        throw std::domain_error("m_eps must be finite and nonnegative");
    const Scalar n = static_cast<Scalar>(dim);
    const Scalar e = eps.value();
    MultiBoundReport<Scalar> out{};
    out.epsilon = e;
    out.dim = dim;
    out.m_eps = m_eps;
    out.chen = bound_multivariate_chen(eps, dim);
    out.improved_term = m_eps == Scalar(0)
                            ? Scalar(0)
                            : std::pow(two_pi_e_v<Scalar>, n / (n + Scalar(2)))
                                  * std::pow(m_eps, Scalar(2) / (n + Scalar(2)));
    out.bound = std::min(out.chen, out.improved_term);
    out.clamped = n / (e * e) > Scalar(1) && out.bound == out.chen;
    return out;
}

template <typename Scalar>
MultiBoundReport<Scalar> bound_multivariate_improved(Epsilon<Scalar> eps,
                                                     const MomentSpecMulti<Scalar>& spec)
{
    return multivariate_bound_from_m_eps(eps, spec.dim, spec.m_eps());
}

} // namespace chebtail
