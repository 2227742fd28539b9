#pragma once

// Bounds for integer-valued random variables via the floor embedding
// f(x) = p(floor(x)), which turns a pmf with mean mu and variance sigma^2 into
// a piecewise-constant density with mean mu + 1/2 and variance sigma^2 + 1/12.

#include <chebtail/bounds.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chebtail {

/// Structural facts about a pmf that let suprema and tail sums over infinite
/// index sets be computed from finitely many evaluations.
enum class PmfShape {
    unspecified, ///< nothing known; only usable on a finite support
    unimodal,    ///< nondecreasing up to `mode`, nonincreasing after it
    log_concave, ///< unimodal, and p(k+1)/p(k) is nonincreasing
};

/// Immutable integer pmf with its first two moments. Construction verifies
/// normalization to 1e-12 and the declared moments to 1e-9.
class DiscreteSpec {
public:
    using Pmf = std::function<double(std::int64_t)>;

    /// Explicit table: probabilities[i] = p(lo + i). Moments are derived.
    static DiscreteSpec from_table(std::int64_t lo, std::vector<double> probabilities,
                                   std::string name = "table");

    /// Parametric family given as a closure. `hi` empty means unbounded above;
    /// `lo` empty means unbounded below. Shape and mode are required whenever
    /// either end is unbounded.
    static DiscreteSpec from_family(std::string name, Pmf pmf, std::optional<std::int64_t> lo,
                                    std::optional<std::int64_t> hi, double mean, double variance,
                                    PmfShape shape, std::optional<std::int64_t> mode);

    /// p(k); zero outside the declared support.
    double pmf(std::int64_t k) const;

    /// f(x) = p(floor(x)).
    double embedded_density(double x) const;

    const std::string& name() const { return name_; }
    std::optional<std::int64_t> support_lo() const { return lo_; }
    std::optional<std::int64_t> support_hi() const { return hi_; }
    bool finite_support() const { return lo_.has_value() && hi_.has_value(); }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    PmfShape shape() const { return shape_; }
    std::optional<std::int64_t> mode() const { return mode_; }

    /// Largest p(k) over the integer range [a, b] (either end may be open),
    /// intersected with the support. Zero for an empty intersection.
    double max_pmf(std::optional<std::int64_t> a, std::optional<std::int64_t> b) const;

private:
    DiscreteSpec() = default;
    void validate();

    std::string name_;
    Pmf pmf_;
    std::optional<std::int64_t> lo_;
    std::optional<std::int64_t> hi_;
    double mean_ = 0;
    double variance_ = 0;
    PmfShape shape_ = PmfShape::unspecified;
    std::optional<std::int64_t> mode_;
};

DiscreteSpec poisson_spec(double lambda);
DiscreteSpec binomial_spec(std::int64_t trials, double p);
/// Number of failures before the first success, p(k) = q (1-q)^k.
DiscreteSpec geometric_spec(double q);

struct DiscreteTailGeometry {
    double sigma_f;
    double x_L;
    double x_R;
    std::int64_t D_eps_lo; ///< floor(x_L) - 1: left tail of the bounded set is k <= D_eps_lo
    std::int64_t D_eps_hi; ///< ceil(x_R): right tail is k >= D_eps_hi
    std::int64_t M_eps_lo; ///< floor(x_L): the supremum runs over k <= M_eps_lo
    std::int64_t M_eps_hi; ///< floor(x_R): ... and k >= M_eps_hi
};

/// sigma^2 + 1/12.
double embed_variance(const DiscreteSpec& spec);

DiscreteTailGeometry tail_geometry(Epsilon<double> eps, double mean, double variance);
DiscreteTailGeometry tail_geometry(Epsilon<double> eps, const DiscreteSpec& spec);

/// k <= floor(x_L) - 1 or k >= ceil(x_R).
bool in_bounded_set(std::int64_t k, const DiscreteTailGeometry& g);
/// (k - mu - 1/2)^2 >= eps^2 sigma_f^2, i.e. k <= floor(x_L) or k >= ceil(x_R).
bool in_symmetric_set(std::int64_t k, const DiscreteTailGeometry& g);
/// k <= floor(x_L) or k >= floor(x_R).
bool in_supremum_set(std::int64_t k, const DiscreteTailGeometry& g);

/// sigma_f * max_{k in M_eps} p(k).
double discrete_m_eps(Epsilon<double> eps, const DiscreteSpec& spec);

struct DiscreteBound {
    double m_eps;
    std::optional<double> alpha;
    double edge_mass; ///< p(floor(x_L)); zero for the theorem form
    double value;     ///< clamp(alpha * m_eps + edge_mass)
    bool clamped;
};

/// alpha * m_eps for Pr(k <= floor(x_L) - 1 or k >= ceil(x_R)).
DiscreteBound bound_discrete_theorem(Epsilon<double> eps, const DiscreteSpec& spec);

/// alpha * m_eps + p(floor(x_L)) for the symmetric set.
DiscreteBound bound_discrete_corollary(Epsilon<double> eps, const DiscreteSpec& spec);

/// A tail sum together with a certified bound on the mass it left out.
struct TailSum {
    double value = 0;
    double remainder_bound = 0;
};

/// Stop summing once the certified remainder drops below this.
inline constexpr double tail_truncation_tolerance = 1e-14;

/// Pr(k <= left) + Pr(k >= right), left < right.
TailSum outer_probability(const DiscreteSpec& spec, std::int64_t left, std::int64_t right);

/// Exact probability of the set bounded by bound_discrete_theorem.
TailSum bounded_set_probability(Epsilon<double> eps, const DiscreteSpec& spec);

/// Exact probability of the symmetric set bounded by bound_discrete_corollary.
TailSum symmetric_set_probability(Epsilon<double> eps, const DiscreteSpec& spec);

} // namespace chebtail
