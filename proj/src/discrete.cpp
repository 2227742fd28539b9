#include <chebtail/discrete.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

namespace chebtail {

namespace {

constexpr std::int64_t max_outward_terms = std::int64_t{1} << 32;

std::int64_t to_index(double x, const char* what)
{
    if (!std::isfinite(x) || std::abs(x) > 9.0e15)
        throw std::domain_error(std::string("tail geometry: ") + what + " is out of integer range");
    return static_cast<std::int64_t>(x);
}

// Certified bound on sum_{j beyond k in direction dir} p(j), given p(k).
double remainder_after(const DiscreteSpec& spec, std::int64_t k, int dir, double pk)
{
    double bound = std::numeric_limits<double>::infinity();

    const double distance = dir * (static_cast<double>(k + dir) - spec.mean());
    if (distance > 0)
        bound = spec.variance() / (distance * distance);

    if (spec.shape() == PmfShape::log_concave && spec.mode()
        && dir * (k - *spec.mode()) >= 0) {
        if (pk == 0)
            return 0;
        const double next = spec.pmf(k + dir);
        const double ratio = next / pk;
        if (ratio < 1)
            bound = std::min(bound, next / (1 - ratio));
    }
    return bound;
}

// Visits k = start, start + dir, ... until the support ends or the unvisited
// remainder is certified below `tolerance`.
template <typename Visit>
TailSum sum_outward(const DiscreteSpec& spec, std::int64_t start, int dir, double tolerance,
                    Visit&& visit)
{
    TailSum out;
    const auto near_end = dir > 0 ? spec.support_lo() : spec.support_hi();
    const auto far_end = dir > 0 ? spec.support_hi() : spec.support_lo();
    if (near_end && dir * (start - *near_end) < 0)
        start = *near_end;
    if (far_end && dir * (start - *far_end) > 0)
        return out;

    std::int64_t k = start;
    for (std::int64_t n = 0; n < max_outward_terms; ++n, k += dir) {
        const double pk = spec.pmf(k);
        out.value += pk;
        visit(k, pk);
        if (far_end && k == *far_end)
            return out;
        const double rest = remainder_after(spec, k, dir, pk);
        if (rest <= tolerance) {
            out.remainder_bound = rest;
            return out;
        }
    }
    throw std::runtime_error("tail summation for '" + spec.name()
                             + "' did not reach the truncation tolerance");
}

TailSum sum_outward(const DiscreteSpec& spec, std::int64_t start, int dir, double tolerance)
{
    return sum_outward(spec, start, dir, tolerance, [](std::int64_t, double) {});
}

bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

} // namespace

DiscreteSpec DiscreteSpec::from_table(std::int64_t lo, std::vector<double> probabilities,
                                      std::string name)
{
    if (probabilities.empty())
        throw std::invalid_argument("pmf table must not be empty");
    for (double p : probabilities) {
        if (!(p >= 0) || !std::isfinite(p))
            throw std::invalid_argument("pmf table entries must be finite and nonnegative");
    }
    auto table = std::make_shared<const std::vector<double>>(std::move(probabilities));
    const auto hi = lo + static_cast<std::int64_t>(table->size()) - 1;

    double mean = 0;
    for (std::size_t i = 0; i < table->size(); ++i)
        mean += static_cast<double>(lo + static_cast<std::int64_t>(i)) * (*table)[i];
    double variance = 0;
    for (std::size_t i = 0; i < table->size(); ++i) {
        const double d = static_cast<double>(lo + static_cast<std::int64_t>(i)) - mean;
        variance += d * d * (*table)[i];
    }

    DiscreteSpec spec;
    spec.name_ = std::move(name);
    spec.pmf_ = [table, lo](std::int64_t k) { return (*table)[static_cast<std::size_t>(k - lo)]; };
    spec.lo_ = lo;
    spec.hi_ = hi;
    spec.mean_ = mean;
    spec.variance_ = variance;
    spec.validate();
    return spec;
}

DiscreteSpec DiscreteSpec::from_family(std::string name, Pmf pmf, std::optional<std::int64_t> lo,
                                       std::optional<std::int64_t> hi, double mean,
                                       double variance, PmfShape shape,
                                       std::optional<std::int64_t> mode)
{
    DiscreteSpec spec;
    spec.name_ = std::move(name);
    spec.pmf_ = std::move(pmf);
    spec.lo_ = lo;
    spec.hi_ = hi;
    spec.mean_ = mean;
    spec.variance_ = variance;
    spec.shape_ = shape;
    spec.mode_ = mode;
    spec.validate();
    return spec;
}

void DiscreteSpec::validate()
{
    if (!pmf_)
        throw std::invalid_argument("pmf must be callable");
    if (lo_ && hi_ && *lo_ > *hi_)
        throw std::invalid_argument("pmf support is empty");
    if (!std::isfinite(mean_))
        throw std::invalid_argument("pmf mean must be finite");
    if (!(variance_ > 0) || !std::isfinite(variance_))
        throw std::invalid_argument("pmf variance must be positive");
    if (shape_ != PmfShape::unspecified && !mode_)
        throw std::invalid_argument("a unimodal pmf must declare its mode");
    if (!finite_support() && shape_ == PmfShape::unspecified)
        throw std::invalid_argument("a pmf with unbounded support must declare its shape");

    // Walk outward from a central point in both directions.
    const std::int64_t centre = mode_ ? *mode_ : to_index(std::floor(mean_), "mean");
    double first = 0;
    double second = 0;
    auto accumulate = [&](std::int64_t k, double pk) {
        if (!(pk >= 0) || !std::isfinite(pk))
            throw std::invalid_argument("pmf of '" + name_ + "' returned a negative or non-finite value");
        const double d = static_cast<double>(k) - mean_;
        first += static_cast<double>(k) * pk;
        second += d * d * pk;
    };
    const TailSum up = sum_outward(*this, centre, +1, tail_truncation_tolerance, accumulate);
    const TailSum down = sum_outward(*this, centre - 1, -1, tail_truncation_tolerance, accumulate);
    const double total = up.value + down.value;

    if (!(std::abs(total - 1.0) <= 1e-12))
        throw std::invalid_argument("pmf of '" + name_ + "' does not sum to 1 within 1e-12");
    if (!close(first, mean_, 1e-9))
        throw std::invalid_argument("pmf of '" + name_ + "' is inconsistent with its declared mean");
    if (!close(second, variance_, 1e-9))
        throw std::invalid_argument("pmf of '" + name_ + "' is inconsistent with its declared variance");
}

double DiscreteSpec::pmf(std::int64_t k) const
{
    if ((lo_ && k < *lo_) || (hi_ && k > *hi_))
        return 0;
    return pmf_(k);
}

double DiscreteSpec::embedded_density(double x) const
{
    if (!std::isfinite(x))
        return 0;
    return pmf(static_cast<std::int64_t>(std::floor(x)));
}

double DiscreteSpec::max_pmf(std::optional<std::int64_t> a, std::optional<std::int64_t> b) const
{
    std::optional<std::int64_t> lower = a;
    if (lo_)
        lower = lower ? std::max(*lower, *lo_) : *lo_;
    std::optional<std::int64_t> upper = b;
    if (hi_)
        upper = upper ? std::min(*upper, *hi_) : *hi_;
    if (lower && upper && *lower > *upper)
        return 0;

    if (shape_ != PmfShape::unspecified) {
        std::int64_t k = *mode_;
        if (lower)
            k = std::max(k, *lower);
        if (upper)
            k = std::min(k, *upper);
        return pmf(k);
    }
    if (!lower || !upper)
        throw std::invalid_argument("pmf '" + name_
                                    + "' has unbounded support but no declared unimodal shape; "
                                      "its supremum over a tail set cannot be located");
    double best = 0;
    for (std::int64_t k = *lower; k <= *upper; ++k)
        best = std::max(best, pmf(k));
    return best;
}

DiscreteSpec poisson_spec(double lambda)
{
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw std::invalid_argument("poisson rate must be positive");
    const double log_lambda = std::log(lambda);
    auto pmf = [lambda, log_lambda](std::int64_t k) {
        const double kk = static_cast<double>(k);
        return std::exp(kk * log_lambda - lambda - std::lgamma(kk + 1));
    };
    return DiscreteSpec::from_family("poisson", pmf, 0, std::nullopt, lambda, lambda,
                                     PmfShape::log_concave,
                                     static_cast<std::int64_t>(std::floor(lambda)));
}

DiscreteSpec binomial_spec(std::int64_t trials, double p)
{
    if (trials < 1)
        throw std::invalid_argument("binomial trial count must be positive");
    if (!(p > 0 && p < 1))
        throw std::invalid_argument("binomial success probability must lie in (0, 1)");
    const double n = static_cast<double>(trials);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_n_fact = std::lgamma(n + 1);
    auto pmf = [n, log_p, log_q, log_n_fact](std::int64_t k) {
        const double kk = static_cast<double>(k);
        return std::exp(log_n_fact - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) + kk * log_p
                        + (n - kk) * log_q);
    };
    const auto mode = std::min(trials, static_cast<std::int64_t>(std::floor((n + 1) * p)));
    return DiscreteSpec::from_family("binomial", pmf, 0, trials, n * p, n * p * (1 - p),
                                     PmfShape::log_concave, mode);
}

DiscreteSpec geometric_spec(double q)
{
    if (!(q > 0 && q < 1))
        throw std::invalid_argument("geometric success probability must lie in (0, 1)");
    const double log_q = std::log(q);
    const double log_fail = std::log1p(-q);
    auto pmf = [log_q, log_fail](std::int64_t k) {
        return std::exp(log_q + static_cast<double>(k) * log_fail);
    };
    return DiscreteSpec::from_family("geometric", pmf, 0, std::nullopt, (1 - q) / q,
                                     (1 - q) / (q * q), PmfShape::log_concave, 0);
}

double embed_variance(const DiscreteSpec& spec)
{
    return spec.variance() + 1.0 / 12.0;
}

DiscreteTailGeometry tail_geometry(Epsilon<double> eps, double mean, double variance)
{
    if (!std::isfinite(mean))
        throw std::domain_error("mean must be finite");
    if (!(variance >= 0) || !std::isfinite(variance))
        throw std::domain_error("variance must be nonnegative");
    DiscreteTailGeometry g{};
    g.sigma_f = std::sqrt(variance + 1.0 / 12.0);
    const double centre = mean + 0.5;
    const double half_width = eps.value() * g.sigma_f;
    g.x_L = centre - half_width;
    g.x_R = centre + half_width;
    g.M_eps_lo = to_index(std::floor(g.x_L), "x_L");
    g.D_eps_lo = g.M_eps_lo - 1;
    g.D_eps_hi = to_index(std::ceil(g.x_R), "x_R");
    g.M_eps_hi = to_index(std::floor(g.x_R), "x_R");
    return g;
}

DiscreteTailGeometry tail_geometry(Epsilon<double> eps, const DiscreteSpec& spec)
{
    return tail_geometry(eps, spec.mean(), spec.variance());
}

bool in_bounded_set(std::int64_t k, const DiscreteTailGeometry& g)
{
    return k <= g.D_eps_lo || k >= g.D_eps_hi;
}

bool in_symmetric_set(std::int64_t k, const DiscreteTailGeometry& g)
{
    return k <= g.M_eps_lo || k >= g.D_eps_hi;
}

bool in_supremum_set(std::int64_t k, const DiscreteTailGeometry& g)
{
    return k <= g.M_eps_lo || k >= g.M_eps_hi;
}

double discrete_m_eps(Epsilon<double> eps, const DiscreteSpec& spec)
{
    const DiscreteTailGeometry g = tail_geometry(eps, spec);
    const double left = spec.max_pmf(std::nullopt, g.M_eps_lo);
    const double right = spec.max_pmf(g.M_eps_hi, std::nullopt);
    return g.sigma_f * std::max(left, right);
}

DiscreteBound bound_discrete_theorem(Epsilon<double> eps, const DiscreteSpec& spec)
{
    const double m = discrete_m_eps(eps, spec);
    const TheoremBound<double> t = theorem_bound_from_m_eps(eps, m);
    return {m, t.alpha, 0.0, t.value, t.clamped};
}

DiscreteBound bound_discrete_corollary(Epsilon<double> eps, const DiscreteSpec& spec)
{
    const DiscreteTailGeometry g = tail_geometry(eps, spec);
    const double m = discrete_m_eps(eps, spec);
    const std::optional<double> alpha = solve_alpha(eps, m);
    const double edge = spec.pmf(g.M_eps_lo);
    const auto clamped = clamp_probability((alpha ? *alpha * m : 0.0) + edge);
    return {m, alpha, edge, clamped.value, clamped.clamped};
}

TailSum outer_probability(const DiscreteSpec& spec, std::int64_t left, std::int64_t right)
{
    if (!(left < right))
        throw std::invalid_argument("outer_probability: left edge must be below right edge");
    // Each side gets half the budget so the total stays certified.
    const TailSum down = sum_outward(spec, left, -1, tail_truncation_tolerance / 2);
    const TailSum up = sum_outward(spec, right, +1, tail_truncation_tolerance / 2);
    return {down.value + up.value, down.remainder_bound + up.remainder_bound};
}

TailSum bounded_set_probability(Epsilon<double> eps, const DiscreteSpec& spec)
{
    const DiscreteTailGeometry g = tail_geometry(eps, spec);
    return outer_probability(spec, g.D_eps_lo, g.D_eps_hi);
}

TailSum symmetric_set_probability(Epsilon<double> eps, const DiscreteSpec& spec)
{
    const DiscreteTailGeometry g = tail_geometry(eps, spec);
    return outer_probability(spec, g.M_eps_lo, g.D_eps_hi);
}

} // namespace chebtail
