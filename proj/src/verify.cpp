#include <chebtail/verify.hpp>

#include <chebtail/bounds.hpp>
#include <chebtail/discrete.hpp>
#include <chebtail/oracles.hpp>
#include <chebtail/quadrature.hpp>
#include <chebtail/report.hpp>
#include <chebtail/rng.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace chebtail {

namespace {

using Checks = std::vector<CheckResult>;

// Tracks the most negative slack seen across a family of inequalities.
struct Slack {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;

    void observe(double slack, const std::string& label)
    {
        if (slack < worst) {
            worst = slack;
            where = label;
        }
    }

    std::string describe() const
    {
        std::ostringstream s;
        s << "min slack " << format_number(worst) << " at " << where;
        return s.str();
    }
};

void add(Checks& out, const char* group, const char* name, bool passed, std::string detail)
{
    out.push_back({group, name, passed, std::move(detail)});
}

std::string label(const std::string& who, double eps)
{
    return who + " eps=" + format_number(eps);
}

// Root group: independent reference solutions of the cubic in long double.

long double cubic_value(long double eps, long double m, long double x)
{
    const long double two_pi_e = two_pi_e_v<long double>;
    return x * x * x / two_pi_e + eps / e_v<long double> * x * x + eps * eps * x - 1 / m;
}

long double bisection_alpha(long double eps, long double m)
{
    long double lo = 0;
    long double hi = 1;
    while (cubic_value(eps, m, hi) < 0)
        hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        (cubic_value(eps, m, mid) < 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

// x^3 + b x^2 + c x + d with x = t - b/3 gives t^3 + p t + q; the discriminant
// is positive (T' has no real zero), so there is exactly one real root.
long double cardano_alpha(long double eps, long double m)
{
    const long double a = 1 / two_pi_e_v<long double>;
    const long double b = eps / e_v<long double> / a;
    const long double c = eps * eps / a;
    const long double d = -1 / m / a;
    const long double p = c - b * b / 3;
    const long double q = 2 * b * b * b / 27 - b * c / 3 + d;
    const long double disc = q * q / 4 + p * p * p / 27;
    const long double u = std::cbrt(-q / 2 - std::copysign(std::sqrt(disc), q));
    const long double t = u - p / (3 * u);
    return t - b / 3;
}

void root_checks(Checks& out)
{
    const double eps_grid[] = {0.25, 0.5, 1, 2, 4, 8};
    const double m_grid[] = {1e-4, 1e-2, 0.1, 1, 10};
    double worst_rel = 0;
    double worst_residual = 0;
    bool bracketed = true;
    for (double e : eps_grid) {
        for (double m : m_grid) {
            const Epsilon<double> eps(e);
            const double alpha = *solve_alpha(eps, m);
            const long double bis = bisection_alpha(e, m);
            const long double card = cardano_alpha(e, m);
            worst_rel = std::max({worst_rel, static_cast<double>(std::abs(alpha - bis) / bis),
                                  static_cast<double>(std::abs(alpha - card) / card)});
            const auto poly = *cubic_coefficients(eps, m);
            worst_residual =
                std::max(worst_residual, std::abs(poly(alpha)) / alpha_residual_tolerance(m));
            const double delta = 1e-6 * alpha;
            bracketed = bracketed && poly(alpha - delta) < 0 && poly(alpha + delta) > 0;
        }
    }
    add(out, "root", "alpha-vs-bisection-and-cardano", worst_rel <= 1e-10,
        "max relative difference " + format_number(worst_rel));
    add(out, "root", "alpha-residual", worst_residual <= 1,
        "max |T(alpha)| / tolerance " + format_number(worst_residual));
    add(out, "root", "alpha-unique-sign-change", bracketed, "T(alpha -+ 1e-6 alpha) straddles 0");
}

// Entropy group.

void entropy_checks(Checks& out)
{
    constexpr double slack_floor = -1e-8;
    Slack variance_maxent, abs_maxent, second_moment, abs_moment_floor, sup_norm, closed_form;
    double normal_gap = 0;
    double laplace_gap = 0;
    const double zero_kink[] = {0.0};

    for (const auto& oracle : continuous_zoo()) {
        const EntropyEstimate h = differential_entropy(*oracle);
        const std::string who = oracle->name() + "(mean=" + format_number(oracle->mean())
                                + ", var=" + format_number(oracle->variance()) + ")";
        const double var_bound = 0.5 * (1 + std::log(2 * pi_v<double> * oracle->variance()));
        const double abs_moment = expectation(*oracle, [](double x) { return std::abs(x); }, zero_kink);
        const double sq_moment = expectation(*oracle, [](double x) { return x * x; });
        const double abs_bound = 1 + std::log(2 * abs_moment);

        variance_maxent.observe(var_bound - h.value, who);
        abs_maxent.observe(abs_bound - h.value, who);
        second_moment.observe(sq_moment - std::exp(2 * h.value) / two_pi_e_v<double>, who);
        abs_moment_floor.observe(abs_moment - std::exp(h.value) / (2 * e_v<double>), who);
        sup_norm.observe(std::exp(h.value) - 1 / oracle->sup_density(), who);
        closed_form.observe(-std::abs(h.value - oracle->reference_entropy()), who);

        if (oracle->name() == "normal")
            normal_gap = std::max(normal_gap, std::abs(var_bound - h.value));
        if (oracle->name() == "laplace" && oracle->mean() == 0)
            laplace_gap = std::max(laplace_gap, std::abs(abs_bound - h.value));
    }
    add(out, "entropy", "variance-maxent", variance_maxent.worst >= slack_floor, variance_maxent.describe());
    add(out, "entropy", "variance-maxent-normal-equality", normal_gap <= 1e-6,
        "gap " + format_number(normal_gap));
    add(out, "entropy", "abs-moment-maxent", abs_maxent.worst >= slack_floor, abs_maxent.describe());
    add(out, "entropy", "abs-moment-maxent-laplace-equality", laplace_gap <= 1e-6,
        "gap " + format_number(laplace_gap));
    add(out, "entropy", "second-moment-vs-entropy", second_moment.worst >= slack_floor,
        second_moment.describe());
    add(out, "entropy", "abs-moment-vs-entropy", abs_moment_floor.worst >= slack_floor,
        abs_moment_floor.describe());
    add(out, "entropy", "entropy-vs-sup-norm", sup_norm.worst >= slack_floor, sup_norm.describe());
    add(out, "entropy", "quadrature-matches-closed-form", closed_form.worst >= -1e-8,
        closed_form.describe());

    // Multivariate: independent products by decomposition, plus a correlated normal.
    Slack cov_maxent, trace_floor;
    double product_normal_gap = 0;
    auto check_multi = [&](const std::string& who, double h, const Eigen::MatrixXd& cov,
                           bool is_normal) {
        const double n = static_cast<double>(cov.rows());
        const double det = cov.determinant();
        const double h_max = 0.5 * (n + std::log(std::pow(2 * pi_v<double>, n) * det));
        cov_maxent.observe(h_max - h, who);
        trace_floor.observe(cov.trace() / n - std::exp(2 * h / n) / two_pi_e_v<double>, who);
        if (is_normal)
            product_normal_gap = std::max(product_normal_gap, std::abs(h_max - h));
    };
    const ProductOracle normals({std::make_shared<NormalOracle>(0.0, 1.0),
                                 std::make_shared<NormalOracle>(1.0, 2.0)});
    check_multi("independent bivariate normal", normals.differential_entropy().value,
                normals.covariance(), true);
    const ProductOracle uniforms({std::make_shared<UniformOracle>(0.0, 1.0),
                                  std::make_shared<UniformOracle>(-1.0, 2.0)});
    check_multi("bivariate uniform", uniforms.differential_entropy().value, uniforms.covariance(),
                false);
    Eigen::MatrixXd cov(2, 2);
    cov << 2.0, 0.8, 0.8, 1.0;
    const MultiNormalOracle correlated(Eigen::VectorXd::Zero(2), cov);
    check_multi("correlated bivariate normal", correlated.reference_entropy(), cov, true);

    add(out, "entropy", "covariance-maxent", cov_maxent.worst >= slack_floor, cov_maxent.describe());
    add(out, "entropy", "covariance-maxent-normal-equality", product_normal_gap <= 1e-6,
        "gap " + format_number(product_normal_gap));
    add(out, "entropy", "trace-vs-entropy", trace_floor.worst >= slack_floor, trace_floor.describe());
}

// Validity group: exact probabilities never exceed the bounds.

void validity_checks(Checks& out)
{
    constexpr double tol = 1e-12;
    const std::vector<double> grid = make_grid(0.1, 6.0, 0.1);

    Slack continuous;
    for (const auto& oracle : continuous_zoo()) {
        for (double e : grid) {
            const Epsilon<double> eps(e);
            const double actual = exact_tail_1d(*oracle, e);
            const auto r = bound_1d(eps, oracle->moment_spec(e));
            const std::string who = label(oracle->name(), e);
            continuous.observe(std::min({r.theorem_bound, r.corollary_bound, r.term_sqrt,
                                         r.term_cuberoot, r.chebyshev})
                                   - actual,
                               who);
        }
    }
    add(out, "validity", "continuous-zoo", continuous.worst >= -tol, continuous.describe());

    Slack multi;
    std::vector<MultiNormalOracle> normals;
    for (int n = 1; n <= 4; ++n)
        normals.push_back(MultiNormalOracle::standard(n));
    Eigen::MatrixXd cov(2, 2);
    cov << 2.0, 0.8, 0.8, 1.0;
    normals.emplace_back(Eigen::VectorXd::Zero(2), cov);
    for (const auto& oracle : normals) {
        for (double e : grid) {
            const Epsilon<double> eps(e);
            const auto r = bound_multivariate_improved(eps, oracle.moment_spec(e));
            multi.observe(r.bound - oracle.exact_tail(e),
                          label("mvnormal n=" + std::to_string(oracle.dim()), e));
        }
    }
    add(out, "validity", "multivariate-normal", multi.worst >= -tol, multi.describe());

    Slack discrete;
    const std::vector<std::pair<std::string, DiscreteSpec>> pmfs = {
        {"poisson(1)", poisson_spec(1)},          {"poisson(4)", poisson_spec(4)},
        {"poisson(10)", poisson_spec(10)},        {"binomial(20,0.2)", binomial_spec(20, 0.2)},
        {"binomial(20,0.5)", binomial_spec(20, 0.5)}, {"geometric(0.3)", geometric_spec(0.3)},
    };
    for (const auto& [who, spec] : pmfs) {
        for (double e : grid) {
            const Epsilon<double> eps(e);
            discrete.observe(bound_discrete_theorem(eps, spec).value
                                 - bounded_set_probability(eps, spec).value,
                             label(who + " theorem", e));
            discrete.observe(bound_discrete_corollary(eps, spec).value
                                 - symmetric_set_probability(eps, spec).value,
                             label(who + " corollary", e));
        }
    }
    add(out, "validity", "discrete-families", discrete.worst >= -tol, discrete.describe());
}

// Discrete group: the floor embedding and the set algebra behind the bounds.

void discrete_checks(Checks& out, std::uint64_t seed)
{
    {
        const DiscreteSpec spec = binomial_spec(20, 0.5);
        std::vector<double> breaks;
        for (std::int64_t k = 0; k <= 21; ++k)
            breaks.push_back(static_cast<double>(k));
        auto f = [&spec](double x) { return spec.embedded_density(x); };
        const double centre = spec.mean() + 0.5;
        const double mean =
            integrate_piecewise([&](double x) { return x * f(x); }, std::span<const double>(breaks), 1e-13)
                .value;
        const double var = integrate_piecewise(
                               [&](double x) { return (x - centre) * (x - centre) * f(x); },
                               std::span<const double>(breaks), 1e-13)
                               .value;
        const double err = std::max(std::abs(mean - centre), std::abs(var - embed_variance(spec)));
        add(out, "discrete", "embedding-moments", err <= 1e-9,
            "binomial(20,0.5) max moment error " + format_number(err));
    }

    {
        const CounterRng rng(seed, 11);
        bool sets_ok = true;
        double worst_prob = 0;
        std::string where;
        for (std::uint64_t i = 0; i < 50; ++i) {
            const bool use_poisson = rng.uniform(4 * i) < 0.5;
            const double e = 0.1 + 3.4 * rng.uniform(4 * i + 1);
            const DiscreteSpec spec =
                use_poisson
                    ? poisson_spec(0.5 + 19.5 * rng.uniform(4 * i + 2))
                    : binomial_spec(1 + static_cast<std::int64_t>(39 * rng.uniform(4 * i + 2)),
                                    0.05 + 0.9 * rng.uniform(4 * i + 3));
            const Epsilon<double> eps(e);
            const auto g = tail_geometry(eps, spec);
            const double reach = e * g.sigma_f + 3;
            const auto lo = static_cast<std::int64_t>(std::floor(spec.mean() - reach));
            const auto hi = static_cast<std::int64_t>(std::ceil(spec.mean() + reach));
            const double centre = spec.mean() + 0.5;
            for (std::int64_t k = lo; k <= hi; ++k) {
                const double d = static_cast<double>(k) - centre;
                const bool quadratic = d * d >= e * e * g.sigma_f * g.sigma_f;
                const bool split = in_bounded_set(k, g) || k == g.M_eps_lo;
                sets_ok = sets_ok && quadratic == in_symmetric_set(k, g) && split == quadratic
                          && !(in_bounded_set(k, g) && k == g.M_eps_lo);
            }
            const double lhs = symmetric_set_probability(eps, spec).value;
            const double rhs = bounded_set_probability(eps, spec).value + spec.pmf(g.M_eps_lo);
            if (std::abs(lhs - rhs) > worst_prob) {
                worst_prob = std::abs(lhs - rhs);
                where = spec.name() + " " + label("", e);
            }
        }
        add(out, "discrete", "set-identity", sets_ok && worst_prob <= 1e-13,
            "50 random configurations, max probability mismatch " + format_number(worst_prob));
    }

    {
        Slack containment;
        const std::vector<std::pair<std::string, DiscreteSpec>> pmfs = {
            {"binomial(20,0.5)", binomial_spec(20, 0.5)}, {"poisson(4)", poisson_spec(4)}};
        for (const auto& [who, spec] : pmfs) {
            const double top = spec.support_hi() ? static_cast<double>(*spec.support_hi() + 1)
                                                 : spec.mean() + 40 * std::sqrt(spec.variance()) + 40;
            for (double e : make_grid(0.25, 3.0, 0.25)) {
                const Epsilon<double> eps(e);
                const auto g = tail_geometry(eps, spec);
                std::vector<double> breaks;
                for (double k = 0; k <= top; k += 1)
                    breaks.push_back(k);
                std::vector<double> left(breaks), right(breaks);
                std::erase_if(left, [&](double x) { return x > g.x_L; });
                std::erase_if(right, [&](double x) { return x < g.x_R; });
                auto f = [&spec](double x) { return spec.embedded_density(x); };
                double embedded = 0;
                if (g.x_L > 0) {
                    left.push_back(g.x_L);
                    embedded += integrate_piecewise(f, std::span<const double>(left), 1e-14).value;
                }
                right.insert(right.begin(), std::max(g.x_R, 0.0));
                if (right.size() >= 2 && g.x_R < top)
                    embedded += integrate_piecewise(f, std::span<const double>(right), 1e-14).value;
                containment.observe(embedded - bounded_set_probability(eps, spec).value,
                                    label(who, e));
            }
        }
        add(out, "discrete", "containment-in-embedded-tail", containment.worst >= -1e-12,
            containment.describe());
    }
}

// Monte Carlo group.

void mc_checks(Checks& out, std::uint64_t seed, std::uint64_t samples)
{
    const std::vector<Continuous1DPtr> oracles = {
        std::make_shared<NormalOracle>(0.0, 1.0),
        std::make_shared<LaplaceOracle>(0.0, 1.0 / std::numbers::sqrt2),
    };
    for (const auto& oracle : oracles) {
        double worst_z = 0;
        for (double e : {1.0, 2.0, 3.0}) {
            const auto mc = mc_tail_estimate(*oracle, e, samples, seed);
            const double exact = exact_tail_1d(*oracle, e);
            const double z = mc.std_error > 0 ? std::abs(mc.estimate - exact) / mc.std_error
                                              : (mc.estimate == exact ? 0.0 : 1e300);
            worst_z = std::max(worst_z, z);
        }
        const auto again_a = mc_tail_estimate(*oracle, 2.0, samples, seed);
        const auto again_b = mc_tail_estimate(*oracle, 2.0, samples, seed);
        const bool deterministic = again_a.estimate == again_b.estimate;
        const std::string name = oracle->name() + "-tail-within-4se";
        out.push_back({"mc", name, worst_z <= 4 && deterministic,
                       "max |estimate - exact| / se = " + format_number(worst_z)
                           + (deterministic ? ", reproducible" : ", NOT reproducible")});
    }
}

// Properties group: randomized dominance, monotonicity and scale invariance.

void property_checks(Checks& out, std::uint64_t seed, int cases)
{
    const CounterRng rng(seed, 23);
    bool dominance = true;
    bool monotone = true;
    double worst_scale = 0;
    for (int i = 0; i < cases; ++i) {
        const auto base = static_cast<std::uint64_t>(i) * 8;
        const double e = std::pow(10.0, -1 + 2 * rng.uniform(base));
        const double m = std::pow(10.0, -5 + 7 * rng.uniform(base + 1));
        const Epsilon<double> eps(e);
        const auto r = bound_report_from_m_eps(eps, m);
        dominance = dominance && r.theorem_bound <= r.corollary_bound + 1e-12
                    && r.corollary_bound <= bound_chebyshev_classical(eps)
                    && r.corollary_bound == std::min({r.chebyshev, r.term_sqrt, r.term_cuberoot});

        const double bigger = m * (1 + 3 * rng.uniform(base + 2));
        monotone = monotone
                   && theorem_bound_from_m_eps(eps, bigger).value
                          >= theorem_bound_from_m_eps(eps, m).value - 1e-15;

        // X -> a X + b on a random zoo family.
        const double a = std::pow(10.0, -1 + 2 * rng.uniform(base + 3));
        const double b = -5 + 10 * rng.uniform(base + 4);
        const auto family = static_cast<int>(4 * rng.uniform(base + 5));
        Continuous1DPtr x, y;
        switch (family) {
        case 0:
            x = std::make_shared<NormalOracle>(0.5, 1.3);
            y = std::make_shared<NormalOracle>(a * 0.5 + b, a * 1.3);
            break;
        case 1:
            x = std::make_shared<LaplaceOracle>(-0.2, 0.7);
            y = std::make_shared<LaplaceOracle>(-0.2 * a + b, a * 0.7);
            break;
        case 2:
            x = std::make_shared<UniformOracle>(-1.0, 2.0);
            y = std::make_shared<UniformOracle>(-a + b, 2 * a + b);
            break;
        default:
            x = std::make_shared<ExponentialOracle>(1.5);
            y = std::make_shared<ExponentialOracle>(1.5 / a);
            break;
        }
        const double bx = bound_1d_theorem(eps, x->moment_spec(e)).value;
        const double by = bound_1d_theorem(eps, y->moment_spec(e)).value;
        worst_scale = std::max(worst_scale, std::abs(bx - by) / std::max(bx, 1e-300));
    }
    const std::string n = std::to_string(cases) + " random cases";
    add(out, "properties", "theorem-le-corollary-le-chebyshev", dominance, n);
    add(out, "properties", "theorem-monotone-in-m", monotone, n);
    add(out, "properties", "affine-invariance", worst_scale <= 1e-9,
        n + ", max relative change " + format_number(worst_scale));
}

} // namespace

const std::vector<std::string>& verify_groups()
{
    static const std::vector<std::string> groups = {"root", "entropy", "validity",
                                                    "discrete", "mc", "properties"};
    return groups;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options)
{
    for (const auto& g : options.only) {
        if (std::find(verify_groups().begin(), verify_groups().end(), g) == verify_groups().end())
            throw std::invalid_argument("unknown verification group '" + g + "'");
    }
    auto wanted = [&](const std::string& g) {
        return options.only.empty()
               || std::find(options.only.begin(), options.only.end(), g) != options.only.end();
    };

    Checks out;
    if (wanted("root"))
        root_checks(out);
    if (wanted("entropy"))
        entropy_checks(out);
    if (wanted("validity"))
        validity_checks(out);
    if (wanted("discrete"))
        discrete_checks(out, options.seed);
    if (wanted("mc"))
        mc_checks(out, options.seed, options.mc_samples);
    if (wanted("properties"))
        property_checks(out, options.seed, options.property_cases);
    return out;
}

} // namespace chebtail
