// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chebtail/bounds.hpp>
#include <chebtail/discrete.hpp>
#include <chebtail/oracles.hpp>
#include <chebtail/quadrature.hpp>
#include <chebtail/report.hpp>
#include <chebtail/verify.hpp>

#include "support/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace chebtail;

namespace {

struct Verdict {
    bool passed;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Verdict()>& body)
{
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s %s: %s (%.0f ms)\n", v.passed ? "PASS" : "FAIL", id, title, v.detail.c_str(), ms);
    std::fflush(stdout);
    failures += !v.passed;
}

double seconds_since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double v)
{
    return format_number(v);
}

Verdict root_solver()
{
    const auto start = std::chrono::steady_clock::now();
    double worst_rel = 0;
    double worst_residual = 0;
    for (double e : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        for (double m : {1e-4, 1e-2, 0.1, 1.0, 10.0}) {
            const Epsilon<double> eps(e);
            const double a = *solve_alpha(eps, m);
            const auto bis = static_cast<double>(ref::alpha_bisection(e, m));
            const auto card = static_cast<double>(ref::alpha_cardano(e, m));
            worst_rel = std::max({worst_rel, std::abs(a - bis) / bis, std::abs(a - card) / card});
            const auto poly = *cubic_coefficients(eps, m);
            worst_residual = std::max(worst_residual, std::abs(poly(a)) / (1e-12 * std::max(1.0, 1 / m)));
        }
    }
    const double t = seconds_since(start);
    return {worst_rel <= 1e-10 && worst_residual <= 1 && t < 1,
            "30 points, max rel diff " + fmt(worst_rel) + ", max |T|/tol " + fmt(worst_residual) + ", "
                + fmt(t) + " s"};
}

Verdict normal_ordering()
{
    const NormalOracle normal(0, 1);
    bool ordered = true;
    bool strict = true;
    std::string where;
    for (double e : make_grid(0.5, 4.0, 0.1)) {
        const Epsilon<double> eps(e);
        const double exact = ref::normal_tail(e);
        const auto r = bound_1d(eps, normal.moment_spec(e));
        const double cheb = 1 / (e * e);
        const bool ok = std::abs(exact_tail_1d(normal, e) - exact) <= 1e-15 && exact <= r.theorem_bound
                        && r.theorem_bound <= r.corollary_bound && r.corollary_bound <= cheb;
        if (!ok && where.empty())
            where = " first violation at eps=" + fmt(e);
        ordered = ordered && ok;
        if (e >= 1.2 - 1e-12)
            strict = strict && r.theorem_bound < cheb;
    }
    const double spot_exact = ref::normal_tail(2);
    const double spot = bound_1d(Epsilon<double>(2), normal.moment_spec(2)).theorem_bound;
    const bool spot_ok = std::abs(spot_exact - 0.045500) < 5e-7 && spot_exact <= spot && spot <= 0.25;
    return {ordered && strict && spot_ok,
            "36 points ordered=" + std::string(ordered ? "yes" : "no") + where + ", strict for eps>=1.2="
                + (strict ? "yes" : "no") + ", eps=2: " + fmt(spot_exact) + " <= " + fmt(spot) + " <= 0.25"};
}

Verdict poisson_symmetric_tail()
{
    const auto start = std::chrono::steady_clock::now();
    const DiscreteSpec pois = poisson_spec(4);
    bool ok = true;
    double worst_remainder = 0;
    double min_slack = 1;
    double worst_brute = 0;
    for (double e : make_grid(0.5, 3.0, 0.1)) {
        const Epsilon<double> eps(e);
        const TailSum exact = symmetric_set_probability(eps, pois);
        const double bound = bound_discrete_corollary(eps, pois).value;
        const double sf = std::sqrt(4 + 1.0 / 12);
        const double brute = ref::enumerate([](std::int64_t k) { return ref::poisson_pmf(4, k); }, 200,
                                            [&](std::int64_t k) {
                                                const double d = k - 4.5;
                                                return d * d >= e * e * sf * sf;
                                            });
        worst_remainder = std::max(worst_remainder, exact.remainder_bound);
        worst_brute = std::max(worst_brute, std::abs(brute - exact.value));
        min_slack = std::min(min_slack, bound - exact.value);
        ok = ok && exact.value <= bound;
    }
    const double t = seconds_since(start);
    return {ok && worst_remainder <= 1e-14 && worst_brute <= 1e-14 && t < 1,
            "26 points, min slack " + fmt(min_slack) + ", truncation <= " + fmt(worst_remainder)
                + ", vs enumeration " + fmt(worst_brute) + ", " + fmt(t) + " s"};
}

Verdict multivariate()
{
    bool ok = true;
    double min_slack = 1;
    for (int n : {2, 3}) {
        const auto oracle = MultiNormalOracle::standard(n);
        for (double e : {1.0, 1.5, 2.0, 3.0}) {
            const double nn = n;
            const double m = std::pow(2 * std::numbers::pi, -nn / 2) * std::exp(-e * e / 2);
            const double formula =
                std::min(nn / (e * e), std::pow(2 * std::numbers::pi * std::numbers::e, nn / (nn + 2))
                                           * std::pow(m, 2 / (nn + 2)));
            const double exact = ref::chi2_tail(n, e);
            const auto lib = bound_multivariate_improved(Epsilon<double>(e), oracle.moment_spec(e));
            ok = ok && exact <= formula && std::abs(oracle.exact_tail(e) - exact) <= 1e-15
                 && std::abs(lib.m_eps - m) <= 1e-15 && exact <= lib.bound
                 && std::abs(lib.bound - std::min(1.0, formula)) <= 1e-14;
            min_slack = std::min(min_slack, formula - exact);
        }
    }
    const double two = MultiNormalOracle::standard(2).exact_tail(2);
    ok = ok && std::abs(two - 0.135335) < 5e-7 && std::abs(two - std::exp(-2.0)) <= 1e-16;
    return {ok, "8 cases, min slack " + fmt(min_slack) + ", n=2 eps=2 tail " + fmt(two)};
}

Verdict entropy_suite()
{
    VerifyOptions opts;
    opts.only = {"entropy"};
    const auto results = run_verification(opts);
    bool ok = !results.empty();
    std::string failed;
    for (const auto& r : results) {
        ok = ok && r.passed;
        if (!r.passed)
            failed += " " + r.name + " (" + r.detail + ")";
    }
    return {ok, std::to_string(results.size()) + " checks" + (failed.empty() ? " all pass" : ", failed:" + failed)};
}

Verdict discrete_embedding()
{
    const DiscreteSpec bin = binomial_spec(20, 0.5);
    std::vector<double> breaks;
    for (int k = 0; k <= 21; ++k)
        breaks.push_back(k);
    auto f = [&](double x) { return bin.embedded_density(x); };
    const double mean =
        integrate_piecewise([&](double x) { return x * f(x); }, std::span<const double>(breaks), 1e-13).value;
    const double var = integrate_piecewise([&](double x) { return (x - 10.5) * (x - 10.5) * f(x); },
                                           std::span<const double>(breaks), 1e-13)
                           .value;
    const double moment_err = std::max(std::abs(mean - 10.5), std::abs(var - (5.0 + 1.0 / 12)));

    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const double e = 0.2 + 2.8 * u(gen);
        const bool use_poisson = i % 2 == 0;
        const double lambda = 0.5 + 15 * u(gen);
        const auto n = static_cast<std::int64_t>(2 + 48 * u(gen));
        const double p = 0.05 + 0.9 * u(gen);
        const DiscreteSpec spec = use_poisson ? poisson_spec(lambda) : binomial_spec(n, p);
        auto pmf = [&](std::int64_t k) {
            return use_poisson ? ref::poisson_pmf(lambda, k) : ref::binomial_pmf(n, p, k);
        };
        const double mu = spec.mean();
        const double sf = std::sqrt(spec.variance() + 1.0 / 12);
        const double xl = mu + 0.5 - e * sf;
        const double xr = mu + 0.5 + e * sf;
        const double sym = ref::enumerate(pmf, 300, [&](std::int64_t k) {
            const double d = k - mu - 0.5;
            return d * d >= e * e * sf * sf;
        });
        const double bounded =
            ref::enumerate(pmf, 300, [&](std::int64_t k) { return k <= std::floor(xl) - 1 || k >= std::ceil(xr); });
        const double edge = pmf(static_cast<std::int64_t>(std::floor(xl)));
        const Epsilon<double> eps(e);
        worst = std::max({worst, std::abs(sym - (bounded + edge)),
                          std::abs(symmetric_set_probability(eps, spec).value - sym),
                          std::abs(bounded_set_probability(eps, spec).value - bounded)});
    }
    return {moment_err <= 1e-9 && worst <= 1e-13,
            "moment error " + fmt(moment_err) + ", set identity max mismatch " + fmt(worst) + " over 50 configs"};
}

Verdict monte_carlo()
{
    const std::vector<Continuous1DPtr> oracles = {std::make_shared<NormalOracle>(0.0, 1.0),
                                                  std::make_shared<LaplaceOracle>(0.0, 1 / std::numbers::sqrt2)};
    double worst_z = 0;
    bool deterministic = true;
    for (const auto& o : oracles) {
        for (double e : {1.0, 2.0, 3.0}) {
            const auto a = mc_tail_estimate(*o, e, 1'000'000, 7);
            const auto b = mc_tail_estimate(*o, e, 1'000'000, 7);
            deterministic = deterministic && a.estimate == b.estimate && a.std_error == b.std_error;
            const double exact = o->name() == "normal" ? ref::normal_tail(e) : std::exp(-std::numbers::sqrt2 * e);
            worst_z = std::max(worst_z, std::abs(a.estimate - exact) / a.std_error);
        }
    }
    return {worst_z <= 4 && deterministic,
            "max |z| " + fmt(worst_z) + (deterministic ? ", deterministic" : ", NOT deterministic")};
}

Verdict properties()
{
    const auto start = std::chrono::steady_clock::now();
    VerifyOptions opts;
    opts.only = {"properties"};
    opts.property_cases = 500;
    bool ok = true;
    std::string failed;
    for (const auto& r : run_verification(opts)) {
        ok = ok && r.passed;
        if (!r.passed)
            failed += " " + r.name;
    }

    // Containment of the theorem's set in the symmetric set, on random pmfs.
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0, 1);
    bool contained = true;
    for (int i = 0; i < 500; ++i) {
        const Epsilon<double> eps(0.1 + 3.9 * u(gen));
        const DiscreteSpec spec = i % 2 ? poisson_spec(0.2 + 40 * u(gen))
                                        : binomial_spec(static_cast<std::int64_t>(1 + 80 * u(gen)), 0.01 + 0.98 * u(gen));
        const auto g = tail_geometry(eps, spec);
        const double bounded = bounded_set_probability(eps, spec).value;
        contained = contained && bounded <= symmetric_set_probability(eps, spec).value + 1e-15
                    && bounded <= bound_discrete_theorem(eps, spec).value + 1e-12
                    && in_bounded_set(g.D_eps_lo, g) && !in_bounded_set(g.M_eps_lo, g)
                    && in_symmetric_set(g.M_eps_lo, g) && in_supremum_set(g.M_eps_lo, g);
    }
    const double t = seconds_since(start);
    return {ok && contained && t < 5,
            "500 cases each, dominance/monotonicity/scale " + std::string(failed.empty() ? "ok" : "failed:" + failed)
                + ", containment " + (contained ? "ok" : "failed") + ", " + fmt(t) + " s"};
}

} // namespace

int main()
{
    report("AC1", "root solver vs bisection and Cardano", root_solver);
    report("AC2", "normal tail ordering over eps 0.5..4.0", normal_ordering);
    report("AC3", "Poisson(4) symmetric tail under discrete corollary", poisson_symmetric_tail);
    report("AC4", "multivariate normal validity, n = 2, 3", multivariate);
    report("AC5", "entropy inequalities on the zoo", entropy_suite);
    report("AC6", "floor embedding moments and set identity", discrete_embedding);
    report("AC7", "Monte Carlo within 4 standard errors", monte_carlo);
    report("AC8", "randomized dominance and containment", properties);
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
