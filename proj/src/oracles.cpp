#include <chebtail/oracles.hpp>

#include <chebtail/quadrature.hpp>
#include <chebtail/special.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace chebtail {

namespace {

void require_tail_eps(double eps)
{
    if (!(eps >= 0) || !std::isfinite(eps))
        throw std::domain_error("epsilon must be finite and nonnegative");
}

void require_positive(double v, const char* what)
{
    if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive");
}

} // namespace

// Continuous1D defaults: capabilities not provided.

double Continuous1D::exact_tail(double) const
{
    throw capability_error(name() + ": no exact tail probability");
}

double Continuous1D::sup_on_tail(double) const
{
    throw capability_error(name() + ": no exact density supremum on tail sets");
}

double Continuous1D::reference_entropy() const
{
    throw capability_error(name() + ": no closed-form entropy");
}

double Continuous1D::sample(const CounterRng&, std::uint64_t) const
{
    throw capability_error(name() + ": not sampleable");
}

double Continuous1D::sigma() const
{
    return std::sqrt(variance());
}

MomentSpec1D<double> Continuous1D::moment_spec(double eps) const
{
    return {mean(), variance(), sup_on_tail_1d(*this, eps)};
}

// Normal

NormalOracle::NormalOracle(double mean, double sigma) : mean_(mean), sigma_(sigma)
{
    require_positive(sigma, "normal standard deviation");
}

double NormalOracle::pdf(double x) const
{
    return normal_pdf((x - mean_) / sigma_) / sigma_;
}

double NormalOracle::sup_density() const
{
    return inv_sqrt_two_pi_v<double> / sigma_;
}

std::vector<double> NormalOracle::window() const
{
    return {mean_ - 14 * sigma_, mean_, mean_ + 14 * sigma_};
}

double NormalOracle::exact_tail(double eps) const
{
    return normal_two_sided_tail(eps);
}

double NormalOracle::sup_on_tail(double eps) const
{
    return normal_pdf(eps) / sigma_;
}

double NormalOracle::reference_entropy() const
{
    return 0.5 * (1 + std::log(2 * pi_v<double> * sigma_ * sigma_));
}

double NormalOracle::sample(const CounterRng& rng, std::uint64_t index) const
{
    return mean_ + sigma_ * rng.normal(index);
}

// Laplace

LaplaceOracle::LaplaceOracle(double mean, double scale) : mean_(mean), scale_(scale)
{
    require_positive(scale, "laplace scale");
}

double LaplaceOracle::pdf(double x) const
{
    return std::exp(-std::abs(x - mean_) / scale_) / (2 * scale_);
}

double LaplaceOracle::sup_density() const
{
    return 1 / (2 * scale_);
}

std::vector<double> LaplaceOracle::window() const
{
    return {mean_ - 48 * scale_, mean_, mean_ + 48 * scale_};
}

// |X - mu| >= eps sigma = eps b sqrt(2) has probability exp(-eps sqrt(2)).
double LaplaceOracle::exact_tail(double eps) const
{
    return std::exp(-eps * std::numbers::sqrt2);
}

double LaplaceOracle::sup_on_tail(double eps) const
{
    return std::exp(-eps * std::numbers::sqrt2) / (2 * scale_);
}

double LaplaceOracle::reference_entropy() const
{
    return 1 + std::log(2 * scale_);
}

double LaplaceOracle::sample(const CounterRng& rng, std::uint64_t index) const
{
    const double u = rng.uniform(index) - 0.5;
    const double magnitude = -scale_ * std::log1p(-2 * std::abs(u));
    return u < 0 ? mean_ - magnitude : mean_ + magnitude;
}

// Uniform

UniformOracle::UniformOracle(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("uniform bounds must satisfy lo < hi");
}

double UniformOracle::pdf(double x) const
{
    return (x >= lo_ && x <= hi_) ? 1 / (hi_ - lo_) : 0.0;
}

double UniformOracle::sup_density() const
{
    return 1 / (hi_ - lo_);
}

std::vector<double> UniformOracle::window() const
{
    return {lo_, hi_};
}

// Half-width of the support is sqrt(3) sigma.
double UniformOracle::exact_tail(double eps) const
{
    return std::max(0.0, 1 - eps / std::sqrt(3.0));
}

double UniformOracle::sup_on_tail(double eps) const
{
    // D_eps is closed, so at eps sigma = half-width it still holds both endpoints.
    return eps * sigma() <= 0.5 * (hi_ - lo_) ? 1 / (hi_ - lo_) : 0.0;
}

double UniformOracle::reference_entropy() const
{
    return std::log(hi_ - lo_);
}

double UniformOracle::sample(const CounterRng& rng, std::uint64_t index) const
{
    return lo_ + (hi_ - lo_) * rng.uniform(index);
}

// Exponential; mu = sigma = 1/rate, so the left piece of D_eps is [0, (1-eps)/rate].

ExponentialOracle::ExponentialOracle(double rate) : rate_(rate)
{
    require_positive(rate, "exponential rate");
}

double ExponentialOracle::pdf(double x) const
{
    return x < 0 ? 0.0 : rate_ * std::exp(-rate_ * x);
}

double ExponentialOracle::sup_density() const
{
    return rate_;
}

std::vector<double> ExponentialOracle::window() const
{
    return {0.0, 50 / rate_};
}

double ExponentialOracle::exact_tail(double eps) const
{
    const double right = std::exp(-(1 + eps));
    const double left = eps < 1 ? -std::expm1(-(1 - eps)) : 0.0;
    return right + left;
}

double ExponentialOracle::sup_on_tail(double eps) const
{
    // x = 0 belongs to D_eps for eps <= 1 and carries the peak density.
    return eps <= 1 ? rate_ : rate_ * std::exp(-(1 + eps));
}

double ExponentialOracle::reference_entropy() const
{
    return 1 - std::log(rate_);
}

double ExponentialOracle::sample(const CounterRng& rng, std::uint64_t index) const
{
    return -std::log(rng.uniform(index)) / rate_;
}

// Pointwise density

DensityOracle::DensityOracle(std::string name, std::function<double(double)> pdf, double mean,
                             double variance, double sup_density, std::vector<double> window)
    : name_(std::move(name)), pdf_(std::move(pdf)), mean_(mean), variance_(variance),
      sup_(sup_density), window_(std::move(window))
{
    require_positive(variance, "density variance");
    if (window_.size() < 2)
        throw std::invalid_argument("density window needs at least two points");
    std::sort(window_.begin(), window_.end());
}

std::vector<Continuous1DPtr> continuous_zoo()
{
    return {
        std::make_shared<NormalOracle>(0.0, 1.0),
        std::make_shared<NormalOracle>(3.0, 2.5),
        std::make_shared<LaplaceOracle>(0.0, 1.0 / std::numbers::sqrt2),
        std::make_shared<LaplaceOracle>(-1.0, 2.0),
        std::make_shared<UniformOracle>(-std::sqrt(3.0), std::sqrt(3.0)),
        std::make_shared<UniformOracle>(2.0, 7.0),
        std::make_shared<ExponentialOracle>(1.0),
        std::make_shared<ExponentialOracle>(0.25),
    };
}

// Multivariate normal

MultiNormalOracle::MultiNormalOracle(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance))
{
    if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size() || mean_.size() < 1)
        throw std::invalid_argument("covariance must be square and match the mean");
    llt_.compute(cov_);
    if (llt_.info() != Eigen::Success || !cov_.isApprox(cov_.transpose()))
        throw std::invalid_argument("covariance must be symmetric positive definite");
    const double root_det = llt_.matrixL().toDenseMatrix().diagonal().prod();
    det_ = root_det * root_det;
}

MultiNormalOracle MultiNormalOracle::standard(int dim)
{
    if (dim < 1)
        throw std::invalid_argument("dimension must be at least 1");
    return {Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim)};
}

double MultiNormalOracle::mahalanobis_sq(const Eigen::VectorXd& x) const
{
    const Eigen::VectorXd z = llt_.matrixL().solve(x - mean_);
    return z.squaredNorm();
}

double MultiNormalOracle::pdf(const Eigen::VectorXd& x) const
{
    const double n = dim();
    return std::exp(-0.5 * mahalanobis_sq(x)) / std::sqrt(std::pow(2 * pi_v<double>, n) * det_);
}

double MultiNormalOracle::exact_tail(double eps) const
{
    require_tail_eps(eps);
    return chi_square_survival(dim(), eps * eps);
}

double MultiNormalOracle::sup_on_tail(double eps) const
{
    require_tail_eps(eps);
    const double n = dim();
    return std::exp(-0.5 * eps * eps) / std::sqrt(std::pow(2 * pi_v<double>, n) * det_);
}

double MultiNormalOracle::reference_entropy() const
{
    return 0.5 * (dim() * std::log(two_pi_e_v<double>) + std::log(det_));
}

Eigen::VectorXd MultiNormalOracle::sample(const CounterRng& rng, std::uint64_t index) const
{
    const auto n = static_cast<std::uint64_t>(dim());
    Eigen::VectorXd z(dim());
    for (std::uint64_t j = 0; j < n; ++j)
        z(static_cast<Eigen::Index>(j)) = rng.normal(index * n + j);
    return mean_ + llt_.matrixL() * z;
}

MomentSpecMulti<double> MultiNormalOracle::moment_spec(double eps) const
{
    return {dim(), det_, sup_on_tail(eps)};
}

// Product of independent coordinates

ProductOracle::ProductOracle(std::vector<Continuous1DPtr> components)
    : components_(std::move(components))
{
    if (components_.empty())
        throw std::invalid_argument("product oracle needs at least one component");
}

Eigen::MatrixXd ProductOracle::covariance() const
{
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        cov(i, i) = components_[static_cast<std::size_t>(i)]->variance();
    return cov;
}

EntropyEstimate ProductOracle::differential_entropy(double tol) const
{
    EntropyEstimate total{0.0, 0.0};
    for (const auto& c : components_) {
        const EntropyEstimate h = chebtail::differential_entropy(*c, tol);
        total.value += h.value;
        total.abs_error_bound += h.abs_error_bound;
    }
    return total;
}

// Free operations

double exact_tail_1d(const Continuous1D& oracle, double eps)
{
    require_tail_eps(eps);
    if (!oracle.capabilities().exact_tail)
        throw capability_error(oracle.name() + ": no exact tail probability");
    return oracle.exact_tail(eps);
}

double sup_on_tail_1d(const Continuous1D& oracle, double eps)
{
    require_tail_eps(eps);
    if (!oracle.capabilities().exact_sup)
        throw capability_error(oracle.name() + ": no exact density supremum on tail sets");
    return oracle.sup_on_tail(eps);
}

double exact_tail_multi_normal(int dim, double eps)
{
    require_tail_eps(eps);
    return chi_square_survival(dim, eps * eps);
}

EntropyEstimate differential_entropy(const std::function<double(double)>& pdf,
                                     std::span<const double> window, double tol)
{
    const auto mass = integrate_piecewise(pdf, window, tol);
    if (std::abs(1 - mass.value) > 1e-9)
        throw std::invalid_argument("integration window misses more than 1e-9 of the probability mass");
    auto integrand = [&pdf](double x) {
        const double f = pdf(x);
        return f > 0 ? -f * std::log(f) : 0.0;
    };
    const auto h = integrate_piecewise(integrand, window, tol);
    return {h.value, h.abs_error};
}

EntropyEstimate differential_entropy(const Continuous1D& oracle, double tol)
{
    const std::vector<double> w = oracle.window();
    return differential_entropy([&oracle](double x) { return oracle.pdf(x); }, w, tol);
}

double expectation(const Continuous1D& oracle, const std::function<double(double)>& g,
                   std::span<const double> kinks, double tol)
{
    std::vector<double> w = oracle.window();
    for (double k : kinks) {
        if (k > w.front() && k < w.back())
            w.push_back(k);
    }
    return integrate_piecewise([&](double x) { return g(x) * oracle.pdf(x); },
                               std::span<const double>(w), tol)
        .value;
}

namespace {

MonteCarloEstimate binomial_estimate(std::uint64_t hits, std::uint64_t samples)
{
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p, std::sqrt(p * (1 - p) / static_cast<double>(samples)), samples};
}

void require_samples(std::uint64_t samples)
{
    if (samples < 10000)
        throw std::invalid_argument("Monte Carlo needs at least 10^4 samples");
}

} // namespace

MonteCarloEstimate mc_tail_estimate(const Continuous1D& oracle, double eps, std::uint64_t samples,
                                    std::uint64_t seed)
{
    require_tail_eps(eps);
    require_samples(samples);
    if (!oracle.capabilities().sampleable)
        throw capability_error(oracle.name() + ": not sampleable");
    const CounterRng rng(seed);
    const double mu = oracle.mean();
    const double threshold = eps * eps * oracle.variance();
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double d = oracle.sample(rng, i) - mu;
        hits += d * d >= threshold ? 1 : 0;
    }
    return binomial_estimate(hits, samples);
}

MonteCarloEstimate mc_tail_estimate(const MultiNormalOracle& oracle, double eps,
                                    std::uint64_t samples, std::uint64_t seed)
{
    require_tail_eps(eps);
    require_samples(samples);
    const CounterRng rng(seed);
    const double threshold = eps * eps;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i)
        hits += oracle.mahalanobis_sq(oracle.sample(rng, i)) >= threshold ? 1 : 0;
    return binomial_estimate(hits, samples);
}

namespace {

class ParamReader {
public:
    explicit ParamReader(const OracleSpec& spec) : spec_(spec) {}

    double get(const std::string& key, double fallback)
    {
        used_.insert(key);
        const auto it = spec_.params.find(key);
        return it == spec_.params.end() ? fallback : it->second;
    }

    void finish() const
    {
        for (const auto& [key, value] : spec_.params) {
            if (!used_.count(key))
                throw std::invalid_argument("parameter '" + key + "' does not apply to oracle '"
                                            + spec_.name + "'");
        }
    }

private:
    const OracleSpec& spec_;
    std::set<std::string> used_;
};

std::int64_t as_count(double v, const char* what)
{
    if (!(v >= 1) || v != std::floor(v) || v > 1e9)
        throw std::invalid_argument(std::string(what) + " must be a positive integer");
    return static_cast<std::int64_t>(v);
}

} // namespace

AnyOracle make_oracle(const OracleSpec& spec)
{
    ParamReader p(spec);
    AnyOracle out;
    if (spec.name == "normal") {
        const double mean = p.get("mean", 0.0);
        const double variance = p.get("variance", 1.0);
        require_positive(variance, "variance");
        out = Continuous1DPtr(std::make_shared<NormalOracle>(mean, std::sqrt(variance)));
    } else if (spec.name == "laplace") {
        const double mean = p.get("mean", 0.0);
        const double variance = p.get("variance", 1.0);
        require_positive(variance, "variance");
        out = Continuous1DPtr(std::make_shared<LaplaceOracle>(mean, std::sqrt(variance / 2)));
    } else if (spec.name == "uniform") {
        const double lo = p.get("lo", -std::sqrt(3.0));
        const double hi = p.get("hi", std::sqrt(3.0));
        out = Continuous1DPtr(std::make_shared<UniformOracle>(lo, hi));
    } else if (spec.name == "exponential") {
        out = Continuous1DPtr(std::make_shared<ExponentialOracle>(p.get("rate", 1.0)));
    } else if (spec.name == "mvnormal") {
        const auto dim = as_count(p.get("dim", 2.0), "dim");
        out = std::make_shared<const MultiNormalOracle>(
            MultiNormalOracle::standard(static_cast<int>(dim)));
    } else if (spec.name == "poisson") {
        out = std::make_shared<const DiscreteSpec>(poisson_spec(p.get("lambda", 4.0)));
    } else if (spec.name == "binomial") {
        const auto trials = as_count(p.get("trials", 20.0), "trials");
        out = std::make_shared<const DiscreteSpec>(binomial_spec(trials, p.get("p", 0.5)));
    } else if (spec.name == "geometric") {
        out = std::make_shared<const DiscreteSpec>(geometric_spec(p.get("p", 0.5)));
    } else {
        throw std::invalid_argument("unknown oracle '" + spec.name + "'");
    }
    p.finish();
    return out;
}

OracleKind kind_of(const AnyOracle& oracle)
{
    switch (oracle.index()) {
    case 0:
        return OracleKind::continuous_1d;
    case 1:
        return OracleKind::continuous_multi;
    default:
        return OracleKind::discrete;
    }
}

} // namespace chebtail
