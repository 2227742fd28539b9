#pragma once

// Analytic reference distributions. Each oracle knows its exact tail
// probability on D_eps = {(x - mu)^2 >= eps^2 sigma^2}, the supremum of its
// density on D_eps, and a closed-form entropy; every bound is validated
// against these.

#include <chebtail/bounds.hpp>
#include <chebtail/discrete.hpp>
#include <chebtail/rng.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chebtail {

/// Raised when an oracle is asked for something it cannot provide.
class capability_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class OracleKind { continuous_1d, continuous_multi, discrete };

struct Capabilities {
    bool exact_tail = false;
    bool exact_sup = false;
    bool exact_entropy = false;
    bool sampleable = false;
};

struct EntropyEstimate {
    double value;           ///< nats
    double abs_error_bound; ///< sum of |refined - coarse| over accepted panels
};

struct MonteCarloEstimate {
    double estimate;
    double std_error; ///< binomial standard error sqrt(p (1 - p) / n)
    std::uint64_t samples;
};

class Continuous1D {
public:
    virtual ~Continuous1D() = default;

    virtual std::string name() const = 0;
    virtual Capabilities capabilities() const = 0;
    virtual double mean() const = 0;
    virtual double variance() const = 0;
    virtual double pdf(double x) const = 0;
    /// ||f||_inf over the whole line.
    virtual double sup_density() const = 0;
    /// Sorted breakpoints (including both ends) of a window holding all but
    /// a negligible amount of mass, with every kink of the density listed.
    virtual std::vector<double> window() const = 0;

    /// Pr((X - mu)^2 >= eps^2 sigma^2).
    virtual double exact_tail(double eps) const;
    /// ||f||_{inf, D_eps}.
    virtual double sup_on_tail(double eps) const;
    virtual double reference_entropy() const;
    /// Draw number `index` of the counter-based stream.
    virtual double sample(const CounterRng& rng, std::uint64_t index) const;

    double sigma() const;
    MomentSpec1D<double> moment_spec(double eps) const;
};

using Continuous1DPtr = std::shared_ptr<const Continuous1D>;

class NormalOracle final : public Continuous1D {
public:
    NormalOracle(double mean, double sigma);
    std::string name() const override { return "normal"; }
    Capabilities capabilities() const override { return {true, true, true, true}; }
    double mean() const override { return mean_; }
    double variance() const override { return sigma_ * sigma_; }
    double pdf(double x) const override;
    double sup_density() const override;
    std::vector<double> window() const override;
    double exact_tail(double eps) const override;
    double sup_on_tail(double eps) const override;
    double reference_entropy() const override;
    double sample(const CounterRng& rng, std::uint64_t index) const override;

private:
    double mean_;
    double sigma_;
};

/// Laplace with location `mean` and scale b; variance 2 b^2.
class LaplaceOracle final : public Continuous1D {
public:
    LaplaceOracle(double mean, double scale);
    std::string name() const override { return "laplace"; }
    Capabilities capabilities() const override { return {true, true, true, true}; }
    double mean() const override { return mean_; }
    double variance() const override { return 2 * scale_ * scale_; }
    double scale() const { return scale_; }
    double pdf(double x) const override;
    double sup_density() const override;
    std::vector<double> window() const override;
    double exact_tail(double eps) const override;
    double sup_on_tail(double eps) const override;
    double reference_entropy() const override;
    double sample(const CounterRng& rng, std::uint64_t index) const override;

private:
    double mean_;
    double scale_;
};

class UniformOracle final : public Continuous1D {
public:
    UniformOracle(double lo, double hi);
    std::string name() const override { return "uniform"; }
    Capabilities capabilities() const override { return {true, true, true, true}; }
    double mean() const override { return 0.5 * (lo_ + hi_); }
    double variance() const override { return (hi_ - lo_) * (hi_ - lo_) / 12; }
    double pdf(double x) const override;
    double sup_density() const override;
    std::vector<double> window() const override;
    double exact_tail(double eps) const override;
    double sup_on_tail(double eps) const override;
    double reference_entropy() const override;
    double sample(const CounterRng& rng, std::uint64_t index) const override;

private:
    double lo_;
    double hi_;
};

class ExponentialOracle final : public Continuous1D {
public:
    explicit ExponentialOracle(double rate);
    std::string name() const override { return "exponential"; }
    Capabilities capabilities() const override { return {true, true, true, true}; }
    double mean() const override { return 1 / rate_; }
    double variance() const override { return 1 / (rate_ * rate_); }
    double pdf(double x) const override;
    double sup_density() const override;
    std::vector<double> window() const override;
    double exact_tail(double eps) const override;
    double sup_on_tail(double eps) const override;
    double reference_entropy() const override;
    double sample(const CounterRng& rng, std::uint64_t index) const override;

private:
    double rate_;
};

/// A density known only pointwise; quadrature is the only thing it supports.
class DensityOracle final : public Continuous1D {
public:
    DensityOracle(std::string name, std::function<double(double)> pdf, double mean,
                  double variance, double sup_density, std::vector<double> window);
    std::string name() const override { return name_; }
    Capabilities capabilities() const override { return {}; }
    double mean() const override { return mean_; }
    double variance() const override { return variance_; }
    double pdf(double x) const override { return pdf_(x); }
    double sup_density() const override { return sup_; }
    std::vector<double> window() const override { return window_; }

private:
    std::string name_;
    std::function<double(double)> pdf_;
    double mean_;
    double variance_;
    double sup_;
    std::vector<double> window_;
};

/// The full 1-D zoo at representative parameters (standardized and not).
std::vector<Continuous1DPtr> continuous_zoo();

/// Multivariate normal with arbitrary SPD covariance.
class MultiNormalOracle {
public:
    MultiNormalOracle(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
    static MultiNormalOracle standard(int dim);

    int dim() const { return static_cast<int>(mean_.size()); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    double cov_det() const { return det_; }

    double pdf(const Eigen::VectorXd& x) const;
    /// (x - mu)^T Sigma^{-1} (x - mu).
    double mahalanobis_sq(const Eigen::VectorXd& x) const;
    /// 1 - F_{chi^2_n}(eps^2).
    double exact_tail(double eps) const;
    /// Density on the ellipsoid boundary, its largest value outside it.
    double sup_on_tail(double eps) const;
    /// (1/2) ln((2 pi e)^n det Sigma).
    double reference_entropy() const;
    Eigen::VectorXd sample(const CounterRng& rng, std::uint64_t index) const;
    MomentSpecMulti<double> moment_spec(double eps) const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double det_;
};

/// Independent components; entropy and covariance decompose per coordinate.
class ProductOracle {
public:
    explicit ProductOracle(std::vector<Continuous1DPtr> components);

    int dim() const { return static_cast<int>(components_.size()); }
    const std::vector<Continuous1DPtr>& components() const { return components_; }
    Eigen::MatrixXd covariance() const;
    /// Sum of per-coordinate quadrature entropies.
    EntropyEstimate differential_entropy(double tol = 1e-11) const;

private:
    std::vector<Continuous1DPtr> components_;
};

/// Pr((X - mu)^2 / sigma^2 >= eps^2); eps >= 0.
double exact_tail_1d(const Continuous1D& oracle, double eps);
/// ||f||_{inf, D_eps}.
double sup_on_tail_1d(const Continuous1D& oracle, double eps);
/// 1 - F_{chi^2_dim}(eps^2).
double exact_tail_multi_normal(int dim, double eps);

/// -integral of f ln f over the window, 0 ln 0 := 0. Refuses when the window
/// misses more than 1e-9 of the mass.
EntropyEstimate differential_entropy(const std::function<double(double)>& pdf,
                                     std::span<const double> window, double tol = 1e-11);
EntropyEstimate differential_entropy(const Continuous1D& oracle, double tol = 1e-11);

/// integral of g(x) f(x) over the oracle's window; `kinks` lists points where
/// g itself is not smooth (0 for |x|).
double expectation(const Continuous1D& oracle, const std::function<double(double)>& g,
                   std::span<const double> kinks = {}, double tol = 1e-11);

/// Fraction of draws in D_eps. Deterministic in (oracle, eps, samples, seed).
MonteCarloEstimate mc_tail_estimate(const Continuous1D& oracle, double eps,
                                    std::uint64_t samples, std::uint64_t seed);
MonteCarloEstimate mc_tail_estimate(const MultiNormalOracle& oracle, double eps,
                                    std::uint64_t samples, std::uint64_t seed);

/// Oracle selection by family name and a flat parameter record.
struct OracleSpec {
    std::string name;
    std::map<std::string, double> params;
};

using AnyOracle = std::variant<Continuous1DPtr, std::shared_ptr<const MultiNormalOracle>,
                               std::shared_ptr<const DiscreteSpec>>;

/// Names: normal(mean, variance), laplace(mean, variance), uniform(lo, hi),
/// exponential(rate), mvnormal(dim), poisson(lambda), binomial(trials, p),
/// geometric(p). Unknown names or parameters throw std::invalid_argument.
AnyOracle make_oracle(const OracleSpec& spec);
OracleKind kind_of(const AnyOracle& oracle);

} // namespace chebtail
