#include "cli.hpp"

#include <chebtail/bounds.hpp>
#include <chebtail/discrete.hpp>
#include <chebtail/oracles.hpp>
#include <chebtail/report.hpp>
#include <chebtail/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace chebtail::cli {

namespace {

using Json = nlohmann::ordered_json;

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rounds to the 12 significant digits used for all printed numbers.
Json number(double v)
{
    return std::stod(format_number(v));
}

Json number(const std::optional<double>& v)
{
    return v ? number(*v) : Json();
}

struct OracleParams {
    std::string name;
    std::optional<double> mean, variance, lo, hi, rate, lambda, trials, p, dim;

    void attach(CLI::App& cmd, bool with_moments)
    {
        if (with_moments) {
            cmd.add_option("--mean", mean, "mean (normal, laplace; raw input)");
            cmd.add_option("--variance", variance, "variance (normal, laplace; raw input)");
        }
        cmd.add_option("--lo", lo, "lower end (uniform)");
        cmd.add_option("--hi", hi, "upper end (uniform)");
        cmd.add_option("--rate", rate, "rate (exponential)");
        cmd.add_option("--lambda", lambda, "mean (poisson)");
        cmd.add_option("--trials", trials, "number of trials (binomial)");
        cmd.add_option("--p", p, "success probability (binomial, geometric)");
    }

    OracleSpec spec() const
    {
        OracleSpec out{name, {}};
        const std::pair<const char*, const std::optional<double>*> fields[] = {
            {"mean", &mean}, {"variance", &variance}, {"lo", &lo},       {"hi", &hi},
            {"rate", &rate}, {"lambda", &lambda},     {"trials", &trials}, {"p", &p},
            {"dim", &dim},
        };
        for (const auto& [key, value] : fields) {
            if (*value)
                out.params[key] = **value;
        }
        return out;
    }
};

struct BoundArgs {
    double eps = 0;
    std::optional<double> sup, cov_det;
    OracleParams oracle;
};

Json report_1d(double e, double mean, double variance, double sup)
{
    const Epsilon<double> eps(e);
    const MomentSpec1D<double> spec(mean, variance, sup);
    const auto theorem = bound_1d_theorem(eps, spec);
    const auto r = bound_1d(eps, spec);
    Json j;
    j["epsilon"] = number(r.epsilon);
    j["mean"] = number(mean);
    j["variance"] = number(variance);
    j["sup_density_on_tail"] = number(sup);
    j["m_eps"] = number(r.m_eps);
    j["alpha"] = number(theorem.alpha);
    j["theorem_bound"] = number(r.theorem_bound);
    j["corollary_bound"] = number(r.corollary_bound);
    j["chebyshev"] = number(r.chebyshev);
    j["term_sqrt"] = number(r.term_sqrt);
    j["term_cuberoot"] = number(r.term_cuberoot);
    j["clamped"] = r.clamped;
    return j;
}

Json report_multi(double e, int dim, double cov_det, double sup)
{
    const Epsilon<double> eps(e);
    const auto r = bound_multivariate_improved(eps, MomentSpecMulti<double>(dim, cov_det, sup));
    Json j;
    j["epsilon"] = number(r.epsilon);
    j["dim"] = r.dim;
    j["cov_det"] = number(cov_det);
    j["sup_density_on_tail"] = number(sup);
    j["m_eps"] = number(r.m_eps);
    j["chen"] = number(r.chen);
    j["improved_term"] = number(r.improved_term);
    j["bound"] = number(r.bound);
    j["clamped"] = r.clamped;
    return j;
}

Json report_discrete(double e, const DiscreteSpec& spec)
{
    const Epsilon<double> eps(e);
    const auto g = tail_geometry(eps, spec);
    const auto theorem = bound_discrete_theorem(eps, spec);
    const auto corollary = bound_discrete_corollary(eps, spec);
    Json j;
    j["epsilon"] = number(e);
    j["mean"] = number(spec.mean());
    j["variance"] = number(spec.variance());
    j["sigma_f"] = number(g.sigma_f);
    j["x_L"] = number(g.x_L);
    j["x_R"] = number(g.x_R);
    j["m_eps"] = number(theorem.m_eps);
    j["alpha"] = number(theorem.alpha);
    j["discrete_theorem"] = number(theorem.value);
    j["edge_mass"] = number(corollary.edge_mass);
    j["discrete_corollary"] = number(corollary.value);
    j["chebyshev"] = number(bound_chebyshev_classical(eps));
    j["clamped"] = theorem.clamped || corollary.clamped;
    j["exact_tail"] = number(symmetric_set_probability(eps, spec).value);
    return j;
}

Json cmd_bound(const BoundArgs& a)
{
    const Epsilon<double> eps(a.eps);
    const OracleParams& o = a.oracle;
    if (o.name.empty()) {
        if (a.cov_det || o.dim) {
            if (!o.dim || !a.cov_det || !a.sup)
                throw usage_error("multivariate raw input needs --dim, --cov-det and --sup");
            if (*o.dim < 1 || *o.dim != std::floor(*o.dim))
                throw usage_error("--dim must be a positive integer");
            Json j{{"mode", "raw"}};
            j.update(report_multi(a.eps, static_cast<int>(*o.dim), *a.cov_det, *a.sup));
            return j;
        }
        if (!o.variance || !a.sup)
            throw usage_error("raw input needs --variance and --sup (or use --oracle)");
        for (const auto* extra : {&o.lo, &o.hi, &o.rate, &o.lambda, &o.trials, &o.p}) {
            if (*extra)
                throw usage_error("distribution parameters require --oracle");
        }
        Json j{{"mode", "raw"}};
        j.update(report_1d(a.eps, o.mean.value_or(0.0), *o.variance, *a.sup));
        return j;
    }

    if (a.sup || a.cov_det)
        throw usage_error("--sup and --cov-det are raw inputs and cannot be combined with --oracle");
    const AnyOracle oracle = make_oracle(o.spec());
    Json j{{"mode", "oracle"}, {"oracle", o.name}};
    switch (kind_of(oracle)) {
    case OracleKind::continuous_1d: {
        const auto& d = *std::get<Continuous1DPtr>(oracle);
        j.update(report_1d(eps, d.mean(), d.variance(), sup_on_tail_1d(d, eps)));
        j["exact_tail"] = number(exact_tail_1d(d, eps));
        break;
    }
    case OracleKind::continuous_multi: {
        const auto& d = *std::get<1>(oracle);
        j.update(report_multi(eps, d.dim(), d.cov_det(), d.sup_on_tail(eps)));
        j["exact_tail"] = number(d.exact_tail(eps));
        break;
    }
    case OracleKind::discrete:
        j.update(report_discrete(eps, *std::get<2>(oracle)));
        break;
    }
    return j;
}

struct SweepArgs {
    OracleParams oracle;
    std::optional<std::string> grid;
    std::optional<std::string> bounds;
    std::string format = "csv";
    std::optional<std::string> output;
};

SweepConfig sweep_config(const SweepArgs& a)
{
    SweepConfig config;
    config.oracle = a.oracle.spec();
    const OracleKind kind = kind_of(make_oracle(config.oracle));
    config.eps_grid = a.grid ? parse_grid(*a.grid) : default_grid(kind);
    if (!a.bounds) {
        config.bounds = default_bounds(kind);
    } else if (*a.bounds != "none") {
        std::stringstream list(*a.bounds);
        std::string item;
        while (std::getline(list, item, ',')) {
            const auto b = parse_bound_kind(item);
            if (!b)
                throw usage_error("unknown bound '" + item + "'");
            config.bounds.push_back(*b);
        }
    }
    config.format = a.format == "json" ? OutputFormat::json : OutputFormat::csv;
    return config;
}

std::filesystem::path output_path(const std::string& requested)
{
    std::filesystem::path path(requested);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("CHEBTAIL_OUTPUT_DIR"); dir && *dir)
            path = std::filesystem::path(dir) / path;
    }
    return path;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out)
{
    const SweepConfig config = sweep_config(a);
    const auto rows = run_sweep(config);
    const std::string text = serialize(rows, config.format);
    if (!a.output) {
        out << text;
        return exit_ok;
    }
    const auto path = output_path(*a.output);
    std::ofstream file(path, std::ios::binary);
    file << text;
    file.close();
    if (!file)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    return exit_ok;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out)
{
    const auto results = run_verification(options);
    std::size_t width = 0;
    for (const auto& r : results)
        width = std::max(width, r.group.size() + 1 + r.name.size());
    std::size_t passed = 0;
    for (const auto& r : results) {
        std::string id = r.group + "/" + r.name;
        id.resize(width, ' ');
        out << (r.passed ? "PASS  " : "FAIL  ") << id << "  " << r.detail << '\n';
        passed += r.passed;
    }
    out << passed << '/' << results.size() << " checks passed\n";
    return passed == results.size() ? exit_ok : exit_failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Chebyshev-type tail bounds with density information"};
    app.name("chebtail");
    app.require_subcommand(1);

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound", "bound a single tail probability, printed as JSON");
    bound_cmd->add_option("--eps", bound.eps, "deviation in standard deviations")->required();
    bound_cmd->add_option("--sup", bound.sup, "sup of the density on the tail (raw input)");
    bound_cmd->add_option("--cov-det", bound.cov_det, "det of the covariance (raw multivariate input)");
    bound_cmd->add_option("--dim", bound.oracle.dim, "dimension (mvnormal; raw multivariate input)");
    bound_cmd->add_option("--oracle", bound.oracle.name, "reference distribution");
    bound.oracle.attach(*bound_cmd, true);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate exact tails and bounds over an eps grid");
    sweep_cmd->add_option("--oracle", sweep.oracle.name, "reference distribution")->required();
    sweep.oracle.attach(*sweep_cmd, true);
    sweep_cmd->add_option("--dim", sweep.oracle.dim, "dimension (mvnormal)");
    sweep_cmd->add_option("--grid", sweep.grid, "start:stop:step");
    sweep_cmd->add_option("--bounds", sweep.bounds, "comma-separated bound names, or none");
    sweep_cmd->add_option("--format", sweep.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--output", sweep.output,
                          "output file; relative paths go under $CHEBTAIL_OUTPUT_DIR");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the numerical property checks");
    verify_cmd->add_option("--only", verify.only, "restrict to these groups")->delimiter(',');
    verify_cmd->add_option("--seed", verify.seed, "Monte Carlo seed");
    verify_cmd->add_option("--mc-samples", verify.mc_samples, "Monte Carlo sample count");
    verify_cmd->add_option("--cases", verify.property_cases, "randomized property cases");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (bound_cmd->parsed()) {
            out << cmd_bound(bound).dump(2) << '\n';
            return exit_ok;
        }
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep, out);
        return cmd_verify(verify, out);
    } catch (const bound_violation& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace chebtail::cli
