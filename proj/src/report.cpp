#include <chebtail/report.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace chebtail {

namespace {

constexpr double validity_slack = 1e-12;

struct BoundName {
    BoundKind kind;
    std::string_view name;
};

constexpr std::array<BoundName, 7> bound_names = {{
    {BoundKind::theorem, "theorem"},
    {BoundKind::corollary, "corollary"},
    {BoundKind::chebyshev, "chebyshev"},
    {BoundKind::one_sided, "one_sided"},
    {BoundKind::chen, "chen"},
    {BoundKind::discrete_theorem, "discrete_theorem"},
    {BoundKind::discrete_corollary, "discrete_corollary"},
}};

std::string_view kind_name(OracleKind kind)
{
    switch (kind) {
    case OracleKind::continuous_1d:
        return "continuous-1d";
    case OracleKind::continuous_multi:
        return "continuous-multi";
    case OracleKind::discrete:
        return "discrete";
    }
    return "unknown";
}

double round_to_12_digits(double x)
{
    return std::strtod(format_number(x).c_str(), nullptr);
}

// Which probability a bound column must dominate.
enum class Target { none, actual, bounded_set };

struct Cell {
    BoundValue value;
    Target target;
};

struct RowBuilder {
    SweepRow row;
    std::optional<double> bounded_set; // discrete: Pr(k <= floor(x_L) - 1 or k >= ceil(x_R))
    std::vector<Cell> cells;

    void add(BoundKind kind, double value, bool clamped, Target target)
    {
        cells.push_back({{kind, value, clamped}, target});
    }
};

void compute_continuous(const Continuous1D& oracle, Epsilon<double> eps, RowBuilder& b)
{
    if (oracle.capabilities().exact_tail)
        b.row.actual = exact_tail_1d(oracle, eps);
    const double m = oracle.sigma() * sup_on_tail_1d(oracle, eps);
    b.row.m_eps = m;
    const auto theorem = theorem_bound_from_m_eps(eps, m);
    const auto corollary = corollary_bound_from_m_eps(eps, m);
    const double e = eps.value();
    b.add(BoundKind::theorem, theorem.value, theorem.clamped, Target::actual);
    b.add(BoundKind::corollary, corollary.value, false, Target::actual);
    b.add(BoundKind::chebyshev, corollary.chebyshev, 1 / (e * e) > 1, Target::actual);
    // Cantelli bounds the one-sided event, not D_eps; reported for comparison only.
    b.add(BoundKind::one_sided, bound_chebyshev_one_sided(eps), false, Target::none);
}

void compute_multi(const MultiNormalOracle& oracle, Epsilon<double> eps, RowBuilder& b)
{
    b.row.actual = oracle.exact_tail(eps);
    const auto spec = oracle.moment_spec(eps);
    const auto report = bound_multivariate_improved(eps, spec);
    const double e = eps.value();
    b.row.m_eps = report.m_eps;
    b.add(BoundKind::theorem, report.bound, report.clamped, Target::actual);
    b.add(BoundKind::chen, report.chen, oracle.dim() / (e * e) > 1, Target::actual);
}

void compute_discrete(const DiscreteSpec& spec, Epsilon<double> eps, RowBuilder& b)
{
    b.row.actual = symmetric_set_probability(eps, spec).value;
    b.bounded_set = bounded_set_probability(eps, spec).value;
    const auto theorem = bound_discrete_theorem(eps, spec);
    const auto corollary = bound_discrete_corollary(eps, spec);
    const double e = eps.value();
    b.row.m_eps = theorem.m_eps;
    b.add(BoundKind::discrete_theorem, theorem.value, theorem.clamped, Target::bounded_set);
    b.add(BoundKind::discrete_corollary, corollary.value, corollary.clamped, Target::actual);
    // 1/eps^2 bounds the embedded density's tail, which contains the bounded set.
    b.add(BoundKind::chebyshev, bound_chebyshev_classical(eps), 1 / (e * e) > 1,
          Target::bounded_set);
}

void check_validity(const RowBuilder& b, const std::string& oracle_name)
{
    for (const Cell& cell : b.cells) {
        std::optional<double> target;
        if (cell.target == Target::actual)
            target = b.row.actual;
        else if (cell.target == Target::bounded_set)
            target = b.bounded_set;
        if (target && *target > cell.value.value + validity_slack) {
            std::ostringstream msg;
            msg << "bound violated: oracle '" << oracle_name << "' eps=" << format_number(b.row.eps)
                << " " << to_string(cell.value.kind) << "=" << format_number(cell.value.value)
                << " < probability " << format_number(*target);
            throw bound_violation(msg.str());
        }
    }
}

void write_csv(std::span<const SweepRow> rows, std::ostream& out)
{
    out << "eps,actual";
    for (const BoundValue& v : rows.front().bounds)
        out << ',' << to_string(v.kind);
    out << ",m_eps,clamped\n";
    for (const SweepRow& row : rows) {
        out << format_number(row.eps) << ',';
        if (row.actual)
            out << format_number(*row.actual);
        for (const BoundValue& v : row.bounds)
            out << ',' << format_number(v.value);
        out << ',' << format_number(row.m_eps) << ',';
        bool first = true;
        for (BoundKind k : row.clamped()) {
            out << (first ? "" : ";") << to_string(k);
            first = false;
        }
        out << '\n';
    }
}

void write_json(std::span<const SweepRow> rows, std::ostream& out)
{
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const SweepRow& row : rows) {
        nlohmann::ordered_json obj;
        obj["eps"] = row.eps;
        obj["actual"] = row.actual ? nlohmann::ordered_json(*row.actual) : nlohmann::ordered_json();
        for (const BoundValue& v : row.bounds)
            obj[std::string(to_string(v.kind))] = v.value;
        obj["m_eps"] = row.m_eps;
        nlohmann::ordered_json clamped = nlohmann::ordered_json::array();
        for (BoundKind k : row.clamped())
            clamped.push_back(std::string(to_string(k)));
        obj["clamped"] = std::move(clamped);
        array.push_back(std::move(obj));
    }
    out << array.dump(2) << '\n';
}

} // namespace

std::string_view to_string(BoundKind kind)
{
    for (const auto& entry : bound_names) {
        if (entry.kind == kind)
            return entry.name;
    }
    return "unknown";
}

std::optional<BoundKind> parse_bound_kind(std::string_view name)
{
    for (const auto& entry : bound_names) {
        if (entry.name == name)
            return entry.kind;
    }
    return std::nullopt;
}

std::vector<BoundKind> SweepRow::clamped() const
{
    std::vector<BoundKind> out;
    for (const BoundValue& v : bounds) {
        if (v.clamped)
            out.push_back(v.kind);
    }
    return out;
}

std::optional<double> SweepRow::bound(BoundKind kind) const
{
    for (const BoundValue& v : bounds) {
        if (v.kind == kind)
            return v.value;
    }
    return std::nullopt;
}

std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::vector<double> make_grid(double start, double stop, double step)
{
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw config_error("grid bounds must be finite");
    if (!(start > 0))
        throw config_error("grid must start at a positive epsilon");
    if (!(step > 0))
        throw config_error("grid step must be positive");
    if (!(stop >= start))
        throw config_error("grid stop must not be below its start");
    const double span = (stop - start) / step;
    if (span > 1e6)
        throw config_error("grid has too many points");
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        grid.push_back(round_to_12_digits(start + static_cast<double>(i) * step));
    return grid;
}

std::vector<double> parse_grid(std::string_view text)
{
    std::vector<double> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = text.find(':', begin);
        const std::string piece(text.substr(begin, colon == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : colon - begin));
        char* end = nullptr;
        const double v = std::strtod(piece.c_str(), &end);
        if (piece.empty() || end != piece.c_str() + piece.size())
            throw config_error("invalid grid '" + std::string(text) + "', expected start:stop:step");
        parts.push_back(v);
        if (colon == std::string_view::npos)
            break;
        begin = colon + 1;
    }
    if (parts.size() != 3)
        throw config_error("invalid grid '" + std::string(text) + "', expected start:stop:step");
    return make_grid(parts[0], parts[1], parts[2]);
}

std::vector<double> default_grid(OracleKind kind)
{
    return kind == OracleKind::discrete ? make_grid(0.5, 3.0, 0.1) : make_grid(0.5, 4.0, 0.1);
}

std::vector<BoundKind> default_bounds(OracleKind kind)
{
    switch (kind) {
    case OracleKind::continuous_1d:
        return {BoundKind::theorem, BoundKind::corollary, BoundKind::chebyshev};
    case OracleKind::continuous_multi:
        return {BoundKind::theorem, BoundKind::chen};
    case OracleKind::discrete:
        return {BoundKind::chebyshev, BoundKind::discrete_theorem, BoundKind::discrete_corollary};
    }
    return {};
}

bool bound_applies(BoundKind bound, OracleKind kind)
{
    switch (kind) {
    case OracleKind::continuous_1d:
        return bound == BoundKind::theorem || bound == BoundKind::corollary
               || bound == BoundKind::chebyshev || bound == BoundKind::one_sided;
    case OracleKind::continuous_multi:
        return bound == BoundKind::theorem || bound == BoundKind::chen;
    case OracleKind::discrete:
        return bound == BoundKind::chebyshev || bound == BoundKind::discrete_theorem
               || bound == BoundKind::discrete_corollary;
    }
    return false;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config)
{
    AnyOracle oracle;
    try {
        oracle = make_oracle(config.oracle);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    const OracleKind kind = kind_of(oracle);

    if (config.eps_grid.empty())
        throw config_error("epsilon grid is empty");
    for (std::size_t i = 0; i < config.eps_grid.size(); ++i) {
        const double e = config.eps_grid[i];
        if (!(e > 0) || !std::isfinite(e))
            throw config_error("epsilon grid values must be positive");
        if (i > 0 && !(e > config.eps_grid[i - 1]))
            throw config_error("epsilon grid must be strictly increasing");
    }
    for (std::size_t i = 0; i < config.bounds.size(); ++i) {
        const BoundKind b = config.bounds[i];
        if (!bound_applies(b, kind))
            throw config_error("bound '" + std::string(to_string(b)) + "' does not apply to a "
                               + std::string(kind_name(kind)) + " oracle");
        if (std::count(config.bounds.begin(), config.bounds.end(), b) > 1)
            throw config_error("bound '" + std::string(to_string(b)) + "' requested twice");
    }
    if (kind == OracleKind::continuous_1d) {
        const auto& c = *std::get<Continuous1DPtr>(oracle);
        if (!c.capabilities().exact_sup)
            throw config_error("oracle '" + c.name() + "' has no exact density supremum");
    }

    std::vector<SweepRow> rows;
    rows.reserve(config.eps_grid.size());
    for (double e : config.eps_grid) {
        const Epsilon<double> eps(e);
        RowBuilder b;
        b.row.eps = e;
        switch (kind) {
        case OracleKind::continuous_1d:
            compute_continuous(*std::get<Continuous1DPtr>(oracle), eps, b);
            break;
        case OracleKind::continuous_multi:
            compute_multi(*std::get<1>(oracle), eps, b);
            break;
        case OracleKind::discrete:
            compute_discrete(*std::get<2>(oracle), eps, b);
            break;
        }
        check_validity(b, config.oracle.name);
        for (BoundKind k : canonical_bound_order) {
            if (std::find(config.bounds.begin(), config.bounds.end(), k) == config.bounds.end())
                continue;
            for (const Cell& cell : b.cells) {
                if (cell.value.kind == k)
                    b.row.bounds.push_back(cell.value);
            }
        }
        rows.push_back(std::move(b.row));
    }
    return rows;
}

void serialize(std::span<const SweepRow> rows, OutputFormat format, std::ostream& out)
{
    if (rows.empty())
        throw std::invalid_argument("nothing to serialize: no rows");
    if (format == OutputFormat::csv)
        write_csv(rows, out);
    else
        write_json(rows, out);
    if (!out)
        throw std::runtime_error("failed to write sweep output");
}

std::string serialize(std::span<const SweepRow> rows, OutputFormat format)
{
    std::ostringstream out;
    serialize(rows, format, out);
    return out.str();
}

std::vector<SweepRow> parse_json_rows(std::string_view text)
{
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array())
        throw std::invalid_argument("sweep JSON must be an array of rows");
    std::vector<SweepRow> rows;
    for (const auto& obj : doc) {
        SweepRow row{};
        row.eps = obj.at("eps").get<double>();
        if (!obj.at("actual").is_null())
            row.actual = obj.at("actual").get<double>();
        row.m_eps = obj.at("m_eps").get<double>();
        const auto& clamped = obj.at("clamped");
        for (BoundKind k : canonical_bound_order) {
            const std::string key(to_string(k));
            if (!obj.contains(key))
                continue;
            const bool was_clamped =
                std::find(clamped.begin(), clamped.end(), key) != clamped.end();
            row.bounds.push_back({k, obj.at(key).get<double>(), was_clamped});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace chebtail
