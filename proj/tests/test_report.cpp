#include <chebtail/report.hpp>

#include "support/reference.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace chebtail;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

SweepConfig normal_config(std::vector<double> grid, std::vector<BoundKind> bounds)
{
    return {{"normal", {}}, std::move(grid), std::move(bounds), OutputFormat::csv};
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST(Grid, RoundedSteps)
{
    const auto g = make_grid(0.5, 4.0, 0.1);
    ASSERT_EQ(g.size(), 36u);
    EXPECT_EQ(g.front(), 0.5);
    EXPECT_EQ(g[2], 0.7);
    EXPECT_EQ(g.back(), 4.0);
    EXPECT_EQ(parse_grid("1:3:1"), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(default_grid(OracleKind::discrete).back(), 3.0);
    for (const char* bad : {"", "1:2", "a:b:c", "1:2:3:4", "1:2:0", "2:1:0.1", "1:2:-1"})
        EXPECT_THROW(parse_grid(bad), config_error) << bad;
}

TEST(BoundNames, RoundTrip)
{
    for (BoundKind k : canonical_bound_order)
        EXPECT_EQ(parse_bound_kind(to_string(k)), k);
    EXPECT_FALSE(parse_bound_kind("markov").has_value());
}

TEST(Sweep, ChebyshevColumnForNormal)
{
    const auto rows = run_sweep(normal_config({1, 2, 3}, {BoundKind::chebyshev, BoundKind::theorem}));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(*rows[0].bound(BoundKind::chebyshev), 1.0);
    EXPECT_EQ(*rows[1].bound(BoundKind::chebyshev), 0.25);
    EXPECT_DOUBLE_EQ(*rows[2].bound(BoundKind::chebyshev), 1.0 / 9);
    // Columns are stored in canonical order regardless of request order.
    EXPECT_EQ(rows[0].bounds[0].kind, BoundKind::theorem);
    EXPECT_NEAR(*rows[1].actual, ref::normal_tail(2), 1e-16);
    EXPECT_FALSE(rows[1].bound(BoundKind::corollary).has_value());
    // 1/eps^2 = 1 exactly at eps = 1, so nothing was capped.
    EXPECT_TRUE(rows[0].clamped().empty());
    const auto low = run_sweep(normal_config({0.5}, {BoundKind::chebyshev}));
    EXPECT_EQ(low[0].clamped(), std::vector<BoundKind>{BoundKind::chebyshev});
}

TEST(Sweep, EmptyBoundSet)
{
    const auto rows = run_sweep(normal_config({1, 2}, {}));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].bounds.empty());
    const std::string csv = serialize(rows, OutputFormat::csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "eps,actual,m_eps,clamped");
}

TEST(Sweep, PoissonSymmetricTail)
{
    SweepConfig c{{"poisson", {{"lambda", 4}}}, make_grid(0.5, 3.0, 0.1), {BoundKind::discrete_corollary},
                  OutputFormat::csv};
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 26u);
    for (const auto& r : rows) {
        const double sf = std::sqrt(4 + 1.0 / 12);
        const double expect = ref::enumerate([](std::int64_t k) { return ref::poisson_pmf(4, k); }, 200,
                                             [&](std::int64_t k) {
                                                 const double d = k - 4.5;
                                                 return d * d >= r.eps * r.eps * sf * sf;
                                             });
        EXPECT_NEAR(*r.actual, expect, 1e-14) << r.eps;
        EXPECT_LE(*r.actual, *r.bound(BoundKind::discrete_corollary) + 1e-12);
    }
}

TEST(Sweep, RejectsInvalidConfigBeforeComputing)
{
    EXPECT_THROW(run_sweep(normal_config({1, 2}, {BoundKind::discrete_theorem})), config_error);
    EXPECT_THROW(run_sweep(normal_config({1, 2}, {BoundKind::chen})), config_error);
    EXPECT_THROW(run_sweep(normal_config({2, 1}, {})), config_error);
    EXPECT_THROW(run_sweep(normal_config({0, 1}, {})), config_error);
    EXPECT_THROW(run_sweep(normal_config({}, {})), config_error);
    EXPECT_THROW(run_sweep(normal_config({1}, {BoundKind::theorem, BoundKind::theorem})), config_error);
    SweepConfig pois{{"poisson", {}}, {1}, {BoundKind::theorem}, OutputFormat::csv};
    EXPECT_THROW(run_sweep(pois), config_error);
}

TEST(Sweep, MultivariateColumns)
{
    SweepConfig c{{"mvnormal", {{"dim", 3}}}, {1, 1.5, 2, 3}, {BoundKind::theorem, BoundKind::chen},
                  OutputFormat::csv};
    const auto rows = run_sweep(c);
    for (const auto& r : rows) {
        EXPECT_NEAR(*r.actual, ref::chi2_tail(3, r.eps), 1e-14);
        EXPECT_LE(*r.actual, *r.bound(BoundKind::theorem));
    }
}

TEST(Sweep, OrderIndependent)
{
    const auto all = run_sweep(normal_config(make_grid(0.5, 4.0, 0.1), default_bounds(OracleKind::continuous_1d)));
    const auto one = run_sweep(normal_config({2.0}, default_bounds(OracleKind::continuous_1d)));
    const auto& mid = all[15];
    ASSERT_EQ(mid.eps, 2.0);
    EXPECT_EQ(serialize(std::span(&mid, 1), OutputFormat::json), serialize(one, OutputFormat::json));
}

TEST(Serialize, CsvShapeAndDeterminism)
{
    const auto rows = run_sweep(normal_config({2}, {BoundKind::theorem, BoundKind::chebyshev}));
    const std::string a = serialize(rows, OutputFormat::csv);
    EXPECT_EQ(count_lines(a), 2u);
    EXPECT_EQ(a, serialize(rows, OutputFormat::csv));
    EXPECT_EQ(a, "eps,actual,theorem,chebyshev,m_eps,clamped\n"
                 "2,0.0455002638964,0.152692617073,0.25,0.0539909665132,\n");
    EXPECT_THROW(serialize(std::vector<SweepRow>{}, OutputFormat::csv), std::invalid_argument);
}

TEST(Serialize, JsonRoundTripIsExact)
{
    SweepConfig c{{"poisson", {{"lambda", 4}}}, make_grid(0.5, 3.0, 0.1),
                  default_bounds(OracleKind::discrete), OutputFormat::json};
    const auto rows = run_sweep(c);
    const auto back = parse_json_rows(serialize(rows, OutputFormat::json));
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].eps, rows[i].eps);
        EXPECT_EQ(back[i].actual, rows[i].actual);
        EXPECT_EQ(back[i].m_eps, rows[i].m_eps);
        ASSERT_EQ(back[i].bounds.size(), rows[i].bounds.size());
        for (std::size_t j = 0; j < rows[i].bounds.size(); ++j) {
            EXPECT_EQ(back[i].bounds[j].kind, rows[i].bounds[j].kind);
            EXPECT_EQ(back[i].bounds[j].value, rows[i].bounds[j].value);
            EXPECT_EQ(back[i].bounds[j].clamped, rows[i].bounds[j].clamped);
        }
    }
}

TEST(Golden, NormalDefaultGrid)
{
    const auto rows = run_sweep(normal_config(parse_grid("0.5:4.0:0.1"), default_bounds(OracleKind::continuous_1d)));
    EXPECT_EQ(serialize(rows, OutputFormat::csv), read_file(CHEBTAIL_GOLDEN_DIR "/normal_default_grid.csv"));
}

TEST(Golden, PoissonDefaultGrid)
{
    SweepConfig c{{"poisson", {{"lambda", 4}}}, default_grid(OracleKind::discrete),
                  default_bounds(OracleKind::discrete), OutputFormat::csv};
    EXPECT_EQ(serialize(run_sweep(c), OutputFormat::csv),
              read_file(CHEBTAIL_GOLDEN_DIR "/poisson4_default_grid.csv"));
}
