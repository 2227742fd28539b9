#pragma once

// Epsilon sweeps comparing the exact tail probability of an oracle with the
// bounds, serialized as CSV or JSON for external plotting.

#include <chebtail/oracles.hpp>

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chebtail {

enum class BoundKind {
    theorem,
    corollary,
    chebyshev,
    one_sided,
    chen,
    discrete_theorem,
    discrete_corollary,
};

/// Column order used everywhere a set of bounds is listed.
inline constexpr std::array<BoundKind, 7> canonical_bound_order = {
    BoundKind::theorem,   BoundKind::corollary,        BoundKind::chebyshev,
    BoundKind::one_sided, BoundKind::chen,             BoundKind::discrete_theorem,
    BoundKind::discrete_corollary,
};

std::string_view to_string(BoundKind kind);
std::optional<BoundKind> parse_bound_kind(std::string_view name);

enum class OutputFormat { csv, json };

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An actual probability exceeded a bound that must hold for it.
class bound_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    OracleSpec oracle;
    std::vector<double> eps_grid;
    std::vector<BoundKind> bounds;
    OutputFormat format = OutputFormat::csv;
};

struct BoundValue {
    BoundKind kind;
    double value;
    bool clamped;
};

struct SweepRow {
    double eps;
    std::optional<double> actual;
    std::vector<BoundValue> bounds; ///< canonical order
    double m_eps;

    std::vector<BoundKind> clamped() const;
    std::optional<double> bound(BoundKind kind) const;
};

/// start, start + step, ..., up to stop inclusive; values are rounded to 12
/// significant digits so that e.g. 0.5 + 2 * 0.1 is exactly 0.7.
std::vector<double> make_grid(double start, double stop, double step);
/// "start:stop:step".
std::vector<double> parse_grid(std::string_view text);

/// Defaults: 0.5..4.0 for continuous oracles, 0.5..3.0 for pmfs.
std::vector<double> default_grid(OracleKind kind);
std::vector<BoundKind> default_bounds(OracleKind kind);
bool bound_applies(BoundKind bound, OracleKind kind);

/// Validates the whole config, then computes one row per grid point in grid
/// order. Throws config_error for invalid configs and bound_violation if any
/// row's actual probability exceeds a bound that must hold for it.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Columns: eps, actual, requested bounds, m_eps, clamped. CSV numbers use 12
/// significant digits; JSON numbers round-trip exactly.
void serialize(std::span<const SweepRow> rows, OutputFormat format, std::ostream& out);
std::string serialize(std::span<const SweepRow> rows, OutputFormat format);

/// Inverse of the JSON serialization.
std::vector<SweepRow> parse_json_rows(std::string_view text);

/// printf "%.12g".
std::string format_number(double value);

} // namespace chebtail
