#pragma once

// Adaptive Simpson quadrature over piecewise-smooth integrands. Callers pass
// the kinks of the integrand as breakpoints; each smooth piece is integrated
// separately so the error estimate is not fooled by a derivative jump.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace chebtail {

template <typename Scalar>
struct QuadratureResult {
    Scalar value = 0;
    Scalar abs_error = 0; ///< sum over accepted panels of |refined - coarse|
    long evaluations = 0;
};

namespace detail {

template <typename Scalar, typename F>
struct SimpsonState {
    F& f;
    QuadratureResult<Scalar>& out;
    int min_depth;
    int max_depth;

    Scalar eval(Scalar x)
    {
        ++out.evaluations;
        return f(x);
    }

    // One panel [a, b] with midpoint m and cached endpoint/midpoint values.
    void refine(Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb, Scalar whole, Scalar tol,
                int depth)
    {
        const Scalar m = a + (b - a) / 2;
        const Scalar lm = a + (m - a) / 2;
        const Scalar rm = m + (b - m) / 2;
        const Scalar flm = eval(lm);
        const Scalar frm = eval(rm);
        const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
        const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
        const Scalar refined = left + right;
        const Scalar delta = refined - whole;
        const Scalar round_off_floor =
            64 * std::numeric_limits<Scalar>::epsilon() * std::abs(refined);

        const bool converged =
            depth >= min_depth && (std::abs(delta) <= 15 * tol || std::abs(delta) <= round_off_floor);
        if (converged || depth >= max_depth || !(lm > a && rm < b)) {
            out.value += refined + delta / 15;
            out.abs_error += std::abs(delta);
            return;
        }
        refine(a, m, fa, flm, fm, left, tol / 2, depth + 1);
        refine(m, b, fm, frm, fb, right, tol / 2, depth + 1);
    }
};

} // namespace detail

/// Integral of f over [lo, hi] to absolute tolerance tol.
template <typename Scalar, typename F>
QuadratureResult<Scalar> adaptive_simpson(F&& f, Scalar lo, Scalar hi, Scalar tol,
                                          int min_depth = 4, int max_depth = 48)
{
    if (!(hi >= lo))
        throw std::invalid_argument("adaptive_simpson: upper limit below lower limit");
    if (!(tol > 0))
        throw std::invalid_argument("adaptive_simpson: tolerance must be positive");
    QuadratureResult<Scalar> out;
    if (hi == lo)
        return out;
    detail::SimpsonState<Scalar, std::remove_reference_t<F>> state{f, out, min_depth, max_depth};
    const Scalar m = lo + (hi - lo) / 2;
    const Scalar fa = state.eval(lo);
    const Scalar fm = state.eval(m);
    const Scalar fb = state.eval(hi);
    const Scalar whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
    state.refine(lo, hi, fa, fm, fb, whole, tol, 0);
    return out;
}

/// Integral over [breaks.front(), breaks.back()], split at every interior
/// breakpoint. The tolerance is shared out in proportion to panel width.
/// Panel endpoints are nudged one ulp inward before evaluation, so a jump
/// located exactly at a breakpoint contributes its one-sided limits.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_piecewise(F&& f, std::span<const Scalar> breaks, Scalar tol)
{
    std::vector<Scalar> points(breaks.begin(), breaks.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 2)
        throw std::invalid_argument("integrate_piecewise: need at least two distinct breakpoints");

    const Scalar total = points.back() - points.front();
    QuadratureResult<Scalar> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Scalar width = points[i + 1] - points[i];
        const Scalar a = std::nextafter(points[i], points[i + 1]);
        Scalar b = std::nextafter(points[i + 1], points[i]);
        if (b < a)
            b = a;
        auto inside = [&f, a, b](Scalar x) { return f(std::clamp(x, a, b)); };
        const auto piece = adaptive_simpson(inside, points[i], points[i + 1], tol * width / total);
        out.value += piece.value;
        out.abs_error += piece.abs_error;
        out.evaluations += piece.evaluations;
    }
    return out;
}

} // namespace chebtail
