#pragma once

#include <numbers>

namespace chebtail {

// Constants are formed in long double and narrowed once, so float/double
// instantiations never see a truncated decimal literal.
template <typename Scalar>
inline constexpr Scalar e_v = static_cast<Scalar>(std::numbers::e_v<long double>);

template <typename Scalar>
inline constexpr Scalar pi_v = static_cast<Scalar>(std::numbers::pi_v<long double>);

template <typename Scalar>
inline constexpr Scalar two_pi_e_v =
    static_cast<Scalar>(2.0L * std::numbers::pi_v<long double> * std::numbers::e_v<long double>);

template <typename Scalar>
inline constexpr Scalar inv_sqrt_two_pi_v =
    static_cast<Scalar>(std::numbers::inv_sqrtpi_v<long double> / std::numbers::sqrt2_v<long double>);

} // namespace chebtail
