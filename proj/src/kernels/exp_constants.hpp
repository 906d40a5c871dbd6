#pragma once

// Shared by the scalar and SIMD exp kernels so both follow the same
// operation sequence: Cody-Waite reduction x = k ln2 + r with |r| <= ln2/2,
// a degree-13 Taylor polynomial for e^r in Horner form, then scaling by
// 2^(k/2) * 2^(k - k/2) so that k = 1024 never builds an infinite exponent.

namespace chernflow::kernels::detail {

inline constexpr double kExpHi = 709.78;
inline constexpr double kExpLo = -708.39;

inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
// ln2 split so that k * kLn2Hi is exact for |k| <= 1024.
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// 1/j! for j = 13 down to 0.
inline constexpr double kExpPoly[14] = {
    1.0 / 6227020800.0,
    1.0 / 479001600.0,
    1.0 / 39916800.0,
    1.0 / 3628800.0,
    1.0 / 362880.0,
    1.0 / 40320.0,
    1.0 / 5040.0,
    1.0 / 720.0,
    1.0 / 120.0,
    1.0 / 24.0,
    1.0 / 6.0,
    1.0 / 2.0,
    1.0,
    1.0,
};

}  // namespace chernflow::kernels::detail
