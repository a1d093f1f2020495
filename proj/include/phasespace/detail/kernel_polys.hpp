#pragma once

// Polynomial coefficient tables shared by the scalar and vector kernel
// translation units, so every lane-level branch uses identical arithmetic
// on both paths.

namespace phasespace::simd::detail {

// Branch point for the small-argument series of tanh / logcosh. Below this
// the direct formulas lose relative accuracy to cancellation, so both
// implementations switch to series.
inline constexpr double kSmallX = 0.25;

// tanh(x) = x * P(x^2), |x| <= kSmallX, truncated at x^19.
inline constexpr double kTanhOdd[10] = {
    1.0,
    -1.0 / 3.0,
    2.0 / 15.0,
    -17.0 / 315.0,
    62.0 / 2835.0,
    -1382.0 / 155925.0,
    21844.0 / 6081075.0,
    -929569.0 / 638512875.0,
    6404582.0 / 10854718875.0,
    -443861162.0 / 1856156927625.0,
};

// log(cosh(x)) = x^2 * Q(x^2), |x| <= kSmallX, truncated at x^20.
inline constexpr double kLogcoshEven[10] = {
    1.0 / 2.0,
    -1.0 / 12.0,
    1.0 / 45.0,
    -17.0 / 2520.0,
    31.0 / 14175.0,
    -691.0 / 935550.0,
    10922.0 / 42567525.0,
    -929569.0 / 10216206000.0,
    3202291.0 / 97692469875.0,
    -221930581.0 / 18561569276250.0,
};

// exp(r) Taylor through r^13, |r| <= ln2/2 after range reduction.
inline constexpr double kExpTaylor[14] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

// sin(r) = r * S(r^2) through r^15, |r| <= pi/4.
inline constexpr double kSinOdd[8] = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
};

// cos(r) = C(r^2) through r^16, |r| <= pi/4.
inline constexpr double kCosEven[9] = {
    1.0,
    -1.0 / 2.0,
    1.0 / 24.0,
    -1.0 / 720.0,
    1.0 / 40320.0,
    -1.0 / 3628800.0,
    1.0 / 479001600.0,
    -1.0 / 87178291200.0,
    1.0 / 20922789888000.0,
};

// log1p(u) = 2 atanh(u / (2 + u)); odd series in z = u/(2+u) through z^31.
// Valid for u in [0, 1], where z <= 1/3.
inline constexpr int kLog1pTerms = 16;

// Cody-Waite constants.
inline constexpr double kLog2E = 1.4426950408889634073599246810019;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kTwoOverPi = 0.63661977236758134307553505349006;
inline constexpr double kPiO2Hi = 1.57079632673412561417e+00;
inline constexpr double kPiO2Mid = 6.07710050650619224932e-11;
inline constexpr double kPiO2Lo = 2.02226624879595063154e-21;
inline constexpr double kExpLo = -708.0;
inline constexpr double kExpHi = 709.0;

}  // namespace phasespace::simd::detail
