#pragma once

#include "fsvar/types.hpp"

namespace fsvar {

inline constexpr Index kDefaultLqdGrid = 1000;
/// Shifted LQD values are clamped at -kLqdExpCap before exponentiation.
inline constexpr double kLqdExpCap = 700.0;

/// Log quantile density of `p` on a uniform grid of `n_grid01` points over [0, 1].
///
/// p is read as piecewise linear, so its cdf is piecewise quadratic and can be
/// inverted exactly. Grid point z_j stands for the cell between the midpoints
/// to its neighbours (half cells at 0 and 1) and the value stored is the log of
/// the average slope of Q over that cell. Tails where p is tiny therefore give
/// large but finite values. The lower end of the support is not retained.
LqdCurve lqd_forward(const DensityCurve& p, Index n_grid01 = kDefaultLqdGrid);

/// Density on a uniform `n_grid` grid over `support` whose LQD is `f`.
///
/// Q(z) = L + theta * int_0^z exp f, with theta = (U - L) / int_0^1 exp f,
/// so Q(0) = L and Q(1) = U. exp f is taken as constant on each grid cell,
/// which inverts the forward map exactly at the cell edges. The cdf is the
/// monotone (PCHIP) interpolant of the knots (Q, z) evaluated on the density
/// grid and the pdf is its central-difference derivative. The cdf runs from
/// exactly 0 to exactly 1 and is non-decreasing, so the trapezoid integral of
/// the result telescopes to 1 and every value is non-negative; no rescaling step is
/// applied. Adding a constant to f leaves the result unchanged.
///
/// Throws NumericalError("LQD overflow ...") if f has non-finite values.
DensityCurve lqd_inverse(const LqdCurve& f, const Support& support,
                         Index n_grid = kDefaultLqdGrid);

/// int (a - b)^2 over the common grid of two densities (trapezoid rule).
double integrated_squared_error(const DensityCurve& a, const DensityCurve& b);

}  // namespace fsvar
