#pragma once

#include "fsvar/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fsvar {

/// `n` equally spaced points from `a` to `b`, both endpoints included exactly.
Eigen::VectorXd uniform_grid(double a, double b, Index n);

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Running trapezoid integral; element 0 is 0.
Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Piecewise-linear interpolation through (xs, ys), xs strictly increasing.
/// Queries outside [xs.front, xs.back] are clamped to the end values.
double interp_linear(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x);

/// Vectorized interp_linear for a non-decreasing query vector.
Eigen::VectorXd interp_linear_sorted(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                     const Eigen::VectorXd& queries);

/// Exact integral over [a, b] of the piecewise-linear interpolant of (x, y).
double integrate_linear_between(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double a,
                                double b);

/// Inverse of the piecewise-linear cdf of a density curve at probability u.
double density_quantile(const DensityCurve& p, double u);

/// Rescales the curve to unit trapezoid integral. Every call is counted; see
/// renormalization_count().
void renormalize(DensityCurve& p);

/// Number of renormalize() calls since the last reset, across all threads.
std::uint64_t renormalization_count();
void reset_renormalization_count();

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `values` is reordered.
double sample_quantile(std::span<double> values, double q);

double sample_mean(std::span<const double> values);
/// Unbiased (n - 1) sample standard deviation.
double sample_sd(std::span<const double> values);

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// SplitMix64 mix of (base, stream), used to derive independent per-job seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Largest modulus among the eigenvalues of a square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace fsvar
