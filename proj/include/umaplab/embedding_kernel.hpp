#ifndef UMAPLAB_EMBEDDING_KERNEL_HPP
#define UMAPLAB_EMBEDDING_KERNEL_HPP

#include "umaplab/common.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file embedding_kernel.hpp
 *
 * @brief Low-dimensional similarity kernels, the min-dist curve fit and the
 * analytic gradients used by the optimizer.
 *
 * Every function works on squared distances s = ||y_a - y_b||^2, so the
 * Cauchy-type kernel (1 + a ||y||^{2b})^{-1} is evaluated as (1 + a s^b)^{-1}.
 */

namespace umaplab {

enum class KernelFamily { cauchy_ab, gaussian };

KernelFamily parse_kernel_family(std::string_view name);
std::string to_string(KernelFamily family);

struct KernelParams {
    KernelFamily family = KernelFamily::cauchy_ab;
    double a = 1.0;
    double b = 1.0;
    /// Gaussian temperature; unused by the Cauchy family.
    double tau = 1.0;

    static KernelParams cauchy(double a, double b);
    static KernelParams gaussian(double tau);

    /// Throws ConfigError unless the parameters of the selected family are positive.
    void validate() const;
};

/// Phi(s): (1 + a s^b)^{-1} or exp(-s / (2 tau)). In (0, 1] for finite s >= 0.
double phi(double sq_dist, const KernelParams& p);

/// log Phi(s) in closed form; finite for every finite s.
double log_phi(double sq_dist, const KernelParams& p);

/// log(1 - Phi(s)) in closed form; -infinity at s = 0.
double log_one_minus_phi(double sq_dist, const KernelParams& p);

/**
 * The repulsive log term with the 1/s singularity replaced by 1/(s + eps):
 * b log(s + eps) + (remainder that is smooth at s = 0), where b = 1 for the
 * Gaussian. At eps = 0 it equals log(1 - Phi(s)). Its gradient is exactly
 * `grad_log_one_minus_phi`.
 */
double log_one_minus_phi_regularized(double sq_dist, const KernelParams& p, double eps);

/**
 * Gradient of log Phi(y_a, y_b) with respect to y_a, written into `out`.
 * For the Cauchy family with b < 1 the gradient is unbounded at s = 0; zero is
 * returned there (the point is stationary by symmetry).
 */
void grad_log_phi(std::span<const double> y_a, std::span<const double> y_b, const KernelParams& p,
                  std::span<double> out);

/**
 * Gradient of the regularized log(1 - Phi(y_a, y_c)) with respect to y_a.
 * Points away from y_c. eps must be positive in the optimizer; eps = 0 gives
 * the exact gradient for s > 0.
 */
void grad_log_one_minus_phi(std::span<const double> y_a, std::span<const double> y_c, const KernelParams& p,
                            double eps, std::span<double> out);

std::vector<double> grad_log_phi(std::span<const double> y_a, std::span<const double> y_b, const KernelParams& p);
std::vector<double> grad_log_one_minus_phi(std::span<const double> y_a, std::span<const double> y_c,
                                           const KernelParams& p, double eps);

struct MinDistFit {
    double min_dist = 0.0;
    double a = 0.0;
    double b = 0.0;
    /// Root mean squared residual over the fit grid.
    double rmse = 0.0;
    int iterations = 0;
};

/// Target membership curve: 1 for d <= min_dist, exp(-(d - min_dist)) beyond.
double min_dist_target(double d, double min_dist);

/// The fit grid: d = 0.00, 0.01, ..., 3.00 (301 points).
std::vector<double> min_dist_grid();

/// RMSE of (1 + a d^{2b})^{-1} against the target on the grid.
double min_dist_rmse(double min_dist, double a, double b);

/**
 * Least-squares fit of (a, b) by damped Gauss-Newton in (log a, log b), starting
 * from (1, 1). Requires 0 <= min_dist < 3. Throws NumericError with the residual
 * trace if the step norm does not fall below 1e-10 within 200 iterations.
 */
MinDistFit fit_ab(double min_dist);

} // namespace umaplab

#endif
