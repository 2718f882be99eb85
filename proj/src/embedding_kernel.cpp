#include "umaplab/embedding_kernel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace umaplab {

namespace {

constexpr const char* kModule = "embedding_kernel";

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double delta = x[j] - y[j];
        s += delta * delta;
    }
    return s;
}

void check_shapes(std::span<const double> x, std::span<const double> y, std::span<double> out) {
    if (x.size() != y.size() || out.size() != x.size()) {
        throw ConfigError(kModule, "gradient inputs have mismatched dimensions");
    }
}

/// 1/expm1(u) - 1/u, which tends to -1/2 as u -> 0.
double inv_expm1_minus_inv(double u) {
    if (u < 1e-3) {
        const double u2 = u * u;
        return -0.5 + u / 12.0 - u * u2 / 720.0;
    }
    return 1.0 / std::expm1(u) - 1.0 / u;
}

/// log((1 - e^{-u}) / u), zero at u = 0.
double log_one_minus_exp_over_u(double u) {
    if (u == 0.0) {
        return 0.0;
    }
    return std::log(-std::expm1(-u) / u);
}

} // namespace

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "cauchy" || name == "cauchy_ab") {
        return KernelFamily::cauchy_ab;
    }
    if (name == "gaussian") {
        return KernelFamily::gaussian;
    }
    throw ConfigError(kModule, "unknown kernel family '" + std::string(name) + "'");
}

std::string to_string(KernelFamily family) {
    return family == KernelFamily::gaussian ? "gaussian" : "cauchy_ab";
}

KernelParams KernelParams::cauchy(double a, double b) {
    KernelParams p;
    p.family = KernelFamily::cauchy_ab;
    p.a = a;
    p.b = b;
    p.validate();
    return p;
}

KernelParams KernelParams::gaussian(double tau) {
    KernelParams p;
    p.family = KernelFamily::gaussian;
    p.tau = tau;
    p.validate();
    return p;
}

void KernelParams::validate() const {
    if (family == KernelFamily::cauchy_ab) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
            throw ConfigError(kModule, "Cauchy kernel needs a > 0 and b > 0");
        }
    } else if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ConfigError(kModule, "Gaussian kernel needs tau > 0");
    }
}

double phi(double sq_dist, const KernelParams& p) {
    if (p.family == KernelFamily::gaussian) {
        return std::exp(-sq_dist / (2.0 * p.tau));
    }
    return 1.0 / (1.0 + p.a * std::pow(sq_dist, p.b));
}

double log_phi(double sq_dist, const KernelParams& p) {
    if (p.family == KernelFamily::gaussian) {
        return -sq_dist / (2.0 * p.tau);
    }
    return -std::log1p(p.a * std::pow(sq_dist, p.b));
}

double log_one_minus_phi(double sq_dist, const KernelParams& p) {
    if (sq_dist == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (p.family == KernelFamily::gaussian) {
        return std::log(-std::expm1(-sq_dist / (2.0 * p.tau)));
    }
    const double t = p.a * std::pow(sq_dist, p.b);
    return std::log(t) - std::log1p(t);
}

double log_one_minus_phi_regularized(double sq_dist, const KernelParams& p, double eps) {
    if (p.family == KernelFamily::gaussian) {
        const double u = sq_dist / (2.0 * p.tau);
        return std::log((sq_dist + eps) / (2.0 * p.tau)) + log_one_minus_exp_over_u(u);
    }
    return p.b * std::log(sq_dist + eps) + std::log(p.a) - std::log1p(p.a * std::pow(sq_dist, p.b));
}

void grad_log_phi(std::span<const double> y_a, std::span<const double> y_b, const KernelParams& p,
                  std::span<double> out) {
    check_shapes(y_a, y_b, out);
    double coef;
    if (p.family == KernelFamily::gaussian) {
        coef = -1.0 / p.tau;
    } else {
        const double s = squared_distance(y_a, y_b);
        if (s == 0.0) {
            coef = 0.0;
        } else {
            const double sb = std::pow(s, p.b);
            coef = -2.0 * p.a * p.b * (sb / s) / (1.0 + p.a * sb);
        }
    }
    for (std::size_t j = 0; j < y_a.size(); ++j) {
        out[j] = coef * (y_a[j] - y_b[j]);
    }
}

void grad_log_one_minus_phi(std::span<const double> y_a, std::span<const double> y_c, const KernelParams& p,
                            double eps, std::span<double> out) {
    check_shapes(y_a, y_c, out);
    const double s = squared_distance(y_a, y_c);
    double coef = 0.0;
    if (s > 0.0) {
        if (p.family == KernelFamily::gaussian) {
            const double two_tau = 2.0 * p.tau;
            coef = 2.0 * (1.0 / (s + eps) + inv_expm1_minus_inv(s / two_tau) / two_tau);
        } else {
            const double sb = std::pow(s, p.b);
            coef = 2.0 * (p.b / (s + eps) - p.a * p.b * (sb / s) / (1.0 + p.a * sb));
        }
    }
    for (std::size_t j = 0; j < y_a.size(); ++j) {
        out[j] = coef * (y_a[j] - y_c[j]);
    }
}

std::vector<double> grad_log_phi(std::span<const double> y_a, std::span<const double> y_b, const KernelParams& p) {
    std::vector<double> out(y_a.size());
    grad_log_phi(y_a, y_b, p, out);
    return out;
}

std::vector<double> grad_log_one_minus_phi(std::span<const double> y_a, std::span<const double> y_c,
                                           const KernelParams& p, double eps) {
    std::vector<double> out(y_a.size());
    grad_log_one_minus_phi(y_a, y_c, p, eps, out);
    return out;
}

double min_dist_target(double d, double min_dist) {
    return d <= min_dist ? 1.0 : std::exp(-(d - min_dist));
}

std::vector<double> min_dist_grid() {
    std::vector<double> grid(301);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = static_cast<double>(i) / 100.0;
    }
    return grid;
}

double min_dist_rmse(double min_dist, double a, double b) {
    const auto grid = min_dist_grid();
    double sse = 0.0;
    for (double d : grid) {
        const double r = 1.0 / (1.0 + a * std::pow(d, 2.0 * b)) - min_dist_target(d, min_dist);
        sse += r * r;
    }
    return std::sqrt(sse / static_cast<double>(grid.size()));
}

MinDistFit fit_ab(double min_dist) {
    if (!(min_dist >= 0.0 && min_dist < 3.0)) {
        throw ConfigError(kModule, "min_dist must lie in [0, 3), got " + std::to_string(min_dist));
    }
    const auto grid = min_dist_grid();
    const auto m = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd target(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        target[i] = min_dist_target(grid[static_cast<std::size_t>(i)], min_dist);
    }

    // Parameters are (log a, log b) so both stay positive.
    auto residuals = [&](const Eigen::Vector2d& theta, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double a = std::exp(theta[0]);
        const double b = std::exp(theta[1]);
        r.resize(m);
        if (jac) {
            jac->resize(m, 2);
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            const double d = grid[static_cast<std::size_t>(i)];
            const double p = d > 0.0 ? std::pow(d, 2.0 * b) : 0.0;
            const double denom = 1.0 + a * p;
            r[i] = 1.0 / denom - target[i];
            if (jac) {
                const double common = -a * p / (denom * denom);
                (*jac)(i, 0) = common;
                (*jac)(i, 1) = d > 0.0 ? common * 2.0 * b * std::log(d) : 0.0;
            }
        }
        return r.squaredNorm();
    };

    Eigen::Vector2d theta(0.0, 0.0);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    double cost = residuals(theta, r, &jac);
    double damping = 1e-3;
    std::ostringstream trace;
    trace.precision(10);

    constexpr int kMaxIterations = 200;
    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        const Eigen::Matrix2d jtj = jac.transpose() * jac;
        const Eigen::Vector2d jtr = jac.transpose() * r;
        Eigen::Matrix2d lhs = jtj;
        lhs.diagonal() += damping * jtj.diagonal();
        const Eigen::Vector2d step = lhs.ldlt().solve(-jtr);
        const double step_norm = step.norm();
        trace << "iter " << iter << ": cost " << cost << ", step " << step_norm << ", damping " << damping << '\n';
        if (!std::isfinite(step_norm)) {
            break;
        }

        Eigen::VectorXd r_new;
        const double cost_new = residuals(theta + step, r_new, nullptr);
        if (cost_new <= cost) {
            theta += step;
            cost = residuals(theta, r, &jac);
            damping = std::max(damping / 10.0, 1e-12);
        } else {
            damping *= 10.0;
        }
        if (step_norm < 1e-10) {
            MinDistFit fit;
            fit.min_dist = min_dist;
            fit.a = std::exp(theta[0]);
            fit.b = std::exp(theta[1]);
            fit.rmse = std::sqrt(cost / static_cast<double>(m));
            fit.iterations = iter;
            return fit;
        }
    }
    throw NumericError(kModule, "fit_ab(" + std::to_string(min_dist) + ") did not converge:\n" + trace.str());
}

} // namespace umaplab
