#include "cpdd/gmres.hpp"

#include <chrono>
#include <cmath>

#include "cpdd/error.hpp"
#include "cpdd/sparse.hpp"

namespace cpdd {

namespace {

void apply_plane_rotation(double& dx, double& dy, double cs, double sn) {
    double tmp = cs * dx + sn * dy;
    dy = -sn * dx + cs * dy;
    dx = tmp;
}

}  // namespace

GmresResult gmres(const LinearOperator& apply_a, std::span<const double> b,
                  const LinearOperator& apply_m, const GmresOptions& options) {
    if (options.rtol <= 0.0 || options.rtol >= 1.0) {
        throw Error(ErrorCode::invalid_config, "gmres rtol must lie in (0,1)");
    }
    if (options.restart < 1) {
        throw Error(ErrorCode::invalid_config, "gmres restart must be >= 1");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = b.size();
    const int m = options.restart;

    GmresResult result;
    result.x.assign(n, 0.0);
    auto& report = result.report;

    const double bnorm = norm2(b);
    report.residual_history.push_back(bnorm);
    if (bnorm == 0.0) {
        report.status = SolveStatus::converged;
        report.converged = true;
        report.iterations = 0;
        report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }
    const double target = options.rtol * bnorm;

    std::vector<double> r(b.begin(), b.end());
    std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
    std::vector<double> h(static_cast<std::size_t>(m + 1) * m, 0.0);
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
    std::vector<double> w(n), z(n), tmp(n);
    auto hij = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };

    int total_iters = 0;
    bool converged = false;
    bool breakdown = false;

    while (!converged && total_iters < options.max_iter && !breakdown) {
        double beta = norm2(r);
        if (beta <= target) {
            converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::fill(h.begin(), h.end(), 0.0);

        int k = 0;
        for (; k < m && total_iters < options.max_iter; ++k) {
            // w = A M^-1 v_k (right preconditioning).
            if (apply_m) {
                apply_m(v[k], z);
                apply_a(z, w);
            } else {
                apply_a(v[k], w);
            }
            for (int i = 0; i <= k; ++i) {
                hij(i, k) = dot(w, v[i]);
                axpy(-hij(i, k), v[i], w);
            }
            hij(k + 1, k) = norm2(w);
            if (hij(k + 1, k) > 0.0) {
                for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / hij(k + 1, k);
            } else {
                breakdown = true;
            }

            for (int i = 0; i < k; ++i) apply_plane_rotation(hij(i, k), hij(i + 1, k), cs[i], sn[i]);
            double denom = std::hypot(hij(k, k), hij(k + 1, k));
            if (denom == 0.0) {
                // Column is numerically void; exclude it from the update.
                breakdown = true;
                break;
            }
            cs[k] = hij(k, k) / denom;
            sn[k] = hij(k + 1, k) / denom;
            hij(k, k) = denom;
            hij(k + 1, k) = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];

            ++total_iters;
            report.residual_history.push_back(std::abs(g[k + 1]));
            if (std::abs(g[k + 1]) <= target || breakdown) {
                ++k;
                break;
            }
        }

        if (k == 0) break;  // breakdown before any usable column

        // Solve the k x k triangular least-squares system and update x.
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= hij(i, j) * y[j];
            y[i] = s / hij(i, i);
        }
        std::fill(z.begin(), z.end(), 0.0);
        for (int i = 0; i < k; ++i) axpy(y[i], v[i], z);
        if (apply_m) {
            apply_m(z, tmp);
            for (std::size_t i = 0; i < n; ++i) result.x[i] += tmp[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) result.x[i] += z[i];
        }

        apply_a(result.x, tmp);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
        double true_norm = norm2(r);
        if (!report.residual_history.empty()) report.residual_history.back() = true_norm;
        if (true_norm <= target) converged = true;
    }

    report.iterations = total_iters;
    report.converged = converged;
    report.status = converged ? SolveStatus::converged : SolveStatus::max_iterations;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (breakdown && !converged) {
        throw Error(ErrorCode::breakdown, "Arnoldi norm underflow before reaching tolerance");
    }
    return result;
}

}  // namespace cpdd
