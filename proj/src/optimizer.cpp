#include <algorithm>
#include <cmath>
#include <deque>

#include "qonn/training.hpp"

namespace qonn {

namespace {

double clampv(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

void project(std::vector<double>& x, const std::vector<double>& lo,
             const std::vector<double>& hi) {
    for (size_t i = 0; i < x.size(); ++i) x[i] = clampv(x[i], lo[i], hi[i]);
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

LbfgsReport lbfgs_minimize(const Objective& obj, std::vector<double> x0,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           GradMode mode, double fd_step, const LbfgsOptions& opts,
                           const std::function<void(int, double, const std::vector<double>&)>&
                               on_iter) {
    const size_t dim = x0.size();
    if (lo.size() != dim || hi.size() != dim)
        throw InvalidArgument("lbfgs_minimize: bound vectors must match dimension");
    project(x0, lo, hi);

    std::deque<std::pair<std::vector<double>, std::vector<double>>> history;  // (s, y)
    std::vector<double> x = std::move(x0);
    double f = obj.value(x);
    std::vector<double> g = gradient(obj, x, mode, fd_step);

    LbfgsReport rep;
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        // Convergence on the projected gradient.
        std::vector<double> pg(dim);
        for (size_t i = 0; i < dim; ++i) pg[i] = x[i] - clampv(x[i] - g[i], lo[i], hi[i]);
        if (on_iter) on_iter(iter, f, x);
        if (inf_norm(pg) < opts.tolerance) {
            rep.converged = true;
            break;
        }

        // Two-loop recursion.
        std::vector<double> q = g;
        std::vector<double> alpha_hist(history.size());
        for (size_t h = history.size(); h-- > 0;) {
            const auto& [s, y] = history[h];
            double rho = 1.0 / dot(y, s);
            alpha_hist[h] = rho * dot(s, q);
            for (size_t i = 0; i < dim; ++i) q[i] -= alpha_hist[h] * y[i];
        }
        if (!history.empty()) {
            const auto& [s, y] = history.back();
            double gamma = dot(s, y) / dot(y, y);
            for (double& v : q) v *= gamma;
        }
        for (size_t h = 0; h < history.size(); ++h) {
            const auto& [s, y] = history[h];
            double rho = 1.0 / dot(y, s);
            double beta = rho * dot(y, q);
            for (size_t i = 0; i < dim; ++i) q[i] += (alpha_hist[h] - beta) * s[i];
        }
        std::vector<double> dir(dim);
        for (size_t i = 0; i < dim; ++i) dir[i] = -q[i];
        if (dot(dir, g) > -1e-16 * inf_norm(g)) {
            for (size_t i = 0; i < dim; ++i) dir[i] = -g[i];  // descent fallback
            history.clear();
        }

        // Projected backtracking line search (Armijo on the projected step).
        double t = 1.0;
        std::vector<double> xn(dim);
        double fn = f;
        bool accepted = false;
        for (int ls = 0; ls < opts.max_line_steps; ++ls) {
            for (size_t i = 0; i < dim; ++i) xn[i] = clampv(x[i] + t * dir[i], lo[i], hi[i]);
            fn = obj.value(xn);
            std::vector<double> step(dim);
            for (size_t i = 0; i < dim; ++i) step[i] = xn[i] - x[i];
            double gs = dot(g, step);
            if (std::isfinite(fn) && fn <= f + opts.armijo_c1 * gs && gs < 0.0) {
                accepted = true;
                break;
            }
            if (std::isfinite(fn) && fn < f && inf_norm(step) < 1e-14) break;
            t *= 0.5;
        }
        if (!accepted) {
            // Try a plain gradient step before giving up.
            double tg = 1.0 / std::max(1.0, inf_norm(g));
            bool improved = false;
            for (int ls = 0; ls < opts.max_line_steps; ++ls) {
                for (size_t i = 0; i < dim; ++i) xn[i] = clampv(x[i] - tg * g[i], lo[i], hi[i]);
                fn = obj.value(xn);
                if (std::isfinite(fn) && fn < f) {
                    improved = true;
                    break;
                }
                tg *= 0.5;
            }
            if (!improved) {
                rep.converged = true;  // no further progress possible
                break;
            }
            history.clear();
        }

        std::vector<double> gn = gradient(obj, xn, mode, fd_step);
        std::vector<double> s(dim), y(dim);
        for (size_t i = 0; i < dim; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        double sy = dot(s, y);
        if (sy > 1e-12 * inf_norm(s) * inf_norm(y) && sy > 0.0) {
            history.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
        }
        x = xn;
        f = fn;
        g = std::move(gn);
    }
    rep.x = std::move(x);
    rep.f = f;
    rep.iters = iter;
    return rep;
}

}  // namespace qonn
