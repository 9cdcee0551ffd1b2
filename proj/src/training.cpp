#include <chrono>
#include <cmath>
#include <limits>

#include "qonn/training.hpp"

namespace qonn {

std::vector<double> grad_central(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& params, double h_rel) {
    std::vector<double> g(params.size());
    std::vector<double> p = params;
    for (size_t i = 0; i < params.size(); ++i) {
        double h = h_rel * std::max(1.0, std::abs(params[i]));
        p[i] = params[i] + h;
        double fp = f(p);
        p[i] = params[i] - h;
        double fm = f(p);
        p[i] = params[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw OptimizationFailure("grad_central: non-finite loss probing coordinate " +
                                      std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<double> grad_forward(const Objective& obj, const std::vector<double>& params) {
    if (!obj.value_dual)
        throw InvalidArgument("grad_forward: objective has no dual-number evaluation");
    std::vector<double> g(params.size());
    std::vector<Dual> p(params.size());
    for (size_t i = 0; i < params.size(); ++i) p[i] = Dual(params[i]);
    for (size_t i = 0; i < params.size(); ++i) {
        p[i].d = 1.0;
        Dual out = obj.value_dual(p);
        if (!is_finite(out))
            throw OptimizationFailure("grad_forward: non-finite loss probing coordinate " +
                                      std::to_string(i));
        g[i] = out.d;
        p[i].d = 0.0;
    }
    return g;
}

std::vector<double> gradient(const Objective& obj, const std::vector<double>& params,
                             GradMode mode, double h_rel) {
    if (mode == GradMode::Forward && obj.value_dual) return grad_forward(obj, params);
    return grad_central(obj.value, params, h_rel);
}

FitResult fit(const ExpectationPlan& plan, const Objective& train_obj,
              const std::function<double(const std::vector<double>&)>& val_loss,
              const TrainConfig& cfg) {
    cfg.validate();
    const int n = plan.arch.n_modes;
    const int layers = plan.arch.n_layers;
    const size_t dim = static_cast<size_t>(param_count(n, layers));

    std::vector<double> lo(dim, -std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim, std::numeric_limits<double>::infinity());
    for (size_t i : squeeze_param_indices(n, layers)) {
        lo[i] = -cfg.r_bound;
        hi[i] = cfg.r_bound;
    }

    LbfgsOptions lopts;
    lopts.max_iters = cfg.max_iters;
    lopts.tolerance = cfg.tolerance;
    lopts.memory = cfg.lbfgs_memory;

    FitResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();
    auto t0 = std::chrono::steady_clock::now();
    int finite_restarts = 0;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        Rng rng = Rng::derived(cfg.seed, static_cast<uint64_t>(restart) + 1);
        // Displacements start small, squeezings moderate, mesh angles over
        // their full period (narrow angle draws consistently miss the
        // quadrature-phase configurations the nonlinearity lives at).
        std::vector<double> x0(dim);
        for (size_t i = 0; i < dim; ++i) x0[i] = rng.uniform(-0.5, 0.5);
        for (size_t i : mesh_param_indices(n, layers)) x0[i] = rng.uniform(-M_PI, M_PI);
        for (size_t i : squeeze_param_indices(n, layers)) x0[i] = rng.uniform(-1.0, 1.0);

        auto record = [&](int iter, double f, const std::vector<double>& x) {
            TraceRecord rec;
            rec.restart = restart;
            rec.iter = iter;
            rec.train_loss = f;
            rec.val_loss = val_loss ? val_loss(x) : f;
            rec.wall_s = cfg.deterministic
                             ? 0.0
                             : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                   .count();
            result.trace.push_back(rec);
        };

        LbfgsReport rep;
        try {
            rep = lbfgs_minimize(train_obj, x0, lo, hi, cfg.grad_mode, cfg.fd_step, lopts, record);
        } catch (const OptimizationFailure&) {
            continue;  // diverged restart; others may still succeed
        }
        if (!std::isfinite(rep.f)) continue;
        ++finite_restarts;
        double v = val_loss ? val_loss(rep.x) : rep.f;
        if (v < result.best_val_loss) {
            result.best_val_loss = v;
            result.best_train_loss = rep.f;
            result.best_params = rep.x;
            result.best_restart = restart;
        }
    }
    if (finite_restarts == 0)
        throw OptimizationFailure("fit: every restart diverged (" +
                                  std::to_string(cfg.restarts) + " attempted)");
    return result;
}

}  // namespace qonn
