#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qonn/protocols.hpp"

using namespace qonn;

// Dataset-level training properties; slower than the per-module suites.

namespace {

double fit_val_loss(const QonnArchitecture& arch, const Dataset& ds, uint64_t seed) {
    ExpectationPlan plan = compile_plan(arch);
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.restarts = 4;
    cfg.max_iters = 250;
    return run_benchmark(plan, ds, cfg).fit.best_val_loss;
}

}  // namespace

TEST_CASE("nonlinearity is necessary on the oscillatory curve") {
    // Gaussian-only networks stop at the best affine fit; two subtractions
    // must beat that by at least 5x in validation MSE.
    Dataset ds = make_curve_dataset(
        [](double x) { return std::sin(3.0 * x) + std::cos(5.0 * x); }, -1.0, 2.5, 100, 0.1,
        7);
    double gauss = fit_val_loss({2, 1, {{}}, {0}}, ds, 7);
    double qonn = fit_val_loss({2, 1, {{0, 1}}, {0}}, ds, 7);
    CHECK(gauss >= 5.0 * qonn);
}

TEST_CASE("width monotonically helps on the cosh curve") {
    Dataset ds = make_curve_dataset([](double x) { return 2.0 * std::cosh(x); }, -5.0, 5.0,
                                    100, 3.0, 11);
    auto median_loss = [&](int neurons) {
        QonnArchitecture arch;
        arch.n_modes = neurons;
        arch.n_layers = 1;
        std::vector<int> subs(neurons);
        for (int k = 0; k < neurons; ++k) subs[k] = k;
        arch.subtractions = {subs};
        arch.outputs = {0};
        std::vector<double> losses;
        for (uint64_t seed : {3ULL, 4ULL, 5ULL, 6ULL, 7ULL})
            losses.push_back(fit_val_loss(arch, ds, seed));
        std::sort(losses.begin(), losses.end());
        return losses[2];
    };
    double one = median_loss(1);
    double two = median_loss(2);
    double three = median_loss(3);
    CHECK(two <= one * (1.0 + 1e-9));
    CHECK(three <= two * (1.0 + 1e-9));
}
