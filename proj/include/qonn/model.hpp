#ifndef QONN_MODEL_HPP
#define QONN_MODEL_HPP

#include <vector>

#include "qonn/plan.hpp"

namespace qonn {

// Flat trainable layout, per layer: [u1 (N^2) | r (N) | u2 (N^2) |
// delta_re (N) | delta_im (N)], total L(2N^2 + 3N).
inline long param_count(int n_modes, int n_layers) {
    if (n_modes < 1 || n_layers < 1) throw InvalidArgument("param_count: sizes must be >= 1");
    return n_layers * param_count_per_layer(n_modes);
}

template <class R>
GaussianLayerParamsT<R> layer_slice(const std::vector<R>& params, int n_modes, int layer) {
    const long per = param_count_per_layer(n_modes);
    const long base = layer * per;
    if (static_cast<long>(params.size()) < base + per)
        throw InvalidArgument("parameter vector too short for requested layer");
    GaussianLayerParamsT<R> lp;
    long o = base;
    lp.u1.assign(params.begin() + o, params.begin() + o + n_modes * n_modes);
    o += n_modes * n_modes;
    lp.r.assign(params.begin() + o, params.begin() + o + n_modes);
    o += n_modes;
    lp.u2.assign(params.begin() + o, params.begin() + o + n_modes * n_modes);
    o += n_modes * n_modes;
    lp.delta.resize(n_modes);
    for (int k = 0; k < n_modes; ++k) lp.delta[k] = {params[o + k], params[o + n_modes + k]};
    return lp;
}

// Indices of the squeezing entries inside the flat layout (box-constrained
// coordinates for the optimizer).
inline std::vector<size_t> squeeze_param_indices(int n_modes, int n_layers) {
    std::vector<size_t> idx;
    const long per = param_count_per_layer(n_modes);
    for (int l = 0; l < n_layers; ++l)
        for (int k = 0; k < n_modes; ++k)
            idx.push_back(static_cast<size_t>(l * per + n_modes * n_modes + k));
    return idx;
}

// Indices of the interferometer-mesh angles (both meshes, all layers).
inline std::vector<size_t> mesh_param_indices(int n_modes, int n_layers) {
    std::vector<size_t> idx;
    const long per = param_count_per_layer(n_modes);
    const long nn = static_cast<long>(n_modes) * n_modes;
    for (int l = 0; l < n_layers; ++l) {
        for (long i = 0; i < nn; ++i) idx.push_back(static_cast<size_t>(l * per + i));
        for (long i = 0; i < nn; ++i)
            idx.push_back(static_cast<size_t>(l * per + nn + n_modes + i));
    }
    return idx;
}

// Per-parameter-set data: conjugation coefficients for every slot plus the
// merged front Gaussian. Input-independent, so bind once per parameter set
// and reuse across a dataset batch.
template <class R>
struct BoundParameters {
    std::vector<CVec<R>> slot_vals;  // per slot: [shift | U row | V row], 2N+1 entries
    BogoliubovT<R> total;            // product of all layer Bogoliubovs
    CVec<R> total_shift;             // accumulated displacement
    CMat<R> front_cov;               // total Sigma (input-independent)
};

template <class R>
BoundParameters<R> bind_parameters(const ExpectationPlan& plan, const std::vector<R>& params) {
    const QonnArchitecture& arch = plan.arch;
    const int n = arch.n_modes;
    if (static_cast<long>(params.size()) != param_count(n, arch.n_layers))
        throw InvalidArgument("bind_parameters: expected " +
                              std::to_string(param_count(n, arch.n_layers)) +
                              " parameters, got " + std::to_string(params.size()));

    std::vector<BogoliubovT<R>> layer_b;
    std::vector<CVec<R>> layer_d;
    for (int l = 0; l < arch.n_layers; ++l) {
        auto [bm, d] = bogoliubov_from_layer(layer_slice(params, n, l), n);
        layer_b.push_back(std::move(bm));
        layer_d.push_back(std::move(d));
    }

    // Suffix products: suffix[l] = G_{L-1} ... G_{l+1} (identity for the last
    // layer). A subtraction in layer l commutes leftwards through suffix[l],
    // which conjugates it by the inverse Bogoliubov pair.
    const int last = arch.n_layers - 1;
    std::vector<BogoliubovT<R>> suffix_b(arch.n_layers);
    std::vector<CVec<R>> suffix_d(arch.n_layers);
    suffix_b[last] = BogoliubovT<R>::identity(n);
    suffix_d[last] = CVec<R>(2 * n);
    for (int l = last - 1; l >= 0; --l) {
        suffix_b[l] = compose(suffix_b[l + 1], layer_b[l + 1]);
        suffix_d[l] = mul(suffix_b[l + 1].b, layer_d[l + 1]);
        for (int i = 0; i < 2 * n; ++i) suffix_d[l][i] += suffix_d[l + 1][i];
    }

    BoundParameters<R> bound{{},
                             compose(suffix_b[0], layer_b[0]),
                             mul(suffix_b[0].b, layer_d[0]),
                             {}};
    for (int i = 0; i < 2 * n; ++i) bound.total_shift[i] += suffix_d[0][i];

    bound.slot_vals.resize(plan.n_slots);
    int prev_layer = -1;
    BogoliubovT<R> eff_b;
    CVec<R> eff_d;
    for (int s = 0; s < plan.n_slots; ++s) {
        auto [layer, pos] = plan.slot_origin[s];
        if (layer != prev_layer) {
            eff_b = suffix_b[layer].inverse();
            CVec<R> tmp = mul(eff_b.b, suffix_d[layer]);
            eff_d.assign(2 * n, Cx<R>{});
            for (int i = 0; i < 2 * n; ++i) eff_d[i] = -tmp[i];
            prev_layer = layer;
        }
        int k = arch.subtractions[layer][pos];
        CVec<R> vals(2 * n + 1);
        vals[0] = eff_d[k];
        for (int j = 0; j < n; ++j) {
            vals[1 + j] = eff_b.u(k, j);
            vals[1 + n + j] = eff_b.v(k, j);
        }
        bound.slot_vals[s] = std::move(vals);
    }

    GaussianStateT<R> vac = vacuum_t<R>(n);
    bound.front_cov = mul(mul(bound.total.b, vac.cov), adjoint(bound.total.b));
    return bound;
}

// Front Gaussian state for one input vector (real coherent amplitudes of the
// first M modes).
template <class R>
GaussianStateT<R> front_state(const ExpectationPlan& plan, const BoundParameters<R>& bound,
                              const std::vector<R>& alpha) {
    const int n = plan.arch.n_modes;
    if (static_cast<int>(alpha.size()) > n)
        throw InvalidArgument("forward: more inputs than modes");
    GaussianStateT<R> st;
    st.n_modes = n;
    st.cov = bound.front_cov;
    st.means = bound.total_shift;
    for (int i = 0; i < 2 * n; ++i)
        for (size_t k = 0; k < alpha.size(); ++k)
            st.means[i] += (bound.total.b(i, k) + bound.total.b(i, n + static_cast<int>(k))) *
                           Cx<R>(alpha[k]);
    return st;
}

template <class R>
struct ForwardResult {
    std::vector<R> outputs;
    std::vector<Cx<R>> moments;
    R herald_norm{};
};

template <class R>
ForwardResult<R> forward_bound(const ExpectationPlan& plan, const BoundParameters<R>& bound,
                               const std::vector<R>& alpha, const EvalOptions& opts = {}) {
    auto res = evaluate_plan(plan, bound.slot_vals, front_state(plan, bound, alpha), opts);
    return {std::move(res.outputs), std::move(res.moments), res.norm};
}

// One-shot forward pass: homodyne outputs and heralding weight.
template <class R>
ForwardResult<R> forward(const ExpectationPlan& plan, const std::vector<R>& params,
                         const std::vector<R>& alpha, const EvalOptions& opts = {}) {
    return forward_bound(plan, bind_parameters(plan, params), alpha, opts);
}

// Affine map used for dataset pre/post-processing (inputs into the effective
// displacement window, targets into the readout window).
struct Rescaler {
    double scale = 1.0;
    double shift = 0.0;

    static Rescaler fit(double lo, double hi, double target_lo, double target_hi) {
        Rescaler r;
        if (hi - lo < 1e-300) {
            r.scale = 1.0;
            r.shift = 0.5 * (target_lo + target_hi) - lo;
        } else {
            r.scale = (target_hi - target_lo) / (hi - lo);
            r.shift = target_lo - r.scale * lo;
        }
        return r;
    }

    template <class R>
    R apply(const R& x) const {
        return R(scale) * x + R(shift);
    }
    double invert(double y) const { return (y - shift) / scale; }
};

inline constexpr double kInputLo = -3.0, kInputHi = 3.0;    // displacement window
inline constexpr double kTargetLo = 1.0, kTargetHi = 5.0;   // readout window

}  // namespace qonn

#endif
