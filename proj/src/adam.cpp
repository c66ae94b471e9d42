#include "nlica/adam.hpp"

#include <cmath>

namespace nlica {

void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state) {
    if (params.size() != grads.size())
        throw DimensionError("adam_step: params/grads count mismatch");
    if (state.m.empty()) {
        for (const Tensor* p : params) {
            state.m.push_back(Tensor::zeros(p->rows(), p->cols()));
            state.v.push_back(Tensor::zeros(p->rows(), p->cols()));
        }
    }
    if (state.m.size() != params.size())
        throw DimensionError("adam_step: state sized for a different parameter set");

    state.step += 1;
    const AdamConfig& c = state.cfg;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));

    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& p = *params[k];
        const Tensor& g = *grads[k];
        if (!p.same_shape(g) || !p.same_shape(state.m[k]))
            throw DimensionError("adam_step: shape mismatch at parameter " + std::to_string(k));
        if (!g.all_finite())
            throw NumericError("adam_step: non-finite gradient at parameter " + std::to_string(k));
        Tensor& m = state.m[k];
        Tensor& v = state.v[k];
        double* pd = p.data();
        double* md = m.data();
        double* vd = v.data();
        const double* gd = g.data();
        const std::size_t n = p.size();
        for (std::size_t i = 0; i < n; ++i) {
            md[i] = c.beta1 * md[i] + (1.0 - c.beta1) * gd[i];
            vd[i] = c.beta2 * vd[i] + (1.0 - c.beta2) * gd[i] * gd[i];
            const double mhat = md[i] / bc1;
            const double vhat = vd[i] / bc2;
            pd[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
        }
        if (!p.all_finite())
            throw NumericError("adam_step: parameter " + std::to_string(k) +
                               " became non-finite");
    }
}

}  // namespace nlica
