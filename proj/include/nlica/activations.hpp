// Elementwise nonlinearities shared by the MLP, the autodiff tape, and the
// likelihood code. smooth_leaky is the strictly-increasing C^inf stand-in
// for leaky-relu used where a finite log-derivative is required:
//   f(x) = alpha*x + (1-alpha)*softplus(x),  f'(x) in (alpha, 1).
#pragma once

#include <cmath>
#include <string>

#include "nlica/errors.hpp"

namespace nlica {

enum class Act { identity, leaky_relu, tanh_fn, smooth_leaky };

inline std::string act_name(Act a) {
    switch (a) {
        case Act::identity: return "identity";
        case Act::leaky_relu: return "leaky-relu";
        case Act::tanh_fn: return "tanh";
        case Act::smooth_leaky: return "smooth-leaky";
    }
    return "?";
}

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline double act_eval(Act a, double alpha, double x) {
    switch (a) {
        case Act::identity: return x;
        case Act::leaky_relu: return x >= 0.0 ? x : alpha * x;
        case Act::tanh_fn: return std::tanh(x);
        case Act::smooth_leaky: return alpha * x + (1.0 - alpha) * softplus(x);
    }
    return x;
}

inline double act_deriv(Act a, double alpha, double x) {
    switch (a) {
        case Act::identity: return 1.0;
        case Act::leaky_relu: return x >= 0.0 ? 1.0 : alpha;
        case Act::tanh_fn: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Act::smooth_leaky: return alpha + (1.0 - alpha) * sigmoid(x);
    }
    return 1.0;
}

// log f'(x); only defined for activations with strictly positive derivative.
inline double act_log_deriv(Act a, double alpha, double x) {
    switch (a) {
        case Act::smooth_leaky: return std::log(alpha + (1.0 - alpha) * sigmoid(x));
        case Act::identity: return 0.0;
        default:
            throw ContractError("log-derivative requested for non-smooth activation " +
                                act_name(a));
    }
}

// d/dx log f'(x) = f''(x)/f'(x).
inline double act_log_deriv_grad(Act a, double alpha, double x) {
    switch (a) {
        case Act::smooth_leaky: {
            const double s = sigmoid(x);
            return (1.0 - alpha) * s * (1.0 - s) / (alpha + (1.0 - alpha) * s);
        }
        case Act::identity: return 0.0;
        default:
            throw ContractError("log-derivative requested for non-smooth activation " +
                                act_name(a));
    }
}

// Exact inverse of leaky-relu, used by the mixing-network oracle.
inline double leaky_relu_inverse(double alpha, double y) { return y >= 0.0 ? y : y / alpha; }

// ---------------------------------------------------------------------------
// Fixed source log-densities for the likelihood objective.

enum class SourceDensity { laplace, gauss_mix2, student3 };

inline std::string density_name(SourceDensity d) {
    switch (d) {
        case SourceDensity::laplace: return "laplace";
        case SourceDensity::gauss_mix2: return "gauss-mix";
        case SourceDensity::student3: return "student";
    }
    return "?";
}

// log p(z) for the standard form of each family.
inline double log_density(SourceDensity d, double z) {
    switch (d) {
        case SourceDensity::laplace:
            return -std::fabs(z) - std::log(2.0);
        case SourceDensity::gauss_mix2: {
            // 0.5 N(-1, 0.5^2) + 0.5 N(+1, 0.5^2)
            const double s2 = 0.25;
            const double a = -(z + 1.0) * (z + 1.0) / (2.0 * s2);
            const double b = -(z - 1.0) * (z - 1.0) / (2.0 * s2);
            const double m = a > b ? a : b;
            return m + std::log(0.5 * std::exp(a - m) + 0.5 * std::exp(b - m)) -
                   0.5 * std::log(2.0 * M_PI * s2);
        }
        case SourceDensity::student3:
            // t with 3 degrees of freedom
            return std::log(2.0) - std::log(M_PI) - 0.5 * std::log(3.0) -
                   2.0 * std::log1p(z * z / 3.0);
    }
    return 0.0;
}

// d/dz log p(z) (the negative score function).
inline double log_density_grad(SourceDensity d, double z) {
    switch (d) {
        case SourceDensity::laplace:
            return z > 0.0 ? -1.0 : (z < 0.0 ? 1.0 : 0.0);
        case SourceDensity::gauss_mix2: {
            const double s2 = 0.25;
            const double a = -(z + 1.0) * (z + 1.0) / (2.0 * s2);
            const double b = -(z - 1.0) * (z - 1.0) / (2.0 * s2);
            const double m = a > b ? a : b;
            const double wa = std::exp(a - m), wb = std::exp(b - m);
            const double ga = -(z + 1.0) / s2, gb = -(z - 1.0) / s2;
            return (wa * ga + wb * gb) / (wa + wb);
        }
        case SourceDensity::student3:
            return -4.0 * z / (3.0 + z * z);
    }
    return 0.0;
}

}  // namespace nlica
