#include "nlica/darmois.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "nlica/errors.hpp"

namespace nlica {

Tensor darmois_transform(const Tensor& x) {
    if (x.cols() != 2) {
        throw DimensionError("darmois transform is defined for 2 columns, got " +
                             std::to_string(x.cols()));
    }
    const int T = x.rows();
    if (T < 1000) {
        throw ContractError("darmois transform needs >= 1000 rows for a usable "
                            "conditional-CDF estimate, got " +
                            std::to_string(T));
    }
    if (!x.all_finite()) throw NumericError("darmois input contains a non-finite value");

    std::vector<double> x1(T), x2(T);
    for (int t = 0; t < T; ++t) {
        x1[t] = x(t, 0);
        x2[t] = x(t, 1);
    }
    const auto sd = x.col_std();
    for (int j = 0; j < 2; ++j) {
        if (!(sd[j] > 1e-12 * (1.0 + std::fabs(x.col_mean()[j])))) {
            throw NumericError("darmois input column " + std::to_string(j + 1) +
                               " is (nearly) constant");
        }
    }

    Tensor z(T, 2);

    // z1: marginal rank CDF, mapped into (0,1) by the T+1 denominator.
    {
        std::vector<int> order(T);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return x1[a] < x1[b]; });
        for (int r = 0; r < T; ++r) {
            z(order[r], 0) = static_cast<double>(r + 1) / static_cast<double>(T + 1);
        }
    }

    // z2: Nadaraya-Watson estimate of P(X2 <= x2(t) | X1 = x1(t)) with a
    // Gaussian kernel in x1 and Silverman's bandwidth.
    const double h = 1.06 * sd[0] * std::pow(static_cast<double>(T), -0.2);
    const double inv_2h2 = 1.0 / (2.0 * h * h);
    for (int t = 0; t < T; ++t) {
        double wsum = 0.0, wle = 0.0;
        const double c1 = x1[t];
        const double c2 = x2[t];
        for (int s = 0; s < T; ++s) {
            const double d1 = x1[s] - c1;
            const double w = std::exp(-d1 * d1 * inv_2h2);
            wsum += w;
            if (x2[s] <= c2) wle += w;
        }
        // wsum >= 1 (the s = t term), so this is well defined; the final
        // squeeze keeps the value strictly inside (0, 1).
        z(t, 1) = (wle / wsum) * static_cast<double>(T) / static_cast<double>(T + 1);
    }
    return z;
}

}  // namespace nlica
