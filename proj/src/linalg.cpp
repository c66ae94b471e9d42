#include "nlica/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlica {

Lu lu_factor(const Tensor& a) {
    if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix must be square");
    const int n = a.rows();
    Lu f{a, std::vector<int>(n), 1};
    Tensor& m = f.lu;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(p, k))) p = i;
        f.piv[k] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            f.sign = -f.sign;
        }
        const double pivot = m(k, k);
        if (pivot == 0.0) continue;  // singular; detected by det/solve
        for (int i = k + 1; i < n; ++i) {
            m(i, k) /= pivot;
            const double lik = m(i, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= lik * m(k, j);
        }
    }
    return f;
}

double lu_log_abs_det(const Lu& f) {
    double s = 0.0;
    for (int i = 0; i < f.lu.rows(); ++i) {
        const double p = std::fabs(f.lu(i, i));
        if (p == 0.0) throw NumericError("log|det|: singular matrix");
        s += std::log(p);
    }
    return s;
}

double lu_det(const Lu& f) {
    double d = f.sign;
    for (int i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

Tensor lu_solve(const Lu& f, const Tensor& b) {
    const int n = f.lu.rows();
    if (b.rows() != n) throw DimensionError("lu_solve: rhs row count mismatch");
    for (int i = 0; i < n; ++i)
        if (f.lu(i, i) == 0.0) throw NumericError("lu_solve: singular matrix");
    Tensor x = b;
    const int k = b.cols();
    for (int c = 0; c < n; ++c)
        if (f.piv[c] != c)
            for (int j = 0; j < k; ++j) std::swap(x(c, j), x(f.piv[c], j));
    // forward: L y = Pb
    for (int i = 1; i < n; ++i)
        for (int c = 0; c < i; ++c) {
            const double l = f.lu(i, c);
            if (l == 0.0) continue;
            for (int j = 0; j < k; ++j) x(i, j) -= l * x(c, j);
        }
    // back: U x = y
    for (int i = n - 1; i >= 0; --i) {
        for (int c = i + 1; c < n; ++c) {
            const double u = f.lu(i, c);
            if (u == 0.0) continue;
            for (int j = 0; j < k; ++j) x(i, j) -= u * x(c, j);
        }
        const double d = f.lu(i, i);
        for (int j = 0; j < k; ++j) x(i, j) /= d;
    }
    return x;
}

Tensor inverse(const Tensor& a) { return lu_solve(lu_factor(a), Tensor::identity(a.rows())); }

void sym_eig(const Tensor& a, Tensor& vectors, std::vector<double>& values) {
    if (a.rows() != a.cols()) throw DimensionError("sym_eig: matrix must be square");
    const int n = a.rows();
    Tensor m = a;
    Tensor v = Tensor::identity(n);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-26 * std::max(1.0, m.abs_max() * m.abs_max())) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = 0.5 * (m(q, q) - m(p, p)) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - s * miq;
                    m(i, q) = s * mip + c * miq;
                }
                for (int i = 0; i < n; ++i) {
                    const double mpi = m(p, i), mqi = m(q, i);
                    m(p, i) = c * mpi - s * mqi;
                    m(q, i) = s * mpi + c * mqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    // order descending
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return m(i, i) > m(j, j); });
    values.resize(n);
    vectors = Tensor(n, n);
    for (int k = 0; k < n; ++k) {
        values[k] = m(order[k], order[k]);
        for (int i = 0; i < n; ++i) vectors(i, k) = v(i, order[k]);
    }
}

std::vector<double> singular_values(const Tensor& a) {
    const Tensor ata = a.transpose().matmul(a);
    Tensor vecs;
    std::vector<double> vals;
    sym_eig(ata, vecs, vals);
    for (auto& v : vals) v = std::sqrt(std::max(0.0, v));
    return vals;
}

double condition_number(const Tensor& a) {
    const auto sv = singular_values(a);
    const double lo = sv.back();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / lo;
}

Tensor random_orthogonal(Rng& rng, int n) {
    Tensor a = Tensor::randn(rng, n, n);
    // modified Gram-Schmidt on columns, one re-orthogonalization pass
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += a(i, j) * a(i, k);
                for (int i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
            }
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw NumericError("random_orthogonal: degenerate draw");
        for (int i = 0; i < n; ++i) a(i, j) /= norm;
    }
    return a;
}

Tensor sym_inv_sqrt(const Tensor& a) {
    Tensor vecs;
    std::vector<double> vals;
    sym_eig(a, vecs, vals);
    const int n = a.rows();
    Tensor out(n, n);
    for (int k = 0; k < n; ++k) {
        if (vals[k] <= 0.0) throw NumericError("sym_inv_sqrt: matrix not positive definite");
        const double w = 1.0 / std::sqrt(vals[k]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) += w * vecs(i, k) * vecs(j, k);
    }
    return out;
}

}  // namespace nlica
