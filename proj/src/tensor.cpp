#include "nlica/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlica {

Tensor::Tensor(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
        throw DimensionError("tensor dimensions must be positive, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    d_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Tensor Tensor::full(int rows, int cols, double v) {
    Tensor t(rows, cols);
    std::fill(t.d_.begin(), t.d_.end(), v);
    return t;
}

Tensor Tensor::identity(int n) {
    Tensor t(n, n);
    for (int i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.begin()->size());
    Tensor t(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) throw DimensionError("ragged initializer rows");
        int j = 0;
        for (double v : row) t(i, j++) = v;
        ++i;
    }
    return t;
}

Tensor Tensor::randn(Rng& rng, int rows, int cols, double sd) {
    Tensor t(rows, cols);
    for (auto& v : t.d_) v = sd * rng.normal();
    return t;
}

Tensor Tensor::rand_uniform(Rng& rng, int rows, int cols, double lo, double hi) {
    Tensor t(rows, cols);
    for (auto& v : t.d_) v = rng.uniform(lo, hi);
    return t;
}

Tensor Tensor::matmul(const Tensor& b) const {
    if (cols_ != b.rows_)
        throw DimensionError("matmul shape mismatch: " + std::to_string(rows_) + "x" +
                             std::to_string(cols_) + " * " + std::to_string(b.rows_) + "x" +
                             std::to_string(b.cols_));
    Tensor c(rows_, b.cols_);
    const int n = b.cols_;
    // i-k-j order: the inner loop runs over contiguous rows of b and c.
    for (int i = 0; i < rows_; ++i) {
        const double* arow = row(i);
        double* crow = c.row(i);
        for (int k = 0; k < cols_; ++k) {
            const double aik = arow[k];
            const double* brow = b.row(k);
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Tensor Tensor::transpose() const {
    Tensor t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Tensor& Tensor::operator+=(const Tensor& o) {
    if (!same_shape(o)) throw DimensionError("operator+=: shape mismatch");
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
    if (!same_shape(o)) throw DimensionError("operator-=: shape mismatch");
    for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
    return *this;
}

Tensor& Tensor::operator*=(double c) {
    for (auto& v : d_) v *= c;
    return *this;
}

Tensor Tensor::operator+(const Tensor& o) const {
    Tensor t = *this;
    t += o;
    return t;
}

Tensor Tensor::operator-(const Tensor& o) const {
    Tensor t = *this;
    t -= o;
    return t;
}

Tensor Tensor::hadamard(const Tensor& o) const {
    if (!same_shape(o)) throw DimensionError("hadamard: shape mismatch");
    Tensor t = *this;
    for (std::size_t i = 0; i < d_.size(); ++i) t.d_[i] *= o.d_[i];
    return t;
}

Tensor Tensor::scaled(double c) const {
    Tensor t = *this;
    t *= c;
    return t;
}

Tensor Tensor::add_row_broadcast(const Tensor& rowvec) const {
    if (rowvec.rows_ != 1 || rowvec.cols_ != cols_)
        throw DimensionError("add_row_broadcast: expected 1x" + std::to_string(cols_));
    Tensor t = *this;
    for (int i = 0; i < rows_; ++i) {
        double* r = t.row(i);
        for (int j = 0; j < cols_; ++j) r[j] += rowvec.d_[j];
    }
    return t;
}

double Tensor::sum() const { return std::accumulate(d_.begin(), d_.end(), 0.0); }

double Tensor::min() const { return *std::min_element(d_.begin(), d_.end()); }

double Tensor::max() const { return *std::max_element(d_.begin(), d_.end()); }

double Tensor::abs_max() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, std::fabs(v));
    return m;
}

bool Tensor::all_finite() const {
    for (double v : d_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor Tensor::col(int j) const {
    if (j < 0 || j >= cols_) throw DimensionError("col index out of range");
    Tensor t(rows_, 1);
    for (int i = 0; i < rows_; ++i) t(i, 0) = (*this)(i, j);
    return t;
}

Tensor Tensor::take_rows(const std::vector<int>& idx) const {
    if (idx.empty()) throw DimensionError("take_rows: empty index set");
    Tensor t(static_cast<int>(idx.size()), cols_);
    for (int i = 0; i < t.rows(); ++i) {
        const int src = idx[i];
        if (src < 0 || src >= rows_) throw DimensionError("take_rows: index out of range");
        std::copy(row(src), row(src) + cols_, t.row(i));
    }
    return t;
}

Tensor Tensor::hstack(const Tensor& right) const {
    if (rows_ != right.rows_) throw DimensionError("hstack: row count mismatch");
    Tensor t(rows_, cols_ + right.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::copy(row(i), row(i) + cols_, t.row(i));
        std::copy(right.row(i), right.row(i) + right.cols_, t.row(i) + cols_);
    }
    return t;
}

std::vector<double> Tensor::col_mean() const {
    std::vector<double> m(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* r = row(i);
        for (int j = 0; j < cols_; ++j) m[j] += r[j];
    }
    for (auto& v : m) v /= rows_;
    return m;
}

std::vector<double> Tensor::col_std(int ddof) const {
    const auto mean = col_mean();
    std::vector<double> s(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* r = row(i);
        for (int j = 0; j < cols_; ++j) {
            const double d = r[j] - mean[j];
            s[j] += d * d;
        }
    }
    const double denom = std::max(1, rows_ - ddof);
    for (auto& v : s) v = std::sqrt(v / denom);
    return s;
}

void Tensor::check_shape(int r, int c, const std::string& what) const {
    if (rows_ != r || cols_ != c)
        throw DimensionError(what + ": expected " + std::to_string(r) + "x" + std::to_string(c) +
                             ", got " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw DimensionError("pearson: length mismatch");
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) throw NumericError("pearson: zero-variance input");
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return v[i] < v[j]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(ranks(a), ranks(b));
}

}  // namespace nlica
