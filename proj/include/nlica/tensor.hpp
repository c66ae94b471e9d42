// Dense row-major 2-D tensor of doubles. The one numeric carrier used
// everywhere: observation matrices are (T rows x d cols).
#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "nlica/errors.hpp"
#include "nlica/rng.hpp"

namespace nlica {

class Tensor {
public:
    Tensor() = default;
    Tensor(int rows, int cols);  // zero-filled

    static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }
    static Tensor full(int rows, int cols, double v);
    static Tensor identity(int n);
    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor randn(Rng& rng, int rows, int cols, double sd = 1.0);
    static Tensor rand_uniform(Rng& rng, int rows, int cols, double lo, double hi);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return d_.empty(); }
    std::size_t size() const { return d_.size(); }
    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }
    double* row(int i) { return d_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * cols_; }

    Tensor matmul(const Tensor& b) const;
    Tensor transpose() const;

    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    Tensor& operator*=(double c);
    Tensor operator+(const Tensor& o) const;
    Tensor operator-(const Tensor& o) const;
    Tensor hadamard(const Tensor& o) const;
    Tensor scaled(double c) const;

    // this (n x c) + rowvec (1 x c), broadcast over rows.
    Tensor add_row_broadcast(const Tensor& rowvec) const;

    template <class F>
    Tensor map(F f) const {
        Tensor out = *this;
        for (auto& v : out.d_) v = f(v);
        return out;
    }

    double sum() const;
    double min() const;
    double max() const;
    double abs_max() const;
    bool all_finite() const;

    Tensor col(int j) const;                           // n x 1 copy
    Tensor take_rows(const std::vector<int>& idx) const;
    Tensor hstack(const Tensor& right) const;

    std::vector<double> col_mean() const;
    std::vector<double> col_std(int ddof = 1) const;
    std::vector<double> to_vector() const { return d_; }

    void check_shape(int r, int c, const std::string& what) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

// Pearson correlation of two equal-length columns (n x 1 or plain vectors).
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Average ranks (ties averaged), 1-based.
std::vector<double> ranks(const std::vector<double>& v);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace nlica
