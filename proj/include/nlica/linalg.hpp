// Small dense linear algebra: LU with partial pivoting, cyclic Jacobi
// eigensolver, and helpers built on them. Everything here runs on
// matrices of at most a few dozen rows.
#pragma once

#include <vector>

#include "nlica/tensor.hpp"

namespace nlica {

struct Lu {
    Tensor lu;              // packed L (unit diagonal) and U
    std::vector<int> piv;   // row swaps applied at step k
    int sign = 1;           // permutation parity
};

Lu lu_factor(const Tensor& a);

// log |det A| from a factorization; NumericError if a pivot is exactly zero.
double lu_log_abs_det(const Lu& f);
double lu_det(const Lu& f);

// Solve A X = B for X (B is n x k).
Tensor lu_solve(const Lu& f, const Tensor& b);

Tensor inverse(const Tensor& a);

// Symmetric eigendecomposition, eigenvalues descending. a must be symmetric.
void sym_eig(const Tensor& a, Tensor& vectors /* columns */, std::vector<double>& values);

// Singular values of a (descending), via eigenvalues of A^T A.
std::vector<double> singular_values(const Tensor& a);

// sigma_max / sigma_min; infinity for a singular matrix.
double condition_number(const Tensor& a);

// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the
// R diagonal signs fixed.
Tensor random_orthogonal(Rng& rng, int n);

// A^{-1/2} for a symmetric positive definite matrix.
Tensor sym_inv_sqrt(const Tensor& a);

}  // namespace nlica
