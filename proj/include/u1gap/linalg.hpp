#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace u1gap {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseOp = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

/// Sector dimension up to which exact dense factorizations are used.
inline constexpr Index kDenseLimit = 2000;

/// Thrown when an iterative solver exhausts its budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double max_abs_entry(const SparseOp& a);

/// max |A - A^dagger| over entries.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a)
{
    return max_abs_entry(a - a.adjoint());
}

double hermiticity_defect(const SparseOp& a);

SparseOp commutator(const SparseOp& a, const SparseOp& b);

SparseOp identity_op(Index dim);

/// Builds a sparse operator from triplets, summing duplicates and dropping exact zeros.
SparseOp from_triplets(Index rows, Index cols, const std::vector<Triplet>& triplets);

struct EigenPairs {
    RVector values;   // ascending
    CMatrix vectors;  // columns
};

/// k lowest eigenpairs of a dense hermitian matrix (k clamped to the dimension).
EigenPairs dense_lowest(const CMatrix& h, Index k);

struct LanczosOptions {
    Index block = 4;
    Index max_basis = 900;
    double tolerance = 1e-9;  // absolute residual ||Hv - lv||
    std::uint64_t seed = 0x5eed1234ULL;
};

/// Applies a hermitian operator to a block of column vectors.
using BlockApply = std::function<CMatrix(const CMatrix&)>;

/// Block Lanczos with full reorthogonalization and Rayleigh-Ritz extraction.
/// Returns the k lowest Ritz pairs once every residual is below the tolerance.
EigenPairs block_lanczos_lowest(Index dim, const BlockApply& apply, Index k,
                                const LanczosOptions& options = {});

/// Hermitian k-lowest eigenpairs: dense below kDenseLimit, block Lanczos above.
EigenPairs lowest_hermitian(const SparseOp& h, Index k, const LanczosOptions& options = {});

/// Exact 2-norm of a hermitian operator (max |eigenvalue|).
double hermitian_norm(const SparseOp& h);

/// Largest singular value.
double operator_norm(const CMatrix& a);
double operator_norm(const SparseOp& a);

/// Smallest singular value of a square matrix.
double smallest_singular_value(const CMatrix& a);
double smallest_singular_value(const SparseOp& a);

/// Norm of the rank-deficient product A B^dagger via the small Gram matrices.
double low_rank_product_norm(const CMatrix& a, const CMatrix& b);

}  // namespace u1gap
