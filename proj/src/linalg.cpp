#include "u1gap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/SparseLU>

namespace u1gap {

double max_abs_entry(const SparseOp& a)
{
    double m = 0.0;
    for (Index k = 0; k < a.outerSize(); ++k) {
        for (SparseOp::InnerIterator it(a, k); it; ++it) {
            m = std::max(m, std::abs(it.value()));
        }
    }
    return m;
}

double hermiticity_defect(const SparseOp& a)
{
    const SparseOp adj = a.adjoint();
    return max_abs_entry(SparseOp(a - adj));
}

SparseOp commutator(const SparseOp& a, const SparseOp& b)
{
    SparseOp c = a * b - b * a;
    c.prune(cplx(0.0, 0.0), 0.0);
    return c;
}

SparseOp identity_op(Index dim)
{
    SparseOp id(dim, dim);
    id.setIdentity();
    return id;
}

SparseOp from_triplets(Index rows, Index cols, const std::vector<Triplet>& triplets)
{
    SparseOp op(rows, cols);
    op.setFromTriplets(triplets.begin(), triplets.end());
    op.prune(cplx(0.0, 0.0), 0.0);
    op.makeCompressed();
    return op;
}

EigenPairs dense_lowest(const CMatrix& h, Index k)
{
    const Index n = h.rows();
    k = std::min(k, n);
    const CMatrix herm = 0.5 * (h + h.adjoint());
    if (herm.imag().cwiseAbs().maxCoeff() == 0.0) {
        // Real symmetric input: same spectrum at a quarter of the cost.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(herm.real());
        if (er.info() != Eigen::Success) {
            throw ConvergenceError("dense symmetric eigensolver failed");
        }
        return {er.eigenvalues().head(k), er.eigenvectors().leftCols(k).cast<cplx>()};
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("dense hermitian eigensolver failed");
    }
    return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

namespace {

CMatrix random_block(Index n, Index b, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss;
    CMatrix x(n, b);
    for (Index j = 0; j < b; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            x(i, j) = cplx(re, im);
        }
    }
    return x;
}

// Orthonormalizes the columns of x against q.leftCols(cols) and each other.
// Columns that lie (numerically) in the existing span are dropped.
CMatrix orthonormalize(const CMatrix& q, Index cols, const CMatrix& x)
{
    std::vector<CVector> kept;
    for (Index j = 0; j < x.cols(); ++j) {
        CVector v = x.col(j);
        const double norm0 = v.norm();
        if (norm0 == 0.0) {
            continue;
        }
        for (int pass = 0; pass < 2; ++pass) {
            if (cols > 0) {
                v -= q.leftCols(cols) * (q.leftCols(cols).adjoint() * v);
            }
            for (const auto& u : kept) {
                v -= u * u.dot(v);
            }
        }
        const double nv = v.norm();
        if (nv > 1e-10 * norm0) {
            kept.emplace_back(v / nv);
        }
    }
    CMatrix out(x.rows(), static_cast<Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
        out.col(static_cast<Index>(j)) = kept[j];
    }
    return out;
}

}  // namespace

EigenPairs block_lanczos_lowest(Index dim, const BlockApply& apply, Index k,
                                const LanczosOptions& options)
{
    if (dim <= 0) {
        return {};
    }
    k = std::clamp<Index>(k, 1, dim);
    const Index block = std::clamp<Index>(options.block, 1, dim);
    const Index max_basis = std::min(dim, std::max(options.max_basis, 2 * k + 2 * block));
    std::mt19937_64 rng(options.seed);

    CMatrix q(dim, max_basis);
    CMatrix hq(dim, max_basis);
    CMatrix t = CMatrix::Zero(max_basis, max_basis);
    Index cols = 0;
    int restarts = 0;
    CMatrix x = orthonormalize(q, 0, random_block(dim, block, rng));

    while (true) {
        if (x.cols() == 0) {
            // Krylov space became invariant; continue with fresh random directions.
            x = orthonormalize(q, cols, random_block(dim, block, rng));
        }
        const Index nb = std::min(x.cols(), max_basis - cols);
        if (nb > 0) {
            const CMatrix xb = x.leftCols(nb);
            const CMatrix w = apply(xb);
            q.middleCols(cols, nb) = xb;
            hq.middleCols(cols, nb) = w;
            t.block(0, cols, cols + nb, nb) = q.leftCols(cols + nb).adjoint() * w;
            t.block(cols, 0, nb, cols) = t.block(0, cols, cols, nb).adjoint();
            cols += nb;
        }

        if (cols >= std::min(dim, k + block) || cols == max_basis) {
            const CMatrix tm = 0.5 * (t.topLeftCorner(cols, cols) +
                                      CMatrix(t.topLeftCorner(cols, cols).adjoint()));
            Eigen::SelfAdjointEigenSolver<CMatrix> es(tm);
            const Index kk = std::min(k, cols);
            const CMatrix y = es.eigenvectors().leftCols(kk);
            const RVector theta = es.eigenvalues().head(kk);
            const CMatrix v = q.leftCols(cols) * y;
            const CMatrix r = hq.leftCols(cols) * y - v * theta.asDiagonal();
            bool converged = kk == k;
            for (Index j = 0; j < kk && converged; ++j) {
                converged = r.col(j).norm() <= options.tolerance;
            }
            if (converged || cols == dim) {
                return {theta, v};
            }
            if (cols == max_basis) {
                if (++restarts > 200) {
                    throw ConvergenceError("block Lanczos did not converge");
                }
                // Thick restart on the lowest Ritz vectors.
                const Index keep = std::min(cols - block, std::max(2 * k, k + block));
                const CMatrix yk = es.eigenvectors().leftCols(keep);
                const CMatrix vk = q.leftCols(cols) * yk;
                const CMatrix hvk = hq.leftCols(cols) * yk;
                const CMatrix resid = hvk.leftCols(std::min(keep, block)) -
                                      vk.leftCols(std::min(keep, block)) *
                                          es.eigenvalues().head(std::min(keep, block)).asDiagonal();
                q.leftCols(keep) = vk;
                hq.leftCols(keep) = hvk;
                t.setZero();
                t.topLeftCorner(keep, keep) = es.eigenvalues().head(keep).cast<cplx>().asDiagonal();
                cols = keep;
                x = orthonormalize(q, cols, resid);
                continue;
            }
        }
        x = orthonormalize(q, cols, hq.middleCols(cols - nb, nb));
    }
}

EigenPairs lowest_hermitian(const SparseOp& h, Index k, const LanczosOptions& options)
{
    if (h.rows() <= kDenseLimit) {
        return dense_lowest(CMatrix(h), k);
    }
    return block_lanczos_lowest(
        h.rows(), [&h](const CMatrix& x) { return CMatrix(h * x); }, k, options);
}

double hermitian_norm(const SparseOp& h)
{
    if (h.rows() == 0) {
        return 0.0;
    }
    if (h.rows() <= kDenseLimit) {
        const CMatrix d = CMatrix(h);
        const CMatrix herm = 0.5 * (d + d.adjoint());
        if (herm.imag().cwiseAbs().maxCoeff() == 0.0) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(herm.real(), Eigen::EigenvaluesOnly);
            return er.eigenvalues().cwiseAbs().maxCoeff();
        }
        if (herm.real().cwiseAbs().maxCoeff() == 0.0) {
            // herm = i A with A real antisymmetric, so herm^2 = A^T A.
            const Eigen::MatrixXd a = herm.imag();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(a.transpose() * a, Eigen::EigenvaluesOnly);
            return std::sqrt(std::max(0.0, er.eigenvalues().maxCoeff()));
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        return std::max(std::abs(es.eigenvalues()(0)),
                        std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
    }
    if (max_abs_entry(h) == 0.0) {
        return 0.0;
    }
    LanczosOptions opt;
    opt.block = 2;
    opt.tolerance = 1e-10 * std::max(1.0, max_abs_entry(h));
    const auto lo = block_lanczos_lowest(
        h.rows(), [&h](const CMatrix& x) { return CMatrix(h * x); }, 1, opt);
    const auto hi = block_lanczos_lowest(
        h.rows(), [&h](const CMatrix& x) { return CMatrix(-(h * x)); }, 1, opt);
    return std::max(std::abs(lo.values(0)), std::abs(hi.values(0)));
}

double operator_norm(const CMatrix& a)
{
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

double operator_norm(const SparseOp& a)
{
    if (a.rows() <= kDenseLimit && a.cols() <= kDenseLimit) {
        return operator_norm(CMatrix(a));
    }
    if (max_abs_entry(a) == 0.0) {
        return 0.0;
    }
    // Largest eigenvalue of A^dagger A, certified by the Ritz residual.
    const SparseOp adj = a.adjoint();
    LanczosOptions opt;
    opt.block = 2;
    const double scale = max_abs_entry(a);
    opt.tolerance = 1e-10 * scale * scale * static_cast<double>(a.cols());
    const auto top = block_lanczos_lowest(
        a.cols(), [&](const CMatrix& x) { return CMatrix(-(adj * (a * x))); }, 1, opt);
    return std::sqrt(std::max(0.0, -top.values(0)));
}

double smallest_singular_value(const CMatrix& a)
{
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<CMatrix> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double smallest_singular_value(const SparseOp& a)
{
    if (a.rows() <= kDenseLimit) {
        return smallest_singular_value(CMatrix(a));
    }
    Eigen::SparseLU<SparseOp> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        return 0.0;
    }
    // Largest eigenvalue of (A^dagger A)^{-1} = 1 / sigma_min^2.
    LanczosOptions opt;
    opt.block = 2;
    opt.tolerance = 1e-12;
    const auto top = block_lanczos_lowest(
        a.cols(),
        [&](const CMatrix& x) {
            const CMatrix y = lu.adjoint().solve(x);
            return CMatrix(-lu.solve(y));
        },
        1, opt);
    return 1.0 / std::sqrt(-top.values(0));
}

double low_rank_product_norm(const CMatrix& a, const CMatrix& b)
{
    const CMatrix ga = a.adjoint() * a;
    const CMatrix gb = b.adjoint() * b;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (ga + CMatrix(ga.adjoint())));
    const RVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const CMatrix root = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
    const CMatrix m = root * gb * root;
    Eigen::SelfAdjointEigenSolver<CMatrix> em(0.5 * (m + CMatrix(m.adjoint())),
                                              Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, em.eigenvalues().maxCoeff()));
}

}  // namespace u1gap
