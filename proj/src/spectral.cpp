#include "u1gap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace u1gap {

GroundProjector::GroundProjector(CMatrix vectors) : vectors_(std::move(vectors))
{
    if (vectors_.cols() == 0) {
        throw std::invalid_argument("ground projector needs rank >= 1");
    }
}

double row_sum_norm(const SparseOp& h)
{
    RVector sums = RVector::Zero(h.rows());
    for (Index k = 0; k < h.outerSize(); ++k) {
        for (SparseOp::InnerIterator it(h, k); it; ++it) {
            sums(it.row()) += std::abs(it.value());
        }
    }
    return sums.size() == 0 ? 0.0 : sums.maxCoeff();
}

EigenPairs lowest_eigenpairs(const SparseOp& h, Index k)
{
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("hamiltonian must be square");
    }
    if (hermiticity_defect(h) > 1e-12) {
        throw std::invalid_argument("hamiltonian is not hermitian");
    }
    k = std::min(k, h.rows());
    auto pairs = lowest_hermitian(h, k);
    for (Index j = 0; j < pairs.values.size(); ++j) {
        const double res = (h * pairs.vectors.col(j) - pairs.values(j) * pairs.vectors.col(j)).norm();
        if (res > 1e-8) {
            std::ostringstream msg;
            msg << "eigenpair " << j << " residual " << res << " exceeds 1e-8";
            throw ConvergenceError(msg.str());
        }
    }
    return pairs;
}

SpectralData detect_ground_sector(const std::vector<double>& ascending, double eps_deg,
                                  double gap_min)
{
    if (!std::is_sorted(ascending.begin(), ascending.end())) {
        throw std::invalid_argument("eigenvalues must be ascending");
    }
    if (ascending.empty()) {
        throw NoGapError("no uniform gap detected: empty spectrum");
    }
    std::size_t q = 1;
    while (q < ascending.size() && ascending[q] - ascending.front() <= eps_deg) {
        ++q;
    }
    if (q == ascending.size()) {
        throw NoGapError("no uniform gap detected: no eigenvalue above the ground group");
    }
    const double jump = ascending[q] - ascending[q - 1];
    if (jump < gap_min) {
        std::ostringstream msg;
        msg << "no uniform gap detected: jump " << jump << " after " << q
            << " ground eigenvalue(s) is below gap_min " << gap_min;
        throw NoGapError(msg.str());
    }
    SpectralData data;
    data.eigenvalues = ascending;
    data.ground_energies.assign(ascending.begin(), ascending.begin() + static_cast<long>(q));
    data.q = static_cast<int>(q);
    data.first_excited = ascending[q];
    data.gap = jump;
    data.spread = data.ground_energies.back() - data.ground_energies.front();
    data.mean_ground = std::accumulate(data.ground_energies.begin(), data.ground_energies.end(), 0.0) /
                       static_cast<double>(q);
    data.eps_deg = eps_deg;
    data.gap_min = gap_min;
    return data;
}

GroundSector analyze_ground_sector(const SparseOp& h, const SpectralOptions& options)
{
    const double eps = options.eps_deg.value_or(options.eps_deg_relative * row_sum_norm(h));
    if (h.rows() <= kDenseLimit) {
        const auto pairs = lowest_eigenpairs(h, h.rows());
        std::vector<double> eigs(pairs.values.data(), pairs.values.data() + pairs.values.size());
        auto data = detect_ground_sector(eigs, eps, options.gap_min);
        const auto keep = std::min<std::size_t>(eigs.size(), static_cast<std::size_t>(options.k_max));
        data.eigenvalues.resize(keep);
        return {data, ground_projector(pairs.vectors, data.q)};
    }
    std::optional<SpectralData> previous;
    for (Index k = options.k_initial;; k = std::min(2 * k, options.k_max)) {
        const auto pairs = lowest_eigenpairs(h, k);
        std::vector<double> eigs(pairs.values.data(), pairs.values.data() + pairs.values.size());
        std::optional<SpectralData> current;
        try {
            current = detect_ground_sector(eigs, eps, options.gap_min);
        } catch (const NoGapError&) {
            if (k >= options.k_max || k >= h.rows()) {
                throw;
            }
            continue;
        }
        const bool stable = previous && previous->q == current->q &&
                            std::abs(previous->first_excited - current->first_excited) <= 1e-9;
        if (stable || k >= options.k_max || k >= h.rows()) {
            return {*current, ground_projector(pairs.vectors, current->q)};
        }
        previous = current;
    }
}

GroundProjector ground_projector(const CMatrix& eigenvectors, Index q)
{
    if (q < 1 || q > eigenvectors.cols()) {
        throw std::invalid_argument("projector rank out of range");
    }
    return GroundProjector(eigenvectors.leftCols(q));
}

cplx ground_expectation(const SparseOp& a, const GroundProjector& p, Index q)
{
    if (p.rank() != q) {
        throw std::invalid_argument("projector rank does not match q");
    }
    if (a.rows() != p.dim() || a.cols() != p.dim()) {
        throw std::invalid_argument("operator does not act on the projector's sector");
    }
    const CMatrix av = a * p.vectors();
    return (p.vectors().adjoint() * av).trace() / static_cast<double>(q);
}

cplx ground_expectation(const CMatrix& a, const GroundProjector& p, Index q)
{
    if (p.rank() != q) {
        throw std::invalid_argument("projector rank does not match q");
    }
    return (p.vectors().adjoint() * a * p.vectors()).trace() / static_cast<double>(q);
}

}  // namespace u1gap
