#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "u1gap/linalg.hpp"

namespace u1gap {

/// No admissible split between a (quasi)degenerate ground group and the rest.
struct NoGapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Low-lying spectrum split into the ground group E_{0,1..q} and the rest.
struct SpectralData {
    std::vector<double> eigenvalues;      // ascending, as computed
    std::vector<double> ground_energies;  // E_{0,mu}
    int q = 0;
    double gap = 0.0;          // Delta E = E_1 - max_mu E_{0,mu}
    double spread = 0.0;       // Delta calE = max |E_{0,mu} - E_{0,mu'}|
    double mean_ground = 0.0;  // bar E_0
    double first_excited = 0.0;
    double eps_deg = 0.0;
    double gap_min = 0.0;

    double min_ground() const { return ground_energies.front(); }
    double max_ground() const { return ground_energies.back(); }
};

/// Orthogonal projector onto the ground group, stored as orthonormal columns.
class GroundProjector {
public:
    explicit GroundProjector(CMatrix vectors);

    const CMatrix& vectors() const { return vectors_; }
    Index rank() const { return vectors_.cols(); }
    Index dim() const { return vectors_.rows(); }
    CMatrix dense() const { return vectors_ * vectors_.adjoint(); }

private:
    CMatrix vectors_;
};

struct SpectralOptions {
    /// Absolute degeneracy tolerance; default 1e-6 times the hamiltonian's row-sum norm.
    std::optional<double> eps_deg;
    double eps_deg_relative = 1e-6;
    double gap_min = 1e-3;
    Index k_initial = 4;
    Index k_max = 32;
};

/// k lowest eigenpairs of a hermitian operator. Dense below kDenseLimit, block Lanczos
/// with full reorthogonalization above; every residual is checked against 1e-8.
EigenPairs lowest_eigenpairs(const SparseOp& h, Index k);

/// q = size of the maximal prefix with spread <= eps_deg, accepted only if the next
/// eigenvalue lies at least gap_min above it.
SpectralData detect_ground_sector(const std::vector<double>& ascending, double eps_deg,
                                  double gap_min);

struct GroundSector {
    SpectralData spectral;
    GroundProjector projector;
};

/// Adaptive eigen-solve plus ground-group detection (k doubled until the split stabilizes).
GroundSector analyze_ground_sector(const SparseOp& h, const SpectralOptions& options = {});

GroundProjector ground_projector(const CMatrix& eigenvectors, Index q);

/// Tr(A P) / q.
cplx ground_expectation(const SparseOp& a, const GroundProjector& p, Index q);
cplx ground_expectation(const CMatrix& a, const GroundProjector& p, Index q);

/// Row-sum (infinity) norm, an upper bound on the spectral norm.
double row_sum_norm(const SparseOp& h);

}  // namespace u1gap
