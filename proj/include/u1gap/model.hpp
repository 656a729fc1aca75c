#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "u1gap/hilbert.hpp"
#include "u1gap/lattice.hpp"
#include "u1gap/linalg.hpp"

namespace u1gap {

/// XXZ couplings, one entry per lattice bond (same order as Lattice::bonds()).
struct XXZCouplings {
    std::vector<double> jxy;
    std::vector<double> jz;

    /// Bounds recomputed from the data.
    double jxy_max() const;
    double jz_max() const;

    static XXZCouplings homogeneous(const Lattice& lat, double jxy, double jz);
    /// Uniform draws from [-jxy_max, jxy_max] and [-jz_max, jz_max].
    static XXZCouplings random(const Lattice& lat, double jxy_max, double jz_max,
                               std::uint64_t seed);
};

/// Nearest-neighbour Hubbard parameters. Interaction presets: on-site U n_up n_down
/// plus an optional nearest-neighbour density-density term V n_i n_j.
struct HubbardParams {
    std::vector<cplx> t;                     // per bond
    double U = 0.0;
    double V = 0.0;
    std::vector<std::array<double, 3>> B;    // per site; empty means zero field
    int range_limit = 1;                     // admissible interaction range (graph distance)

    int interaction_range() const { return V != 0.0 ? 1 : 0; }
    bool has_transverse_field() const;

    static HubbardParams homogeneous(const Lattice& lat, cplx t, double U, double V = 0.0);
};

/// Charge-transfer piece of a hamiltonian: amplitude * forward + h.c., where `forward`
/// moves one unit of U(1) charge from site j to site i (S_i^+ S_j^- or sum_s c_is^+ c_js).
struct TransferTerm {
    Site i;
    Site j;
    cplx amplitude;
    SparseOp forward;
};

/// A U(1)-symmetric hamiltonian restricted to one sector, with everything the twist needs.
struct SectorModel {
    SparseOp hamiltonian;
    std::vector<TransferTerm> transfers;
    /// charges(state, site): local U(1) charge (S^z_i for spins, n_i for fermions).
    Eigen::MatrixXd charges;
    /// max |amplitude| over transfers, recomputed from data.
    double transfer_max = 0.0;
    /// Exact norms of forward + forward^dagger and forward - forward^dagger on two sites.
    double pair_norm_sym = 0.0;
    double pair_norm_antisym = 0.0;
    /// Exact norm of a single transfer-pair correlation operator (S^+_m S^-_n, m != n).
    double correlation_pair_norm = 0.0;
};

/// H = sum_b J^XY_b (S_i^+S_j^- + S_i^-S_j^+) + J^Z_b S_i^z S_j^z on the sector basis.
SectorModel assemble_xxz(const Lattice& lat, const XXZCouplings& couplings,
                         const SpinSectorBasis& basis);

/// H = -sum_b sum_s (t c_is^+ c_js + h.c.) + U sum n_up n_down + V sum_b n_i n_j + sum_i B_i . S_i
/// with S_i^a = sum c^+ sigma^a c (Pauli normalization).
SectorModel assemble_hubbard(const Lattice& lat, const HubbardParams& params,
                             const FermionSectorBasis& basis);

/// Bond terms h_b = J^XY_b (S^+S^- + S^-S^+) + J^Z_b S^zS^z; they sum to the XXZ hamiltonian.
std::vector<SparseOp> local_terms(const Lattice& lat, const XXZCouplings& couplings,
                                  const SpinSectorBasis& basis);

/// 2 J^XY (S^xS^x + S^yS^y) written with S^x, S^y explicitly (full product basis only).
SparseOp xy_cartesian_form(const Lattice& lat, const XXZCouplings& couplings,
                           const SpinSectorBasis& full_basis);

/// Fermionic local spin operators in the Pauli normalization.
SparseOp fermion_spin_x(const FermionSectorBasis& basis, int site);
SparseOp fermion_spin_y(const FermionSectorBasis& basis, int site);
SparseOp fermion_spin_z(const FermionSectorBasis& basis, int site);

bool is_hermitian(const SparseOp& op, double tolerance = 1e-12);

}  // namespace u1gap
