#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "u1gap/linalg.hpp"

namespace u1gap {

/// Spin-S configurations on `sites` sites with fixed total S^z (or all of them).
/// Spin quantum numbers are stored doubled (two_s = 2S, two_m = 2M) so that they are integral.
/// Local state k = 0..2S carries m = S - k; configurations are ordered lexicographically
/// in (k_0, k_1, ...), so the all-up state comes first.
class SpinSectorBasis {
public:
    SpinSectorBasis(int two_s, int sites, int two_m);
    /// Unconstrained product basis.
    static SpinSectorBasis full(int two_s, int sites);

    int two_s() const { return two_s_; }
    double spin() const { return 0.5 * two_s_; }
    int sites() const { return sites_; }
    /// nullopt for the unconstrained basis.
    std::optional<int> two_m() const { return two_m_; }
    Index dim() const { return static_cast<Index>(keys_.size()); }

    /// Local index k of `site` in basis state `state`.
    int local(Index state, int site) const;
    /// S^z eigenvalue of `site` in basis state `state`.
    double m(Index state, int site) const { return spin() - local(state, site); }
    /// Total 2 S^z of a basis state.
    int two_total_m(Index state) const;

    std::uint64_t key(Index state) const { return keys_[static_cast<std::size_t>(state)]; }
    std::optional<Index> index_of(std::uint64_t key) const;
    std::uint64_t stride(int site) const { return strides_[static_cast<std::size_t>(site)]; }

private:
    SpinSectorBasis(int two_s, int sites, std::optional<int> two_m);

    int two_s_;
    int sites_;
    std::optional<int> two_m_;
    std::vector<std::uint64_t> strides_;
    std::vector<std::uint64_t> keys_;  // ascending
};

SpinSectorBasis enumerate_spin_sector(double S, int sites, double M);

enum class SpinOp { Plus, Minus, Z };

/// Factor of an operator product acting on one site.
struct SpinFactor {
    int site;
    SpinOp op;
};

/// Product O_1 O_2 ... O_k (rightmost acts first) mapping `src` into `dst`.
/// Throws when `dst` is not the sector reached from `src`.
SparseOp spin_product(const SpinSectorBasis& src, const SpinSectorBasis& dst,
                      std::span<const SpinFactor> factors);

/// Single-site S^+, S^- or S^z. Ladder operators need the neighbouring sector as `dst`.
SparseOp embed_spin_operator(const SpinSectorBasis& src, const SpinSectorBasis& dst, int site,
                             SpinOp op);
SparseOp spin_z(const SpinSectorBasis& basis, int site);
/// S_i^+ S_j^- (sector preserving).
SparseOp spin_flip(const SpinSectorBasis& basis, int i, int j);
/// Total S^z (diagonal).
SparseOp total_spin_z(const SpinSectorBasis& basis);

/// Single-site spin matrix in the local basis (m = S, S-1, ..., -S).
CMatrix local_spin_matrix(int two_s, SpinOp op);

/// Exact norms of the two-site operators S_i^+S_j^- +/- S_i^-S_j^+ and S_i^+S_j^-.
struct SpinPairNorms {
    double symmetric;      // ||S+S- + S-S+||
    double antisymmetric;  // ||S+S- - S-S+||
    double flip;           // ||S+S-||
    double zz;             // ||Sz Sz|| = S^2
};
SpinPairNorms spin_pair_norms(int two_s);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Spinful fermion occupation basis over 2*sites modes, mode(site, sigma) = 2*site + sigma
/// with sigma = 0 for spin up and 1 for spin down. Occupations are bit `mode` of the
/// state mask; states are ordered lexicographically in (n_0, n_1, ...), empty modes first.
class FermionSectorBasis {
public:
    /// Fixed particle number; optional fixed 2S^z = N_up - N_down.
    FermionSectorBasis(int sites, int particles, std::optional<int> two_sz = std::nullopt);
    /// Whole Fock space.
    static FermionSectorBasis fock(int sites);

    int sites() const { return sites_; }
    int modes() const { return 2 * sites_; }
    std::optional<int> particles() const { return particles_; }
    std::optional<int> two_sz() const { return two_sz_; }
    Index dim() const { return static_cast<Index>(masks_.size()); }

    std::uint64_t mask(Index state) const { return masks_[static_cast<std::size_t>(state)]; }
    std::optional<Index> index_of(std::uint64_t mask) const;
    bool occupied(Index state, int mode) const { return (mask(state) >> mode) & 1U; }

    static int mode(int site, int sigma) { return 2 * site + sigma; }

private:
    FermionSectorBasis(int sites, std::optional<int> particles, std::optional<int> two_sz);

    int sites_;
    std::optional<int> particles_;
    std::optional<int> two_sz_;
    std::vector<std::uint64_t> masks_;
    std::unordered_map<std::uint64_t, Index> lookup_;
};

enum class FermionOp { Create, Annihilate, Number };

struct FermionFactor {
    int mode;
    FermionOp op;
};

/// Product of fermion operators (rightmost acts first) with Jordan-Wigner signs
/// (-1)^{occupied modes below `mode`}.
SparseOp fermion_product(const FermionSectorBasis& src, const FermionSectorBasis& dst,
                         std::span<const FermionFactor> factors);

SparseOp embed_fermion_operator(const FermionSectorBasis& src, const FermionSectorBasis& dst,
                                int mode, FermionOp op);
SparseOp fermion_number(const FermionSectorBasis& basis, int mode);
/// c_a^dagger c_b (number preserving).
SparseOp fermion_hop(const FermionSectorBasis& basis, int a, int b);
SparseOp total_number(const FermionSectorBasis& basis);
/// Total S^z = sum_i (n_{i,up} - n_{i,down}) in the Pauli normalization.
SparseOp total_fermion_sz(const FermionSectorBasis& basis);

}  // namespace u1gap
