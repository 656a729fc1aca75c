#include "u1gap/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace u1gap {

double XXZCouplings::jxy_max() const
{
    double m = 0.0;
    for (const double j : jxy) {
        m = std::max(m, std::abs(j));
    }
    return m;
}

double XXZCouplings::jz_max() const
{
    double m = 0.0;
    for (const double j : jz) {
        m = std::max(m, std::abs(j));
    }
    return m;
}

XXZCouplings XXZCouplings::homogeneous(const Lattice& lat, double jxy, double jz)
{
    const auto nb = lat.bonds().size();
    return {std::vector<double>(nb, jxy), std::vector<double>(nb, jz)};
}

XXZCouplings XXZCouplings::random(const Lattice& lat, double jxy_max, double jz_max,
                                  std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    XXZCouplings c;
    for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
        c.jxy.push_back(jxy_max * unit(rng));
        c.jz.push_back(jz_max * unit(rng));
    }
    return c;
}

bool HubbardParams::has_transverse_field() const
{
    return std::any_of(B.begin(), B.end(),
                       [](const auto& b) { return b[0] != 0.0 || b[1] != 0.0; });
}

HubbardParams HubbardParams::homogeneous(const Lattice& lat, cplx t, double U, double V)
{
    HubbardParams p;
    p.t.assign(lat.bonds().size(), t);
    p.U = U;
    p.V = V;
    return p;
}

bool is_hermitian(const SparseOp& op, double tolerance)
{
    return op.rows() == op.cols() && hermiticity_defect(op) <= tolerance;
}

namespace {

void check_couplings(const Lattice& lat, const XXZCouplings& c)
{
    if (c.jxy.size() != lat.bonds().size() || c.jz.size() != lat.bonds().size()) {
        throw std::invalid_argument("missing coupling: expected one J^XY and J^Z per bond");
    }
}

}  // namespace

std::vector<SparseOp> local_terms(const Lattice& lat, const XXZCouplings& couplings,
                                  const SpinSectorBasis& basis)
{
    check_couplings(lat, couplings);
    if (basis.sites() != lat.num_sites()) {
        throw std::invalid_argument("basis and lattice sizes differ");
    }
    std::vector<SparseOp> terms;
    terms.reserve(lat.bonds().size());
    for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
        const auto [i, j] = lat.bonds()[b];
        const SparseOp pm = spin_flip(basis, i, j);
        const SparseOp mp = spin_flip(basis, j, i);
        const SparseOp zz = spin_z(basis, i) * spin_z(basis, j);
        terms.emplace_back(couplings.jxy[b] * (pm + mp) + couplings.jz[b] * zz);
    }
    return terms;
}

SectorModel assemble_xxz(const Lattice& lat, const XXZCouplings& couplings,
                         const SpinSectorBasis& basis)
{
    check_couplings(lat, couplings);
    if (basis.sites() != lat.num_sites()) {
        throw std::invalid_argument("basis and lattice sizes differ");
    }
    SectorModel model;
    model.hamiltonian = SparseOp(basis.dim(), basis.dim());
    for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
        const auto [i, j] = lat.bonds()[b];
        const SparseOp pm = spin_flip(basis, i, j);
        const SparseOp mp = spin_flip(basis, j, i);
        const SparseOp zz = spin_z(basis, i) * spin_z(basis, j);
        model.hamiltonian += couplings.jxy[b] * (pm + mp) + couplings.jz[b] * zz;
        if (couplings.jxy[b] != 0.0) {
            model.transfers.push_back({i, j, cplx(couplings.jxy[b], 0.0), pm});
        }
    }
    model.hamiltonian.prune(cplx(0.0, 0.0), 0.0);
    model.hamiltonian.makeCompressed();
    model.charges.resize(basis.dim(), basis.sites());
    for (Index s = 0; s < basis.dim(); ++s) {
        for (int i = 0; i < basis.sites(); ++i) {
            model.charges(s, i) = basis.m(s, i);
        }
    }
    model.transfer_max = couplings.jxy_max();
    const auto norms = spin_pair_norms(basis.two_s());
    model.pair_norm_sym = norms.symmetric;
    model.pair_norm_antisym = norms.antisymmetric;
    model.correlation_pair_norm = norms.flip;
    return model;
}

SparseOp fermion_spin_x(const FermionSectorBasis& basis, int site)
{
    const int up = FermionSectorBasis::mode(site, 0);
    const int dn = FermionSectorBasis::mode(site, 1);
    return fermion_hop(basis, up, dn) + fermion_hop(basis, dn, up);
}

SparseOp fermion_spin_y(const FermionSectorBasis& basis, int site)
{
    const int up = FermionSectorBasis::mode(site, 0);
    const int dn = FermionSectorBasis::mode(site, 1);
    const cplx i(0.0, 1.0);
    return SparseOp(-i * fermion_hop(basis, up, dn) + i * fermion_hop(basis, dn, up));
}

SparseOp fermion_spin_z(const FermionSectorBasis& basis, int site)
{
    return fermion_number(basis, FermionSectorBasis::mode(site, 0)) -
           fermion_number(basis, FermionSectorBasis::mode(site, 1));
}

namespace {

SparseOp site_density(const FermionSectorBasis& basis, int site)
{
    return fermion_number(basis, FermionSectorBasis::mode(site, 0)) +
           fermion_number(basis, FermionSectorBasis::mode(site, 1));
}

SparseOp spin_summed_hop(const FermionSectorBasis& basis, int i, int j)
{
    return fermion_hop(basis, FermionSectorBasis::mode(i, 0), FermionSectorBasis::mode(j, 0)) +
           fermion_hop(basis, FermionSectorBasis::mode(i, 1), FermionSectorBasis::mode(j, 1));
}

}  // namespace

SectorModel assemble_hubbard(const Lattice& lat, const HubbardParams& params,
                             const FermionSectorBasis& basis)
{
    if (params.t.size() != lat.bonds().size()) {
        throw std::invalid_argument("missing hopping amplitude: expected one t per bond");
    }
    if (!params.B.empty() && params.B.size() != static_cast<std::size_t>(lat.num_sites())) {
        throw std::invalid_argument("magnetic field must be given for every site");
    }
    if (params.interaction_range() > params.range_limit) {
        throw std::invalid_argument("interaction range exceeds the configured radius");
    }
    if (basis.sites() != lat.num_sites()) {
        throw std::invalid_argument("basis and lattice sizes differ");
    }
    SectorModel model;
    model.hamiltonian = SparseOp(basis.dim(), basis.dim());
    for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
        const auto [i, j] = lat.bonds()[b];
        const cplx t = params.t[b];
        const SparseOp fwd = spin_summed_hop(basis, i, j);
        const SparseOp bwd = spin_summed_hop(basis, j, i);
        model.hamiltonian += SparseOp(-t * fwd - std::conj(t) * bwd);
        if (t != cplx(0.0, 0.0)) {
            model.transfers.push_back({i, j, -t, fwd});
        }
        if (params.V != 0.0) {
            model.hamiltonian += SparseOp(params.V * (site_density(basis, i) * site_density(basis, j)));
        }
    }
    for (int i = 0; i < lat.num_sites(); ++i) {
        if (params.U != 0.0) {
            model.hamiltonian +=
                SparseOp(params.U * (fermion_number(basis, FermionSectorBasis::mode(i, 0)) *
                                     fermion_number(basis, FermionSectorBasis::mode(i, 1))));
        }
        if (!params.B.empty()) {
            const auto& f = params.B[static_cast<std::size_t>(i)];
            if (f[0] != 0.0) {
                model.hamiltonian += SparseOp(f[0] * fermion_spin_x(basis, i));
            }
            if (f[1] != 0.0) {
                model.hamiltonian += SparseOp(f[1] * fermion_spin_y(basis, i));
            }
            if (f[2] != 0.0) {
                model.hamiltonian += SparseOp(f[2] * fermion_spin_z(basis, i));
            }
        }
    }
    model.hamiltonian.prune(cplx(0.0, 0.0), 0.0);
    model.hamiltonian.makeCompressed();
    model.charges.resize(basis.dim(), basis.sites());
    for (Index s = 0; s < basis.dim(); ++s) {
        for (int i = 0; i < basis.sites(); ++i) {
            model.charges(s, i) = static_cast<double>(basis.occupied(s, FermionSectorBasis::mode(i, 0))) +
                                  static_cast<double>(basis.occupied(s, FermionSectorBasis::mode(i, 1)));
        }
    }
    for (const auto& tr : model.transfers) {
        model.transfer_max = std::max(model.transfer_max, std::abs(tr.amplitude));
    }
    // Two-site Fock space; the norms of these quadratic forms do not depend on the
    // hopping phase or on Jordan-Wigner ordering.
    const auto local = FermionSectorBasis::fock(2);
    const CMatrix fwd = CMatrix(spin_summed_hop(local, 0, 1));
    model.pair_norm_sym = operator_norm(CMatrix(fwd + fwd.adjoint()));
    model.pair_norm_antisym = operator_norm(CMatrix(fwd - fwd.adjoint()));
    model.correlation_pair_norm = operator_norm(CMatrix(fermion_hop(local, 0, 2)));
    return model;
}

SparseOp xy_cartesian_form(const Lattice& lat, const XXZCouplings& couplings,
                           const SpinSectorBasis& full_basis)
{
    check_couplings(lat, couplings);
    if (full_basis.two_m()) {
        throw std::invalid_argument("cartesian form needs the unconstrained basis");
    }
    const cplx half(0.5, 0.0);
    const cplx half_i(0.0, 0.5);
    const auto sx = [&](int i) {
        return SparseOp(half * (embed_spin_operator(full_basis, full_basis, i, SpinOp::Plus) +
                                embed_spin_operator(full_basis, full_basis, i, SpinOp::Minus)));
    };
    const auto sy = [&](int i) {
        return SparseOp(-half_i * (embed_spin_operator(full_basis, full_basis, i, SpinOp::Plus) -
                                   embed_spin_operator(full_basis, full_basis, i, SpinOp::Minus)));
    };
    SparseOp h(full_basis.dim(), full_basis.dim());
    for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
        const auto [i, j] = lat.bonds()[b];
        h += SparseOp(2.0 * couplings.jxy[b] * (sx(i) * sx(j) + sy(i) * sy(j)));
    }
    h.prune(cplx(0.0, 0.0), 0.0);
    return h;
}

}  // namespace u1gap
