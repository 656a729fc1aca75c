#include "u1gap/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace u1gap {

namespace {

std::vector<std::uint64_t> make_strides(int two_s, int sites)
{
    const std::uint64_t base = static_cast<std::uint64_t>(two_s) + 1;
    std::vector<std::uint64_t> strides(static_cast<std::size_t>(sites));
    std::uint64_t s = 1;
    for (int i = sites - 1; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] = s;
        if (i > 0 && s > std::numeric_limits<std::uint64_t>::max() / base) {
            throw std::invalid_argument("spin basis does not fit a 64-bit key");
        }
        s *= base;
    }
    return strides;
}

// Depth-first enumeration in lexicographic order of local indices.
void enumerate(int site, int sites, int two_s, int remaining_k, std::optional<int> target_k,
               std::uint64_t key, const std::vector<std::uint64_t>& strides,
               std::vector<std::uint64_t>& out)
{
    if (site == sites) {
        if (!target_k || remaining_k == 0) {
            out.push_back(key);
        }
        return;
    }
    const int left = sites - site - 1;
    for (int k = 0; k <= two_s; ++k) {
        if (target_k) {
            const int rest = remaining_k - k;
            if (rest < 0) {
                break;
            }
            if (rest > left * two_s) {
                continue;
            }
        }
        enumerate(site + 1, sites, two_s, remaining_k - k, target_k,
                  key + static_cast<std::uint64_t>(k) * strides[static_cast<std::size_t>(site)],
                  strides, out);
    }
}

}  // namespace

SpinSectorBasis::SpinSectorBasis(int two_s, int sites, std::optional<int> two_m)
    : two_s_(two_s), sites_(sites), two_m_(two_m)
{
    if (two_s < 1) {
        throw std::invalid_argument("spin must be positive (2S >= 1)");
    }
    if (sites < 1) {
        throw std::invalid_argument("need at least one site");
    }
    std::optional<int> target_k;
    if (two_m) {
        // sum_i k_i = S*sites - M  ->  2*sum k = 2S*sites - 2M
        const int twice = two_s * sites - *two_m;
        if (std::abs(*two_m) > two_s * sites || twice % 2 != 0) {
            throw std::invalid_argument("inconsistent magnetization: 2M=" + std::to_string(*two_m) +
                                        " for 2S=" + std::to_string(two_s) + " on " +
                                        std::to_string(sites) + " sites");
        }
        target_k = twice / 2;
    }
    strides_ = make_strides(two_s, sites);
    enumerate(0, sites, two_s, target_k.value_or(0), target_k, 0, strides_, keys_);
}

SpinSectorBasis::SpinSectorBasis(int two_s, int sites, int two_m)
    : SpinSectorBasis(two_s, sites, std::optional<int>(two_m))
{
}

SpinSectorBasis SpinSectorBasis::full(int two_s, int sites)
{
    return SpinSectorBasis(two_s, sites, std::optional<int>());
}

SpinSectorBasis enumerate_spin_sector(double S, int sites, double M)
{
    const double two_s = 2.0 * S;
    const double two_m = 2.0 * M;
    if (std::abs(two_s - std::round(two_s)) > 1e-12 || std::abs(two_m - std::round(two_m)) > 1e-12) {
        throw std::invalid_argument("S and M must be half-integers");
    }
    return SpinSectorBasis(static_cast<int>(std::lround(two_s)), sites,
                           static_cast<int>(std::lround(two_m)));
}

int SpinSectorBasis::local(Index state, int site) const
{
    const std::uint64_t base = static_cast<std::uint64_t>(two_s_) + 1;
    return static_cast<int>((key(state) / strides_[static_cast<std::size_t>(site)]) % base);
}

int SpinSectorBasis::two_total_m(Index state) const
{
    int sum_k = 0;
    for (int i = 0; i < sites_; ++i) {
        sum_k += local(state, i);
    }
    return two_s_ * sites_ - 2 * sum_k;
}

std::optional<Index> SpinSectorBasis::index_of(std::uint64_t key) const
{
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) {
        return std::nullopt;
    }
    return static_cast<Index>(it - keys_.begin());
}

namespace {

int charge(SpinOp op)
{
    switch (op) {
    case SpinOp::Plus: return 2;
    case SpinOp::Minus: return -2;
    case SpinOp::Z: return 0;
    }
    return 0;
}

// Applies one factor to local index k of spin two_s; returns coefficient and new k.
std::pair<double, int> apply_local(int two_s, int k, SpinOp op)
{
    const double s = 0.5 * two_s;
    const double m = s - k;
    switch (op) {
    case SpinOp::Z: return {m, k};
    case SpinOp::Plus:
        if (k == 0) {
            return {0.0, k};
        }
        return {std::sqrt(s * (s + 1) - m * (m + 1)), k - 1};
    case SpinOp::Minus:
        if (k == two_s) {
            return {0.0, k};
        }
        return {std::sqrt(s * (s + 1) - m * (m - 1)), k + 1};
    }
    return {0.0, k};
}

}  // namespace

SparseOp spin_product(const SpinSectorBasis& src, const SpinSectorBasis& dst,
                      std::span<const SpinFactor> factors)
{
    if (src.two_s() != dst.two_s() || src.sites() != dst.sites()) {
        throw std::invalid_argument("spin bases differ in spin or size");
    }
    int net = 0;
    for (const auto& f : factors) {
        if (f.site < 0 || f.site >= src.sites()) {
            throw std::out_of_range("spin site out of range");
        }
        net += charge(f.op);
    }
    if (src.two_m().has_value() != dst.two_m().has_value() ||
        (src.two_m() && *dst.two_m() != *src.two_m() + net)) {
        throw std::invalid_argument("target sector invalid for this operator");
    }
    const std::uint64_t base = static_cast<std::uint64_t>(src.two_s()) + 1;
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(src.dim()));
    for (Index col = 0; col < src.dim(); ++col) {
        std::uint64_t key = src.key(col);
        double coeff = 1.0;
        for (auto it = factors.rbegin(); it != factors.rend() && coeff != 0.0; ++it) {
            const std::uint64_t stride = src.stride(it->site);
            const int k = static_cast<int>((key / stride) % base);
            const auto [c, nk] = apply_local(src.two_s(), k, it->op);
            coeff *= c;
            key = key - static_cast<std::uint64_t>(k) * stride + static_cast<std::uint64_t>(nk) * stride;
        }
        if (coeff == 0.0) {
            continue;
        }
        const auto row = dst.index_of(key);
        if (!row) {
            throw std::logic_error("operator left the target sector");
        }
        triplets.emplace_back(*row, col, cplx(coeff, 0.0));
    }
    return from_triplets(dst.dim(), src.dim(), triplets);
}

SparseOp embed_spin_operator(const SpinSectorBasis& src, const SpinSectorBasis& dst, int site,
                             SpinOp op)
{
    const SpinFactor f{site, op};
    return spin_product(src, dst, std::span<const SpinFactor>(&f, 1));
}

SparseOp spin_z(const SpinSectorBasis& basis, int site)
{
    return embed_spin_operator(basis, basis, site, SpinOp::Z);
}

SparseOp spin_flip(const SpinSectorBasis& basis, int i, int j)
{
    const SpinFactor f[] = {{i, SpinOp::Plus}, {j, SpinOp::Minus}};
    return spin_product(basis, basis, f);
}

SparseOp total_spin_z(const SpinSectorBasis& basis)
{
    std::vector<Triplet> t;
    for (Index s = 0; s < basis.dim(); ++s) {
        t.emplace_back(s, s, cplx(0.5 * basis.two_total_m(s), 0.0));
    }
    return from_triplets(basis.dim(), basis.dim(), t);
}

CMatrix local_spin_matrix(int two_s, SpinOp op)
{
    const int d = two_s + 1;
    CMatrix m = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const auto [c, nk] = apply_local(two_s, k, op);
        if (c != 0.0) {
            m(nk, k) = c;
        }
    }
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

SpinPairNorms spin_pair_norms(int two_s)
{
    const CMatrix sp = local_spin_matrix(two_s, SpinOp::Plus);
    const CMatrix sm = local_spin_matrix(two_s, SpinOp::Minus);
    const CMatrix sz = local_spin_matrix(two_s, SpinOp::Z);
    const CMatrix pm = kron(sp, sm);
    const CMatrix mp = kron(sm, sp);
    return {operator_norm(CMatrix(pm + mp)), operator_norm(CMatrix(pm - mp)), operator_norm(pm),
            operator_norm(kron(sz, sz))};
}

FermionSectorBasis::FermionSectorBasis(int sites, std::optional<int> particles,
                                       std::optional<int> two_sz)
    : sites_(sites), particles_(particles), two_sz_(two_sz)
{
    if (sites < 1 || 2 * sites > 62) {
        throw std::invalid_argument("fermion basis supports 1..31 sites");
    }
    if (particles && (*particles < 0 || *particles > 2 * sites)) {
        throw std::invalid_argument("particle number out of range");
    }
    const int modes = 2 * sites;
    constexpr std::uint64_t up_mask_unit = 0x5555555555555555ULL;
    const std::uint64_t all = (std::uint64_t{1} << modes) - 1;
    const std::uint64_t up_modes = up_mask_unit & all;
    const auto consider = [&](std::uint64_t m) {
        const int n = std::popcount(m);
        if (two_sz) {
            const int nu = std::popcount(m & up_modes);
            if (nu - (n - nu) != *two_sz) {
                return;
            }
        }
        masks_.push_back(m);
    };
    if (particles) {
        if (*particles == 0) {
            consider(0);
        } else {
            // Gosper's hack: successive masks with a fixed popcount.
            std::uint64_t m = (std::uint64_t{1} << *particles) - 1;
            while (m <= all) {
                consider(m);
                const std::uint64_t c = m & (~m + 1);
                const std::uint64_t r = m + c;
                if (r == 0) {
                    break;
                }
                m = (((r ^ m) >> 2) / c) | r;
            }
        }
    } else {
        for (std::uint64_t m = 0; m <= all; ++m) {
            consider(m);
        }
    }
    // Lexicographic in (n_0, n_1, ...): compare bit-reversed masks.
    const auto reversed = [modes](std::uint64_t m) {
        std::uint64_t r = 0;
        for (int k = 0; k < modes; ++k) {
            r = (r << 1) | ((m >> k) & 1U);
        }
        return r;
    };
    std::sort(masks_.begin(), masks_.end(),
              [&](std::uint64_t a, std::uint64_t b) { return reversed(a) < reversed(b); });
    lookup_.reserve(masks_.size());
    for (std::size_t i = 0; i < masks_.size(); ++i) {
        lookup_.emplace(masks_[i], static_cast<Index>(i));
    }
}

FermionSectorBasis::FermionSectorBasis(int sites, int particles, std::optional<int> two_sz)
    : FermionSectorBasis(sites, std::optional<int>(particles), two_sz)
{
}

FermionSectorBasis FermionSectorBasis::fock(int sites)
{
    return FermionSectorBasis(sites, std::optional<int>(), std::optional<int>());
}

std::optional<Index> FermionSectorBasis::index_of(std::uint64_t mask) const
{
    const auto it = lookup_.find(mask);
    if (it == lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

SparseOp fermion_product(const FermionSectorBasis& src, const FermionSectorBasis& dst,
                         std::span<const FermionFactor> factors)
{
    if (src.sites() != dst.sites()) {
        throw std::invalid_argument("fermion bases differ in size");
    }
    for (const auto& f : factors) {
        if (f.mode < 0 || f.mode >= src.modes()) {
            throw std::out_of_range("fermion mode out of range");
        }
    }
    std::vector<Triplet> triplets;
    for (Index col = 0; col < src.dim(); ++col) {
        std::uint64_t m = src.mask(col);
        double sign = 1.0;
        bool alive = true;
        for (auto it = factors.rbegin(); it != factors.rend() && alive; ++it) {
            const std::uint64_t bit = std::uint64_t{1} << it->mode;
            const bool occ = (m & bit) != 0;
            switch (it->op) {
            case FermionOp::Number:
                alive = occ;
                break;
            case FermionOp::Annihilate:
            case FermionOp::Create:
                if (occ != (it->op == FermionOp::Annihilate)) {
                    alive = false;
                    break;
                }
                if (std::popcount(m & (bit - 1)) % 2 != 0) {
                    sign = -sign;
                }
                m ^= bit;
                break;
            }
        }
        if (!alive) {
            continue;
        }
        const auto row = dst.index_of(m);
        if (!row) {
            throw std::invalid_argument("target sector invalid for this fermion operator");
        }
        triplets.emplace_back(*row, col, cplx(sign, 0.0));
    }
    return from_triplets(dst.dim(), src.dim(), triplets);
}

SparseOp embed_fermion_operator(const FermionSectorBasis& src, const FermionSectorBasis& dst,
                                int mode, FermionOp op)
{
    const FermionFactor f{mode, op};
    return fermion_product(src, dst, std::span<const FermionFactor>(&f, 1));
}

SparseOp fermion_number(const FermionSectorBasis& basis, int mode)
{
    return embed_fermion_operator(basis, basis, mode, FermionOp::Number);
}

SparseOp fermion_hop(const FermionSectorBasis& basis, int a, int b)
{
    const FermionFactor f[] = {{a, FermionOp::Create}, {b, FermionOp::Annihilate}};
    return fermion_product(basis, basis, f);
}

SparseOp total_number(const FermionSectorBasis& basis)
{
    std::vector<Triplet> t;
    for (Index s = 0; s < basis.dim(); ++s) {
        t.emplace_back(s, s, cplx(std::popcount(basis.mask(s)), 0.0));
    }
    return from_triplets(basis.dim(), basis.dim(), t);
}

SparseOp total_fermion_sz(const FermionSectorBasis& basis)
{
    std::vector<Triplet> t;
    for (Index s = 0; s < basis.dim(); ++s) {
        int sz = 0;
        for (int i = 0; i < basis.sites(); ++i) {
            sz += static_cast<int>(basis.occupied(s, FermionSectorBasis::mode(i, 0))) -
                  static_cast<int>(basis.occupied(s, FermionSectorBasis::mode(i, 1)));
        }
        t.emplace_back(s, s, cplx(sz, 0.0));
    }
    return from_triplets(basis.dim(), basis.dim(), t);
}

}  // namespace u1gap
