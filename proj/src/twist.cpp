#include "u1gap/twist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace u1gap {

std::pair<double, double> kappa_window(double D)
{
    return {1.0 - 0.5 * D, 1.5 - 0.5 * D};
}

double default_kappa(double D)
{
    return 1.25 - 0.5 * D;
}

double TwistProfile::decay_exponent() const
{
    if (R < 1) {
        return 0.0;
    }
    return std::pow(static_cast<double>(R), 1.0 - 0.5 * D) * (1.0 - std::pow(static_cast<double>(R), -kappa));
}

TwistProfile build_theta(const DistanceField& field, int R, double kappa, double D)
{
    const auto [lo, hi] = kappa_window(D);
    if (!(kappa > lo && kappa < hi)) {
        std::ostringstream msg;
        msg << "kappa " << kappa << " outside the open window (" << lo << ", " << hi << ")";
        throw std::invalid_argument(msg.str());
    }
    if (R < 2) {
        throw std::invalid_argument("twist radius R must be at least 2");
    }
    TwistProfile p;
    p.m = field.center;
    p.R = R;
    p.kappa = kappa;
    p.D = D;
    p.dist = field.dist;
    p.theta.assign(field.dist.size(), 0.0);
    const double rr = static_cast<double>(R);
    const double scale = std::pow(rr, 1.0 - 0.5 * D);
    for (std::size_t l = 0; l < field.dist.size(); ++l) {
        const int d = field.dist[l];
        if (d == 0) {
            p.theta[l] = scale * (std::pow(rr, -kappa) - 1.0);
        } else if (d <= R) {
            p.theta[l] = scale * (std::pow(d / rr, kappa) - 1.0);
        }
    }
    return p;
}

TwistProfile trivial_profile(const DistanceField& field, double D)
{
    TwistProfile p;
    p.m = field.center;
    p.R = 0;
    p.kappa = default_kappa(D);
    p.D = D;
    p.dist = field.dist;
    p.theta.assign(field.dist.size(), 0.0);
    return p;
}

RVector log_gauge(const Eigen::MatrixXd& charges, const std::vector<double>& theta, double alpha)
{
    if (static_cast<std::size_t>(charges.cols()) != theta.size()) {
        throw std::invalid_argument("theta must be defined on every site");
    }
    const Eigen::Map<const RVector> th(theta.data(), static_cast<Index>(theta.size()));
    return -alpha * (charges * th);
}

SparseOp build_G(const Eigen::MatrixXd& charges, const std::vector<double>& theta, double alpha)
{
    const RVector lg = log_gauge(charges, theta, alpha);
    const double worst = lg.size() == 0 ? 0.0 : lg.cwiseAbs().maxCoeff();
    if (worst > kGaugeLogLimit) {
        std::ostringstream msg;
        msg << "gauge exponent " << worst << " exceeds " << kGaugeLogLimit;
        throw GaugeOverflowError(msg.str());
    }
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(lg.size()));
    for (Index s = 0; s < lg.size(); ++s) {
        t.emplace_back(s, s, cplx(std::exp(lg(s)), 0.0));
    }
    return from_triplets(lg.size(), lg.size(), t);
}

std::vector<Bond> annulus_bonds(const Lattice& lat, const TwistProfile& profile)
{
    std::vector<Bond> out;
    for (auto [i, j] : lat.bonds()) {
        int di = profile.dist[static_cast<std::size_t>(i)];
        int dj = profile.dist[static_cast<std::size_t>(j)];
        if (di > dj) {
            std::swap(i, j);
            std::swap(di, dj);
        }
        if (di >= 1 && di <= profile.R - 1) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

TwistOperators build_KL(const Lattice& lat, const SectorModel& model, const TwistProfile& profile,
                        double alpha)
{
    const Index dim = model.hamiltonian.rows();
    TwistOperators tw;
    tw.alpha = alpha;
    tw.K = SparseOp(dim, dim);
    tw.L = SparseOp(dim, dim);
    tw.bonds = annulus_bonds(lat, profile);
    const cplx minus_i(0.0, -1.0);
    for (const auto& tr : model.transfers) {
        const double x = 2.0 * alpha * (profile.theta[static_cast<std::size_t>(tr.i)] -
                                        profile.theta[static_cast<std::size_t>(tr.j)]);
        if (x == 0.0) {
            continue;
        }
        const SparseOp fwd = tr.amplitude * tr.forward;
        const SparseOp bwd = SparseOp(fwd.adjoint());
        tw.K += SparseOp((std::cosh(x) - 1.0) * (fwd + bwd));
        tw.L += SparseOp(minus_i * std::sinh(x) * (fwd - bwd));
    }
    tw.K.prune(cplx(0.0, 0.0), 0.0);
    tw.L.prune(cplx(0.0, 0.0), 0.0);
    tw.K.makeCompressed();
    tw.L.makeCompressed();
    return tw;
}

SparseOp twisted_hamiltonian(const SectorModel& model, const TwistOperators& tw)
{
    SparseOp h = model.hamiltonian + tw.K + cplx(0.0, 1.0) * tw.L;
    h.prune(cplx(0.0, 0.0), 0.0);
    return h;
}

SparseOp double_commutator(const SparseOp& h, const SparseOp& l)
{
    if (h.rows() != l.rows() || h.cols() != l.cols() || h.rows() != h.cols()) {
        throw std::invalid_argument("double commutator: dimension mismatch");
    }
    return commutator(l, commutator(h, l));
}

LemmaReport make_report(std::string name, double lhs, double rhs,
                        std::map<std::string, double> constants)
{
    return {std::move(name), lhs, rhs, rhs - lhs, std::move(constants)};
}

LemmaConstants lemma_constants(const SectorModel& model, const TwistProfile& profile, double C0,
                               double bond_term_max)
{
    LemmaConstants c;
    c.C0 = C0;
    c.D = profile.D;
    c.kappa = profile.kappa;
    c.R = profile.R;
    c.transfer_max = model.transfer_max;
    c.pair_norm_sym = model.pair_norm_sym;
    c.pair_norm_antisym = model.pair_norm_antisym;
    c.bond_term_max = bond_term_max;
    return c;
}

double kappa_ratio(double kappa, double D)
{
    return (2.0 * kappa + D - 1.0) / (2.0 * kappa + D - 2.0);
}

double lemma_K_rhs(const LemmaConstants& c, double alpha)
{
    return c.transfer_max * c.pair_norm_sym * c.C0 * c.C0 * (std::cosh(2.0 * alpha) - 1.0) *
           kappa_ratio(c.kappa, c.D);
}

double lemma_L_rhs(const LemmaConstants& c, double alpha)
{
    return c.transfer_max * c.pair_norm_antisym * c.C0 * c.C0 * std::abs(std::sinh(2.0 * alpha)) *
           (1.0 + std::pow(static_cast<double>(c.R), 0.5 * c.D) / (c.kappa + c.D - 1.0));
}

double lemma_double_rhs(double C1, const LemmaConstants& c, double alpha)
{
    const double s = std::sinh(2.0 * alpha);
    return C1 * s * s * kappa_ratio(c.kappa, c.D);
}

double proof_C1(const LemmaConstants& c)
{
    const double c0_4 = std::pow(c.C0, 4);
    return 24.0 * c0_4 * c.transfer_max * c.transfer_max * 16.0 * c.pair_norm_antisym *
           c.pair_norm_antisym * c.bond_term_max;
}

namespace {

std::map<std::string, double> base_constants(const LemmaConstants& c, double alpha)
{
    return {{"C0", c.C0},       {"D", c.D},
            {"kappa", c.kappa}, {"R", static_cast<double>(c.R)},
            {"alpha", alpha},   {"J_max", c.transfer_max},
            {"pair_norm_sym", c.pair_norm_sym},
            {"pair_norm_antisym", c.pair_norm_antisym}};
}

}  // namespace

LemmaReport lemma_K_report(double k_norm, const LemmaConstants& c, double alpha)
{
    return make_report("lemma_K", k_norm, lemma_K_rhs(c, alpha), base_constants(c, alpha));
}

LemmaReport lemma_L_report(double l_norm, const LemmaConstants& c, double alpha)
{
    return make_report("lemma_L", l_norm, lemma_L_rhs(c, alpha), base_constants(c, alpha));
}

LemmaReport lemma_double_report(double dc_norm, const LemmaConstants& c, double alpha, double C1)
{
    auto k = base_constants(c, alpha);
    k["C1"] = C1;
    const double unit = lemma_double_rhs(1.0, c, alpha);
    k["C1_min"] = unit > 0.0 ? dc_norm / unit : 0.0;
    return make_report("lemma_double_commutator", dc_norm, lemma_double_rhs(C1, c, alpha), k);
}

LemmaReport check_lemma_K(const TwistOperators& tw, const LemmaConstants& c)
{
    return lemma_K_report(hermitian_norm(tw.K), c, tw.alpha);
}

LemmaReport check_lemma_L(const TwistOperators& tw, const LemmaConstants& c)
{
    return lemma_L_report(hermitian_norm(tw.L), c, tw.alpha);
}

LemmaReport check_lemma_double(const SparseOp& h, const TwistOperators& tw, const LemmaConstants& c,
                               double C1)
{
    return lemma_double_report(hermitian_norm(double_commutator(h, tw.L)), c, tw.alpha, C1);
}

double theta_difference_slack(const Lattice& lat, const TwistProfile& profile)
{
    double worst = -std::numeric_limits<double>::infinity();
    const double rr = static_cast<double>(profile.R);
    for (const auto& [i, j] : annulus_bonds(lat, profile)) {
        const double r = profile.dist[static_cast<std::size_t>(i)];
        const double diff = std::abs(profile.theta[static_cast<std::size_t>(i)] -
                                     profile.theta[static_cast<std::size_t>(j)]);
        const double bound = profile.kappa * std::pow(rr, -profile.kappa + 1.0 - 0.5 * profile.D) *
                             std::pow(r, profile.kappa - 1.0);
        worst = std::max(worst, diff - std::min(bound, 1.0));
    }
    return worst;
}

C1Diagnostic diagnose_C1(const std::vector<LemmaReport>& double_reports)
{
    C1Diagnostic d;
    bool first = true;
    for (const auto& r : double_reports) {
        const auto it = r.constants.find("C1_min");
        if (it == r.constants.end() || r.constants.at("alpha") == 0.0) {
            continue;
        }
        if (first) {
            d.c1_min = d.c1_max = it->second;
            first = false;
        } else {
            d.c1_min = std::min(d.c1_min, it->second);
            d.c1_max = std::max(d.c1_max, it->second);
        }
    }
    d.alpha_independent = !first && d.c1_max <= 1.05 * d.c1_min;
    return d;
}

double xxz_bond_term_max(const XXZCouplings& couplings, int two_s)
{
    const auto norms = spin_pair_norms(two_s);
    double worst = 0.0;
    for (std::size_t b = 0; b < couplings.jxy.size(); ++b) {
        worst = std::max(worst, std::abs(couplings.jxy[b]) * norms.symmetric +
                                    std::abs(couplings.jz[b]) * norms.zz);
    }
    return worst;
}

double hubbard_bond_term_max(const HubbardParams& params, double pair_norm_sym)
{
    double t_max = 0.0;
    for (const auto& t : params.t) {
        t_max = std::max(t_max, std::abs(t));
    }
    double b_max = 0.0;
    for (const auto& b : params.B) {
        b_max = std::max(b_max, std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]));
    }
    // On-site terms are charged in full to every bond touching the site.
    return t_max * pair_norm_sym + 4.0 * std::abs(params.V) + 2.0 * (std::abs(params.U) + b_max);
}

}  // namespace u1gap
