#include "u1gap/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace u1gap {

Contour choose_contour(const SpectralData& spectral, double l_norm)
{
    if (spectral.q < 1 || !(spectral.gap > 0.0)) {
        throw NoGapError("no uniform gap detected: contour needs a positive gap");
    }
    Contour c;
    c.e_minus = spectral.min_ground() - 0.5 * spectral.gap;
    c.e_plus = spectral.max_ground() + 0.5 * spectral.gap;
    c.y0 = l_norm + std::max(1.0, spectral.gap);
    c.c3 = c.y0 - l_norm;
    return c;
}

QuadratureRule gauss_legendre(int n)
{
    if (n < 1) {
        throw std::invalid_argument("quadrature needs at least one node");
    }
    QuadratureRule rule{RVector(n), RVector(n)};
    if (n == 1) {
        rule.nodes(0) = 0.0;
        rule.weights(0) = 2.0;
        return rule;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // recompute the derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(n - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(n - 1 - i) = w;
    }
    if (n % 2 == 1) {
        rule.nodes(n / 2) = 0.0;
    }
    return rule;
}

namespace {

struct Node {
    cplx z;
    cplx weight;  // w dz/dt / (2 pi i)
};

std::vector<Node> contour_nodes(const Contour& c, int n, bool upper_only)
{
    const auto rule = gauss_legendre(n);
    const double mid = 0.5 * (c.e_plus + c.e_minus);
    const double hx = 0.5 * (c.e_plus - c.e_minus);
    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    const cplx i(0.0, 1.0);
    std::vector<Node> nodes;
    for (int k = 0; k < n; ++k) {  // right side, upward
        const double t = rule.nodes(k);
        if (!upper_only || t > 0.0) {
            nodes.push_back({cplx(c.e_plus, c.y0 * t), rule.weights(k) * i * c.y0 / two_pi_i});
        }
    }
    for (int k = 0; k < n; ++k) {  // top side, leftward
        const double t = rule.nodes(k);
        nodes.push_back({cplx(mid - hx * t, c.y0), rule.weights(k) * (-hx) / two_pi_i});
    }
    for (int k = 0; k < n; ++k) {  // left side, downward
        const double t = rule.nodes(k);
        if (!upper_only || t < 0.0) {
            nodes.push_back({cplx(c.e_minus, -c.y0 * t), rule.weights(k) * (-i) * c.y0 / two_pi_i});
        }
    }
    if (!upper_only) {
        for (int k = 0; k < n; ++k) {  // bottom side, rightward
            const double t = rule.nodes(k);
            nodes.push_back({cplx(mid + hx * t, -c.y0), rule.weights(k) * hx / two_pi_i});
        }
    }
    return nodes;
}

// Fixed batch size keeps the summation order independent of the thread count.
constexpr std::size_t kBatch = 8;

CMatrix quadrature_sum(const CMatrix& hprime, const std::vector<Node>& nodes, int threads)
{
    const Index d = hprime.rows();
    CMatrix sum = CMatrix::Zero(d, d);
    std::vector<CMatrix> terms(kBatch);
    for (std::size_t start = 0; start < nodes.size(); start += kBatch) {
        const std::size_t count = std::min(kBatch, nodes.size() - start);
        auto work = [&](std::size_t slot) {
            const Node& node = nodes[start + slot];
            CMatrix a = -hprime;
            a.diagonal().array() += node.z;
            terms[slot] = node.weight * Eigen::PartialPivLU<CMatrix>(a).inverse();
        };
        const std::size_t nthreads = std::clamp<std::size_t>(static_cast<std::size_t>(threads), 1, count);
        if (nthreads == 1) {
            for (std::size_t s = 0; s < count; ++s) {
                work(s);
            }
        } else {
            std::vector<std::thread> pool;
            for (std::size_t t = 0; t < nthreads; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t s = t; s < count; s += nthreads) {
                        work(s);
                    }
                });
            }
            for (auto& th : pool) {
                th.join();
            }
        }
        for (std::size_t s = 0; s < count; ++s) {
            sum += terms[s];
        }
    }
    return sum;
}

double relative_defect(const CMatrix& p)
{
    return (p * p - p).norm() / std::max(1.0, p.norm());
}

TwistedProjector integrate(const CMatrix& hprime, const Contour& contour,
                           const QuadratureOptions& options)
{
    const bool real = hprime.imag().cwiseAbs().maxCoeff() == 0.0;
    TwistedProjector out;
    out.used_conjugate_symmetry = real;
    double previous_norm = -1.0;
    for (int n = options.initial_nodes; n <= options.max_nodes; n *= 2) {
        const auto nodes = contour_nodes(contour, n, real);
        CMatrix p = quadrature_sum(hprime, nodes, options.threads);
        if (real) {
            p = CMatrix(2.0 * p.real().cast<cplx>());
        }
        if (!p.allFinite()) {
            throw ConvergenceError("non-finite resolvent on the contour");
        }
        const double norm = operator_norm(p);
        const double defect = relative_defect(p);
        const double change = previous_norm < 0.0 ? INFINITY : std::abs(norm - previous_norm);
        if (defect < options.defect_tolerance && change < options.stability_tolerance) {
            out.P = std::move(p);
            out.norm = norm;
            out.idempotence_defect = defect;
            out.doubling_change = change;
            out.nodes_per_segment = n;
            out.trace_real = out.P.trace().real();
            return out;
        }
        previous_norm = norm;
    }
    std::ostringstream msg;
    msg << "contour quadrature did not converge within " << options.max_nodes << " nodes per side";
    throw ConvergenceError(msg.str());
}

}  // namespace

TwistedProjector contour_project(const CMatrix& hprime, const Contour& contour,
                                 const QuadratureOptions& options)
{
    if (hprime.rows() != hprime.cols()) {
        throw std::invalid_argument("H' must be square");
    }
    try {
        return integrate(hprime, contour, options);
    } catch (const ConvergenceError& e) {
        if (std::string(e.what()).find("non-finite") == std::string::npos) {
            throw;
        }
    }
    Contour wider = contour;
    wider.y0 *= 2.0;
    wider.c3 += contour.y0;
    auto out = integrate(hprime, wider, options);
    out.contour_inflated = true;
    return out;
}

CMatrix twisted_projector_oracle(const GroundProjector& p, const RVector& log_g)
{
    const RVector g = log_g.array().exp();
    const CMatrix a = g.cwiseInverse().asDiagonal() * p.vectors();
    const CMatrix b = g.asDiagonal() * p.vectors();
    return a * b.adjoint();
}

double twisted_projector_norm(const GroundProjector& p, const RVector& log_g)
{
    const RVector g = log_g.array().exp();
    const CMatrix a = g.cwiseInverse().asDiagonal() * p.vectors();
    const CMatrix b = g.asDiagonal() * p.vectors();
    return low_rank_product_norm(a, b);
}

double f_value(double double_commutator_norm, double l_norm, const SpectralData& spectral)
{
    const double v = double_commutator_norm / (2.0 * spectral.gap) +
                     2.0 * (spectral.spread / spectral.gap) * l_norm * l_norm;
    return std::sqrt(std::max(0.0, v));
}

GapMarginReport gap_margin(const SparseOp& h, const TwistOperators& tw, const SpectralData& spectral,
                           double c4_fraction)
{
    GapMarginReport r;
    r.alpha = tw.alpha;
    r.k_norm = hermitian_norm(tw.K);
    r.l_norm = hermitian_norm(tw.L);
    r.double_commutator_norm = hermitian_norm(double_commutator(h, tw.L));
    r.f = f_value(r.double_commutator_norm, r.l_norm, spectral);
    r.margin = 0.5 * spectral.gap - r.k_norm - r.f;
    r.c4_required = c4_fraction * spectral.gap;
    return r;
}

LemmaReport check_matrix_element_lemma(const SparseOp& l, const GroundProjector& p, double f,
                                       int trials, std::uint64_t seed)
{
    const Index d = p.dim();
    const CMatrix& v = p.vectors();
    auto evaluate = [&](const CVector& phi) {
        const CVector minus = v * (v.adjoint() * phi);
        const CVector plus = phi - minus;
        const double lhs = std::abs(plus.dot(l * minus));
        const double rhs = f * plus.norm() * minus.norm();
        return std::pair{lhs, rhs};
    };
    double worst_margin = INFINITY;
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    double worst_ratio = 0.0;
    auto record = [&](const std::pair<double, double>& lr) {
        const double margin = lr.second - lr.first;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_lhs = lr.first;
            worst_rhs = lr.second;
        }
        if (lr.second > 0.0) {
            worst_ratio = std::max(worst_ratio, lr.first / lr.second);
        }
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        CVector phi(d);
        for (Index k = 0; k < d; ++k) {
            phi(k) = cplx(normal(rng), normal(rng));
        }
        record(evaluate(phi));
    }
    // Extremal vector: top singular pair of (1 - P) L P restricted to range(P).
    const CMatrix lv = l * v;
    const CMatrix off = lv - v * (v.adjoint() * lv);
    Eigen::BDCSVD<CMatrix> svd(off, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double sup = 0.0;
    if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 0.0) {
        sup = svd.singularValues()(0);
        const CVector phi = v * svd.matrixV().col(0) + svd.matrixU().col(0);
        record(evaluate(phi));
    }
    return {"lemma_matrix_element",
            worst_lhs,
            worst_rhs,
            worst_margin,
            {{"f", f},
             {"trials", static_cast<double>(trials)},
             {"max_ratio", worst_ratio},
             {"sup_offdiagonal_L", sup}}};
}

double alpha0_search(const std::vector<GapMarginReport>& reports)
{
    double alpha0 = 0.0;
    bool any = false;
    for (const auto& r : reports) {
        if (r.alpha <= 0.0) {
            continue;
        }
        if (!r.admissible()) {
            break;
        }
        alpha0 = r.alpha;
        any = true;
    }
    if (!any) {
        throw NoAdmissibleAlphaError("no admissible twist strength at this volume");
    }
    return alpha0;
}

Alpha0Scan scan_alpha0(const Lattice& lat, const SectorModel& model, const TwistProfile& profile,
                       const SpectralData& spectral, const std::vector<double>& grid,
                       double c4_fraction)
{
    Alpha0Scan scan;
    for (const double a : grid) {
        if (a <= 0.0) {
            continue;
        }
        scan.reports.push_back(gap_margin(model.hamiltonian, build_KL(lat, model, profile, a), spectral,
                                          c4_fraction));
        if (!scan.reports.back().admissible()) {
            break;
        }
    }
    scan.alpha0 = alpha0_search(scan.reports);
    return scan;
}

double resolvent_norm(const CMatrix& hprime, cplx z)
{
    CMatrix a = hprime;
    a.diagonal().array() -= z;
    const double s = smallest_singular_value(a);
    return s > 0.0 ? 1.0 / s : INFINITY;
}

double ResolventSamples::sup(const std::vector<double>& v) const
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

ResolventSamples sample_resolvent(const CMatrix& hprime, const Contour& c, int per_side)
{
    const auto rule = gauss_legendre(per_side);
    std::vector<double> ts(rule.nodes.data(), rule.nodes.data() + rule.nodes.size());
    ts.insert(ts.begin(), -1.0);
    ts.push_back(1.0);
    const double mid = 0.5 * (c.e_plus + c.e_minus);
    const double hx = 0.5 * (c.e_plus - c.e_minus);
    ResolventSamples s;
    for (const double t : ts) {
        s.right.push_back(resolvent_norm(hprime, cplx(c.e_plus, c.y0 * t)));
        s.left.push_back(resolvent_norm(hprime, cplx(c.e_minus, c.y0 * t)));
        s.top.push_back(resolvent_norm(hprime, cplx(mid + hx * t, c.y0)));
        s.bottom.push_back(resolvent_norm(hprime, cplx(mid + hx * t, -c.y0)));
    }
    return s;
}

std::vector<LemmaReport> check_resolvent_lemmas(const ResolventSamples& samples,
                                                const Contour& contour,
                                                const GapMarginReport& margin)
{
    const double c4 = margin.c4_required;
    const double plus_gap = margin.margin;              // dE/2 - ||K|| - f
    const double minus_gap = margin.margin + margin.f;  // dE/2 - ||K||
    const double c4_ceiling = c4 > 0.0 ? 1.0 / c4 : INFINITY;
    const auto ceiling = [](double g) { return g > 0.0 ? 1.0 / g : INFINITY; };
    std::vector<LemmaReport> out;
    out.push_back(make_report("resolvent_E_plus", samples.sup(samples.right), c4_ceiling,
                              {{"alpha", margin.alpha},
                               {"C4", c4},
                               {"sharp_ceiling", ceiling(plus_gap)},
                               {"E_plus", contour.e_plus}}));
    out.push_back(make_report("resolvent_E_minus", samples.sup(samples.left), c4_ceiling,
                              {{"alpha", margin.alpha},
                               {"C4", c4},
                               {"sharp_ceiling", ceiling(minus_gap)},
                               {"E_minus", contour.e_minus}}));
    const double c3_ceiling = ceiling(contour.c3);
    out.push_back(make_report("resolvent_top", samples.sup(samples.top), c3_ceiling,
                              {{"alpha", margin.alpha}, {"C3", contour.c3}, {"y0", contour.y0}}));
    out.push_back(make_report("resolvent_bottom", samples.sup(samples.bottom), c3_ceiling,
                              {{"alpha", margin.alpha}, {"C3", contour.c3}, {"y0", contour.y0}}));
    return out;
}

LemmaReport norm_P2alpha_bound(double p_norm, const Contour& contour,
                               const ResolventSamples& samples, const GapMarginReport& margin)
{
    const double span = contour.e_plus - contour.e_minus;
    const double two_pi = 2.0 * std::numbers::pi;
    const double rhs = (2.0 * contour.y0 * (samples.sup(samples.right) + samples.sup(samples.left)) +
                        span * (samples.sup(samples.top) + samples.sup(samples.bottom))) /
                       two_pi;
    const double plus_gap = margin.margin;
    const double minus_gap = margin.margin + margin.f;
    double ceiling = INFINITY;
    if (plus_gap > 0.0 && minus_gap > 0.0 && contour.c3 > 0.0) {
        ceiling = (2.0 * contour.y0 * (1.0 / plus_gap + 1.0 / minus_gap) + span * 2.0 / contour.c3) /
                  two_pi;
    }
    return make_report("norm_P2alpha", p_norm, rhs,
                       {{"alpha", margin.alpha},
                        {"rhs_ceiling", ceiling},
                        {"y0", contour.y0},
                        {"E_span", span},
                        {"C3", contour.c3}});
}

double ProjectorBoundConstants::evaluate(double R, double D) const
{
    return C * std::pow(R, 0.5 * D) + C_prime;
}

ProjectorBoundConstants projector_bound_constants(double C2, double e_span, double vertical_ceiling,
                                                  double horizontal_ceiling)
{
    // vertical_ceiling, horizontal_ceiling: sums of the two side ceilings.
    return {C2 * vertical_ceiling / std::numbers::pi,
            e_span * horizontal_ceiling / (2.0 * std::numbers::pi)};
}

}  // namespace u1gap
