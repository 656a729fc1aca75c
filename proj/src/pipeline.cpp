#include "u1gap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>

#include "u1gap/resolvent.hpp"
#include "u1gap/spectral.hpp"
#include "u1gap/twist.hpp"

namespace u1gap {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- problem assembly

Lattice build_lattice(const LatticeSpec& spec, const std::string& base_dir)
{
    if (spec.kind == "chain") {
        return build_chain(spec.size, spec.periodic);
    }
    if (spec.kind == "zigzag") {
        return build_zigzag_chain(spec.size, spec.periodic);
    }
    if (spec.kind == "sierpinski") {
        return build_sierpinski(spec.generation);
    }
    if (spec.kind == "square") {
        return build_square(spec.lx, spec.ly, spec.periodic);
    }
    std::filesystem::path p(spec.path);
    if (p.is_relative()) {
        p = std::filesystem::path(base_dir) / p;
    }
    if (!std::filesystem::exists(p)) {
        throw ConfigError("edge-list file '" + p.string() + "' does not exist", 0);
    }
    return read_edge_list_file(p.string());
}

XXZCouplings xxz_couplings(const Lattice& lat, const ModelSpec& spec, std::optional<std::uint64_t> seed)
{
    if (spec.random) {
        if (!seed) {
            throw ConfigError("random couplings need a seed (config 'seed' or --seed)", spec.random_line);
        }
        return XXZCouplings::random(lat, spec.jxy, spec.jz, *seed);
    }
    auto c = XXZCouplings::homogeneous(lat, spec.jxy, spec.jz);
    if (lat.name().rfind("zigzag", 0) == 0) {
        const int n = lat.num_sites();
        for (std::size_t b = 0; b < lat.bonds().size(); ++b) {
            const auto [i, j] = lat.bonds()[b];
            const int d = std::min(std::abs(i - j), n - std::abs(i - j));
            if (d == 2) {
                c.jxy[b] *= spec.j2;
                c.jz[b] *= spec.j2;
            }
        }
    }
    return c;
}

namespace {

constexpr double kMaxSectorDim = 5e6;

/// Sector dimension by counting, before anything is enumerated.
double sector_size(const ModelSpec& m, int sites)
{
    if (m.kind == "xxz") {
        const int two_s = static_cast<int>(std::lround(2.0 * m.spin));
        const long target = std::lround(m.spin * sites - m.M);  // number of lowering steps
        if (target < 0 || target > static_cast<long>(two_s) * sites) {
            return 0.0;
        }
        std::vector<double> ways(static_cast<std::size_t>(target + 1), 0.0);
        ways[0] = 1.0;
        for (int s = 0; s < sites; ++s) {
            std::vector<double> next(ways.size(), 0.0);
            for (long t = 0; t <= target; ++t) {
                for (long k = 0; k <= two_s && k <= t; ++k) {
                    next[static_cast<std::size_t>(t)] += ways[static_cast<std::size_t>(t - k)];
                }
            }
            ways = std::move(next);
        }
        return ways.back();
    }
    auto binom = [](int n, int k) {
        return k < 0 || k > n ? 0.0 : std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    };
    if (!m.two_sz) {
        return binom(2 * sites, m.N);
    }
    if ((m.N + *m.two_sz) % 2 != 0) {
        return 0.0;
    }
    return binom(sites, (m.N + *m.two_sz) / 2) * binom(sites, (m.N - *m.two_sz) / 2);
}

}  // namespace

DimensionEstimate lattice_dimension(const LatticeSpec& spec, const Lattice& lat)
{
    if (spec.kind == "sierpinski") {
        return certify_dimension(lat, std::log(3.0) / std::log(2.0));
    }
    return estimate_dimension(lat);
}

Problem build_problem(const RunConfig& cfg, std::optional<std::uint64_t> seed, bool require_twist)
{
    Lattice lat = [&] {
        try {
            return build_lattice(cfg.lattice, cfg.base_dir);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("lattice: ") + e.what(), 0);
        }
    }();
    const auto dim = lattice_dimension(cfg.lattice, lat);
    if (require_twist && !dim.admits_twist()) {
        throw ConfigError("lattice dimension D = " + format_double(dim.D) +
                              " is outside the twist construction (needs 1 <= D < 2)",
                          0);
    }
    const auto& m = cfg.model;
    if (sector_size(m, lat.num_sites()) > kMaxSectorDim) {
        throw ConfigError("sector dimension exceeds " + format_double(kMaxSectorDim), 0);
    }
    try {
        if (m.kind == "xxz") {
            const int two_s = static_cast<int>(std::lround(2.0 * m.spin));
            const int two_m = static_cast<int>(std::lround(2.0 * m.M));
            SpinSectorBasis basis(two_s, lat.num_sites(), two_m);
            const auto couplings = xxz_couplings(lat, m, seed);
            auto model = assemble_xxz(lat, couplings, basis);
            const double hmax = xxz_bond_term_max(couplings, two_s);
            return Problem{std::move(lat), dim, "M=" + format_double(m.M), std::move(basis), std::nullopt,
                           std::nullopt, std::move(model), hmax};
        }
        FermionSectorBasis basis(lat.num_sites(), m.N, m.two_sz);
        HubbardParams hp = HubbardParams::homogeneous(lat, cplx(m.t, 0.0), m.U, m.V);
        if (!m.field.empty()) {
            hp.B.assign(static_cast<std::size_t>(lat.num_sites()), {m.field[0], m.field[1], m.field[2]});
        }
        auto model = assemble_hubbard(lat, hp, basis);
        const double hmax = hubbard_bond_term_max(hp, model.pair_norm_sym);
        std::string sector = "N=" + std::to_string(m.N);
        if (m.two_sz) {
            sector += ",2Sz=" + std::to_string(*m.two_sz);
        }
        return Problem{std::move(lat), dim, sector, std::nullopt, std::move(basis), hp, std::move(model), hmax};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what(), 0);
    }
}

// ---------------------------------------------------------------- output helpers

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        out << (k ? "," : "") << table.header[k];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? "," : "");
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_double(v);
                    } else {
                        out << v;
                    }
                },
                row[k]);
        }
        out << '\n';
    }
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"lattice", "spectrum", "verify-lemmas",
                                                "bound-chain", "sweep",    "fit"};
    return names;
}

namespace {

json header(const std::string& command, const RunConfig& cfg, const Problem* pb,
            std::optional<std::uint64_t> seed)
{
    json j;
    j["schema"] = "u1gap." + command;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    if (seed) {
        j["seed"] = *seed;
    } else {
        j["seed"] = nullptr;
    }
    if (pb) {
        j["lattice"] = {{"name", pb->lattice.name()},
                        {"sites", pb->lattice.num_sites()},
                        {"bonds", pb->lattice.bonds().size()}};
        j["model"] = cfg.model.kind;
        j["sector"] = pb->sector;
        j["sector_dim"] = pb->model.hamiltonian.rows();
    }
    return j;
}

json dimension_json(const DimensionEstimate& d)
{
    return {{"D", d.D},
            {"C0", d.C0},
            {"max_radius", d.max_radius},
            {"outside_theorem_scope", d.outside_theorem_scope},
            {"admits_twist", d.admits_twist()},
            {"max_sphere", d.max_sphere},
            {"residuals", d.residuals}};
}

json spectral_json(const SpectralData& s)
{
    return {{"q", s.q},
            {"gap", s.gap},
            {"spread", s.spread},
            {"mean_ground", s.mean_ground},
            {"ground_energies", s.ground_energies},
            {"first_excited", s.first_excited},
            {"eps_deg", s.eps_deg},
            {"gap_min", s.gap_min},
            {"eigenvalues", s.eigenvalues}};
}

json report_json(const LemmaReport& r)
{
    json c = json::object();
    for (const auto& [k, v] : r.constants) {
        c[k] = v;
    }
    return {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"constants", c}};
}

GroundSector solve(const Problem& pb, const RunConfig& cfg)
{
    SpectralOptions so;
    so.eps_deg = cfg.tolerances.eps_deg;
    so.gap_min = cfg.tolerances.gap_min;
    return analyze_ground_sector(pb.model.hamiltonian, so);
}

double resolve_kappa(const RunConfig& cfg, double D)
{
    const auto [lo, hi] = kappa_window(D);
    const double k = cfg.twist.kappa.value_or(default_kappa(D));
    if (!(k > lo && k < hi)) {
        throw ConfigError("kappa = " + format_double(k) + " outside the window (" + format_double(lo) + ", " +
                              format_double(hi) + ")",
                          0);
    }
    return k;
}

Site resolve_center(const RunConfig& cfg, const Problem& pb)
{
    if (cfg.twist.center < 0 || cfg.twist.center >= pb.lattice.num_sites()) {
        throw ConfigError("twist center " + std::to_string(cfg.twist.center) + " is not a lattice site", 0);
    }
    return cfg.twist.center;
}

std::string short_lattice(const Problem& pb)
{
    return pb.lattice.name();
}

// ---------------------------------------------------------------- commands

RunResult cmd_lattice(const RunConfig& cfg, const RunOptions& opt)
{
    const Lattice lat = [&] {
        try {
            return build_lattice(cfg.lattice, cfg.base_dir);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("lattice: ") + e.what(), 0);
        }
    }();
    const auto d = lattice_dimension(cfg.lattice, lat);
    RunResult out;
    out.report = header("lattice", cfg, nullptr, opt.seed);
    out.report["lattice"] = {{"name", lat.name()},
                             {"sites", lat.num_sites()},
                             {"bonds", lat.bonds().size()},
                             {"max_degree", lat.max_degree()}};
    out.report["dimension"] = dimension_json(d);
    if (d.admits_twist()) {
        const auto [lo, hi] = kappa_window(d.D);
        out.report["kappa_window"] = {lo, hi};
        out.report["kappa_default"] = default_kappa(d.D);
    }
    out.table.header = {"r", "max_sphere", "bound", "residual"};
    for (int r = 1; r <= d.max_radius; ++r) {
        const auto k = static_cast<std::size_t>(r - 1);
        out.table.rows.push_back({static_cast<long long>(r), static_cast<long long>(d.max_sphere[k]),
                                  d.C0 * std::pow(static_cast<double>(r), d.D - 1.0), d.residuals[k]});
    }
    out.summary = lat.name() + ": D = " + format_double(d.D) + ", C0 = " + format_double(d.C0) +
                  (d.admits_twist() ? "" : " (outside twist scope)");
    return out;
}

RunResult cmd_spectrum(const RunConfig& cfg, const RunOptions& opt)
{
    const auto pb = build_problem(cfg, opt.seed ? opt.seed : cfg.seed);
    const auto gs = solve(pb, cfg);
    RunResult out;
    out.report = header("spectrum", cfg, &pb, opt.seed ? opt.seed : cfg.seed);
    out.report["spectral"] = spectral_json(gs.spectral);
    out.table.header = {"index", "energy", "ground"};
    for (std::size_t k = 0; k < gs.spectral.eigenvalues.size(); ++k) {
        out.table.rows.push_back({static_cast<long long>(k), gs.spectral.eigenvalues[k],
                                  static_cast<long long>(k < static_cast<std::size_t>(gs.spectral.q))});
    }
    out.summary = "q = " + std::to_string(gs.spectral.q) + ", gap = " + format_double(gs.spectral.gap) +
                  ", spread = " + format_double(gs.spectral.spread);
    return out;
}

TwistProfile profile_for(const Problem& pb, Site center, std::optional<int> radius, double kappa, bool& trivial)
{
    const auto field = distances_from(pb.lattice, center);
    const int reach = field.max_distance();
    trivial = reach < 2;
    if (trivial) {
        return trivial_profile(field, pb.dimension.D);
    }
    return build_theta(field, radius.value_or(reach), kappa, pb.dimension.D);
}

RunResult cmd_verify(const RunConfig& cfg, const RunOptions& opt)
{
    const auto seed = opt.seed ? opt.seed : cfg.seed;
    const auto pb = build_problem(cfg, seed, true);
    const double kappa = resolve_kappa(cfg, pb.dimension.D);
    const Site center = resolve_center(cfg, pb);
    const auto gs = solve(pb, cfg);
    bool trivial = false;
    const auto profile = profile_for(pb, center, cfg.twist.radius, kappa, trivial);
    const auto consts = lemma_constants(pb.model, profile, pb.dimension.C0, pb.bond_term_max);
    const double C1 = cfg.twist.C1.value_or(proof_C1(consts));
    const auto& tol = cfg.tolerances;

    RunResult out;
    out.table.header = {"name", "lattice", "N", "sector", "alpha", "kappa", "lhs", "rhs", "margin"};
    const auto lat_name = short_lattice(pb);
    const auto N = static_cast<long long>(pb.lattice.num_sites());
    bool violated = false;
    json reports = json::array();
    auto emit = [&](const LemmaReport& r, double alpha) {
        out.table.rows.push_back({r.name, lat_name, N, pb.sector, alpha, profile.kappa, r.lhs, r.rhs, r.margin});
        reports.push_back(report_json(r));
        violated = violated || !r.passed();
    };

    if (!trivial) {
        const double slack = theta_difference_slack(pb.lattice, profile);
        emit(make_report("theta_difference", slack, 0.0), 0.0);
    }
    std::vector<GapMarginReport> margins;
    std::vector<LemmaReport> doubles;
    json margin_json = json::array();
    for (const double a : cfg.twist.alpha) {
        const auto tw = build_KL(pb.lattice, pb.model, profile, a);
        const auto gm = gap_margin(pb.model.hamiltonian, tw, gs.spectral, tol.c4_fraction);
        margins.push_back(gm);
        emit(lemma_K_report(gm.k_norm, consts, a), a);
        emit(lemma_L_report(gm.l_norm, consts, a), a);
        const auto d = lemma_double_report(gm.double_commutator_norm, consts, a, C1);
        doubles.push_back(d);
        emit(d, a);
        auto me = check_matrix_element_lemma(tw.L, gs.projector, gm.f, tol.trials, seed.value_or(0));
        me.constants["alpha"] = a;
        emit(me, a);
        margin_json.push_back({{"alpha", a},
                               {"f", gm.f},
                               {"K_norm", gm.k_norm},
                               {"L_norm", gm.l_norm},
                               {"double_commutator_norm", gm.double_commutator_norm},
                               {"margin", gm.margin},
                               {"c4_required", gm.c4_required},
                               {"admissible", gm.admissible()}});
    }

    json alpha0_json = nullptr;
    json contour_json = nullptr;
    std::string alpha0_note;
    try {
        const double alpha0 = alpha0_search(margins);
        alpha0_json = alpha0;
        const auto it = std::find_if(margins.begin(), margins.end(), [&](const auto& m) { return m.alpha == alpha0; });
        const GapMarginReport& gm = *it;
        if (pb.model.hamiltonian.rows() <= cfg.twist.contour_max_dim) {
            const auto tw = build_KL(pb.lattice, pb.model, profile, alpha0);
            const CMatrix hp(twisted_hamiltonian(pb.model, tw));
            const auto contour = choose_contour(gs.spectral, gm.l_norm);
            QuadratureOptions qo;
            qo.defect_tolerance = tol.quadrature_defect;
            qo.threads = opt.threads;
            const auto tp = contour_project(hp, contour, qo);
            const RVector lg = log_gauge(pb.model.charges, profile.theta, 2.0 * alpha0);
            const CMatrix oracle = twisted_projector_oracle(gs.projector, lg);
            const double dist = (tp.P - oracle).norm() / std::max(1.0, oracle.norm());
            emit(make_report("contour_oracle", dist, 1e-6), alpha0);
            emit(make_report("projector_idempotence", tp.idempotence_defect, tol.quadrature_defect), alpha0);
            emit(make_report("quadrature_stability", tp.doubling_change, 1e-8), alpha0);
            const auto samples = sample_resolvent(hp, contour, tol.resolvent_samples);
            for (auto r : check_resolvent_lemmas(samples, contour, gm)) {
                emit(r, alpha0);
            }
            emit(norm_P2alpha_bound(tp.norm, contour, samples, gm), alpha0);
            contour_json = {{"alpha", alpha0},
                            {"E_minus", contour.e_minus},
                            {"E_plus", contour.e_plus},
                            {"y0", contour.y0},
                            {"C3", contour.c3},
                            {"nodes_per_segment", tp.nodes_per_segment},
                            {"conjugate_symmetry", tp.used_conjugate_symmetry},
                            {"contour_inflated", tp.contour_inflated},
                            {"P2alpha_norm", tp.norm},
                            {"idempotence_defect", tp.idempotence_defect},
                            {"doubling_change", tp.doubling_change},
                            {"oracle_distance", dist},
                            {"trace", tp.trace_real}};
        }
    } catch (const NoAdmissibleAlphaError& e) {
        alpha0_note = e.what();
    }

    const auto c1 = diagnose_C1(doubles);
    json j = header("verify-lemmas", cfg, &pb, seed);
    j["dimension"] = {{"D", pb.dimension.D}, {"C0", pb.dimension.C0}};
    j["twist"] = {{"center", center},
                  {"R", profile.R},
                  {"kappa", profile.kappa},
                  {"trivial", trivial},
                  {"C1", C1},
                  {"C1_from_proof", !cfg.twist.C1.has_value()}};
    j["spectral"] = spectral_json(gs.spectral);
    j["gap_margins"] = margin_json;
    j["alpha0"] = alpha0_json;
    if (!alpha0_note.empty()) {
        j["alpha0_note"] = alpha0_note;
    }
    j["contour"] = contour_json;
    j["C1_diagnostic"] = {{"C1_min", c1.c1_min}, {"C1_max", c1.c1_max}, {"alpha_independent", c1.alpha_independent}};
    j["reports"] = reports;
    j["all_margins_nonnegative"] = !violated;
    out.report = j;
    out.exit_code = violated ? kExitMargin : kExitOk;
    out.summary = std::to_string(reports.size()) + " lemma reports, " +
                  (violated ? "margin violation" : "all margins >= 0") + ", alpha0 = " +
                  (alpha0_json.is_null() ? std::string("none") : format_double(alpha0_json.get<double>()));
    return out;
}

/// Primary correlation operator (S+S- for spins, c+_up c_up for fermions) and its norm.
struct PrimaryPair {
    SparseOp op;
    double norm;
};

PrimaryPair primary_pair(const Problem& pb, Site m, Site n)
{
    if (pb.spins) {
        return {spin_pair_operator(*pb.spins, m, n), pb.model.correlation_pair_norm};
    }
    using F = FermionSectorBasis;
    return {fermion_hop(*pb.fermions, F::mode(m, 0), F::mode(n, 0)), pb.model.correlation_pair_norm};
}

RunResult cmd_bound_chain(const RunConfig& cfg, const RunOptions& opt)
{
    const auto seed = opt.seed ? opt.seed : cfg.seed;
    const auto pb = build_problem(cfg, seed, true);
    const double kappa = resolve_kappa(cfg, pb.dimension.D);
    const Site center = resolve_center(cfg, pb);
    const auto gs = solve(pb, cfg);
    const auto field = distances_from(pb.lattice, center);
    const auto q = static_cast<Index>(gs.spectral.q);

    RunResult out;
    out.table.header = {"lattice", "N",   "sector", "m",      "n",           "R",
                        "alpha",   "lhs", "rhs",    "margin", "p2alpha_norm", "identity_defect"};
    const auto N = static_cast<long long>(pb.lattice.num_sites());
    bool violated = false;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_identity = 0.0;
    long long checks = 0;
    for (Site n = 0; n < pb.lattice.num_sites(); ++n) {
        const int R = field.dist[static_cast<std::size_t>(n)];
        if (R < 2) {
            continue;
        }
        const auto profile = build_theta(field, R, kappa, pb.dimension.D);
        const auto pair = primary_pair(pb, center, n);
        const CorrelationRecord rec{center, n, R, ground_expectation(pair.op, gs.projector, q)};
        for (const double a : cfg.twist.alpha) {
            const double p2 = twisted_projector_norm(gs.projector, log_gauge(pb.model.charges, profile.theta, 2.0 * a));
            auto r = verify_bound_chain(rec, pair.norm, p2, profile, a);
            const auto id = gauge_identity(pair.op, gs.projector, pb.model.charges, profile, n, a);
            r.identity_defect = id.defect / std::max(1.0, std::abs(id.direct));
            const bool ok = r.margin >= 0.0 && r.identity_defect <= cfg.tolerances.identity_tolerance;
            violated = violated || !ok;
            worst_margin = std::min(worst_margin, r.margin);
            worst_identity = std::max(worst_identity, r.identity_defect);
            ++checks;
            out.table.rows.push_back({pb.lattice.name(), N, pb.sector, static_cast<long long>(r.m),
                                      static_cast<long long>(r.n), static_cast<long long>(r.R), r.alpha, r.lhs,
                                      r.rhs, r.margin, r.p2alpha_norm, r.identity_defect});
        }
    }
    json j = header("bound-chain", cfg, &pb, seed);
    j["dimension"] = {{"D", pb.dimension.D}, {"C0", pb.dimension.C0}};
    j["twist"] = {{"center", center}, {"kappa", kappa}, {"alpha", cfg.twist.alpha}};
    j["spectral"] = spectral_json(gs.spectral);
    j["correlation"] = pb.spins ? "S+_m S-_n" : "c+_{m,up} c_{n,up}";
    j["checks"] = checks;
    j["worst_margin"] = checks ? json(worst_margin) : json(nullptr);
    j["worst_identity_defect"] = worst_identity;
    j["all_margins_nonnegative"] = !violated;
    out.report = j;
    out.exit_code = violated ? kExitMargin : kExitOk;
    out.summary = std::to_string(checks) + " bound-chain checks, " +
                  (violated ? "violation found" : "all margins >= 0");
    return out;
}

struct KindRecords {
    std::string kind;
    double norm;
    std::vector<CorrelationRecord> records;
};

std::vector<KindRecords> correlations(const Problem& pb, const GroundSector& gs)
{
    const auto q = static_cast<Index>(gs.spectral.q);
    const int n_sites = pb.lattice.num_sites();
    std::vector<std::vector<int>> dist;
    for (Site m = 0; m < n_sites; ++m) {
        dist.push_back(distances_from(pb.lattice, m).dist);
    }
    std::vector<KindRecords> out;
    if (pb.spins) {
        KindRecords k{"SpSm", pb.model.correlation_pair_norm, {}};
        for (Site m = 0; m < n_sites; ++m) {
            for (Site n = 0; n < n_sites; ++n) {
                k.records.push_back(transverse_correlation(gs.projector, q, m, n, *pb.spins, dist[m][n]));
            }
        }
        out.push_back(std::move(k));
        return out;
    }
    const auto norms = fermion_pair_norms();
    const bool want_spin = !pb.hubbard->has_transverse_field();
    KindRecords up{"hop_up", norms.hop, {}}, dn{"hop_down", norms.hop, {}}, pair{"pair", norms.pair, {}},
        spin{"spin", norms.spin, {}};
    for (Site m = 0; m < n_sites; ++m) {
        for (Site n = 0; n < n_sites; ++n) {
            const int R = dist[m][n];
            const auto c = fermion_correlations(gs.projector, q, m, n, *pb.fermions, *pb.hubbard, want_spin);
            up.records.push_back({m, n, R, c.hop_up});
            dn.records.push_back({m, n, R, c.hop_down});
            pair.records.push_back({m, n, R, c.pair});
            if (c.spin) {
                spin.records.push_back({m, n, R, *c.spin});
            }
        }
    }
    out.push_back(std::move(up));
    out.push_back(std::move(dn));
    out.push_back(std::move(pair));
    if (want_spin) {
        out.push_back(std::move(spin));
    }
    return out;
}

RunResult cmd_sweep(const RunConfig& cfg, const RunOptions& opt)
{
    const auto seed = opt.seed ? opt.seed : cfg.seed;
    const auto pb = build_problem(cfg, seed);
    const auto gs = solve(pb, cfg);
    RunResult out;
    out.table.header = {"lattice", "N", "sector", "kind", "m", "n", "R", "re", "im", "abs"};
    const auto N = static_cast<long long>(pb.lattice.num_sites());
    json kinds = json::array();
    bool bounded = true;
    for (const auto& k : correlations(pb, gs)) {
        double worst = 0.0;
        for (const auto& r : k.records) {
            out.table.rows.push_back({pb.lattice.name(), N, pb.sector, k.kind, static_cast<long long>(r.m),
                                      static_cast<long long>(r.n), static_cast<long long>(r.R), r.value.real(),
                                      r.value.imag(), r.abs()});
            worst = std::max(worst, r.abs());
        }
        bounded = bounded && worst <= k.norm * (1.0 + 1e-12);
        kinds.push_back({{"kind", k.kind}, {"pair_norm", k.norm}, {"max_abs", worst}, {"records", k.records.size()}});
    }
    json j = header("sweep", cfg, &pb, seed);
    j["spectral"] = spectral_json(gs.spectral);
    j["kinds"] = kinds;
    j["bounded_by_pair_norm"] = bounded;
    out.report = j;
    out.exit_code = bounded ? kExitOk : kExitMargin;
    out.summary = std::to_string(out.table.rows.size()) + " correlation records";
    return out;
}

json fit_json(const DecayFit& f)
{
    return {{"gamma", f.gamma},
            {"prefactor", f.prefactor},
            {"rms", f.rms},
            {"theory_exponent", f.theory_exponent},
            {"free_exponent", f.free_exponent},
            {"free_gamma", f.free_gamma},
            {"free_prefactor", f.free_prefactor},
            {"free_rms", f.free_rms},
            {"at_least_theory", f.at_least_theory},
            {"points", f.points}};
}

RunResult cmd_fit(const RunConfig& cfg, const RunOptions& opt)
{
    const auto seed = opt.seed ? opt.seed : cfg.seed;
    const auto pb = build_problem(cfg, seed);
    const auto gs = solve(pb, cfg);
    const auto all = correlations(pb, gs);
    RunResult out;
    out.table.header = {"kind", "R", "envelope", "fit", "free_fit"};
    json fits = json::object();
    bool primary_ok = false;
    std::string primary_error;
    for (std::size_t k = 0; k < all.size(); ++k) {
        const auto& kr = all[k];
        try {
            const auto f = fit_decay(kr.records, pb.dimension.D);
            fits[kr.kind] = fit_json(f);
            std::map<int, double> env;
            for (const auto& r : kr.records) {
                if (r.R >= 2 && r.abs() > 1e-12) {
                    env[r.R] = std::max(env[r.R], r.abs());
                }
            }
            for (const auto& [R, v] : env) {
                const double x = static_cast<double>(R);
                out.table.rows.push_back({kr.kind, static_cast<long long>(R), v,
                                          f.prefactor * std::exp(-f.gamma * std::pow(x, f.theory_exponent)),
                                          f.free_prefactor * std::exp(-f.free_gamma * std::pow(x, f.free_exponent))});
            }
            if (k == 0) {
                primary_ok = true;
            }
        } catch (const InsufficientDataError& e) {
            fits[kr.kind] = {{"error", e.what()}};
            if (k == 0) {
                primary_error = e.what();
            }
        }
    }
    json j = header("fit", cfg, &pb, seed);
    j["dimension"] = {{"D", pb.dimension.D}, {"C0", pb.dimension.C0}};
    j["spectral"] = spectral_json(gs.spectral);
    j["fits"] = fits;
    out.report = j;
    out.exit_code = primary_ok ? kExitOk : kExitFailure;
    if (primary_ok) {
        const auto& f = fits[all.front().kind];
        out.summary = all.front().kind + ": gamma = " + format_double(f["gamma"].get<double>()) +
                      ", free exponent = " + format_double(f["free_exponent"].get<double>());
    } else {
        out.summary = primary_error;
    }
    return out;
}

}  // namespace

RunResult run_command(const std::string& command, const RunConfig& cfg, const RunOptions& options)
{
    if (command == "lattice") {
        return cmd_lattice(cfg, options);
    }
    if (command == "spectrum") {
        return cmd_spectrum(cfg, options);
    }
    if (command == "verify-lemmas") {
        return cmd_verify(cfg, options);
    }
    if (command == "bound-chain") {
        return cmd_bound_chain(cfg, options);
    }
    if (command == "sweep") {
        return cmd_sweep(cfg, options);
    }
    if (command == "fit") {
        return cmd_fit(cfg, options);
    }
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace u1gap
