#include "u1gap/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace u1gap {

ConfigError::ConfigError(const std::string& what, int line_)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what), line(line_)
{
}

std::vector<double> default_alpha_grid()
{
    std::vector<double> g;
    for (int k = 1; k <= 100; ++k) {
        g.push_back(0.005 * k);
    }
    return g;
}

namespace {

int line_of(const YAML::Node& n)
{
    const auto mark = n.Mark();
    return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& what)
{
    throw ConfigError(what, line_of(n));
}

void require_map(const YAML::Node& n, const std::string& where)
{
    if (!n.IsMap()) {
        fail(n, "'" + where + "' must be a mapping");
    }
}

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed)
{
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            fail(kv.first, "unknown key '" + key + "' in '" + where + "'");
        }
    }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key)
{
    if (!n.IsScalar()) {
        fail(n, "'" + key + "' must be a scalar");
    }
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        fail(n, "cannot read '" + key + "' from '" + n.Scalar() + "'");
    }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out)
{
    if (const auto n = parent[key]) {
        out = scalar<T>(n, key);
    }
}

bool is_auto(const YAML::Node& n)
{
    return n.IsScalar() && n.Scalar() == "auto";
}

template <class T>
void read_auto(const YAML::Node& parent, const char* key, std::optional<T>& out)
{
    if (const auto n = parent[key]) {
        if (is_auto(n)) {
            out.reset();
        } else {
            out = scalar<T>(n, key);
        }
    }
}

void read_lattice(const YAML::Node& n, LatticeSpec& s)
{
    require_map(n, "lattice");
    check_keys(n, "lattice", {"kind", "size", "generation", "lx", "ly", "periodic", "path"});
    read(n, "kind", s.kind);
    read(n, "size", s.size);
    read(n, "generation", s.generation);
    read(n, "lx", s.lx);
    read(n, "ly", s.ly);
    read(n, "periodic", s.periodic);
    read(n, "path", s.path);
    const YAML::Node at = n["kind"] ? n["kind"] : n;
    if (s.kind == "chain" || s.kind == "zigzag") {
        if (s.size < 2) {
            fail(n["size"] ? n["size"] : at, "'size' must be at least 2");
        }
    } else if (s.kind == "sierpinski") {
        if (s.generation < 1) {
            fail(n["generation"] ? n["generation"] : at, "'generation' must be at least 1");
        }
    } else if (s.kind == "square") {
        if (s.lx < 1 || s.ly < 1) {
            fail(at, "square lattice needs 'lx' and 'ly' >= 1");
        }
    } else if (s.kind == "edges") {
        if (s.path.empty()) {
            fail(at, "edge-list lattice needs 'path'");
        }
    } else {
        fail(at, "unknown lattice kind '" + s.kind + "'");
    }
}

void read_model(const YAML::Node& n, ModelSpec& s)
{
    require_map(n, "model");
    check_keys(n, "model",
               {"kind", "spin", "M", "jxy", "jz", "j2", "random", "t", "U", "V", "N", "two_sz", "field"});
    read(n, "kind", s.kind);
    const YAML::Node at = n["kind"] ? n["kind"] : n;
    if (s.kind != "xxz" && s.kind != "hubbard") {
        fail(at, "unknown model kind '" + s.kind + "'");
    }
    read(n, "spin", s.spin);
    read(n, "M", s.M);
    read(n, "jxy", s.jxy);
    read(n, "jz", s.jz);
    read(n, "j2", s.j2);
    read(n, "random", s.random);
    if (const auto r = n["random"]) {
        s.random_line = line_of(r);
    }
    read(n, "t", s.t);
    read(n, "U", s.U);
    read(n, "V", s.V);
    read(n, "N", s.N);
    if (const auto sz = n["two_sz"]) {
        s.two_sz = scalar<int>(sz, "two_sz");
    }
    if (const auto f = n["field"]) {
        if (!f.IsSequence() || f.size() != 3) {
            fail(f, "'field' must be a list [Bx, By, Bz]");
        }
        s.field.clear();
        for (const auto& v : f) {
            s.field.push_back(scalar<double>(v, "field"));
        }
    }
    if (s.kind == "xxz") {
        const double two_s = 2.0 * s.spin;
        if (!(s.spin > 0.0) || std::abs(two_s - std::round(two_s)) > 1e-12) {
            fail(n["spin"] ? n["spin"] : at, "'spin' must be a positive multiple of 1/2");
        }
        const double two_m = 2.0 * s.M;
        if (std::abs(two_m - std::round(two_m)) > 1e-12) {
            fail(n["M"] ? n["M"] : at, "'M' must be a multiple of 1/2");
        }
    } else if (s.N < 0) {
        fail(n["N"], "'N' must be nonnegative");
    }
}

std::vector<double> read_alpha(const YAML::Node& n)
{
    std::vector<double> out;
    if (n.IsSequence()) {
        for (const auto& v : n) {
            out.push_back(scalar<double>(v, "alpha"));
        }
    } else if (n.IsMap()) {
        check_keys(n, "alpha", {"start", "stop", "step"});
        double start = 0.0, stop = 0.0, step = 0.0;
        if (!n["start"] || !n["stop"] || !n["step"]) {
            fail(n, "'alpha' range needs start, stop and step");
        }
        start = scalar<double>(n["start"], "start");
        stop = scalar<double>(n["stop"], "stop");
        step = scalar<double>(n["step"], "step");
        if (!(step > 0.0) || stop < start) {
            fail(n, "'alpha' range needs step > 0 and stop >= start");
        }
        const long count = std::lround(std::floor((stop - start) / step + 1e-9));
        if (count > 100000) {
            fail(n, "'alpha' range has too many points");
        }
        for (long k = 0; k <= count; ++k) {
            out.push_back(start + static_cast<double>(k) * step);
        }
    } else if (is_auto(n)) {
        return default_alpha_grid();
    } else {
        fail(n, "'alpha' must be a list, a {start, stop, step} range, or auto");
    }
    if (out.empty()) {
        fail(n, "'alpha' grid is empty");
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!(out[k] > 0.0 && out[k] <= 2.0)) {
            fail(n, "alpha values must lie in (0, 2]");
        }
        if (k > 0 && !(out[k] > out[k - 1])) {
            fail(n, "alpha grid must be strictly increasing");
        }
    }
    return out;
}

void read_twist(const YAML::Node& n, TwistSpec& s)
{
    require_map(n, "twist");
    check_keys(n, "twist", {"kappa", "center", "radius", "alpha", "C1", "contour_max_dim"});
    read_auto(n, "kappa", s.kappa);
    read(n, "center", s.center);
    read_auto(n, "radius", s.radius);
    read_auto(n, "C1", s.C1);
    read(n, "contour_max_dim", s.contour_max_dim);
    if (const auto a = n["alpha"]) {
        s.alpha = read_alpha(a);
    }
    if (s.radius && *s.radius < 2) {
        fail(n["radius"], "'radius' must be at least 2");
    }
    if (s.C1 && !(*s.C1 > 0.0)) {
        fail(n["C1"], "'C1' must be positive");
    }
}

void read_tolerances(const YAML::Node& n, ToleranceSpec& s)
{
    require_map(n, "tolerances");
    check_keys(n, "tolerances",
               {"eps_deg", "gap_min", "quadrature_defect", "c4_fraction", "trials", "resolvent_samples",
                "identity_tolerance"});
    read_auto(n, "eps_deg", s.eps_deg);
    read(n, "gap_min", s.gap_min);
    read(n, "quadrature_defect", s.quadrature_defect);
    read(n, "c4_fraction", s.c4_fraction);
    read(n, "trials", s.trials);
    read(n, "resolvent_samples", s.resolvent_samples);
    read(n, "identity_tolerance", s.identity_tolerance);
    if (!(s.gap_min > 0.0)) {
        fail(n["gap_min"], "'gap_min' must be positive");
    }
    if (!(s.c4_fraction > 0.0 && s.c4_fraction < 0.5)) {
        fail(n["c4_fraction"], "'c4_fraction' must lie in (0, 1/2)");
    }
    if (s.trials < 1 || s.resolvent_samples < 1) {
        fail(n, "'trials' and 'resolvent_samples' must be positive");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
    }
    if (!root.IsMap()) {
        throw ConfigError("config must be a mapping of sections", root ? line_of(root) : 1);
    }
    check_keys(root, "config", {"seed", "lattice", "model", "twist", "tolerances"});
    RunConfig cfg;
    cfg.base_dir = base_dir;
    if (const auto s = root["seed"]) {
        cfg.seed = scalar<std::uint64_t>(s, "seed");
    }
    if (!root["lattice"]) {
        throw ConfigError("missing 'lattice' section", 1);
    }
    read_lattice(root["lattice"], cfg.lattice);
    if (!root["model"]) {
        throw ConfigError("missing 'model' section", 1);
    }
    read_model(root["model"], cfg.model);
    if (const auto t = root["twist"]) {
        read_twist(t, cfg.twist);
    }
    if (cfg.twist.alpha.empty()) {
        cfg.twist.alpha = default_alpha_grid();
    }
    if (const auto t = root["tolerances"]) {
        read_tolerances(t, cfg.tolerances);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto parent = std::filesystem::path(path).parent_path();
    return parse_config(buf.str(), parent.empty() ? "." : parent.string());
}

}  // namespace u1gap
