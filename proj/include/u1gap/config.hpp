#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace u1gap {

/// Parse or validation failure; `line` is 1-based, 0 when no position is known.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line);
    int line = 0;
};

struct LatticeSpec {
    std::string kind = "chain";  // chain | zigzag | sierpinski | square | edges
    int size = 0;                // chain, zigzag
    int generation = 0;          // sierpinski
    int lx = 0;
    int ly = 0;
    bool periodic = false;
    std::string path;            // edges
};

struct ModelSpec {
    std::string kind = "xxz";  // xxz | hubbard
    // xxz
    double spin = 0.5;
    double M = 0.0;
    double jxy = 1.0;
    double jz = 1.0;
    /// Next-nearest-neighbour scale for zigzag lattices (bond couplings times j2 on rung bonds).
    double j2 = 1.0;
    bool random = false;  // draws from [-jxy, jxy], [-jz, jz]
    int random_line = 0;
    // hubbard
    double t = 1.0;
    double U = 0.0;
    double V = 0.0;
    int N = 0;
    std::optional<int> two_sz;
    std::vector<double> field;  // (Bx, By, Bz) on every site
};

struct TwistSpec {
    std::optional<double> kappa;  // empty = window midpoint
    int center = 0;
    std::optional<int> radius;    // empty = largest distance from the center
    std::vector<double> alpha;
    std::optional<double> C1;     // empty = constant from the proof counting
    /// Contour projector and resolvent checks are skipped above this sector dimension.
    int contour_max_dim = 400;
};

struct ToleranceSpec {
    std::optional<double> eps_deg;
    double gap_min = 1e-3;
    double quadrature_defect = 1e-8;
    double c4_fraction = 0.125;
    int trials = 100;
    int resolvent_samples = 16;
    double identity_tolerance = 1e-10;
};

struct RunConfig {
    std::optional<std::uint64_t> seed;
    LatticeSpec lattice;
    ModelSpec model;
    TwistSpec twist;
    ToleranceSpec tolerances;
    /// Directory the config was read from; relative edge-list paths resolve against it.
    std::string base_dir = ".";
};

/// Twist-strength grid used when the config gives none: 0.005, 0.010, ..., 0.5.
std::vector<double> default_alpha_grid();

RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

}  // namespace u1gap
