#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "u1gap/config.hpp"
#include "u1gap/decay.hpp"
#include "u1gap/lattice.hpp"
#include "u1gap/model.hpp"

namespace u1gap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoGap = 3;
inline constexpr int kExitMargin = 4;

inline constexpr int kSchemaVersion = 1;

/// Lattice, sector basis and assembled hamiltonian for one config.
struct Problem {
    Lattice lattice;
    DimensionEstimate dimension;
    std::string sector;
    std::optional<SpinSectorBasis> spins;
    std::optional<FermionSectorBasis> fermions;
    std::optional<HubbardParams> hubbard;
    SectorModel model;
    double bond_term_max = 0.0;
};

/// Certificate used for runs: exact ln3/ln2 for the gasket, the grid estimate otherwise.
DimensionEstimate lattice_dimension(const LatticeSpec& spec, const Lattice& lat);

/// `seed` is the effective seed (command line first, then config). With `require_twist` a
/// lattice outside 1 <= D < 2 is rejected before any basis is built.
Problem build_problem(const RunConfig& cfg, std::optional<std::uint64_t> seed, bool require_twist = false);

Lattice build_lattice(const LatticeSpec& spec, const std::string& base_dir = ".");

/// Heisenberg-type couplings for the config: homogeneous, zigzag (j2 on next-nearest bonds),
/// or seeded random draws.
XXZCouplings xxz_couplings(const Lattice& lat, const ModelSpec& spec, std::optional<std::uint64_t> seed);

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Comma-separated, doubles as %.17g, header first.
void write_csv(std::ostream& out, const Table& table);
std::string format_double(double v);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

struct RunResult {
    nlohmann::ordered_json report;
    Table table;
    int exit_code = kExitOk;
    std::string summary;
};

/// Commands: lattice, spectrum, verify-lemmas, bound-chain, sweep, fit. NoGapError and
/// ConfigError propagate; callers map them to exit codes.
RunResult run_command(const std::string& command, const RunConfig& cfg, const RunOptions& options);

const std::vector<std::string>& command_names();

}  // namespace u1gap
