#include <doctest.h>

#include <sstream>

#include "u1gap/pipeline.hpp"

using namespace u1gap;

namespace {

const char* kBase = R"(seed: 5
lattice:
  kind: chain
  size: 6
model:
  kind: xxz
  jxy: 1.0
  jz: 4.0
)";

int error_line(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -1;
}

}  // namespace

TEST_CASE("config parsing")
{
    const auto cfg = parse_config(kBase);
    CHECK(cfg.seed == 5u);
    CHECK(cfg.lattice.size == 6);
    CHECK(cfg.model.jz == 4.0);
    CHECK(cfg.twist.alpha == default_alpha_grid());
    CHECK(cfg.twist.alpha.front() == 0.005);
    CHECK(cfg.twist.alpha.size() == 100);
    CHECK_FALSE(cfg.twist.kappa.has_value());

    const auto ranged = parse_config(std::string(kBase) + "twist:\n  kappa: 0.7\n  alpha: {start: 0.1, stop: 1.0, step: 0.1}\n");
    CHECK(ranged.twist.alpha.size() == 10);
    CHECK(ranged.twist.alpha.back() == doctest::Approx(1.0));
    CHECK(*ranged.twist.kappa == 0.7);
}

TEST_CASE("config errors carry line numbers")
{
    CHECK(error_line(std::string(kBase) + "  bogus: 1\n") == 9);
    CHECK(error_line("lattice:\n  kind: chain\n  size: x\nmodel:\n  kind: xxz\n") == 3);
    CHECK(error_line("lattice:\n  kind: hexagon\nmodel: {kind: xxz}\n") == 2);
    CHECK(error_line("lattice: [1, 2\n") > 0);
    CHECK(error_line(std::string(kBase) + "twist:\n  alpha: [0.2, 0.1]\n") == 10);
    CHECK(error_line(std::string(kBase) + "twist:\n  alpha: [0.0]\n") == 10);
    CHECK(error_line(std::string(kBase) + "twist:\n  alpha: [2.5]\n") == 10);
    CHECK(error_line("model:\n  kind: xxz\n") == 1);  // missing lattice
    CHECK_THROWS_WITH(parse_config(std::string(kBase) + "  spin: 0.7\n"), doctest::Contains("line 9"));
}

TEST_CASE("random couplings need a seed")
{
    auto cfg = parse_config("lattice: {kind: chain, size: 4}\nmodel:\n  kind: xxz\n  random: true\n");
    CHECK_THROWS_WITH_AS(build_problem(cfg, std::nullopt), doctest::Contains("line 4"), ConfigError);
    const auto a = build_problem(cfg, 9u);
    const auto b = build_problem(cfg, 9u);
    CHECK(max_abs_entry(SparseOp(a.model.hamiltonian - b.model.hamiltonian)) == 0.0);
}

TEST_CASE("problem assembly")
{
    const auto mg = build_problem(
        parse_config("lattice: {kind: zigzag, size: 8, periodic: true}\nmodel: {kind: xxz, jxy: 0.5, jz: 1.0, j2: 0.5}\n"),
        std::nullopt);
    CHECK(mg.spins->dim() == 70);
    CHECK(mg.dimension.D == 1.0);

    const auto hub = build_problem(
        parse_config("lattice: {kind: chain, size: 4}\nmodel: {kind: hubbard, N: 4, two_sz: 0, U: 2.0}\n"), std::nullopt);
    CHECK(hub.fermions->dim() == 36);
    CHECK(hub.sector == "N=4,2Sz=0");

    // a 64-site sector is refused before enumeration, and the square lattice before that
    const auto sq = parse_config("lattice: {kind: square, lx: 8, ly: 8}\nmodel: {kind: xxz}\n");
    CHECK_THROWS_WITH(build_problem(sq, std::nullopt, true), doctest::Contains("outside the twist"));
    CHECK_THROWS_WITH(build_problem(sq, std::nullopt), doctest::Contains("sector dimension"));
}

TEST_CASE("csv formatting")
{
    Table t{{"a", "b", "c"}, {{1LL, 0.1, std::string("x")}, {2LL, 1.0 / 3.0, std::string("y")}}};
    std::ostringstream out;
    write_csv(out, t);
    CHECK(out.str() == "a,b,c\n1,0.10000000000000001,x\n2,0.33333333333333331,y\n");
}
