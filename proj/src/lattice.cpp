#include "u1gap/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace u1gap {

Lattice::Lattice(int num_sites, std::vector<Bond> bonds, std::string name)
    : num_sites_(num_sites), bonds_(std::move(bonds)), name_(std::move(name))
{
    if (num_sites_ < 1) {
        throw std::invalid_argument("lattice needs at least one site");
    }
    adjacency_.assign(static_cast<std::size_t>(num_sites_), {});
    std::set<std::pair<Site, Site>> seen;
    for (const auto& [a, b] : bonds_) {
        if (a < 0 || b < 0 || a >= num_sites_ || b >= num_sites_) {
            throw std::invalid_argument("bond endpoint is not a valid site");
        }
        if (a == b) {
            throw std::invalid_argument("self-loop bond");
        }
        if (!seen.insert(std::minmax(a, b)).second) {
            throw std::invalid_argument("duplicate bond");
        }
        adjacency_[static_cast<std::size_t>(a)].push_back(b);
        adjacency_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : adjacency_) {
        std::sort(nb.begin(), nb.end());
    }
    const auto field = distances_from(*this, 0);
    if (std::any_of(field.dist.begin(), field.dist.end(), [](int d) { return d < 0; })) {
        throw std::invalid_argument("lattice is not connected");
    }
}

int Lattice::max_degree() const
{
    std::size_t d = 0;
    for (const auto& nb : adjacency_) {
        d = std::max(d, nb.size());
    }
    return static_cast<int>(d);
}

bool Lattice::has_bond(Site a, Site b) const
{
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

Lattice build_chain(int n, bool periodic)
{
    if (n < 2) {
        throw std::invalid_argument("chain needs at least 2 sites");
    }
    std::vector<Bond> bonds;
    for (int i = 0; i + 1 < n; ++i) {
        bonds.emplace_back(i, i + 1);
    }
    if (periodic && n > 2) {
        bonds.emplace_back(n - 1, 0);
    }
    return Lattice(n, std::move(bonds), (periodic ? "ring" : "chain") + std::to_string(n));
}

Lattice build_zigzag_chain(int n, bool periodic)
{
    if (n < 3) {
        throw std::invalid_argument("zigzag chain needs at least 3 sites");
    }
    std::vector<Bond> bonds;
    for (int i = 0; i + 1 < n; ++i) {
        bonds.emplace_back(i, i + 1);
    }
    if (periodic) {
        bonds.emplace_back(n - 1, 0);
    }
    for (int i = 0; i + 2 < n; ++i) {
        bonds.emplace_back(i, i + 2);
    }
    if (periodic && n > 4) {
        bonds.emplace_back(n - 2, 0);
        bonds.emplace_back(n - 1, 1);
    }
    return Lattice(n, std::move(bonds), "zigzag" + std::to_string(n));
}

namespace {

using Point = std::pair<int, int>;

void gasket_edges(int generation, Point origin, std::set<std::pair<Point, Point>>& edges)
{
    const auto add = [&](Point a, Point b) { edges.insert(std::minmax(a, b)); };
    if (generation == 0) {
        const Point p0 = origin;
        const Point p1{origin.first + 1, origin.second};
        const Point p2{origin.first, origin.second + 1};
        add(p0, p1);
        add(p0, p2);
        add(p1, p2);
        return;
    }
    const int half = 1 << (generation - 1);
    gasket_edges(generation - 1, origin, edges);
    gasket_edges(generation - 1, {origin.first + half, origin.second}, edges);
    gasket_edges(generation - 1, {origin.first, origin.second + half}, edges);
}

}  // namespace

Lattice build_sierpinski(int generation)
{
    if (generation < 1) {
        throw std::invalid_argument("Sierpinski generation must be >= 1");
    }
    if (generation > 12) {
        throw std::invalid_argument("Sierpinski generation too large");
    }
    std::set<std::pair<Point, Point>> edges;
    gasket_edges(generation, {0, 0}, edges);
    // Sites ordered by (row, column) with row = a + b measured from the corner (0,0).
    std::set<Point> points;
    for (const auto& [a, b] : edges) {
        points.insert(a);
        points.insert(b);
    }
    std::vector<Point> ordered(points.begin(), points.end());
    std::sort(ordered.begin(), ordered.end(), [](const Point& x, const Point& y) {
        const int rx = x.first + x.second;
        const int ry = y.first + y.second;
        return rx != ry ? rx < ry : x.second < y.second;
    });
    std::map<Point, Site> index;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        index[ordered[i]] = static_cast<Site>(i);
    }
    std::vector<Bond> bonds;
    bonds.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        bonds.emplace_back(std::minmax(index[a], index[b]));
    }
    std::sort(bonds.begin(), bonds.end());
    return Lattice(static_cast<int>(ordered.size()), std::move(bonds),
                   "sierpinski" + std::to_string(generation));
}

Lattice build_square(int lx, int ly, bool periodic)
{
    if (lx < 2 || ly < 2) {
        throw std::invalid_argument("square lattice needs lx, ly >= 2");
    }
    const auto id = [lx](int x, int y) { return y * lx + x; };
    std::set<std::pair<Site, Site>> bonds;
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            if (x + 1 < lx || (periodic && lx > 2)) {
                bonds.insert(std::minmax(id(x, y), id((x + 1) % lx, y)));
            }
            if (y + 1 < ly || (periodic && ly > 2)) {
                bonds.insert(std::minmax(id(x, y), id(x, (y + 1) % ly)));
            }
        }
    }
    return Lattice(lx * ly, std::vector<Bond>(bonds.begin(), bonds.end()),
                   "square" + std::to_string(lx) + "x" + std::to_string(ly));
}

Lattice read_edge_list(std::istream& in, const std::string& name)
{
    std::map<long long, Site> ids;
    std::vector<Bond> bonds;
    std::string line;
    int line_no = 0;
    const auto site_of = [&ids](long long raw) {
        const auto [it, inserted] = ids.emplace(raw, static_cast<Site>(ids.size()));
        return it->second;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        long long a = 0;
        long long b = 0;
        if (!(ls >> a)) {
            continue;
        }
        std::string rest;
        if (!(ls >> b) || (ls >> rest)) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": expected two integer site ids");
        }
        const Site sa = site_of(a);
        const Site sb = site_of(b);
        bonds.emplace_back(sa, sb);
    }
    return Lattice(static_cast<int>(ids.size()), std::move(bonds), name);
}

Lattice read_edge_list_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open edge list: " + path);
    }
    return read_edge_list(in, path);
}

int DistanceField::max_distance() const
{
    return dist.empty() ? 0 : *std::max_element(dist.begin(), dist.end());
}

DistanceField distances_from(const Lattice& lat, Site m)
{
    if (m < 0 || m >= lat.num_sites()) {
        throw std::out_of_range("unknown site id " + std::to_string(m));
    }
    DistanceField field{m, std::vector<int>(static_cast<std::size_t>(lat.num_sites()), -1)};
    std::queue<Site> frontier;
    field.dist[static_cast<std::size_t>(m)] = 0;
    frontier.push(m);
    while (!frontier.empty()) {
        const Site s = frontier.front();
        frontier.pop();
        for (const Site t : lat.neighbors(s)) {
            auto& d = field.dist[static_cast<std::size_t>(t)];
            if (d < 0) {
                d = field.dist[static_cast<std::size_t>(s)] + 1;
                frontier.push(t);
            }
        }
    }
    return field;
}

std::vector<Site> sphere(const DistanceField& field, int r)
{
    std::vector<Site> out;
    for (std::size_t i = 0; i < field.dist.size(); ++i) {
        if (field.dist[i] == r) {
            out.push_back(static_cast<Site>(i));
        }
    }
    return out;
}

std::vector<Site> sphere(const Lattice& lat, Site m, int r)
{
    return sphere(distances_from(lat, m), r);
}

std::vector<double> dimension_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || hi < lo) {
        throw std::invalid_argument("invalid dimension grid");
    }
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
        grid.push_back(lo + static_cast<double>(k) * step);
    }
    return grid;
}

namespace {

std::vector<int> max_sphere_sizes(const Lattice& lat)
{
    std::vector<int> best;
    for (Site m = 0; m < lat.num_sites(); ++m) {
        const auto field = distances_from(lat, m);
        std::vector<int> counts(static_cast<std::size_t>(field.max_distance()) + 1, 0);
        for (const int d : field.dist) {
            ++counts[static_cast<std::size_t>(d)];
        }
        if (best.size() + 1 < counts.size()) {
            best.resize(counts.size() - 1, 0);
        }
        for (std::size_t r = 1; r < counts.size(); ++r) {
            best[r - 1] = std::max(best[r - 1], counts[r]);
        }
    }
    return best;
}

DimensionEstimate certificate_from(const std::vector<int>& spheres, double D)
{
    DimensionEstimate est;
    est.D = D;
    est.max_sphere = spheres;
    est.max_radius = static_cast<int>(spheres.size());
    for (std::size_t i = 0; i < spheres.size(); ++i) {
        const double r = static_cast<double>(i + 1);
        est.C0 = std::max(est.C0, spheres[i] / std::pow(r, D - 1.0));
    }
    for (std::size_t i = 0; i < spheres.size(); ++i) {
        const double r = static_cast<double>(i + 1);
        est.residuals.push_back(est.C0 * std::pow(r, D - 1.0) - spheres[i]);
    }
    est.outside_theorem_scope = D >= 2.0 - 1e-12;
    return est;
}

}  // namespace

DimensionEstimate certify_dimension(const Lattice& lat, double D)
{
    return certificate_from(max_sphere_sizes(lat), D);
}

DimensionEstimate estimate_dimension(const Lattice& lat, const std::vector<double>& grid)
{
    if (grid.empty()) {
        throw std::invalid_argument("empty dimension grid");
    }
    const auto spheres = max_sphere_sizes(lat);
    if (grid.size() == 1) {
        return certificate_from(spheres, grid.front());
    }
    const double anchor = spheres.empty() ? 0.0 : spheres.front();
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (const double D : sorted) {
        auto est = certificate_from(spheres, D);
        if (est.C0 <= anchor * (1.0 + 1e-12)) {
            return est;
        }
    }
    return certificate_from(spheres, sorted.back());
}

}  // namespace u1gap
