#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace u1gap {

using Site = int;
using Bond = std::pair<Site, Site>;

/// Connected simple graph with dense 0-based site ids. Immutable after construction.
class Lattice {
public:
    /// Validates connectivity, bond endpoints, self-loops and duplicates.
    Lattice(int num_sites, std::vector<Bond> bonds, std::string name = "graph");

    int num_sites() const { return num_sites_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    const std::vector<Site>& neighbors(Site s) const { return adjacency_.at(static_cast<std::size_t>(s)); }
    const std::string& name() const { return name_; }
    int max_degree() const;
    bool has_bond(Site a, Site b) const;

private:
    int num_sites_;
    std::vector<Bond> bonds_;
    std::vector<std::vector<Site>> adjacency_;
    std::string name_;
};

Lattice build_chain(int n, bool periodic);

/// Chain with additional next-nearest-neighbour bonds (frustrated J1-J2 geometry).
Lattice build_zigzag_chain(int n, bool periodic);

/// Sierpinski gasket graph; generation 1 has 6 sites and 9 bonds.
Lattice build_sierpinski(int generation);

Lattice build_square(int lx, int ly, bool periodic);

/// Reads "i j" pairs, one per line; '#' starts a comment. Site ids are renumbered
/// densely in order of first appearance.
Lattice read_edge_list(std::istream& in, const std::string& name = "edge-list");
Lattice read_edge_list_file(const std::string& path);

struct DistanceField {
    Site center = 0;
    std::vector<int> dist;

    int max_distance() const;
};

DistanceField distances_from(const Lattice& lat, Site m);

/// Sites at graph distance exactly r from m (ascending).
std::vector<Site> sphere(const Lattice& lat, Site m, int r);
std::vector<Site> sphere(const DistanceField& field, int r);

struct DimensionEstimate {
    double D = 1.0;
    double C0 = 0.0;
    /// residuals[r-1] = C0 r^{D-1} - max_m |S_r(m)| for r = 1..max_radius
    std::vector<double> residuals;
    std::vector<int> max_sphere;  // max_m |S_r(m)| for r = 1..max_radius
    int max_radius = 0;
    bool outside_theorem_scope = false;  // D >= 2

    bool admits_twist() const { return !outside_theorem_scope && D >= 1.0; }
};

/// Ascending grid lo, lo+step, ..., hi built from integer multiples of step.
std::vector<double> dimension_grid(double lo = 1.0, double hi = 3.0, double step = 0.005);

/// Sphere-growth certificate sup_m |S_r(m)| <= C0 r^{D-1} at a fixed D, over realized radii.
DimensionEstimate certify_dimension(const Lattice& lat, double D);

/// Smallest grid D whose certificate is anchored at nearest-neighbour scale,
/// i.e. C0(D) equals the maximal coordination number. Falls back to the largest
/// grid value when none qualifies. A singleton grid certifies that D directly.
DimensionEstimate estimate_dimension(const Lattice& lat,
                                     const std::vector<double>& grid = dimension_grid());

}  // namespace u1gap
