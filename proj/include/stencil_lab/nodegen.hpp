#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stencil_lab/geometry.hpp"

namespace stencil_lab {

enum class NodeRole : std::uint8_t { Interior, DirichletBoundary, NeumannBoundary, RobinBoundary, Ghost };

std::string role_name(NodeRole role);
NodeRole parse_role(const std::string& name);

inline bool is_boundary(NodeRole r) {
    return r == NodeRole::DirichletBoundary || r == NodeRole::NeumannBoundary || r == NodeRole::RobinBoundary;
}
/// Interior, Neumann and Robin nodes carry an operator row and therefore a stencil.
inline bool needs_stencil(NodeRole r) {
    return r == NodeRole::Interior || r == NodeRole::NeumannBoundary || r == NodeRole::RobinBoundary;
}

struct NodeSet {
    int dim = 2;
    double h = 0.0;
    std::uint64_t seed = 0;
    std::vector<Vec> positions;
    std::vector<NodeRole> roles;
    std::vector<Vec> normals;           // zero for interior nodes
    std::vector<std::uint8_t> corners;  // 1 for flagged boundary corners
    /// Boundary node -> its ghost, ghost -> its parent boundary node, -1 otherwise.
    std::vector<int> ghost_link;
    /// Set when the fill produced no interior nodes.
    bool boundary_only = false;

    std::size_t size() const { return positions.size(); }
    std::size_t interior_count() const;
    void push(const Vec& x, NodeRole role, const Vec& normal = {}, bool corner = false);
};

struct QualityMetrics {
    double rho = 0.0;    // fill distance
    double delta = 0.0;  // separation distance
    double gamma = 0.0;  // rho / delta
};

struct AdvancingFrontOptions {
    /// Candidates per expanded node: 15 in 2D, 30 in 3D (1D always uses 2).
    int candidates_2d = 15;
    int candidates_3d = 30;
    /// A candidate is rejected if an existing node lies closer than spacing_factor * h. The
    /// default sits just below 1 so that the parent itself (at distance h) never rejects it.
    double spacing_factor = 1.0 - 1e-10;
};

/// Boundary samples become DirichletBoundary nodes, then the interior is filled front by front
/// from a FIFO queue seeded with the boundary.
NodeSet fill_advancing_front(const Domain& domain, const std::vector<BoundaryPoint>& boundary, double h,
                             std::uint64_t seed, const AdvancingFrontOptions& options = {});

/// Radical inverse of `index` in `base` (index 1 in base 2 is 1/2).
double radical_inverse(std::uint64_t index, unsigned base);
/// Halton point number `index` (>= 1) in `dim` dimensions using bases 2, 3, 5.
Vec halton_point(std::uint64_t index, int dim);

NodeSet fill_halton(const Domain& domain, const std::vector<BoundaryPoint>& boundary, std::size_t target_count,
                    std::uint64_t skip = 20);

/// Concentric rings at radii h, 2h, ... inside a disc plus the centre node; the boundary circle
/// is taken from discretize_boundary. A nonzero seed rotates every ring by a random phase.
NodeSet fill_polar(const Domain& disc, double h, std::uint64_t seed = 0);

/// delta is exact. rho is estimated from probe_density^d quasi-random probes over the bounding
/// box, followed by a local pattern-search refinement of the most distant probes.
QualityMetrics quality(const NodeSet& nodes, const Domain& domain, int probe_density);

/// Point-cloud CSV: header x[,y[,z]],role,nx[,ny[,nz]] and 17 significant digits. An optional
/// extra value column (e.g. a solution) can be appended.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes, const std::vector<double>* extra = nullptr,
                     const std::string& extra_name = "u");
NodeSet read_nodes_csv(std::istream& in);

}  // namespace stencil_lab
