#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stencil_lab/types.hpp"

namespace stencil_lab {

struct NodeSet;

/// Immutable k-d tree answering exact k-nearest-neighbour queries. Results are ordered by
/// (distance, index), so equidistant candidates resolve to the smaller index.
class SpatialIndex {
public:
    SpatialIndex() = default;
    SpatialIndex(std::vector<Vec> points, int dim);

    std::size_t size() const { return points_.size(); }
    int dimension() const { return dim_; }
    const Vec& point(std::size_t i) const { return points_[i]; }

    /// (squared distance, index) pairs, nearest first.
    std::vector<std::pair<double, int>> knn(const Vec& query, std::size_t k) const;
    /// Index and squared distance of the nearest point.
    std::pair<int, double> nearest(const Vec& query) const;

private:
    struct KdNode {
        int begin = 0;  // into order_
        int end = 0;
        int split_dim = -1;  // -1 marks a leaf
        double split = 0.0;
        int left = -1;
        int right = -1;
    };

    int build(int begin, int end);
    template <class Visit>
    void search(int node, const Vec& q, Visit& visit) const;

    std::vector<Vec> points_;
    std::vector<int> order_;
    std::vector<KdNode> nodes_;
    int dim_ = 0;
    int root_ = -1;
};

SpatialIndex build_index(const NodeSet& nodes);

struct Stencil {
    int center = 0;
    std::vector<int> members;  // members[0] == center, ascending distance
    double radius = 0.0;
};

Stencil stencil_of(const SpatialIndex& index, int center, int n);

/// First n members of a larger stencil. Equals stencil_of(index, center, n) because neighbours
/// are totally ordered by (distance, index).
Stencil stencil_prefix(const Stencil& stencil, int n, std::span<const Vec> positions);

/// One stencil per node that needs a row (interior, Neumann and Robin nodes), in ascending
/// node order. Dirichlet and ghost nodes get none. n_map is indexed by node.
std::vector<Stencil> stencils_all(const SpatialIndex& index, const NodeSet& nodes, std::span<const int> n_map);

}  // namespace stencil_lab
