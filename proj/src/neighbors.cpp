#include "stencil_lab/neighbors.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "stencil_lab/nodegen.hpp"

namespace stencil_lab {

namespace {
constexpr int kLeafSize = 12;
}

SpatialIndex::SpatialIndex(std::vector<Vec> points, int dim) : points_(std::move(points)), dim_(dim) {
    if (points_.empty()) throw InputError("cannot index an empty point set");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(points_.size()));
}

int SpatialIndex::build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;

    Vec lo = points_[order_[begin]], hi = lo;
    for (int i = begin; i < end; ++i)
        for (int d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], points_[order_[i]][d]);
            hi[d] = std::max(hi[d], points_[order_[i]][d]);
        }
    int sd = 0;
    for (int d = 1; d < dim_; ++d)
        if (hi[d] - lo[d] > hi[sd] - lo[sd]) sd = d;
    if (hi[sd] - lo[sd] <= 0) return id;  // all coincident

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return points_[a][sd] < points_[b][sd]; });
    const double split = points_[order_[mid]][sd];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].split_dim = sd;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

// visit(point_index, d2) handles a candidate; visit.bound() returns the current pruning radius^2.
template <class Visit>
void SpatialIndex::search(int node, const Vec& q, Visit& visit) const {
    const KdNode& nd = nodes_[node];
    if (nd.split_dim < 0) {
        for (int i = nd.begin; i < nd.end; ++i) visit(order_[i], dist2(points_[order_[i]], q));
        return;
    }
    const double diff = q[nd.split_dim] - nd.split;
    const int near = diff < 0 ? nd.left : nd.right;
    const int far = diff < 0 ? nd.right : nd.left;
    search(near, q, visit);
    // equality still descends: an equidistant point with a smaller index may live there
    if (diff * diff <= visit.bound()) search(far, q, visit);
}

std::vector<std::pair<double, int>> SpatialIndex::knn(const Vec& query, std::size_t k) const {
    if (k == 0) return {};
    if (k > points_.size()) throw InputError("requested more neighbours than indexed points");
    struct Collector {
        std::size_t k;
        std::priority_queue<std::pair<double, int>> heap;  // max-heap on (d2, index)
        void operator()(int idx, double d2) {
            const std::pair<double, int> cand{d2, idx};
            if (heap.size() < k) {
                heap.push(cand);
            } else if (cand < heap.top()) {
                heap.pop();
                heap.push(cand);
            }
        }
        double bound() const {
            return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().first;
        }
    } collector{k, {}};
    search(root_, query, collector);
    std::vector<std::pair<double, int>> out(collector.heap.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = collector.heap.top();
        collector.heap.pop();
    }
    return out;
}

std::pair<int, double> SpatialIndex::nearest(const Vec& query) const {
    const auto r = knn(query, 1);
    return {r[0].second, r[0].first};
}

SpatialIndex build_index(const NodeSet& nodes) { return SpatialIndex(nodes.positions, nodes.dim); }

Stencil stencil_of(const SpatialIndex& index, int center, int n) {
    if (center < 0 || static_cast<std::size_t>(center) >= index.size())
        throw InputError("stencil centre out of range");
    if (n < 1 || static_cast<std::size_t>(n) > index.size())
        throw InputError("stencil size " + std::to_string(n) + " outside [1, " + std::to_string(index.size()) + "]");
    const auto found = index.knn(index.point(center), static_cast<std::size_t>(n));
    Stencil s;
    s.center = center;
    s.members.reserve(found.size());
    s.members.push_back(center);
    for (const auto& [d2, idx] : found)
        if (idx != center) s.members.push_back(idx);
    if (s.members.size() > static_cast<std::size_t>(n)) s.members.resize(n);  // centre had a coincident twin
    s.radius = dist(index.point(center), index.point(s.members.back()));
    return s;
}

Stencil stencil_prefix(const Stencil& stencil, int n, std::span<const Vec> positions) {
    if (n < 1 || static_cast<std::size_t>(n) > stencil.members.size())
        throw InputError("prefix size " + std::to_string(n) + " outside [1, " +
                         std::to_string(stencil.members.size()) + "]");
    Stencil s;
    s.center = stencil.center;
    s.members.assign(stencil.members.begin(), stencil.members.begin() + n);
    s.radius = dist(positions[s.center], positions[s.members.back()]);
    return s;
}

std::vector<Stencil> stencils_all(const SpatialIndex& index, const NodeSet& nodes, std::span<const int> n_map) {
    if (n_map.size() != nodes.size()) throw InputError("stencil size map must have one entry per node");
    std::vector<Stencil> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (needs_stencil(nodes.roles[i])) out.push_back(stencil_of(index, static_cast<int>(i), n_map[i]));
    return out;
}

}  // namespace stencil_lab
