#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "isoremesh/vec3.hpp"

namespace isoremesh {

// Static 3D kd-tree over a point set. Supports radius gathering and nearest
// neighbor; traversal order (and therefore any accumulation done over query
// results) is deterministic for a given point set.
class KdTree {
public:
    KdTree() = default;
    explicit KdTree(std::vector<Vec3> points) { build(std::move(points)); }

    void build(std::vector<Vec3> points) {
        points_ = std::move(points);
        order_.resize(points_.size());
        for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
        nodes_.clear();
        if (!points_.empty()) build_node(0, static_cast<std::uint32_t>(points_.size()));
    }

    std::size_t size() const { return points_.size(); }
    const Vec3& point(std::uint32_t i) const { return points_[i]; }

    // Appends original indices of all points within `radius` of q.
    void radius_query(const Vec3& q, double radius, std::vector<std::uint32_t>& out) const {
        if (nodes_.empty()) return;
        radius_visit(0, q, radius * radius, out);
    }

    // Index of the closest point; 0xffffffff when empty.
    std::uint32_t nearest(const Vec3& q, double* sq_dist_out = nullptr) const {
        std::uint32_t best = 0xffffffffu;
        double best_sq = std::numeric_limits<double>::max();
        if (!nodes_.empty()) nearest_visit(0, q, best, best_sq);
        if (sq_dist_out) *sq_dist_out = best_sq;
        return best;
    }

private:
    static constexpr std::uint32_t kLeafSize = 12;
    static constexpr std::uint32_t kNoChild = 0xffffffffu;

    struct Node {
        double split = 0.0;
        std::uint32_t left = kNoChild, right = kNoChild;
        std::uint32_t begin = 0, end = 0;  // leaf range into order_
        std::uint8_t dim = 0;
        bool leaf = false;
    };

    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end) {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({});
        if (end - begin <= kLeafSize) {
            nodes_[id].leaf = true;
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        Vec3 lo = points_[order_[begin]], hi = lo;
        for (std::uint32_t i = begin; i < end; ++i) {
            const Vec3& p = points_[order_[i]];
            lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
            hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
        }
        const Vec3 extent = hi - lo;
        std::uint8_t dim = 0;
        if (extent.y > extent[dim]) dim = 1;
        if (extent.z > extent[dim]) dim = 2;

        const std::uint32_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             if (points_[a][dim] != points_[b][dim]) return points_[a][dim] < points_[b][dim];
                             return a < b;  // deterministic tie-break
                         });
        nodes_[id].dim = dim;
        nodes_[id].split = points_[order_[mid]][dim];
        const std::uint32_t l = build_node(begin, mid);
        const std::uint32_t r = build_node(mid, end);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    void radius_visit(std::uint32_t id, const Vec3& q, double sq_radius,
                      std::vector<std::uint32_t>& out) const {
        const Node& n = nodes_[id];
        if (n.leaf) {
            for (std::uint32_t i = n.begin; i < n.end; ++i)
                if (squared_distance(points_[order_[i]], q) <= sq_radius) out.push_back(order_[i]);
            return;
        }
        const double delta = q[n.dim] - n.split;
        if (delta <= 0.0) {
            radius_visit(n.left, q, sq_radius, out);
            if (delta * delta <= sq_radius) radius_visit(n.right, q, sq_radius, out);
        } else {
            radius_visit(n.right, q, sq_radius, out);
            if (delta * delta <= sq_radius) radius_visit(n.left, q, sq_radius, out);
        }
    }

    void nearest_visit(std::uint32_t id, const Vec3& q, std::uint32_t& best, double& best_sq) const {
        const Node& n = nodes_[id];
        if (n.leaf) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                const double d = squared_distance(points_[order_[i]], q);
                if (d < best_sq || (d == best_sq && order_[i] < best)) {
                    best_sq = d;
                    best = order_[i];
                }
            }
            return;
        }
        const double delta = q[n.dim] - n.split;
        const std::uint32_t first = delta <= 0.0 ? n.left : n.right;
        const std::uint32_t second = delta <= 0.0 ? n.right : n.left;
        nearest_visit(first, q, best, best_sq);
        if (delta * delta < best_sq || best == 0xffffffffu) nearest_visit(second, q, best, best_sq);
    }

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace isoremesh
