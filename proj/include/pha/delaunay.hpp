#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <span>
#include <unordered_set>
#include <vector>

#include "pha/error.hpp"
#include "pha/geometry.hpp"
#include "pha/graph.hpp"

namespace pha {

namespace detail {

// Bowyer-Watson over a triangulation closed with "ghost" triangles: every
// convex-hull edge (a, b) carries a ghost triangle (a, b, kGhost) whose
// circumdisk is the open half-plane beyond the edge plus the open edge itself.
// This removes the need for a finite super-triangle and keeps hull edges exact.
class BowyerWatson {
 public:
  static constexpr int kGhost = -1;

  explicit BowyerWatson(std::span<const Point2> points) : points_(points) {}

  // Returns the undirected edges of the triangulation over the given insertion order.
  std::vector<Edge> run(const std::vector<int>& order) {
    seed_triangle(order);
    for (int p : order) {
      if (p == seed_[0] || p == seed_[1] || p == seed_[2]) continue;
      insert(p);
    }
    std::vector<Edge> edges;
    edges.reserve(tris_.size() * 3);
    for (const Tri& t : tris_) {
      if (t.is_ghost()) continue;
      for (int i = 0; i < 3; ++i) {
        const int a = t.v[i], b = t.v[(i + 1) % 3];
        edges.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  }

 private:
  struct Tri {
    int v[3];  // counter-clockwise; a ghost keeps kGhost in slot 2
    bool is_ghost() const { return v[2] == kGhost; }
  };

  void seed_triangle(const std::vector<int>& order) {
    const int a = order[0], b = order[1];
    int c = -1;
    int orientation = 0;
    for (std::size_t k = 2; k < order.size(); ++k) {
      orientation = orient2d(points_[a], points_[b], points_[order[k]]);
      if (orientation != 0) {
        c = order[k];
        break;
      }
    }
    if (c < 0) throw DegenerateInputError("all points are collinear");
    seed_ = {a, b, c};
    Tri t = orientation > 0 ? Tri{{a, b, c}} : Tri{{a, c, b}};
    tris_.push_back(t);
    for (int i = 0; i < 3; ++i) tris_.push_back(Tri{{t.v[(i + 1) % 3], t.v[i], kGhost}});
  }

  bool in_conflict(const Tri& t, const Point2& p) const {
    if (!t.is_ghost()) {
      return incircle(points_[t.v[0]], points_[t.v[1]], points_[t.v[2]], p) > 0;
    }
    const Point2& a = points_[t.v[0]];
    const Point2& b = points_[t.v[1]];
    const int o = orient2d(a, b, p);
    if (o > 0) return true;
    if (o < 0) return false;
    // Collinear with the hull edge: in conflict only strictly inside the segment.
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y) && !(p == a) && !(p == b);
  }

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  void insert(int p) {
    const Point2& pt = points_[p];
    cavity_.clear();
    keep_.clear();
    for (const Tri& t : tris_) (in_conflict(t, pt) ? cavity_ : keep_).push_back(t);

    directed_.clear();
    for (const Tri& t : cavity_) {
      for (int i = 0; i < 3; ++i) directed_.insert(key(t.v[i], t.v[(i + 1) % 3]));
    }
    for (const Tri& t : cavity_) {
      for (int i = 0; i < 3; ++i) {
        const int a = t.v[i], b = t.v[(i + 1) % 3];
        if (directed_.count(key(b, a))) continue;  // interior to the cavity
        if (a == kGhost) {
          keep_.push_back(Tri{{b, p, kGhost}});
        } else if (b == kGhost) {
          keep_.push_back(Tri{{p, a, kGhost}});
        } else {
          keep_.push_back(Tri{{a, b, p}});
        }
      }
    }
    tris_.swap(keep_);
  }

  std::span<const Point2> points_;
  std::vector<Tri> tris_;
  std::vector<Tri> cavity_;
  std::vector<Tri> keep_;
  std::unordered_set<std::uint64_t> directed_;
  std::array<int, 3> seed_{-1, -1, -1};
};

}  // namespace detail

/// Delaunay graph of a point set: an edge joins u and v iff some circle
/// through both encloses no other point. Points are inserted in lexicographic
/// order and cocircular ties resolve as "not in conflict", so the result does
/// not depend on the order of the input.
inline PhysicalGraph delaunay_triangulate(std::span<const Point2> points) {
  if (points.size() < 3) throw ArgumentError("triangulation needs at least 3 points");
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return lexicographic_less(points[a], points[b]) ||
           (points[a] == points[b] && a < b);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      throw ArgumentError("coincident points " + std::to_string(order[i - 1]) + " and " +
                          std::to_string(order[i]));
    }
  }
  detail::BowyerWatson builder(points);
  auto edges = builder.run(order);
  return PhysicalGraph(std::vector<Point2>(points.begin(), points.end()), std::move(edges));
}

}  // namespace pha
