#pragma once

#include <cstdint>
#include <vector>

#include "hairflow/raster.hpp"
#include "hairflow/types.hpp"

namespace hairflow {

using VertexId = std::uint32_t;

/// Graph over the hair's organized cloud: one vertex per masked pixel with
/// valid depth (numbered in row-major pixel order), undirected edges between
/// 8-neighbours whose 3-D distance is in (0, edge_max_m], weighted by that
/// distance.
class HairGraph {
 public:
  struct Vertex {
    std::uint32_t px, py;
    Point3 xyz;
  };
  struct Edge {
    VertexId to;
    double weight;
  };

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& neighbors(VertexId v) const { return adjacency_.at(v); }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept;
  /// Vertex at a pixel, if that pixel became a vertex.
  std::optional<VertexId> vertex_at(std::uint32_t px, std::uint32_t py) const;
  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }

  /// Weight of the edge u-v, or nullopt when not adjacent.
  std::optional<double> edge_weight(VertexId u, VertexId v) const;

 private:
  friend HairGraph build_graph(const BinaryMask&, const OrganizedCloud&, double);
  std::uint32_t width_ = 0, height_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::int64_t> pixel_to_vertex_;  // -1 where no vertex
};

inline constexpr double kDefaultEdgeMaxM = 0.05;
inline constexpr double kDefaultGoalFraction = 0.1;

/// Throws empty_graph when no masked pixel has valid depth.
HairGraph build_graph(const BinaryMask& mask, const OrganizedCloud& cloud,
                      double edge_max_m = kDefaultEdgeMaxM);

/// Vertices in the bottom `fraction` of the mask's bounding box rows:
/// the last max(1, ceil(fraction * bbox_height)) rows. Throws empty_goal_set
/// when those rows hold no vertex.
std::vector<VertexId> goal_set(const HairGraph& graph, const BinaryMask& mask,
                               double fraction = kDefaultGoalFraction);

struct SearchResult {
  std::vector<VertexId> path;
  double cost = 0.0;
  /// Vertices in the order they were expanded.
  std::vector<VertexId> expanded;
};

/// A* to the nearest goal with h(v) = min over goals of the straight-line
/// 3-D distance. Equal f-scores pop the smaller vertex id first. Throws
/// unreachable when no goal can be reached.
SearchResult astar(const HairGraph& graph, VertexId start, const std::vector<VertexId>& goals);

/// Pixel coordinates of the vertices, step_px = 0 and goal_reached.
PixelPath to_pixel_path(const std::vector<VertexId>& vertex_path, const HairGraph& graph);

/// build_graph + goal_set + astar from the vertex at `start`'s nearest pixel.
/// Throws start_outside_hair when that pixel is not a vertex.
PixelPath plan_mesh(const BinaryMask& mask, const OrganizedCloud& cloud, const PixelPoint& start,
                    double goal_fraction = kDefaultGoalFraction,
                    double edge_max_m = kDefaultEdgeMaxM);

}  // namespace hairflow
