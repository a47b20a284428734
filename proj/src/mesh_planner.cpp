#include "hairflow/mesh_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

namespace hairflow {
namespace {

double distance(const Point3& a, const Point3& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

std::size_t HairGraph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

std::optional<VertexId> HairGraph::vertex_at(std::uint32_t px, std::uint32_t py) const {
  if (px >= width_ || py >= height_) return std::nullopt;
  const std::int64_t v = pixel_to_vertex_[std::size_t{py} * width_ + px];
  if (v < 0) return std::nullopt;
  return VertexId(v);
}

std::optional<double> HairGraph::edge_weight(VertexId u, VertexId v) const {
  for (const Edge& e : adjacency_.at(u)) {
    if (e.to == v) return e.weight;
  }
  return std::nullopt;
}

HairGraph build_graph(const BinaryMask& mask, const OrganizedCloud& cloud, double edge_max_m) {
  require_same_shape(cloud, mask, "cloud");
  if (!(edge_max_m > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "edge_max_m", "must be > 0");
  }
  HairGraph g;
  g.width_ = mask.width();
  g.height_ = mask.height();
  g.pixel_to_vertex_.assign(mask.size(), -1);
  for (std::uint32_t y = 0; y < g.height_; ++y) {
    for (std::uint32_t x = 0; x < g.width_; ++x) {
      const std::size_t i = mask.index(x, y);
      if (!mask[i] || !cloud.valid(i)) continue;
      g.pixel_to_vertex_[i] = std::int64_t(g.vertices_.size());
      g.vertices_.push_back({x, y, cloud.point(i)});
    }
  }
  if (g.vertices_.empty()) {
    throw Error(ErrorCode::empty_graph, "mask", "no masked pixel has valid depth");
  }
  g.adjacency_.resize(g.vertices_.size());
  // Forward half of the 8-neighbourhood; each undirected edge is added once.
  constexpr int kForward[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (VertexId u = 0; u < g.vertices_.size(); ++u) {
    const auto& vu = g.vertices_[u];
    for (const auto& off : kForward) {
      const long nx = long(vu.px) + off[0], ny = long(vu.py) + off[1];
      if (nx < 0 || ny < 0 || nx >= long(g.width_) || ny >= long(g.height_)) continue;
      const auto v = g.vertex_at(std::uint32_t(nx), std::uint32_t(ny));
      if (!v) continue;
      const double d = distance(vu.xyz, g.vertices_[*v].xyz);
      if (!(d > 0.0) || d > edge_max_m) continue;
      g.adjacency_[u].push_back({*v, d});
      g.adjacency_[*v].push_back({u, d});
    }
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const auto& a, const auto& b) { return a.to < b.to; });
  }
  return g;
}

std::vector<VertexId> goal_set(const HairGraph& graph, const BinaryMask& mask, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "goal_frac", "must lie in (0, 1]");
  }
  long ymin = -1, ymax = -1;
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    for (std::uint32_t x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      if (ymin < 0) ymin = y;
      ymax = y;
    }
  }
  if (ymin < 0) throw Error(ErrorCode::empty_mask, "mask", "mask has no set pixels");
  const long rows = std::max(1L, long(std::ceil(fraction * double(ymax - ymin + 1))));
  const long first_row = ymax + 1 - rows;
  std::vector<VertexId> goals;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (long(graph.vertices()[v].py) >= first_row) goals.push_back(v);
  }
  if (goals.empty()) {
    throw Error(ErrorCode::empty_goal_set, "goal_frac", "bottom rows of the mask hold no vertex");
  }
  return goals;
}

SearchResult astar(const HairGraph& graph, VertexId start, const std::vector<VertexId>& goals) {
  const std::size_t n = graph.vertex_count();
  if (start >= n) throw Error(ErrorCode::invalid_argument, "start", "start vertex out of range");
  if (goals.empty()) throw Error(ErrorCode::empty_goal_set, "goals", "goal set is empty");

  std::vector<bool> is_goal(n, false);
  for (VertexId g : goals) {
    if (g >= n) throw Error(ErrorCode::invalid_argument, "goals", "goal vertex out of range");
    is_goal[g] = true;
  }
  // Heuristic evaluated lazily; only touched vertices pay the O(|goals|) scan.
  constexpr double kUnset = -1.0;
  std::vector<double> h(n, kUnset);
  const auto heuristic = [&](VertexId v) {
    if (h[v] == kUnset) {
      double best = std::numeric_limits<double>::infinity();
      const Point3& p = graph.vertices()[v].xyz;
      for (VertexId g : goals) best = std::min(best, distance(p, graph.vertices()[g].xyz));
      h[v] = best;
    }
    return h[v];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr VertexId kNone = std::numeric_limits<VertexId>::max();
  std::vector<double> g_cost(n, kInf);
  std::vector<VertexId> parent(n, kNone);
  std::vector<bool> closed(n, false);
  using Entry = std::pair<double, VertexId>;  // (f, vertex); min-heap on both
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  SearchResult result;
  g_cost[start] = 0.0;
  open.push({heuristic(start), start});
  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = true;
    result.expanded.push_back(u);
    if (is_goal[u]) {
      result.cost = g_cost[u];
      for (VertexId v = u; v != kNone; v = parent[v]) result.path.push_back(v);
      std::reverse(result.path.begin(), result.path.end());
      return result;
    }
    for (const auto& e : graph.neighbors(u)) {
      if (closed[e.to]) continue;
      const double candidate = g_cost[u] + e.weight;
      if (candidate < g_cost[e.to]) {
        g_cost[e.to] = candidate;
        parent[e.to] = u;
        open.push({candidate + heuristic(e.to), e.to});
      }
    }
  }
  throw Error(ErrorCode::unreachable, "goals", "no goal vertex is reachable from the start");
}

PixelPath to_pixel_path(const std::vector<VertexId>& vertex_path, const HairGraph& graph) {
  if (vertex_path.empty()) {
    throw Error(ErrorCode::invalid_argument, "vertex_path", "path has no vertices");
  }
  PixelPath out;
  out.step_px = 0.0;
  out.terminated_by = Termination::goal_reached;
  out.points.reserve(vertex_path.size());
  for (VertexId v : vertex_path) {
    const auto& vx = graph.vertices().at(v);
    out.points.push_back({double(vx.px), double(vx.py)});
  }
  return out;
}

PixelPath plan_mesh(const BinaryMask& mask, const OrganizedCloud& cloud, const PixelPoint& start,
                    double goal_fraction, double edge_max_m) {
  const HairGraph graph = build_graph(mask, cloud, edge_max_m);
  const auto [px, py] = nearest_pixel(start);
  std::optional<VertexId> s;
  if (mask.contains(px, py)) s = graph.vertex_at(std::uint32_t(px), std::uint32_t(py));
  if (!s) {
    throw Error(ErrorCode::start_outside_hair, "start",
                "start pixel is not a hair pixel with valid depth");
  }
  const auto goals = goal_set(graph, mask, goal_fraction);
  return to_pixel_path(astar(graph, *s, goals).path, graph);
}

}  // namespace hairflow
