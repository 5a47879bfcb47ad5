#pragma once

#include <string>
#include <vector>

#include "gridfast/skeleton.hpp"

namespace gridfast {

enum class NodeKind {
    intersection_center,
    opening,
    dead_end_tip,
    frontier_tip,
    endpoint
};

std::string node_kind_name(NodeKind k);

struct TopoNode {
    int id = -1;
    NodeKind kind = NodeKind::endpoint;
    Vec2 pos;  // meters
    int region = -1;
};

struct TopoEdge {
    int a = -1;
    int b = -1;
    double length = 0.0;             // meters, polyline arc length
    std::vector<Vec2> geometry;      // meters
};

struct TopoGraph {
    std::vector<TopoNode> nodes;
    std::vector<TopoEdge> edges;
    // node -> (neighbor node, edge length)
    std::vector<std::vector<std::pair<int, double>>> adj;

    void build_adjacency();
    int degree(int node) const { return int(adj[node].size()); }
};

// Nodes at shared polyline end points (exact coordinate match), one edge
// per polyline. Throws when a polyline endpoint fails to resolve.
TopoGraph build_graph(const Skeleton& skeleton, const OccupancyGrid& grid);

struct GraphMetrics {
    int nodes = 0;            // branch points + endpoints + isolated
    double graph_length_m = 0.0;
};

GraphMetrics metrics(const TopoGraph& g);

struct PlanResult {
    bool reachable = false;
    std::vector<int> path;
    double cost = 0.0;
    int visited_total = 0;
    int visited_unique = 0;
};

// Optimal path under edge-length cost with a straight-line heuristic.
// Deterministic tie-break on node id; expansion counters recorded.
PlanResult astar(const TopoGraph& g, int start, int goal);

int nearest_node(const TopoGraph& g, const Vec2& pos_m);

std::string graph_to_json(const TopoGraph& g);
TopoGraph graph_from_json(const std::string& text);
std::string graph_to_dot(const TopoGraph& g);

// Whole-map thinning skeleton converted to a graph through the same
// node/edge machinery; the sparsity comparison baseline.
TopoGraph gvg_baseline(const OccupancyGrid& filtered, const RobotSpec& robot,
                       kernels::Exec exec = kernels::Exec::parallel);

}  // namespace gridfast
