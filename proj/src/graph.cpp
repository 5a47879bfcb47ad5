#include "gridfast/graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace gridfast {

std::string node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::intersection_center: return "intersectionCenter";
        case NodeKind::opening: return "opening";
        case NodeKind::dead_end_tip: return "deadEndTip";
        case NodeKind::frontier_tip: return "frontierTip";
        default: return "endpoint";
    }
}

namespace {

NodeKind kind_from_name(const std::string& s) {
    if (s == "intersectionCenter") return NodeKind::intersection_center;
    if (s == "opening") return NodeKind::opening;
    if (s == "deadEndTip") return NodeKind::dead_end_tip;
    if (s == "frontierTip") return NodeKind::frontier_tip;
    return NodeKind::endpoint;
}

NodeKind from_anchor(AnchorKind k) {
    switch (k) {
        case AnchorKind::opening: return NodeKind::opening;
        case AnchorKind::intersection_center: return NodeKind::intersection_center;
        case AnchorKind::dead_end_tip: return NodeKind::dead_end_tip;
        case AnchorKind::frontier_tip: return NodeKind::frontier_tip;
        default: return NodeKind::endpoint;
    }
}

}  // namespace

void TopoGraph::build_adjacency() {
    adj.assign(nodes.size(), {});
    for (const TopoEdge& e : edges) {
        adj[e.a].push_back({e.b, e.length});
        adj[e.b].push_back({e.a, e.length});
    }
}

TopoGraph build_graph(const Skeleton& skeleton, const OccupancyGrid& grid) {
    TopoGraph g;
    std::map<std::pair<double, double>, int> registry;
    auto node_at = [&](const Vec2& cell_pt, AnchorKind kind, int region) {
        Vec2 w = grid.world_point(cell_pt);
        auto key = std::make_pair(w.x, w.y);
        auto it = registry.find(key);
        if (it != registry.end()) return it->second;
        TopoNode n;
        n.id = int(g.nodes.size());
        n.kind = from_anchor(kind);
        n.pos = w;
        n.region = region;
        g.nodes.push_back(n);
        registry[key] = n.id;
        return n.id;
    };

    for (const Polyline& pl : skeleton.paths) {
        if (pl.pts.size() < 2) continue;
        int a = node_at(pl.pts.front(), pl.kind_front, pl.region);
        int b = node_at(pl.pts.back(), pl.kind_back, pl.region);
        TopoEdge e;
        e.a = a;
        e.b = b;
        for (const Vec2& p : pl.pts) e.geometry.push_back(grid.world_point(p));
        double len = 0;
        for (size_t i = 0; i + 1 < e.geometry.size(); ++i)
            len += dist(e.geometry[i], e.geometry[i + 1]);
        e.length = len;
        if (a == b && len < 1e-12) continue;
        g.edges.push_back(std::move(e));
    }
    g.build_adjacency();
    return g;
}

GraphMetrics metrics(const TopoGraph& g) {
    GraphMetrics m;
    for (const TopoNode& n : g.nodes) {
        int deg = int(g.adj[n.id].size());
        if (deg >= 3 || deg <= 1) ++m.nodes;
    }
    for (const TopoEdge& e : g.edges) m.graph_length_m += e.length;
    return m;
}

PlanResult astar(const TopoGraph& g, int start, int goal) {
    PlanResult res;
    if (start < 0 || goal < 0 || start >= int(g.nodes.size()) ||
        goal >= int(g.nodes.size()))
        return res;
    auto h = [&](int n) { return dist(g.nodes[n].pos, g.nodes[goal].pos); };

    const double inf = std::numeric_limits<double>::max();
    std::vector<double> best(g.nodes.size(), inf);
    std::vector<int> parent(g.nodes.size(), -1);
    std::vector<uint8_t> popped(g.nodes.size(), 0);
    using Entry = std::tuple<double, int, double>;  // f, node, g
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    best[start] = 0;
    open.push({h(start), start, 0.0});

    while (!open.empty()) {
        auto [f, n, gc] = open.top();
        open.pop();
        ++res.visited_total;
        if (!popped[n]) {
            popped[n] = 1;
            ++res.visited_unique;
        }
        if (gc > best[n] + 1e-12) continue;
        if (n == goal) {
            res.reachable = true;
            res.cost = gc;
            for (int c = goal; c != -1; c = parent[c]) res.path.push_back(c);
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
        for (auto [nb, w] : g.adj[n]) {
            double ng = gc + w;
            if (ng < best[nb] - 1e-12) {
                best[nb] = ng;
                parent[nb] = n;
                open.push({ng + h(nb), nb, ng});
            }
        }
    }
    return res;
}

int nearest_node(const TopoGraph& g, const Vec2& pos_m) {
    int best = -1;
    double best_d = std::numeric_limits<double>::max();
    for (const TopoNode& n : g.nodes) {
        double d = dist(n.pos, pos_m);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = n.id;
        }
    }
    return best;
}

std::string graph_to_json(const TopoGraph& g) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const TopoNode& n : g.nodes) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["kind"] = node_kind_name(n.kind);
        jn["x"] = n.pos.x;
        jn["y"] = n.pos.y;
        jn["region"] = n.region;
        j["nodes"].push_back(jn);
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const TopoEdge& e : g.edges) {
        nlohmann::ordered_json je;
        je["a"] = e.a;
        je["b"] = e.b;
        je["length"] = e.length;
        je["polyline"] = nlohmann::ordered_json::array();
        for (const Vec2& p : e.geometry)
            je["polyline"].push_back({p.x, p.y});
        j["edges"].push_back(je);
    }
    return j.dump(2) + "\n";
}

TopoGraph graph_from_json(const std::string& text) {
    TopoGraph g;
    auto j = nlohmann::json::parse(text);
    for (const auto& jn : j.at("nodes")) {
        TopoNode n;
        n.id = jn.at("id").get<int>();
        n.kind = kind_from_name(jn.at("kind").get<std::string>());
        n.pos = {jn.at("x").get<double>(), jn.at("y").get<double>()};
        n.region = jn.at("region").get<int>();
        g.nodes.push_back(n);
    }
    for (const auto& je : j.at("edges")) {
        TopoEdge e;
        e.a = je.at("a").get<int>();
        e.b = je.at("b").get<int>();
        e.length = je.at("length").get<double>();
        for (const auto& jp : je.at("polyline"))
            e.geometry.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
        g.edges.push_back(std::move(e));
    }
    g.build_adjacency();
    return g;
}

std::string graph_to_dot(const TopoGraph& g) {
    std::string out = "graph topology {\n";
    for (const TopoNode& n : g.nodes)
        out += "  n" + std::to_string(n.id) + " [kind=" +
               node_kind_name(n.kind) + "];\n";
    char buf[64];
    for (const TopoEdge& e : g.edges) {
        snprintf(buf, sizeof buf, "  n%d -- n%d [len=%.3f];\n", e.a, e.b,
                 e.length);
        out += buf;
    }
    out += "}\n";
    return out;
}

namespace {

struct SkelGrid {
    int rows = 0, cols = 0;
    std::vector<uint8_t> on;
    bool at(int r, int c) const {
        return r >= 0 && r < rows && c >= 0 && c < cols &&
               on[size_t(r) * cols + c];
    }
    int degree(int r, int c) const {
        int d = 0;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                if (!dr && !dc) continue;
                if (at(r + dr, c + dc)) ++d;
            }
        return d;
    }
};

}  // namespace

TopoGraph gvg_baseline(const OccupancyGrid& filtered, const RobotSpec& robot,
                       kernels::Exec exec) {
    (void)robot;
    SkelGrid sg;
    sg.rows = filtered.rows;
    sg.cols = filtered.cols;
    sg.on.assign(size_t(sg.rows) * sg.cols, 0);
    for (int r = 0; r < sg.rows; ++r)
        for (int c = 0; c < sg.cols; ++c)
            sg.on[size_t(r) * sg.cols + c] =
                filtered.at(r, c) == CellState::free;
    std::vector<uint8_t> no_locks(sg.on.size(), 0);
    kernels::thin_mask(sg.on, sg.rows, sg.cols, no_locks, exec);

    // Junction clusters (degree >= 3) and endpoint cells become nodes.
    std::vector<int> node_of(sg.on.size(), -1);
    TopoGraph g;
    auto add_node = [&](const Vec2& cell_pt, NodeKind kind) {
        TopoNode n;
        n.id = int(g.nodes.size());
        n.kind = kind;
        n.pos = filtered.world_point(cell_pt);
        g.nodes.push_back(n);
        return n.id;
    };

    for (int r = 0; r < sg.rows; ++r) {
        for (int c = 0; c < sg.cols; ++c) {
            size_t k = size_t(r) * sg.cols + c;
            if (!sg.on[k] || node_of[k] >= 0) continue;
            int deg = sg.degree(r, c);
            if (deg >= 3) {
                // Flood the whole adjacent junction cluster into one node.
                std::vector<Cell> cluster;
                std::queue<Cell> q;
                q.push({r, c});
                node_of[k] = -2;
                while (!q.empty()) {
                    Cell cc = q.front();
                    q.pop();
                    cluster.push_back(cc);
                    for (int dr = -1; dr <= 1; ++dr)
                        for (int dc = -1; dc <= 1; ++dc) {
                            Cell nb{cc.row + dr, cc.col + dc};
                            if (!sg.at(nb.row, nb.col)) continue;
                            size_t nk = size_t(nb.row) * sg.cols + nb.col;
                            if (node_of[nk] != -1) continue;
                            if (sg.degree(nb.row, nb.col) >= 3) {
                                node_of[nk] = -2;
                                q.push(nb);
                            }
                        }
                }
                double sr = 0, sc = 0;
                for (const Cell& cc : cluster) {
                    sr += cc.row + 0.5;
                    sc += cc.col + 0.5;
                }
                int id = add_node({sc / cluster.size(), sr / cluster.size()},
                                  NodeKind::intersection_center);
                for (const Cell& cc : cluster)
                    node_of[size_t(cc.row) * sg.cols + cc.col] = id;
            } else if (deg <= 1) {
                node_of[k] = add_node({c + 0.5, r + 0.5},
                                      deg == 0 ? NodeKind::endpoint
                                               : NodeKind::dead_end_tip);
            }
        }
    }

    // Walk path cells between nodes.
    std::unordered_set<int64_t> used_steps;
    auto step_key = [&](const Cell& a, const Cell& b) {
        int64_t ka = int64_t(a.row) * sg.cols + a.col;
        int64_t kb = int64_t(b.row) * sg.cols + b.col;
        return ka * int64_t(sg.on.size()) + kb;
    };
    auto mark_step = [&](const Cell& a, const Cell& b) {
        used_steps.insert(step_key(a, b));
        used_steps.insert(step_key(b, a));
    };
    auto walk_from = [&](const Cell& start, const Cell& first) {
        int start_node = node_of[size_t(start.row) * sg.cols + start.col];
        std::vector<Vec2> geom{g.nodes[start_node].pos};
        Cell prev = start, cur = first;
        mark_step(start, first);
        size_t cap = sg.on.size() + 4;
        while (cap-- > 0) {
            size_t ck = size_t(cur.row) * sg.cols + cur.col;
            geom.push_back(filtered.world(cur));
            if (node_of[ck] >= 0 && !(cur == start && geom.size() == 2)) {
                int end_node = node_of[ck];
                geom.back() = g.nodes[end_node].pos;
                TopoEdge e;
                e.a = start_node;
                e.b = end_node;
                e.geometry = std::move(geom);
                double len = 0;
                for (size_t i = 0; i + 1 < e.geometry.size(); ++i)
                    len += dist(e.geometry[i], e.geometry[i + 1]);
                e.length = len;
                g.edges.push_back(std::move(e));
                return;
            }
            Cell next{-1, -1};
            for (int dr = -1; dr <= 1 && next.row < 0; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (!dr && !dc) continue;
                    Cell nb{cur.row + dr, cur.col + dc};
                    if (!sg.at(nb.row, nb.col) || nb == prev) continue;
                    if (used_steps.count(step_key(cur, nb))) continue;
                    next = nb;
                    break;
                }
            if (next.row < 0) return;  // spur into itself
            mark_step(cur, next);
            prev = cur;
            cur = next;
        }
    };

    for (int r = 0; r < sg.rows; ++r) {
        for (int c = 0; c < sg.cols; ++c) {
            size_t k = size_t(r) * sg.cols + c;
            if (!sg.on[k] || node_of[k] < 0) continue;
            Cell start{r, c};
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (!dr && !dc) continue;
                    Cell nb{r + dr, c + dc};
                    if (!sg.at(nb.row, nb.col)) continue;
                    size_t nk = size_t(nb.row) * sg.cols + nb.col;
                    if (node_of[nk] == node_of[k]) continue;  // same cluster
                    if (used_steps.count(step_key(start, nb))) continue;
                    walk_from(start, nb);
                }
        }
    }
    g.build_adjacency();
    return g;
}

}  // namespace gridfast
