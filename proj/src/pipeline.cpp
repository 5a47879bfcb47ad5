#include "gridfast/pipeline.hpp"

#include <chrono>

#include "json.hpp"

namespace gridfast {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

const char* class_name(RegionClass c) {
    switch (c) {
        case RegionClass::intersection: return "intersection";
        case RegionClass::pathway: return "pathway";
        case RegionClass::dead_end: return "deadEnd";
        default: return "frontierPath";
    }
}

const char* opening_kind_name(OpeningKind k) {
    switch (k) {
        case OpeningKind::paired: return "paired";
        case OpeningKind::converted: return "converted";
        default: return "frontier";
    }
}

}  // namespace

PipelineResult run_pipeline(const OccupancyGrid& input,
                            const PipelineConfig& cfg, bool with_topology) {
    PipelineResult out;
    auto t0 = std::chrono::steady_clock::now();

    ScanConfig scan_cfg;
    scan_cfg.n_dir = cfg.n_dir;
    scan_cfg.g_min = min_gap_cells(cfg.robot, input);
    scan_cfg.f_uk = cfg.f_uk;
    scan_cfg.exec = cfg.exec;
    ScanOutput scan = scan_all_directions(input, scan_cfg);
    out.filtered = std::move(scan.filtered);
    out.members = std::move(scan.members);
    out.filter_iterations = scan.filter_iterations;
    out.filtered_cells = scan.filtered_cells;

    out.walls = trace_walls(out.filtered, out.members);
    remove_small_objects(out.filtered, out.walls, out.members, cfg.f_obj);
    out.frontiers = detect_frontiers(out.walls, cfg.robot, out.filtered);

    OpeningParams op;
    op.r_min_cells = cfg.robot.r_min / out.filtered.resolution;
    op.g_min = scan_cfg.g_min;
    auto openings = detect_openings(out.filtered, out.walls, out.frontiers,
                                    out.members, op, &out.opening_debug);
    out.regions =
        build_regions(out.filtered, out.walls, out.frontiers, std::move(openings));
    out.opt_stats = optimize_all(out.regions, out.filtered, out.walls,
                                 out.frontiers, cfg.robot, cfg.opt_config());
    out.timings.topometric_ms = ms_since(t0);

    if (with_topology) {
        out.skeleton = build_skeleton(out.regions, out.filtered, out.walls,
                                      cfg.robot, cfg.exec);
        out.graph = build_graph(out.skeleton, out.filtered);
    }
    out.timings.total_ms = ms_since(t0);
    return out;
}

std::string topometric_to_json(const PipelineResult& result) {
    const OccupancyGrid& grid = result.filtered;
    nlohmann::ordered_json j;
    j["resolution"] = grid.resolution;
    j["origin"] = {grid.origin_x, grid.origin_y, grid.origin_yaw};

    auto region_json = [&](const RegionFace& face) {
        nlohmann::ordered_json jr;
        jr["id"] = face.id;
        jr["class"] = class_name(face.cls);
        Vec2 cw = grid.world_point(face.centroid);
        jr["centroid"] = {cw.x, cw.y};
        jr["openings"] = nlohmann::ordered_json::array();
        std::vector<int> seen;
        for (const Crossing& c : face.crossings) {
            bool dup = false;
            for (int s : seen) dup |= s == c.opening;
            if (dup) continue;
            seen.push_back(c.opening);
            const OpeningDetection& o = result.regions.openings[c.opening];
            nlohmann::ordered_json jo;
            jo["id"] = o.id;
            jo["kind"] = opening_kind_name(o.kind);
            Vec2 a = grid.world_point(o.first_pt());
            Vec2 b = grid.world_point(o.second_pt());
            jo["first"] = {a.x, a.y};
            jo["second"] = {b.x, b.y};
            jo["length"] = o.length_cells() * grid.resolution;
            jr["openings"].push_back(jo);
        }
        // Run-length encoded area rows.
        jr["area"] = nlohmann::ordered_json::array();
        size_t i = 0;
        while (i < face.area.size()) {
            int row = face.area[i].row;
            nlohmann::ordered_json runs = nlohmann::ordered_json::array();
            while (i < face.area.size() && face.area[i].row == row) {
                int c0 = face.area[i].col, c1 = c0;
                while (i + 1 < face.area.size() &&
                       face.area[i + 1].row == row &&
                       face.area[i + 1].col == c1 + 1) {
                    ++i;
                    ++c1;
                }
                runs.push_back({c0, c1});
                ++i;
            }
            jr["area"].push_back({{"row", row}, {"runs", runs}});
        }
        return jr;
    };

    j["regions"] = nlohmann::ordered_json::array();
    for (const RegionFace& f : result.regions.intersections)
        j["regions"].push_back(region_json(f));
    for (const RegionFace& f : result.regions.pathways)
        j["regions"].push_back(region_json(f));
    return j.dump(2) + "\n";
}

std::string members_debug_jsonl(const PipelineResult& result) {
    std::string out;
    for (const MemberGap& m : result.members) {
        nlohmann::ordered_json j;
        j["frame"] = m.frame;
        j["row"] = m.gap_row;
        j["start"] = m.gap_start;
        j["end"] = m.gap_end;
        j["traversable"] = true;
        j["direction"] = m.dir == DetDir::forward ? "forward" : "backward";
        j["members"] = m.member_count;
        out += j.dump() + "\n";
    }
    return out;
}

std::string walls_debug_json(const PipelineResult& result) {
    nlohmann::ordered_json j;
    j["walls"] = nlohmann::ordered_json::array();
    for (const Wall& w : result.walls.walls) {
        nlohmann::ordered_json jw;
        jw["id"] = w.id;
        jw["orientation"] = w.signed_area >= 0 ? "positive" : "negative";
        jw["cells"] = nlohmann::ordered_json::array();
        for (const Cell& c : w.cells) jw["cells"].push_back({c.row, c.col});
        j["walls"].push_back(jw);
    }
    j["frontiers"] = nlohmann::ordered_json::array();
    for (const Frontier& f : result.frontiers) {
        nlohmann::ordered_json jf;
        jf["id"] = f.id;
        jf["wall"] = f.wall;
        jf["span"] = nlohmann::ordered_json::array();
        for (const Cell& c : f.span) jf["span"].push_back({c.row, c.col});
        j["frontiers"].push_back(jf);
    }
    return j.dump(2) + "\n";
}

std::string openings_debug_json(const PipelineResult& result) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const OpeningDetection& o : result.regions.openings) {
        nlohmann::ordered_json jo;
        jo["id"] = o.id;
        jo["kind"] = opening_kind_name(o.kind);
        jo["first"] = {o.first.row, o.first.col};
        jo["second"] = {o.second.row, o.second.col};
        jo["length_m"] = o.length_cells() * result.filtered.resolution;
        jo["status"] = o.status == OpeningStatus::confirmed ? "confirmed"
                                                            : "candidate";
        jo["frame"] = o.source_frame;
        j.push_back(jo);
    }
    return j.dump(2) + "\n";
}

}  // namespace gridfast
