#include "qcarpet/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcarpet {

json to_json(const Region& region) {
    json j;
    j["kind"] = region.kind_name();
    switch (region.kind) {
        case RegionKind::rect:
            j["a"] = region.a;
            break;
        case RegionKind::rect_ring:
            j["a"] = region.a;
            j["K"] = {region.ks, region.kw, region.kt, region.kh};
            break;
        case RegionKind::log_cylinder:
            j["log_r"] = region.log_r;
            if (region.has_k()) j["K"] = {region.ks, region.kw, region.kt, region.kh};
            break;
        case RegionKind::disk:
            j["inner"] = region.r;
            break;
        case RegionKind::annulus:
            j["r"] = region.r;
            break;
        case RegionKind::window:
            j["half"] = region.half;
            j["center"] = {region.center.x, region.center.y};
            break;
    }
    return j;
}

Region region_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rect") return Region::rect(j.at("a").get<double>());
    if (kind == "rect-ring") {
        const auto k = j.at("K");
        return Region::rect_ring(j.at("a").get<double>(), k.at(0).get<double>(),
                                 k.at(1).get<double>(), k.at(2).get<double>(),
                                 k.at(3).get<double>());
    }
    if (kind == "log-cylinder") {
        Region r = Region::log_cylinder(j.at("log_r").get<double>());
        if (j.contains("K") && !j.at("K").is_null()) {
            const auto k = j.at("K");
            r.ks = k.at(0).get<double>();
            r.kw = k.at(1).get<double>();
            r.kt = k.at(2).get<double>();
            r.kh = k.at(3).get<double>();
        }
        return r;
    }
    if (kind == "disk") return Region::disk(j.value("inner", 1.0 / 64));
    if (kind == "annulus") return Region::annulus(j.at("r").get<double>());
    if (kind == "window") {
        PointC c{0, 0};
        if (j.contains("center")) c = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
        return Region::window(j.at("half").get<double>(), c);
    }
    throw std::invalid_argument("region: unknown kind '" + kind + "'");
}

json to_json(const ClosedCurve& curve) {
    json verts = json::array();
    for (const auto& p : curve.vertices) verts.push_back({p.x, p.y});
    return json{{"vertices", std::move(verts)},
                {"orientation", curve.orientation == Orientation::counterclockwise ? "ccw" : "cw"}};
}

ClosedCurve curve_from_json(const json& j) {
    std::vector<PointC> vs;
    for (const auto& v : j.at("vertices")) vs.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    ClosedCurve c(std::move(vs));
    const std::string o = j.value("orientation", "ccw");
    const Orientation want = o == "ccw" ? Orientation::counterclockwise : Orientation::clockwise;
    if (c.orientation != want)
        throw std::invalid_argument("degenerate curve: stored orientation does not match vertices");
    return c;
}

json to_json(const Carpet& S) {
    json holes = json::array();
    for (const auto& h : S.holes) holes.push_back({h.cx, h.cy, h.side});
    json j;
    j["region"] = to_json(S.region);
    j["K"] = S.has_k() ? json({S.region.ks, S.region.kw, S.region.kt, S.region.kh}) : json(nullptr);
    j["holes"] = std::move(holes);
    j["depth"] = S.depth;
    return j;
}

Carpet carpet_from_json(const json& j) {
    Carpet S;
    S.region = region_from_json(j.at("region"));
    S.depth = j.value("depth", 0);
    for (const auto& h : j.at("holes"))
        S.holes.push_back({h.at(0).get<double>(), h.at(1).get<double>(), h.at(2).get<double>()});
    if (S.holes.size() <= 4096) S.validate();
    return S;
}

json to_json(const PlaneMap& m) {
    json vals = json::array();
    for (const auto& p : m.values()) vals.push_back({p.x, p.y});
    json j;
    j["region"] = to_json(m.domain());
    j["delta"] = {m.du(), m.dv()};
    j["nu"] = m.nu();
    j["nv"] = m.nv();
    j["values"] = std::move(vals);
    return j;
}

PlaneMap plane_map_from_json(const json& j) {
    const Region region = region_from_json(j.at("region"));
    const int nu = j.at("nu").get<int>();
    const int nv = j.at("nv").get<int>();
    std::vector<PointC> vals;
    for (const auto& v : j.at("values")) vals.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return PlaneMap(region, nu, nv, std::move(vals));
}

json to_json(const Density& d) {
    json j;
    j["region"] = to_json(d.grid.region);
    j["delta"] = {d.grid.du, d.grid.dv};
    j["nx"] = d.grid.nx;
    j["ny"] = d.grid.ny;
    j["values"] = d.values;
    return j;
}

Density density_from_json(const json& j) {
    const Region region = region_from_json(j.at("region"));
    GridSpec grid(region, j.at("nx").get<int>(), j.at("ny").get<int>());
    Density d{grid, j.at("values").get<std::vector<double>>()};
    if (d.values.size() != static_cast<std::size_t>(grid.cells()))
        throw std::invalid_argument("density: value count does not match the grid");
    return d;
}

json to_json(const ModulusResult& r) {
    json j;
    j["value"] = r.value;
    j["gap"] = r.gap;
    j["min_path_integral"] = r.min_path_integral;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["density"] = to_json(r.density);
    return j;
}

json to_json(const TowerManifest& m) {
    json rings = json::array();
    for (const auto& r : m.rings) rings.push_back({{"rho", r.rho}, {"residual", r.residual}});
    return json{{"rings", std::move(rings)}, {"monotone", m.monotone}};
}

json to_json(const RigidityReport& r) {
    json j;
    j["verdict"] = verdict_name(r.verdict);
    j["residual"] = r.residual;
    if (r.witness) {
        j["witness"] = {{"x", r.witness->x},
                        {"orbit", r.witness->orbit},
                        {"decreasing", r.witness->decreasing}};
    } else {
        j["witness"] = nullptr;
    }
    j["orbit_period"] = r.orbit_period ? json(*r.orbit_period) : json(nullptr);
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["hypothesis_checks"] = std::move(checks);
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

std::string circle_map_to_csv(const CircleMap& m) {
    std::ostringstream out;
    out.precision(17);
    out << "angle,image\n";
    const auto angles = m.sample_angles();
    const auto images = m.sample_images();
    for (std::size_t i = 0; i < angles.size(); ++i) out << angles[i] << "," << images[i] << "\n";
    return out.str();
}

CircleMap circle_map_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("circle map csv: empty file");
    // tolerate whitespace and CR in the header
    std::string header;
    for (char c : line)
        if (!isspace(static_cast<unsigned char>(c))) header += c;
    if (header != "angle,image") throw std::invalid_argument("circle map csv: header required");
    std::vector<double> angles, images;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("circle map csv: bad row");
        angles.push_back(std::stod(line.substr(0, comma)));
        images.push_back(std::stod(line.substr(comma + 1)));
    }
    return CircleMap(angles, images);
}

json to_json(const CircleMap& m) {
    return json{{"angles", m.sample_angles()}, {"images", m.sample_images()}};
}

CircleMap circle_map_from_json(const json& j) {
    return CircleMap(j.at("angles").get<std::vector<double>>(),
                     j.at("images").get<std::vector<double>>());
}

json to_json(const CarpetBoundaryData& d) {
    json holes = json::array();
    for (const auto& m : d.hole_maps) holes.push_back(to_json(m));
    return json{{"k", d.k}, {"outer", to_json(d.outer)}, {"perm", d.perm}, {"holes", std::move(holes)}};
}

CarpetBoundaryData carpet_boundary_data_from_json(const json& j) {
    CarpetBoundaryData d;
    d.k = j.at("k").get<int>();
    d.outer = circle_map_from_json(j.at("outer"));
    d.perm = j.at("perm").get<std::vector<int>>();
    for (const auto& h : j.at("holes")) d.hole_maps.push_back(circle_map_from_json(h));
    return d;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

} // namespace qcarpet
