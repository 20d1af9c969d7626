// qcarpet: batch tool for carpets, discrete moduli, periodic quasiconformal
// extensions and rigidity reports. One command per process; all outputs are
// deterministic JSON or SVG files.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcarpet/json_io.hpp"
#include "qcarpet/svg.hpp"
#include "qcarpet/util.hpp"

using namespace qcarpet;

namespace {

std::vector<double> parse_csv_numbers(const std::string& s, std::size_t expect) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.size() != expect)
        throw std::invalid_argument("expected " + std::to_string(expect) + " comma-separated values");
    return out;
}

Region region_for_modulus(const std::string& region_file, const std::string& carpet_file,
                          double rect_a, double log_r) {
    if (!region_file.empty()) return region_from_json(json::parse(read_text_file(region_file)));
    if (!carpet_file.empty())
        return carpet_from_json(json::parse(read_text_file(carpet_file))).region;
    if (log_r > 0) return Region::log_cylinder(log_r);
    return Region::rect(rect_a);
}

int run(int argc, char** argv) {
    CLI::App app{"quasiconformal carpet toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    if (const char* env = std::getenv("QC_CARPET_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a carpet");
    std::string gen_kind, gen_out = "carpet.json", gen_k;
    int gen_depth = 1;
    double gen_a = 2.0, gen_r = 7.389056098930650;
    gen->add_option("kind", gen_kind, "sierpinski | ring | cstar")->required();
    gen->add_option("--depth", gen_depth, "generation depth");
    gen->add_option("--a", gen_a, "ring rectangle width");
    gen->add_option("--r", gen_r, "cstar outer radius");
    gen->add_option("--K", gen_k, "ring: s,w,t,h; cstar: a,b,alpha,beta");
    gen->add_option("--out", gen_out, "output file");

    // ---- modulus ------------------------------------------------------
    auto* mod = app.add_subcommand("modulus", "discrete modulus of a path family");
    std::string mod_family = "vertical", mod_region_file, mod_carpet_file, mod_out = "modulus.json",
                mod_svg;
    double mod_rect_a = 2.0, mod_log_r = 0.0, mod_tol = 1e-4;
    int mod_grid = 100;
    bool mod_no_ts = false;
    mod->add_option("--family", mod_family, "vertical | horizontal | radial | circular");
    mod->add_option("--region", mod_region_file, "region JSON file");
    mod->add_option("--carpet", mod_carpet_file, "carpet JSON file (region is used)");
    mod->add_option("--rect-a", mod_rect_a, "rectangle width a (default region)");
    mod->add_option("--log-r", mod_log_r, "log-cylinder height (selects the C* region)");
    mod->add_option("--grid", mod_grid, "cells along the first chart axis");
    mod->add_option("--tol", mod_tol, "relative duality-gap tolerance");
    mod->add_option("--out", mod_out, "result JSON");
    mod->add_option("--svg", mod_svg, "optional density heatmap");
    mod->add_flag("--no-timestamp", mod_no_ts, "omit the SVG timestamp comment");

    // ---- extend -------------------------------------------------------
    auto* ext = app.add_subcommand("extend", "quasiconformal extensions of circle maps");
    std::string ext_map, ext_mode = "ba", ext_out = "map.json", ext_manifest = "manifest.json",
                ext_carpet;
    int ext_k = 1, ext_grid = 256, ext_depth = -1;
    double ext_r = 0.5;
    ext->add_option("--map", ext_map, "boundary map (CSV angle,image; carpet mode: JSON)")
        ->required();
    ext->add_option("--mode", ext_mode, "ba | periodic-annulus | tower | carpet");
    ext->add_option("--k", ext_k, "period");
    ext->add_option("--r", ext_r, "inner annulus radius");
    ext->add_option("--grid", ext_grid, "extension grid");
    ext->add_option("--depth", ext_depth, "tower depth (default: subpixel rings)");
    ext->add_option("--carpet", ext_carpet, "carpet JSON (carpet mode)");
    ext->add_option("--out", ext_out, "extension JSON");
    ext->add_option("--manifest", ext_manifest, "residual manifest JSON");

    // ---- rigidity -----------------------------------------------------
    auto* rig = app.add_subcommand("rigidity", "rigidity pipelines");
    std::string rig_carpet, rig_map, rig_pipeline = "carpet", rig_out = "report.json";
    int rig_k = 1, rig_grid = 128;
    double rig_tol = 1e-9;
    rig->add_option("--carpet", rig_carpet, "carpet JSON")->required();
    rig->add_option("--map", rig_map, "map data JSON")->required();
    rig->add_option("--pipeline", rig_pipeline, "carpet | square | cstar");
    rig->add_option("--k", rig_k, "period (carpet pipeline)");
    rig->add_option("--grid", rig_grid, "extension grid");
    rig->add_option("--tol", rig_tol, "identity tolerance");
    rig->add_option("--out", rig_out, "report JSON");

    // ---- plot ---------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "SVG rendering of result files");
    std::string plot_in, plot_out = "plot.svg";
    bool plot_no_ts = false;
    plot->add_option("--in", plot_in, "carpet / modulus / density / manifest JSON")->required();
    plot->add_option("--out", plot_out, "SVG file");
    plot->add_flag("--no-timestamp", plot_no_ts, "omit the timestamp comment");

    CLI11_PARSE(app, argc, argv);
    set_thread_count(threads);

    if (gen->parsed()) {
        Carpet S;
        if (gen_kind == "sierpinski") {
            S = sierpinski(gen_depth);
        } else if (gen_kind == "ring") {
            const auto k = parse_csv_numbers(gen_k.empty() ? "0.75,0.5,0.375,0.25" : gen_k, 4);
            S = ring_carpet(gen_a, k[0], k[1], k[2], k[3], gen_depth);
        } else if (gen_kind == "cstar") {
            const auto k = parse_csv_numbers(gen_k.empty() ? "1.6,2.5,0.5,1.0" : gen_k, 4);
            S = cstar_carpet(gen_r, k[0], k[1], k[2], k[3], gen_depth);
        } else {
            throw std::invalid_argument("gen: unknown kind '" + gen_kind + "'");
        }
        write_text_file(gen_out, to_json(S).dump(2) + "\n");
        return 0;
    }

    if (mod->parsed()) {
        const Region region = region_for_modulus(mod_region_file, mod_carpet_file, mod_rect_a, mod_log_r);
        const PathFamily family = PathFamily::product(region, family_kind_from_name(mod_family));
        const ChartRect c = region.chart();
        const int nx = mod_grid;
        const int ny = std::max(1, static_cast<int>(std::lround(nx * c.dv() / c.du())));
        ModulusOptions opts;
        opts.gap_tol = mod_tol;
        const ModulusResult res = modulus(family, nx, ny, opts);
        write_text_file(mod_out, to_json(res).dump(2) + "\n");
        if (!mod_svg.empty()) {
            SvgOptions so;
            so.timestamp = !mod_no_ts;
            write_text_file(mod_svg, density_to_svg(res.density, so));
        }
        return 0;
    }

    if (ext->parsed()) {
        json manifest;
        if (ext_mode == "carpet") {
            const Carpet S = carpet_from_json(json::parse(read_text_file(ext_carpet)));
            const CarpetBoundaryData data =
                carpet_boundary_data_from_json(json::parse(read_text_file(ext_map)));
            const CarpetSurgeryMap F = carpet_periodic_extension(S, data, ext_grid);
            const PlaneMap out(S.region, ext_grid, ext_grid,
                               [&](PointC z) { return F.eval(z); });
            write_text_file(ext_out, to_json(out).dump() + "\n");
            manifest["periodicity_residual"] = F.periodicity_residual();
            manifest["boundary_agreement"] = F.boundary_agreement();
            json periods = json::array();
            for (const auto& o : F.orbits().orbits) periods.push_back(o.period);
            manifest["orbit_periods"] = std::move(periods);
        } else {
            const CircleMap f = circle_map_from_csv(read_text_file(ext_map));
            if (ext_mode == "ba") {
                const PlaneMap out = ba_extend(f, ext_grid / 2, ext_grid);
                write_text_file(ext_out, to_json(out).dump() + "\n");
                manifest["dilatation"] = out.dilatation_estimate();
            } else if (ext_mode == "periodic-annulus") {
                const AnnulusPeriodicMap F = periodic_annulus_extension(f, ext_r, ext_k, ext_grid);
                write_text_file(ext_out, to_json(F.to_plane_map(ext_grid / 2, ext_grid)).dump() + "\n");
                const auto probes = region_probes(Region::annulus(ext_r), 4096);
                manifest["periodicity_residual"] = iteration_residual(F.fn(), ext_k, probes);
                manifest["boundary_agreement"] = F.boundary_agreement();
            } else if (ext_mode == "tower") {
                const AnnulusPeriodicMap base = periodic_annulus_extension(f, ext_r, ext_k, ext_grid);
                const int depth = ext_depth > 0
                                      ? ext_depth
                                      : default_tower_depth(ext_r, 4.0 / ext_grid);
                const ReflectionTower tower = reflection_tower_extend(base.fn(), ext_r, depth);
                const PlaneWindowMap window = extend_to_plane(tower.fn());
                write_text_file(ext_out, to_json(window.to_plane_map(ext_grid)).dump() + "\n");
                manifest = to_json(tower.ring_residuals(ext_k));
            } else {
                throw std::invalid_argument("extend: unknown mode '" + ext_mode + "'");
            }
        }
        write_text_file(ext_manifest, manifest.dump(2) + "\n");
        return 0;
    }

    if (rig->parsed()) {
        const Carpet S = carpet_from_json(json::parse(read_text_file(rig_carpet)));
        const json map_json = json::parse(read_text_file(rig_map));
        if (rig_pipeline == "carpet") {
            const CarpetBoundaryData data = carpet_boundary_data_from_json(map_json);
            const RigidityReport rep =
                carpet_rigidity_pipeline(S, data, rig_k > 1 ? rig_k : data.k, rig_tol, rig_grid);
            write_text_file(rig_out, to_json(rep).dump(2) + "\n");
            return rep.verdict == Verdict::identity ? 0 : 1;
        }
        if (rig_pipeline == "square") {
            RingMapData data;
            data.outer = circle_map_from_json(map_json.at("outer"));
            data.pairing.perm = map_json.at("pairing").get<std::vector<int>>();
            const SquarePipelineResult res = square_carpet_pipeline(S, data, rig_tol, rig_grid);
            json j;
            j["verdict"] = verdict_name(res.verdict);
            j["n"] = res.n;
            j["k_orbit"] = res.k_orbit;
            json checks = json::array();
            for (const auto& c2 : res.checks)
                checks.push_back({{"name", c2.name}, {"pass", c2.pass}, {"detail", c2.detail}});
            j["hypothesis_checks"] = std::move(checks);
            write_text_file(rig_out, j.dump(2) + "\n");
            return res.verdict == Verdict::identity ? 0 : 1;
        }
        if (rig_pipeline == "cstar") {
            CstarMapData data;
            data.inner = circle_map_from_json(map_json.at("inner"));
            data.outer = circle_map_from_json(map_json.at("outer"));
            data.pairing.perm = map_json.at("pairing").get<std::vector<int>>();
            const CstarPipelineResult res = cstar_pipeline(S, data, rig_tol, rig_grid);
            json j;
            j["verdict"] = res.periodic ? "periodic" : "inconclusive";
            j["n"] = res.n;
            j["period"] = res.period;
            j["notes"] = res.notes;
            json checks = json::array();
            for (const auto& c2 : res.checks)
                checks.push_back({{"name", c2.name}, {"pass", c2.pass}, {"detail", c2.detail}});
            j["hypothesis_checks"] = std::move(checks);
            write_text_file(rig_out, j.dump(2) + "\n");
            return res.periodic ? 0 : 1;
        }
        throw std::invalid_argument("rigidity: unknown pipeline '" + rig_pipeline + "'");
    }

    if (plot->parsed()) {
        const json j = json::parse(read_text_file(plot_in));
        SvgOptions so;
        so.timestamp = !plot_no_ts;
        std::string svg;
        if (j.contains("holes")) {
            svg = carpet_to_svg(carpet_from_json(j), so);
        } else if (j.contains("density")) {
            svg = density_to_svg(density_from_json(j.at("density")), so);
        } else if (j.contains("nx") && j.contains("values")) {
            svg = density_to_svg(density_from_json(j), so);
        } else if (j.contains("rings")) {
            TowerManifest m;
            for (const auto& r : j.at("rings"))
                m.rings.push_back({r.at("rho").get<double>(), r.at("residual").get<double>()});
            m.monotone = j.value("monotone", true);
            svg = manifest_to_svg(m, so);
        } else {
            throw std::invalid_argument("plot: unrecognized result file");
        }
        write_text_file(plot_out, svg);
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
