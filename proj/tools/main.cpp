#include "perckit/balance_sim.hpp"
#include "perckit/depth.hpp"
#include "perckit/errors.hpp"
#include "perckit/eval_metrics.hpp"
#include "perckit/io_util.hpp"
#include "perckit/oracle.hpp"
#include "perckit/selection.hpp"
#include "perckit/stats.hpp"
#include "perckit/topology.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1; // violations found, insufficient data, ...
constexpr int kExitUsage = 2;  // bad flags, malformed inputs

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        perckit::write_file(out_path, content);
}

// --box x,y,w,h
perckit::BBox parse_box(const std::string& spec) {
    auto fields = perckit::split_csv_line(spec);
    if (fields.size() != 4)
        throw perckit::FormatError("--box expects x,y,w,h");
    perckit::BBox box;
    box.x = perckit::parse_double(fields[0], "--box x");
    box.y = perckit::parse_double(fields[1], "--box y");
    box.w = perckit::parse_double(fields[2], "--box w");
    box.h = perckit::parse_double(fields[3], "--box h");
    if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) ||
        !std::isfinite(box.h) || box.w < 0.0 || box.h < 0.0)
        throw perckit::FormatError("--box values must be finite with non-negative extents");
    return box;
}

// --region WxH
std::pair<int, int> parse_region(const std::string& spec) {
    auto x = spec.find('x');
    if (x == std::string::npos)
        throw perckit::FormatError("--region expects WxH, e.g. 20x20");
    long long w = perckit::parse_integer(spec.substr(0, x), "--region width");
    long long h = perckit::parse_integer(spec.substr(x + 1), "--region height");
    if (w < 1 || h < 1)
        throw perckit::FormatError("--region dimensions must be >= 1");
    return {static_cast<int>(w), static_cast<int>(h)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensor placement and perception evaluation toolkit"};
    app.require_subcommand(1);

    std::string topology_path, out_path, config_path;
    std::string detections_path, ground_truth_path;
    std::string image_path, box_spec, region_spec = "20x20";
    std::string samples_path;
    double level = 0.95;
    int jobs = 1;

    auto* cmd_select = app.add_subcommand("select", "Assign sensors to devices");
    cmd_select->add_option("--topology", topology_path, "Topology file")->required();
    cmd_select->add_option("--out", out_path, "Output file (default: stdout)");

    auto* cmd_validate = app.add_subcommand("validate", "Report topology constraint violations");
    cmd_validate->add_option("--topology", topology_path, "Topology file")->required();

    auto* cmd_oracle = app.add_subcommand("oracle", "Exhaustive best assignment (small instances)");
    cmd_oracle->add_option("--topology", topology_path, "Topology file")->required();
    cmd_oracle->add_option("--out", out_path, "Output file (default: stdout)");

    auto* cmd_simulate = app.add_subcommand("simulate", "Run the load-balance simulator");
    cmd_simulate->add_option("--config", config_path, "Simulation config file")->required();
    cmd_simulate->add_option("--out", out_path, "Output CSV (default: stdout)");

    auto* cmd_eval = app.add_subcommand("eval", "IoU-threshold sweep of AP and mAP");
    cmd_eval->add_option("--detections", detections_path, "Detections CSV")->required();
    cmd_eval->add_option("--ground-truth", ground_truth_path, "Ground truth CSV")->required();
    cmd_eval->add_option("--out", out_path, "Output CSV (default: stdout)");
    cmd_eval->add_option("--jobs", jobs, "Worker threads for the sweep")
        ->check(CLI::PositiveNumber);

    auto* cmd_depth = app.add_subcommand("depth", "Estimate object depth from a bounding box");
    cmd_depth->add_option("--image", image_path, "Depth image (CSV meters or PGM16 mm)")
        ->required();
    cmd_depth->add_option("--box", box_spec, "Bounding box x,y,w,h")->required();
    cmd_depth->add_option("--region", region_spec, "Averaging window WxH (default 20x20)");

    auto* cmd_stats = app.add_subcommand("stats", "Frame-rate confidence interval");
    cmd_stats->add_option("--samples", samples_path, "One-column CSV of fps samples")
        ->required();
    cmd_stats->add_option("--level", level, "Confidence level: 0.90, 0.95, or 0.99");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (cmd_select->parsed()) {
            auto topo = perckit::parse_topology(perckit::read_file(topology_path));
            emit(perckit::serialize_selection(perckit::select(topo)), out_path);
        } else if (cmd_validate->parsed()) {
            auto topo = perckit::parse_topology(perckit::read_file(topology_path));
            auto violations = perckit::validate(topo);
            for (const auto& v : violations)
                std::cout << "violation constraint=" << v.constraint << " subject="
                          << v.subject << " detail=" << v.detail << "\n";
            if (!violations.empty()) return kExitDomain;
            std::cout << "ok\n";
        } else if (cmd_oracle->parsed()) {
            auto topo = perckit::parse_topology(perckit::read_file(topology_path));
            auto [best, score] = perckit::best_assignment(topo);
            emit(perckit::serialize_assignment(best, score), out_path);
        } else if (cmd_simulate->parsed()) {
            auto cfg = perckit::parse_sim_config(perckit::read_file(config_path));
            emit(perckit::metrics_to_csv(perckit::run_sim(cfg)), out_path);
        } else if (cmd_eval->parsed()) {
            auto dets = perckit::load_detections_csv(perckit::read_file(detections_path));
            auto gts = perckit::load_ground_truth_csv(perckit::read_file(ground_truth_path));
            emit(perckit::report_to_csv(perckit::threshold_sweep(dets, gts, jobs)), out_path);
        } else if (cmd_depth->parsed()) {
            auto img = perckit::load_depth_image(image_path);
            auto [rw, rh] = parse_region(region_spec);
            double meters = perckit::estimate_depth(img, parse_box(box_spec), rw, rh);
            std::cout << perckit::format_fixed(meters, 6) << "\n";
        } else if (cmd_stats->parsed()) {
            if (level != 0.90 && level != 0.95 && level != 0.99)
                throw perckit::FormatError("--level must be 0.90, 0.95, or 0.99");
            auto samples = perckit::load_samples_csv(perckit::read_file(samples_path));
            auto ci = perckit::confidence_interval(samples, level);
            std::cout << perckit::format_interval(ci, 6) << "\n";
            std::cout << "n=" << ci.n << " mean=" << perckit::format_fixed(ci.mean, 6)
                      << " stddev=" << perckit::format_fixed(ci.stddev, 6)
                      << " level=" << perckit::format_fixed(ci.level, 2)
                      << " half_width=" << perckit::format_fixed(ci.half_width, 6) << "\n";
        }
    } catch (const perckit::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const perckit::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
