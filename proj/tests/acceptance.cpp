// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Run via ctest or directly from the build tree.

#include "perckit/balance_sim.hpp"
#include "perckit/depth.hpp"
#include "perckit/errors.hpp"
#include "perckit/eval_metrics.hpp"
#include "perckit/io_util.hpp"
#include "perckit/oracle.hpp"
#include "perckit/selection.hpp"
#include "perckit/stats.hpp"
#include "perckit/topology.hpp"

#include "cli_runner.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = PERCKIT_CLI_PATH;
const std::string kFixtures = PERCKIT_FIXTURES_DIR;

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

// ---- 1. three-configuration reproduction ------------------------------

void criterion1() {
    using perckit::Configuration;
    auto start = std::chrono::steady_clock::now();
    perckit::Topology t = perckit::parse_topology(perckit::read_file(fixture("three_camera_rig.json")));
    perckit::SelectionResult r = perckit::select(t);
    double elapsed = seconds_since(start);

    bool ok = r.configurations.size() == 3 && r.unassigned_sensors.empty();
    if (ok) {
        const Configuration& usb_direct = r.configurations[0];
        const Configuration& enet_direct = r.configurations[1];
        const Configuration& relayed = r.configurations[2];
        ok = !usb_direct.relay && t.links.usb_linked(usb_direct.sensor, usb_direct.processor) &&
             !enet_direct.relay &&
             t.links.enet_sd_linked(enet_direct.sensor, enet_direct.processor) &&
             !t.links.usb_linked(enet_direct.sensor, enet_direct.processor) &&
             relayed.relay.has_value() &&
             !t.links.direct_linked(relayed.sensor, relayed.processor) &&
             t.links.direct_linked(relayed.sensor, *relayed.relay) &&
             t.enet_reachable(*relayed.relay, relayed.processor);
    }
    ok = ok && elapsed < 1.0;

    // the CLI path must agree with the library path
    auto scratch = cli_runner::scratch_dir("perckit_acceptance");
    auto cli = cli_runner::run(kCli, "select --topology " + fixture("three_camera_rig.json"), scratch);
    ok = ok && cli.exit_code == 0 && cli.out == perckit::serialize_selection(r);

    std::ostringstream detail;
    detail << "one usb-direct, one enet-direct, one relayed; " << perckit::format_fixed(elapsed, 3)
           << " s";
    report(1, "hardware selection reproduces the reference rig layout", ok, detail.str());
}

// ---- 2. oracle equivalence on fully connected instances ---------------

void criterion2() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xFACADE);
    int checked = 0;
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
        perckit::Topology t = testsupport::random_full_topology(rng);
        perckit::SelectionResult r = perckit::select(t);
        auto [best, best_score] = perckit::best_assignment(t);

        perckit::Assignment greedy;
        greedy.configurations = r.configurations;
        std::sort(greedy.configurations.begin(), greedy.configurations.end());
        ok = greedy.configurations == best.configurations;

        auto sensors = perckit::sort_sensors(t.sensors);
        auto devices = perckit::sort_devices(t.devices);
        std::size_t pairs = std::min(sensors.size(), devices.size());
        ok = ok && r.configurations.size() == pairs;
        for (std::size_t k = 0; ok && k < pairs; ++k)
            ok = r.configurations[k].sensor == sensors[k].id &&
                 r.configurations[k].processor == devices[k].id && !r.configurations[k].relay;
        ++checked;
    }
    double elapsed = seconds_since(start);
    ok = ok && elapsed < 30.0;
    std::ostringstream detail;
    detail << checked << " instances, " << perckit::format_fixed(elapsed, 3) << " s";
    report(2, "greedy equals the exhaustive best on fully connected instances", ok,
           detail.str());
}

// ---- 3. oracle dominance on partial instances --------------------------

void criterion3() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xD011A2CE);
    int checked = 0;
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
        perckit::Topology t = testsupport::random_partial_topology(rng);
        perckit::SelectionResult r = perckit::select(t);
        for (const auto& c : r.configurations)
            ok = ok && perckit::configuration_feasible(t, c);
        ok = ok && testsupport::exclusive_ids(r.configurations);

        auto [best, best_score] = perckit::best_assignment(t);
        perckit::Score greedy_score = perckit::score_selection(t, r);
        ok = ok && !perckit::score_better(greedy_score, best_score);
        ++checked;
    }
    double elapsed = seconds_since(start);
    ok = ok && elapsed < 60.0;
    std::ostringstream detail;
    detail << checked << " instances, " << perckit::format_fixed(elapsed, 3) << " s";
    report(3, "greedy output is feasible and never beats the oracle", ok, detail.str());
}

// ---- 4. depth estimate vs brute-force window average -------------------

bool reference_depth(const perckit::DepthImage& img, const perckit::BBox& box, int rw,
                     int rh, double* out) {
    double cx = box.x + box.w / 2.0;
    double cy = box.y + box.h / 2.0;
    double sum = 0.0;
    long long valid = 0, total = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (!(x >= cx - rw / 2.0 && x < cx + rw / 2.0)) continue;
            if (!(y >= cy - rh / 2.0 && y < cy + rh / 2.0)) continue;
            ++total;
            double v = img.at(x, y);
            if (v > 0.0) {
                ++valid;
                sum += v;
            }
        }
    if (total == 0 || valid * 2 < total) return false;
    *out = sum / static_cast<double>(valid);
    return true;
}

void criterion4() {
    std::mt19937_64 rng(0xDE9714);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    int compared = 0, clipped = 0, holey = 0;
    bool ok = true;
    while (compared < 140 && ok) {
        perckit::DepthImage img;
        img.width = 24 + static_cast<int>(rng() % 100);
        img.height = 24 + static_cast<int>(rng() % 100);
        double hole_rate = 0.35 * unit();
        bool has_holes = false;
        for (int p = 0; p < img.width * img.height; ++p) {
            bool hole = unit() < hole_rate;
            has_holes = has_holes || hole;
            img.values.push_back(hole ? 0.0 : 0.2 + unit() * 6.0);
        }
        perckit::BBox box;
        box.w = 3 + unit() * 36;
        box.h = 3 + unit() * 36;
        box.x = unit() * img.width - box.w / 2.0;
        box.y = unit() * img.height - box.h / 2.0;
        double cx = box.x + box.w / 2.0, cy = box.y + box.h / 2.0;
        if (cx < 0 || cx >= img.width || cy < 0 || cy >= img.height) continue;

        int rw = 1 + static_cast<int>(rng() % 30);
        int rh = 1 + static_cast<int>(rng() % 30);
        bool is_clipped = cx - rw / 2.0 < 0 || cx + rw / 2.0 > img.width ||
                          cy - rh / 2.0 < 0 || cy + rh / 2.0 > img.height;

        double expected;
        if (reference_depth(img, box, rw, rh, &expected)) {
            double got = perckit::estimate_depth(img, box, rw, rh);
            ok = std::abs(got - expected) <= 1e-12;
        } else {
            try {
                perckit::estimate_depth(img, box, rw, rh);
                ok = false;
            } catch (const perckit::DomainError&) {
            }
        }
        ++compared;
        clipped += is_clipped;
        holey += has_holes;
    }
    std::ostringstream detail;
    detail << compared << " cases (" << clipped << " border-clipped, " << holey
           << " with holes), tolerance 1e-12";
    report(4, "depth estimate equals the brute-force window mean", ok && compared >= 100,
           detail.str());
}

// ---- 5. AP / mAP formulas and properties -------------------------------

void criterion5() {
    using perckit::MatchLabel;
    bool ok = true;

    // hand-computed fixture
    auto pts = perckit::pr_curve({MatchLabel::TP, MatchLabel::FP, MatchLabel::TP}, 2);
    double ap = perckit::average_precision(pts);
    ok = ok && std::abs(ap - (0.5 + 0.5 * 2.0 / 3.0)) <= 1e-9;

    // perfect detections: AP 1.0 at every threshold
    auto dets = perckit::load_detections_csv(
        perckit::read_file(fixture("detections_perfect.csv")));
    auto gts = perckit::load_ground_truth_csv(
        perckit::read_file(fixture("ground_truth_perfect.csv")));
    perckit::EvalReport perfect = perckit::threshold_sweep(dets, gts);
    ok = ok && perfect.thresholds.size() == 100;
    for (std::size_t ti = 0; ti < perfect.thresholds.size(); ++ti) {
        for (double v : perfect.ap[ti]) ok = ok && v == 1.0;
        ok = ok && perfect.map[ti] == 1.0;
    }

    // property suite vs the per-threshold reference
    std::mt19937_64 rng(0x5EED5);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const char* classes[] = {"cone", "cube", "sphere"};
    int instances = 0;
    for (int i = 0; i < 500 && ok; ++i, ++instances) {
        std::vector<perckit::GroundTruthBox> igts;
        std::vector<perckit::Detection> idets;
        int n_gt = 1 + static_cast<int>(rng() % 5);
        for (int g = 0; g < n_gt; ++g)
            igts.push_back({"img" + std::to_string(rng() % 2), classes[rng() % 3],
                            {unit() * 60, unit() * 60, 4 + unit() * 30, 4 + unit() * 30}});
        int n_det = static_cast<int>(rng() % 10);
        for (int d = 0; d < n_det; ++d) {
            if (rng() % 2) {
                const auto& gt = igts[rng() % igts.size()];
                idets.push_back({gt.image_id, gt.class_label, unit(),
                                 {gt.box.x + unit() * 8 - 4, gt.box.y + unit() * 8 - 4,
                                  gt.box.w * (0.7 + 0.6 * unit()),
                                  gt.box.h * (0.7 + 0.6 * unit())}});
            } else {
                idets.push_back({"img" + std::to_string(rng() % 2), classes[rng() % 3],
                                 unit(),
                                 {unit() * 60, unit() * 60, 4 + unit() * 30,
                                  4 + unit() * 30}});
            }
        }

        perckit::EvalReport rep = perckit::threshold_sweep(idets, igts);
        for (std::size_t ti = 0; ti < rep.thresholds.size() && ok; ++ti) {
            for (std::size_t ci = 0; ci < rep.classes.size() && ok; ++ci) {
                double v = rep.ap[ti][ci];
                ok = v >= 0.0 && v <= 1.0;
                std::vector<perckit::Detection> cd;
                std::vector<perckit::GroundTruthBox> cg;
                for (const auto& d : idets)
                    if (d.class_label == rep.classes[ci]) cd.push_back(d);
                for (const auto& g : igts)
                    if (g.class_label == rep.classes[ci]) cg.push_back(g);
                double expected = testsupport::naive_class_ap(cd, cg, rep.thresholds[ti]);
                ok = ok && std::abs(v - expected) <= 1e-9;
            }
        }

        // trailing lowest-score FP never raises AP
        if (ok && !igts.empty()) {
            const std::string cls = igts[0].class_label;
            std::vector<perckit::Detection> cd;
            std::vector<perckit::GroundTruthBox> cg;
            for (const auto& d : idets)
                if (d.class_label == cls) cd.push_back(d);
            for (const auto& g : igts)
                if (g.class_label == cls) cg.push_back(g);
            double before = testsupport::naive_class_ap(cd, cg, 0.5);
            double lowest = 1.0;
            for (const auto& d : cd) lowest = std::min(lowest, d.score);
            cd.push_back({"img0", cls, lowest * 0.25, {500, 500, 3, 3}});
            double after = testsupport::naive_class_ap(cd, cg, 0.5);
            ok = after <= before + 1e-12;
        }

        // threshold monotonicity on a one-overlap dataset
        if (ok && i % 3 == 0) {
            std::vector<perckit::GroundTruthBox> sgts;
            std::vector<perckit::Detection> sdets;
            int n = 1 + static_cast<int>(rng() % 5);
            for (int k = 0; k < n; ++k) {
                perckit::GroundTruthBox gt{"img", "cone",
                                           {k * 150.0, 0.0, 15 + unit() * 10, 15 + unit() * 10}};
                sgts.push_back(gt);
                if (rng() % 4)
                    sdets.push_back({"img", "cone", unit(),
                                     {gt.box.x + unit() * 6 - 3, gt.box.y + unit() * 6 - 3,
                                      gt.box.w * (0.8 + 0.4 * unit()),
                                      gt.box.h * (0.8 + 0.4 * unit())}});
            }
            perckit::EvalReport srep = perckit::threshold_sweep(sdets, sgts);
            for (std::size_t ti = 1; ti < srep.thresholds.size() && ok; ++ti)
                ok = srep.ap[ti][0] <= srep.ap[ti - 1][0] + 1e-12;
        }
    }

    std::ostringstream detail;
    detail << instances << " random instances vs per-threshold reference";
    report(5, "interpolated AP, mAP, and sweep match the reference", ok, detail.str());
}

// ---- 6. confidence interval formula ------------------------------------

void criterion6() {
    bool ok = true;

    std::vector<double> constant(300, 10.0);
    perckit::ConfidenceInterval flat = perckit::confidence_interval(constant);
    ok = ok && perckit::format_interval(flat) == "10.000000 ± 0.000000";

    // samples constructed so the sample stddev is 1.0 up to rounding; the
    // z-table value fixes the expected half-width at 1.959964 / sqrt(300),
    // frozen here from direct formula evaluation
    double d = std::sqrt(299.0 / 300.0);
    std::vector<double> unitized;
    for (int i = 0; i < 150; ++i) {
        unitized.push_back(10.0 - d);
        unitized.push_back(10.0 + d);
    }
    perckit::ConfidenceInterval unit_ci = perckit::confidence_interval(unitized, 0.95);
    ok = ok && std::abs(unit_ci.half_width - 0.11315857430019756) <= 1e-9;
    ok = ok && std::abs(unit_ci.half_width - 0.113159) <= 1e-6;
    ok = ok && perckit::format_fixed(unit_ci.half_width, 6) == "0.113159";

    // power-of-two scaling and integer shifts are exact in binary floating point
    std::mt19937_64 rng(0xC1);
    std::vector<double> base;
    for (int i = 0; i < 256; ++i) base.push_back(static_cast<double>(rng() % 128));
    perckit::ConfidenceInterval b = perckit::confidence_interval(base);
    std::vector<double> scaled, shifted;
    for (double v : base) scaled.push_back(v * 8.0);
    for (double v : base) shifted.push_back(v + 1000.0);
    perckit::ConfidenceInterval s = perckit::confidence_interval(scaled);
    perckit::ConfidenceInterval t = perckit::confidence_interval(shifted);
    ok = ok && s.mean == b.mean * 8.0 && s.half_width == b.half_width * 8.0;
    ok = ok && t.mean == b.mean + 1000.0 && t.half_width == b.half_width;

    report(6, "confidence interval formula and its scale/shift behavior", ok,
           "half-width 1.959964/sqrt(300) = 0.113159 within 1e-6; scale/shift exact");
}

// ---- 7. simulator conservation and balance ------------------------------

void criterion7() {
    bool ok = true;
    std::ostringstream detail;

    perckit::SimConfig two = perckit::parse_sim_config(
        perckit::read_file(fixture("sim_twonode.json")));
    auto start = std::chrono::steady_clock::now();
    perckit::SimMetrics m = perckit::run_sim(two);
    double elapsed = seconds_since(start);
    ok = ok && elapsed < 5.0;
    ok = ok && m.arrived == m.completed + m.queued_at_end;
    ok = ok && m.imbalance < 0.05;
    ok = ok && perckit::metrics_to_csv(perckit::run_sim(two)) == perckit::metrics_to_csv(m);

    std::mt19937_64 rng(0x51D);
    for (int i = 0; i < 25 && ok; ++i) {
        perckit::SimConfig cfg;
        int nn = 1 + static_cast<int>(rng() % 4);
        for (int n = 0; n < nn; ++n)
            cfg.nodes.push_back({"n" + std::to_string(n),
                                 3.0 + static_cast<double>(rng() % 250) / 10.0});
        int ns = 1 + static_cast<int>(rng() % 3);
        for (int s2 = 0; s2 < ns; ++s2)
            cfg.sources.push_back({"s" + std::to_string(s2),
                                   2.0 + static_cast<double>(rng() % 280) / 10.0,
                                   (rng() % 2) ? perckit::ArrivalKind::Poisson
                                               : perckit::ArrivalKind::Deterministic});
        cfg.broadcast_interval = 0.25 + static_cast<double>(rng() % 8) / 8.0;
        cfg.horizon = 10.0 + static_cast<double>(rng() % 30);
        cfg.seed = rng();
        perckit::SimMetrics sm = perckit::run_sim(cfg);
        ok = ok && sm.arrived == sm.completed + sm.queued_at_end && sm.dropped == 0;
    }

    detail << "two-node imbalance " << perckit::format_fixed(m.imbalance, 6) << ", "
           << perckit::format_fixed(elapsed, 3) << " s/run";
    report(7, "simulator conserves tasks and balances identical nodes", ok, detail.str());
}

// ---- 8. byte-identical CLI outputs --------------------------------------

void criterion8() {
    auto scratch = cli_runner::scratch_dir("perckit_acceptance");
    const std::string invocations[] = {
        "select --topology " + fixture("three_camera_rig.json"),
        "validate --topology " + fixture("three_camera_rig.json"),
        "validate --topology " + fixture("topo_partition.json"),
        "oracle --topology " + fixture("three_camera_rig.json"),
        "simulate --config " + fixture("sim_twonode.json"),
        "eval --detections " + fixture("detections_perfect.csv") + " --ground-truth " +
            fixture("ground_truth_perfect.csv"),
        "eval --detections " + fixture("detections_perfect.csv") + " --ground-truth " +
            fixture("ground_truth_perfect.csv") + " --jobs 4",
        "depth --image " + fixture("depth_uniform.csv") + " --box 10,10,20,20",
        "depth --image " + fixture("depth_scene.pgm") + " --box 2,1,4,4 --region 4x4",
        "stats --samples " + fixture("samples_const.csv"),
        "stats --samples " + fixture("samples_const.csv") + " --level 0.99",
    };
    bool ok = true;
    int count = 0;
    for (const auto& inv : invocations) {
        auto a = cli_runner::run(kCli, inv, scratch);
        auto b = cli_runner::run(kCli, inv, scratch);
        ok = ok && a.exit_code == b.exit_code && a.out == b.out && a.err == b.err;
        ++count;
    }
    std::ostringstream detail;
    detail << count << " invocations run twice";
    report(8, "repeated CLI invocations are byte-identical", ok, detail.str());
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
