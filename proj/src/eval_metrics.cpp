#include "perckit/eval_metrics.hpp"

#include "perckit/errors.hpp"
#include "perckit/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace perckit {

double iou(const BBox& a, const BBox& b) {
    const double ax2 = a.x + a.w, ay2 = a.y + a.h;
    const double bx2 = b.x + b.w, by2 = b.y + b.h;
    const double iw = std::max(0.0, std::min(ax2, bx2) - std::max(a.x, b.x));
    const double ih = std::max(0.0, std::min(ay2, by2) - std::max(a.y, b.y));
    const double inter = iw * ih;
    // Areas derive from the same corner sums as the intersection so that
    // identical boxes give exactly 1.
    const double uni = (ax2 - a.x) * (ay2 - a.y) + (bx2 - b.x) * (by2 - b.y) - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

std::vector<MatchedDetection> match_detections(const std::vector<Detection>& dets,
                                               const std::vector<GroundTruthBox>& gts,
                                               double thr) {
    std::vector<std::size_t> order(dets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        return dets[a].image_id < dets[b].image_id;
    });

    std::vector<bool> gt_taken(gts.size(), false);
    std::vector<MatchedDetection> result;
    result.reserve(dets.size());
    for (std::size_t idx : order) {
        const Detection& det = dets[idx];
        double best_iou = -1.0;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_taken[g] || gts[g].image_id != det.image_id) continue;
            double v = iou(det.box, gts[g].box);
            if (v > best_iou) {
                best_iou = v;
                best_gt = g;
            }
        }
        MatchLabel label = MatchLabel::FP;
        if (best_gt < gts.size() && best_iou >= thr) {
            label = MatchLabel::TP;
            gt_taken[best_gt] = true;
        }
        result.push_back({det, label});
    }
    return result;
}

std::vector<PRPoint> pr_curve(const std::vector<MatchLabel>& labels, std::size_t gt_count) {
    std::vector<PRPoint> points;
    if (gt_count == 0) return points;
    points.reserve(labels.size());
    std::size_t tp = 0, fp = 0;
    for (MatchLabel label : labels) {
        if (label == MatchLabel::TP) ++tp; else ++fp;
        PRPoint p;
        p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        p.recall = static_cast<double>(tp) / static_cast<double>(gt_count);
        points.push_back(p);
    }
    return points;
}

double average_precision(const std::vector<PRPoint>& points) {
    if (points.empty()) return 0.0;
    std::vector<double> levels;
    levels.push_back(0.0);
    for (const auto& p : points) levels.push_back(p.recall);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    double ap = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double r_next = levels[i + 1];
        double best_p = 0.0;
        for (const auto& p : points)
            if (p.recall >= r_next) best_p = std::max(best_p, p.precision);
        ap += (r_next - levels[i]) * best_p;
    }
    return ap;
}

double map_score(const std::vector<double>& class_aps) {
    if (class_aps.empty())
        throw DomainError("map: no classes to average");
    double sum = 0.0;
    for (double v : class_aps) sum += v;
    return sum / static_cast<double>(class_aps.size());
}

namespace {

double class_ap_at(const std::vector<Detection>& dets,
                   const std::vector<GroundTruthBox>& gts,
                   double thr) {
    auto matched = match_detections(dets, gts, thr);
    std::vector<MatchLabel> labels;
    labels.reserve(matched.size());
    for (const auto& m : matched) labels.push_back(m.label);
    return average_precision(pr_curve(labels, gts.size()));
}

} // namespace

EvalReport threshold_sweep(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthBox>& gts,
                           int jobs) {
    EvalReport report;
    for (int i = 1; i <= 100; ++i) report.thresholds.push_back(i / 100.0);

    // Report classes are the ground-truth classes; detections for classes
    // with no ground truth anywhere are skipped.
    std::set<std::string> class_set;
    for (const auto& g : gts) class_set.insert(g.class_label);
    report.classes.assign(class_set.begin(), class_set.end());

    std::map<std::string, std::vector<Detection>> dets_by_class;
    std::map<std::string, std::vector<GroundTruthBox>> gts_by_class;
    for (const auto& c : report.classes) {
        dets_by_class[c] = {};
        gts_by_class[c] = {};
    }
    for (const auto& d : dets)
        if (class_set.count(d.class_label)) dets_by_class[d.class_label].push_back(d);
    for (const auto& g : gts) gts_by_class[g.class_label].push_back(g);

    report.ap.assign(report.thresholds.size(),
                     std::vector<double>(report.classes.size(), 0.0));
    report.map.assign(report.thresholds.size(), 0.0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t ti = begin; ti < end; ++ti) {
            const double thr = report.thresholds[ti];
            for (std::size_t ci = 0; ci < report.classes.size(); ++ci) {
                const std::string& cls = report.classes[ci];
                report.ap[ti][ci] = class_ap_at(dets_by_class.at(cls), gts_by_class.at(cls), thr);
            }
            if (!report.classes.empty()) report.map[ti] = map_score(report.ap[ti]);
        }
    };

    const std::size_t n = report.thresholds.size();
    if (jobs <= 1) {
        run_range(0, n);
    } else {
        const std::size_t workers = std::min<std::size_t>(jobs, n);
        std::vector<std::thread> threads;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk;
            std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_range, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    return report;
}

namespace {

bool box_valid(const BBox& b) {
    return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) &&
           std::isfinite(b.h) && b.w >= 0.0 && b.h >= 0.0;
}

void check_header(const std::vector<std::string>& fields,
                  const std::vector<std::string>& expected,
                  const std::string& what) {
    if (fields != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ",";
            want += expected[i];
        }
        throw FormatError(what + ": expected header \"" + want + "\"");
    }
}

} // namespace

std::vector<Detection> load_detections_csv(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw FormatError("detections: empty file");
    check_header(split_csv_line(lines[0]),
                 {"image_id", "class", "score", "x", "y", "w", "h"}, "detections");
    std::vector<Detection> dets;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = split_csv_line(lines[i]);
        std::string ctx = "detections line " + std::to_string(i + 1);
        if (f.size() != 7) throw FormatError(ctx + ": expected 7 fields, got " +
                                             std::to_string(f.size()));
        Detection d;
        d.image_id = f[0];
        d.class_label = f[1];
        d.score = parse_double(f[2], ctx + " score");
        if (!(d.score >= 0.0 && d.score <= 1.0))
            throw FormatError(ctx + ": score must be in [0,1]");
        d.box = {parse_double(f[3], ctx + " x"), parse_double(f[4], ctx + " y"),
                 parse_double(f[5], ctx + " w"), parse_double(f[6], ctx + " h")};
        if (!box_valid(d.box))
            throw FormatError(ctx + ": box must be finite with non-negative extents");
        dets.push_back(std::move(d));
    }
    return dets;
}

std::vector<GroundTruthBox> load_ground_truth_csv(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw FormatError("ground truth: empty file");
    check_header(split_csv_line(lines[0]),
                 {"image_id", "class", "x", "y", "w", "h"}, "ground truth");
    std::vector<GroundTruthBox> gts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = split_csv_line(lines[i]);
        std::string ctx = "ground truth line " + std::to_string(i + 1);
        if (f.size() != 6) throw FormatError(ctx + ": expected 6 fields, got " +
                                             std::to_string(f.size()));
        GroundTruthBox g;
        g.image_id = f[0];
        g.class_label = f[1];
        g.box = {parse_double(f[2], ctx + " x"), parse_double(f[3], ctx + " y"),
                 parse_double(f[4], ctx + " w"), parse_double(f[5], ctx + " h")};
        if (!box_valid(g.box))
            throw FormatError(ctx + ": box must be finite with non-negative extents");
        gts.push_back(std::move(g));
    }
    return gts;
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "threshold,class,ap,map\n";
    for (std::size_t ti = 0; ti < report.thresholds.size(); ++ti)
        for (std::size_t ci = 0; ci < report.classes.size(); ++ci)
            out << format_fixed(report.thresholds[ti], 2) << ','
                << report.classes[ci] << ','
                << format_fixed(report.ap[ti][ci], 6) << ','
                << format_fixed(report.map[ti], 6) << '\n';
    return out.str();
}

} // namespace perckit
