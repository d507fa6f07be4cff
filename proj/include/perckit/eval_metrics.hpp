#pragma once

#include <string>
#include <vector>

namespace perckit {

// Axis-aligned box: left/top corner plus extent, continuous pixel units.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }
    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }

    bool operator==(const BBox&) const = default;
};

struct Detection {
    std::string image_id;
    std::string class_label;
    double score = 0.0;
    BBox box;
};

struct GroundTruthBox {
    std::string image_id;
    std::string class_label;
    BBox box;
};

struct PRPoint {
    double recall = 0.0;
    double precision = 0.0;

    bool operator==(const PRPoint&) const = default;
};

enum class MatchLabel { TP, FP };

struct MatchedDetection {
    Detection detection;
    MatchLabel label = MatchLabel::FP;
};

// Per-class AP at each IoU threshold 0.01 .. 1.00 plus the per-threshold
// mAP. Classes are the ground-truth classes, sorted.
struct EvalReport {
    std::vector<double> thresholds;            // exactly {0.01, ..., 1.00}
    std::vector<std::string> classes;
    std::vector<std::vector<double>> ap;       // [threshold][class]
    std::vector<double> map;                   // [threshold]
};

// Intersection area over union area; 0 when the union is empty.
double iou(const BBox& a, const BBox& b);

// Greedy one-to-one matching for a single class: detections in descending
// score order (ties: ascending image_id, then input order), each taking the
// best unmatched same-image ground truth; TP iff that IoU >= thr.
std::vector<MatchedDetection> match_detections(const std::vector<Detection>& dets,
                                               const std::vector<GroundTruthBox>& gts,
                                               double thr);

// Cumulative precision/recall along the ranked TP/FP sequence. Empty when
// gt_count is zero.
std::vector<PRPoint> pr_curve(const std::vector<MatchLabel>& labels, std::size_t gt_count);

// Interpolated area under the precision curve: sum over distinct recall
// steps of step width times the max precision at recall >= the step's end.
double average_precision(const std::vector<PRPoint>& points);

// Arithmetic mean of the per-class APs; throws DomainError on an empty set.
double map_score(const std::vector<double>& class_aps);

// Full sweep over the 100-threshold grid. jobs > 1 splits thresholds
// across threads; the merged report is identical for any job count.
EvalReport threshold_sweep(const std::vector<Detection>& dets,
                           const std::vector<GroundTruthBox>& gts,
                           int jobs = 1);

// CSV I/O. Detections: image_id,class,score,x,y,w,h. Ground truth drops the
// score column. Both require the header row.
std::vector<Detection> load_detections_csv(const std::string& text);
std::vector<GroundTruthBox> load_ground_truth_csv(const std::string& text);
std::string report_to_csv(const EvalReport& report);

} // namespace perckit
