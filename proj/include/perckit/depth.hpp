#pragma once

#include "perckit/eval_metrics.hpp"

#include <string>
#include <vector>

namespace perckit {

// Dense per-pixel depth in meters, row-major. A value of 0.0 means the
// sensor produced no data for that pixel.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// CSV of row-major meters, or 16-bit PGM in millimeters (0.001 m per unit).
// The format is sniffed from the content (PGM magic P2/P5), not the name.
DepthImage load_depth_image_text(const std::string& content);
DepthImage load_depth_image(const std::string& path);

// Mean depth over the region_w x region_h window centered on the box
// center, half-open ranges, clipped to the image, zero pixels excluded.
// Throws DomainError when the box center is outside the image or when
// fewer than 50% of the window pixels carry data.
double estimate_depth(const DepthImage& img, const BBox& box,
                      int region_w = 20, int region_h = 20);

} // namespace perckit
