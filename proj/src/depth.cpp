#include "perckit/depth.hpp"

#include "perckit/errors.hpp"
#include "perckit/io_util.hpp"

#include <cctype>
#include <cmath>

namespace perckit {

namespace {

DepthImage parse_csv_depth(const std::string& content) {
    DepthImage img;
    auto lines = split_lines(content);
    for (std::size_t row = 0; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        auto fields = split_csv_line(lines[row]);
        if (img.width == 0) {
            img.width = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != img.width) {
            throw FormatError("depth csv row " + std::to_string(row + 1) + ": expected " +
                              std::to_string(img.width) + " values, got " +
                              std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            double v = parse_double(f, "depth csv row " + std::to_string(row + 1));
            if (!std::isfinite(v) || v < 0.0)
                throw FormatError("depth csv row " + std::to_string(row + 1) +
                                  ": depth values must be finite and >= 0");
            img.values.push_back(v);
        }
        ++img.height;
    }
    if (img.width == 0 || img.height == 0)
        throw FormatError("depth csv: empty image");
    return img;
}

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string next_pgm_token(const std::string& content, std::size_t& pos) {
    while (pos < content.size()) {
        if (std::isspace(static_cast<unsigned char>(content[pos]))) {
            ++pos;
        } else if (content[pos] == '#') {
            while (pos < content.size() && content[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < content.size() && !std::isspace(static_cast<unsigned char>(content[pos])))
        ++pos;
    if (start == pos) throw FormatError("pgm: truncated header");
    return content.substr(start, pos - start);
}

DepthImage parse_pgm_depth(const std::string& content) {
    std::size_t pos = 0;
    std::string magic = next_pgm_token(content, pos);
    long long width = parse_integer(next_pgm_token(content, pos), "pgm width");
    long long height = parse_integer(next_pgm_token(content, pos), "pgm height");
    long long maxval = parse_integer(next_pgm_token(content, pos), "pgm maxval");
    if (width < 1 || height < 1) throw FormatError("pgm: bad dimensions");
    if (maxval < 1 || maxval > 65535) throw FormatError("pgm: bad maxval");

    DepthImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.values.reserve(static_cast<std::size_t>(width * height));
    const std::size_t count = static_cast<std::size_t>(width * height);

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            long long v = parse_integer(next_pgm_token(content, pos), "pgm pixel");
            if (v < 0 || v > maxval) throw FormatError("pgm: pixel out of range");
            img.values.push_back(static_cast<double>(v) * 0.001); // mm -> m
        }
    } else { // P5
        ++pos; // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        if (pos + count * bytes > content.size())
            throw FormatError("pgm: truncated pixel data");
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v;
            if (bytes == 2) {
                // big-endian 16-bit samples
                v = (static_cast<unsigned char>(content[pos]) << 8) |
                    static_cast<unsigned char>(content[pos + 1]);
                pos += 2;
            } else {
                v = static_cast<unsigned char>(content[pos]);
                pos += 1;
            }
            img.values.push_back(static_cast<double>(v) * 0.001);
        }
    }
    return img;
}

} // namespace

DepthImage load_depth_image_text(const std::string& content) {
    if (content.size() >= 2 && content[0] == 'P' && (content[1] == '2' || content[1] == '5'))
        return parse_pgm_depth(content);
    return parse_csv_depth(content);
}

DepthImage load_depth_image(const std::string& path) {
    return load_depth_image_text(read_file(path));
}

double estimate_depth(const DepthImage& img, const BBox& box, int region_w, int region_h) {
    if (region_w < 1 || region_h < 1)
        throw DomainError("depth: region must be at least 1x1");
    const double cx = box.center_x();
    const double cy = box.center_y();
    if (cx < 0.0 || cx >= img.width || cy < 0.0 || cy >= img.height)
        throw DomainError("depth: box center (" + format_fixed(cx, 2) + ", " +
                          format_fixed(cy, 2) + ") outside image");

    // Half-open window [c - r/2, c + r/2) holds exactly region_w x region_h
    // integer pixel indices before clipping.
    int x0 = static_cast<int>(std::ceil(cx - region_w / 2.0));
    int y0 = static_cast<int>(std::ceil(cy - region_h / 2.0));
    int x1 = x0 + region_w; // exclusive
    int y1 = y0 + region_h;
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, img.width);
    y1 = std::min(y1, img.height);

    long long total = 0, valid = 0;
    double sum = 0.0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            ++total;
            double v = img.at(x, y);
            if (v > 0.0) {
                ++valid;
                sum += v;
            }
        }

    if (total == 0 || valid * 2 < total)
        throw DomainError("depth: insufficient depth data (" + std::to_string(valid) +
                          " of " + std::to_string(total) + " window pixels valid)");
    return sum / static_cast<double>(valid);
}

} // namespace perckit
