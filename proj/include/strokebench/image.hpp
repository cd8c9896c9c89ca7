// SPDX-License-Identifier: Apache-2.0
//
// Raster image types shared by every other module: 8-bit RGB and grayscale
// rasters plus the binary stroke mask, together with grayscale conversion,
// thresholding, and nearest-neighbor mask resizing.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace strokebench {

// Sanity bound on decoded dimensions; native whiteboard photos are 3712x2784.
inline constexpr int kMaxImageDim = 16384;

namespace detail {
inline void check_dims(int width, int height, int channels, std::size_t data_size) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("image dimensions must be nonnegative");
    if (width > kMaxImageDim || height > kMaxImageDim)
        throw std::invalid_argument("image dimensions exceed sanity bound of 16384");
    if (data_size != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                         static_cast<std::size_t>(channels))
        throw std::invalid_argument("image data length does not match dimensions");
}
} // namespace detail

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // row-major RGB triples

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3u, 0) {
        detail::check_dims(w, h, 3, data.size());
    }
    RgbImage(int w, int h, std::vector<std::uint8_t> d) : width(w), height(h), data(std::move(d)) {
        detail::check_dims(w, h, 3, data.size());
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* pixel(int x, int y) { return data.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // row-major intensities

    GrayImage() = default;
    GrayImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {
        detail::check_dims(w, h, 1, data.size());
    }
    GrayImage(int w, int h, std::vector<std::uint8_t> d) : width(w), height(h), data(std::move(d)) {
        detail::check_dims(w, h, 1, data.size());
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { data[static_cast<std::size_t>(y) * width + x] = v; }
};

// Per-pixel stroke mask; data holds 0 (background) or 1 (stroke).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {
        detail::check_dims(w, h, 1, data.size());
    }
    BinaryMask(int w, int h, std::vector<std::uint8_t> d) : width(w), height(h), data(std::move(d)) {
        detail::check_dims(w, h, 1, data.size());
        for (auto& v : data) v = v ? 1 : 0;
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (std::uint8_t v : data) n += v;
        return n;
    }
    double foreground_fraction() const {
        return data.empty() ? 0.0 : static_cast<double>(foreground_count()) / static_cast<double>(data.size());
    }
    bool empty_mask() const { return foreground_count() == 0; }

    bool operator==(const BinaryMask& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

struct GrayWeights {
    double r = 0.299;
    double g = 0.587;
    double b = 0.114; // ITU-R BT.601 luma
};

inline std::uint8_t clamp_u8(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(v);
}

// round half away from zero; inputs here are nonnegative
inline int round_half_away(double v) {
    return static_cast<int>(std::floor(v + 0.5));
}

inline GrayImage to_gray(const RgbImage& img, const GrayWeights& w = {}) {
    GrayImage out(img.width, img.height);
    const std::uint8_t* src = img.data.data();
    for (std::size_t i = 0; i < out.data.size(); ++i, src += 3) {
        double v = w.r * src[0] + w.g * src[1] + w.b * src[2];
        out.data[i] = clamp_u8(static_cast<double>(round_half_away(v)));
    }
    return out;
}

// Stroke iff value > threshold; the default maps mask value 255 to foreground
// and 127-valued anti-aliased pixels to background.
inline BinaryMask binarize(const GrayImage& img, int threshold = 127) {
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] > threshold ? 1 : 0;
    return out;
}

// Pixel-center sampling: output (x,y) copies source floor((x+0.5)*sw/nw),
// floor((y+0.5)*sh/nh). Pure relabeling; exact in integer arithmetic.
inline BinaryMask resize_nearest(const BinaryMask& mask, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        throw std::invalid_argument("resize_nearest: target dimensions must be positive");
    if (new_width > kMaxImageDim || new_height > kMaxImageDim)
        throw std::invalid_argument("resize_nearest: target dimensions exceed sanity bound");
    if (new_width == mask.width && new_height == mask.height) return mask;

    BinaryMask out(new_width, new_height);
    const std::int64_t sw = mask.width, sh = mask.height;
    for (int y = 0; y < new_height; ++y) {
        int sy = static_cast<int>(((2 * static_cast<std::int64_t>(y) + 1) * sh) / (2 * new_height));
        const std::uint8_t* srow = mask.data.data() + static_cast<std::size_t>(sy) * sw;
        std::uint8_t* drow = out.data.data() + static_cast<std::size_t>(y) * new_width;
        for (int x = 0; x < new_width; ++x) {
            int sx = static_cast<int>(((2 * static_cast<std::int64_t>(x) + 1) * sw) / (2 * new_width));
            drow[x] = srow[sx];
        }
    }
    return out;
}

inline GrayImage mask_to_gray(const BinaryMask& mask) {
    GrayImage out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) out.data[i] = mask.data[i] ? 255 : 0;
    return out;
}

inline BinaryMask complement(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) out.data[i] = mask.data[i] ? 0 : 1;
    return out;
}

inline void require_same_dims(const BinaryMask& a, const BinaryMask& b, const char* what) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument(std::string(what) + ": mask dimensions differ");
}

} // namespace strokebench
