// SPDX-License-Identifier: Apache-2.0
//
// Binary morphology and geometric transforms behind the boundary metrics and
// stroke characterization: square-kernel dilation/erosion, morphological
// gradient, exact Euclidean distance transform (Felzenszwalb & Huttenlocher
// two-pass parabola envelope on squared distances), and Zhang-Suen thinning.
//
// Border convention throughout: pixels outside the image are background.

#pragma once

#include "strokebench/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace strokebench {

struct StructuringElement {
    int size = 3; // odd, >= 1; square footprint

    static StructuringElement square(int size) {
        if (size < 1 || size % 2 == 0)
            throw std::invalid_argument("structuring element size must be odd and >= 1");
        return StructuringElement{size};
    }
    int radius() const { return size / 2; }
};

namespace detail {

// Prefix-count sliding window over rows: out(x) = reduce(in[x-r .. x+r]),
// clipped at image bounds so out-of-image pixels count as background.
inline void window_any_rows(const std::uint8_t* in, std::uint8_t* out, int width, int height, int r) {
    std::vector<std::uint32_t> prefix(static_cast<std::size_t>(width) + 1);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = in + static_cast<std::size_t>(y) * width;
        std::uint8_t* orow = out + static_cast<std::size_t>(y) * width;
        prefix[0] = 0;
        for (int x = 0; x < width; ++x) prefix[x + 1] = prefix[x] + row[x];
        for (int x = 0; x < width; ++x) {
            int lo = std::max(0, x - r), hi = std::min(width - 1, x + r);
            orow[x] = prefix[hi + 1] - prefix[lo] > 0 ? 1 : 0;
        }
    }
}

inline void window_all_rows(const std::uint8_t* in, std::uint8_t* out, int width, int height, int r) {
    std::vector<std::uint32_t> prefix(static_cast<std::size_t>(width) + 1);
    const std::uint32_t full = static_cast<std::uint32_t>(2 * r + 1);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = in + static_cast<std::size_t>(y) * width;
        std::uint8_t* orow = out + static_cast<std::size_t>(y) * width;
        prefix[0] = 0;
        for (int x = 0; x < width; ++x) prefix[x + 1] = prefix[x] + row[x];
        for (int x = 0; x < width; ++x) {
            int lo = std::max(0, x - r), hi = std::min(width - 1, x + r);
            // the clipped window must still contain 2r+1 set pixels, so any
            // clipping at the border forces the output off
            orow[x] = prefix[hi + 1] - prefix[lo] == full ? 1 : 0;
        }
    }
}

inline BinaryMask transpose(const BinaryMask& m) {
    BinaryMask out(m.height, m.width);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            out.data[static_cast<std::size_t>(x) * m.height + y] =
                m.data[static_cast<std::size_t>(y) * m.width + x];
    return out;
}

} // namespace detail

// Pixel set iff any pixel under the square footprint is set (Chebyshev ball).
inline BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
    int r = se.radius();
    if (r == 0 || mask.pixel_count() == 0) return mask;
    BinaryMask tmp(mask.width, mask.height), out(mask.width, mask.height);
    detail::window_any_rows(mask.data.data(), tmp.data.data(), mask.width, mask.height, r);
    BinaryMask tr = detail::transpose(tmp), tro(tmp.height, tmp.width);
    detail::window_any_rows(tr.data.data(), tro.data.data(), tr.width, tr.height, r);
    return detail::transpose(tro);
}

// Dual of dilate: pixel set iff the entire footprint is set; borders erode.
inline BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
    int r = se.radius();
    if (r == 0 || mask.pixel_count() == 0) return mask;
    BinaryMask tmp(mask.width, mask.height);
    detail::window_all_rows(mask.data.data(), tmp.data.data(), mask.width, mask.height, r);
    BinaryMask tr = detail::transpose(tmp), tro(tmp.height, tmp.width);
    detail::window_all_rows(tr.data.data(), tro.data.data(), tr.width, tr.height, r);
    return detail::transpose(tro);
}

// Contour pixels: dilate_3x3(mask) minus erode_3x3(mask).
inline BinaryMask morph_gradient(const BinaryMask& mask) {
    StructuringElement se = StructuringElement::square(3);
    BinaryMask d = dilate(mask, se);
    BinaryMask e = erode(mask, se);
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] = d.data[i] & ~e.data[i] & 1;
    return d;
}

// Erosion with a w x h footprint anchored at its top-left pixel; used by the
// augmentation pipeline's 2x2 mask erosion.
inline BinaryMask erode_rect(const BinaryMask& mask, int w = 2, int h = 2) {
    if (w < 1 || h < 1) throw std::invalid_argument("erode_rect: kernel must be at least 1x1");
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool all = true;
            for (int dy = 0; dy < h && all; ++dy) {
                int yy = y + dy;
                if (yy >= mask.height) { all = false; break; }
                for (int dx = 0; dx < w; ++dx) {
                    int xx = x + dx;
                    if (xx >= mask.width || !mask.at(xx, yy)) { all = false; break; }
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

inline constexpr double kEdtInf = 1e30;

// 1D squared-distance transform (lower envelope of parabolas).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                   std::vector<double>& z, int n) {
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtInf;
    z[1] = +kEdtInf;
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * q - 2.0 * p);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = +kEdtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = static_cast<double>(q) - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace detail

// Exact squared Euclidean distance to the nearest seed pixel. All attainable
// values are integers; pixels with no seed anywhere are reported as -1.
inline std::vector<std::int64_t> edt_squared(const BinaryMask& seeds) {
    const int w = seeds.width, h = seeds.height;
    std::vector<double> grid(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = seeds.data[i] ? 0.0 : detail::kEdtInf;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(static_cast<std::size_t>(n) + 1);
    std::vector<int> v(n);

    for (int x = 0; x < w; ++x) { // columns
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
        detail::edt_1d(f, d, v, z, h);
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) { // rows
        double* row = grid.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) f[x] = row[x];
        detail::edt_1d(f, d, v, z, w);
        for (int x = 0; x < w; ++x) row[x] = d[x];
    }

    std::vector<std::int64_t> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = grid[i] >= detail::kEdtInf ? -1 : static_cast<std::int64_t>(std::llround(grid[i]));
    return out;
}

// Exact Euclidean distance field. With no seeds at all, every pixel carries
// the sentinel width+height+1, which exceeds any achievable distance.
inline DistanceField edt(const BinaryMask& seeds) {
    DistanceField out;
    out.width = seeds.width;
    out.height = seeds.height;
    std::vector<std::int64_t> sq = edt_squared(seeds);
    out.data.resize(sq.size());
    const double sentinel = static_cast<double>(seeds.width) + seeds.height + 1;
    for (std::size_t i = 0; i < sq.size(); ++i)
        out.data[i] = sq[i] < 0 ? sentinel : std::sqrt(static_cast<double>(sq[i]));
    return out;
}

// {x in mask : distance from x to the complement of mask <= band}.
inline BinaryMask inner_band(const BinaryMask& mask, double band) {
    std::vector<std::int64_t> sq = edt_squared(complement(mask));
    BinaryMask out(mask.width, mask.height);
    const double band_sq = band * band;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] =
            (mask.data[i] && sq[i] >= 0 && static_cast<double>(sq[i]) <= band_sq) ? 1 : 0;
    return out;
}

// Zhang-Suen thinning to a 1-pixel-wide, 8-connected skeleton.
inline BinaryMask skeletonize(const BinaryMask& mask) {
    BinaryMask cur = mask;
    const int w = cur.width, h = cur.height;
    if (w == 0 || h == 0) return cur;
    std::vector<std::size_t> deletions;
    deletions.reserve(1024);

    auto px = [&](int x, int y) -> int {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0;
        return cur.data[static_cast<std::size_t>(y) * w + x];
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            deletions.clear();
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (!cur.data[static_cast<std::size_t>(y) * w + x]) continue;
                    // p9 p2 p3
                    // p8 p1 p4
                    // p7 p6 p5
                    int p2 = px(x, y - 1), p3 = px(x + 1, y - 1), p4 = px(x + 1, y);
                    int p5 = px(x + 1, y + 1), p6 = px(x, y + 1), p7 = px(x - 1, y + 1);
                    int p8 = px(x - 1, y), p9 = px(x - 1, y - 1);
                    int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    if (b < 2 || b > 6) continue;
                    int a = (p2 == 0 && p3 == 1) + (p3 == 0 && p4 == 1) + (p4 == 0 && p5 == 1) +
                            (p5 == 0 && p6 == 1) + (p6 == 0 && p7 == 1) + (p7 == 0 && p8 == 1) +
                            (p8 == 0 && p9 == 1) + (p9 == 0 && p2 == 1);
                    if (a != 1) continue;
                    if (pass == 0) {
                        if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
                    } else {
                        if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
                    }
                    deletions.push_back(static_cast<std::size_t>(y) * w + x);
                }
            }
            for (std::size_t idx : deletions) cur.data[idx] = 0;
            if (!deletions.empty()) changed = true;
        }
    }
    return cur;
}

} // namespace strokebench
