// SPDX-License-Identifier: Apache-2.0
//
// The three non-learning binarizers evaluated at native resolution: Otsu's
// global threshold, adaptive Gaussian-mean thresholding (block 51, C 15), and
// Sauvola's local threshold T = mu * (1 + k * (sigma/R - 1)) with window 51,
// k 0.2, R 128. Strokes are dark-on-light, so foreground = value below the
// threshold surface; Otsu's mask takes values <= t*.

#pragma once

#include "strokebench/image.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace strokebench {

struct SauvolaParams {
    int window = 51;   // odd, >= 3
    double k = 0.2;
    double r = 128.0;  // dynamic-range constant for 8-bit input

    void validate() const {
        if (window < 3 || window % 2 == 0)
            throw std::invalid_argument("sauvola: window must be odd and >= 3");
        if (r <= 0.0) throw std::invalid_argument("sauvola: R must be positive");
    }
};

struct AdaptiveParams {
    int block = 51;    // odd, >= 3
    double c = 15.0;   // offset subtracted from the local weighted mean

    void validate() const {
        if (block < 3 || block % 2 == 0)
            throw std::invalid_argument("adaptive: block size must be odd and >= 3");
    }
    // kernel sigma tied to block size, the convention under which the
    // published (51, 15) parameter pair is meaningful
    double sigma() const { return 0.3 * ((block - 1) * 0.5 - 1.0) + 0.8; }
};

struct OtsuResult {
    int threshold = 0;
    BinaryMask mask;
    bool degenerate = false; // constant image: zero between-class variance
};

// Between-class variance maximization over the 256-bin histogram; ties break
// toward the smallest threshold. Per-threshold statistics are derived from
// integer prefix sums so the scan is deterministic.
inline OtsuResult otsu(const GrayImage& img) {
    if (img.pixel_count() == 0) throw std::invalid_argument("otsu: empty image");

    std::array<std::uint64_t, 256> hist{};
    for (std::uint8_t v : img.data) ++hist[v];

    std::array<std::uint64_t, 257> cum_count{}, cum_sum{};
    for (int i = 0; i < 256; ++i) {
        cum_count[i + 1] = cum_count[i] + hist[i];
        cum_sum[i + 1] = cum_sum[i] + hist[i] * static_cast<std::uint64_t>(i);
    }
    const std::uint64_t total = cum_count[256];
    const std::uint64_t total_sum = cum_sum[256];

    double best_var = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        std::uint64_t n0 = cum_count[t + 1];
        std::uint64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        double mu0 = static_cast<double>(cum_sum[t + 1]) / static_cast<double>(n0);
        double mu1 = static_cast<double>(total_sum - cum_sum[t + 1]) / static_cast<double>(n1);
        double w0 = static_cast<double>(n0) / static_cast<double>(total);
        double w1 = static_cast<double>(n1) / static_cast<double>(total);
        double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }

    OtsuResult out;
    if (best_var <= 0.0) {
        out.degenerate = true;
        out.threshold = img.data.empty() ? 0 : img.data[0];
        out.mask = BinaryMask(img.width, img.height); // empty stroke mask
        return out;
    }
    out.threshold = best_t;
    out.mask = BinaryMask(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.mask.data[i] = img.data[i] <= best_t ? 1 : 0;
    return out;
}

namespace detail {

// Separable convolution with a normalized kernel, replicate border.
inline std::vector<double> convolve_separable_replicate(const std::vector<double>& in, int width,
                                                        int height,
                                                        const std::vector<double>& kernel) {
    const int r = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(in.size()), out(in.size());
    for (int y = 0; y < height; ++y) {
        const double* row = in.data() + static_cast<std::size_t>(y) * width;
        double* trow = tmp.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                int xx = std::clamp(x + i, 0, width - 1);
                acc += kernel[static_cast<std::size_t>(i + r)] * row[xx];
            }
            trow[x] = acc;
        }
    }
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                int yy = std::clamp(y + i, 0, height - 1);
                acc += kernel[static_cast<std::size_t>(i + r)] * tmp[static_cast<std::size_t>(yy) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

inline std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double c = (size - 1) * 0.5;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        double d = i - c;
        k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (auto& v : k) v /= sum;
    return k;
}

} // namespace detail

// T(x,y) = Gaussian-weighted local mean - C; stroke iff value < T.
inline BinaryMask adaptive_gaussian(const GrayImage& img, const AdaptiveParams& p = {}) {
    p.validate();
    if (img.pixel_count() == 0) throw std::invalid_argument("adaptive_gaussian: empty image");

    std::vector<double> values(img.data.begin(), img.data.end());
    std::vector<double> kernel = detail::gaussian_kernel(p.block, p.sigma());
    std::vector<double> mean =
        detail::convolve_separable_replicate(values, img.width, img.height, kernel);

    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < values.size(); ++i)
        out.data[i] = values[i] < mean[i] - p.c ? 1 : 0;
    return out;
}

// Local mean and standard deviation over a window clipped to image bounds,
// computed from integral images of value and value^2 in O(1) per pixel.
inline void local_mean_stddev(const GrayImage& img, int window, std::vector<double>& mean,
                              std::vector<double>& stddev) {
    const int w = img.width, h = img.height, r = window / 2;
    // (w+1) x (h+1) integral images; sums fit 64-bit comfortably
    std::vector<std::uint64_t> sum(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    std::vector<std::uint64_t> sum_sq(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        std::uint64_t row_sum = 0, row_sq = 0;
        const std::uint8_t* row = img.data.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            std::uint64_t v = row[x];
            row_sum += v;
            row_sq += v * v;
            std::size_t idx = static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1);
            sum[idx] = sum[idx - (w + 1)] + row_sum;
            sum_sq[idx] = sum_sq[idx - (w + 1)] + row_sq;
        }
    }

    mean.assign(static_cast<std::size_t>(w) * h, 0.0);
    stddev.assign(static_cast<std::size_t>(w) * h, 0.0);
    auto rect = [&](const std::vector<std::uint64_t>& ii, int x0, int y0, int x1, int y1) {
        // inclusive rectangle [x0,x1] x [y0,y1]
        return ii[static_cast<std::size_t>(y1 + 1) * (w + 1) + (x1 + 1)] -
               ii[static_cast<std::size_t>(y0) * (w + 1) + (x1 + 1)] -
               ii[static_cast<std::size_t>(y1 + 1) * (w + 1) + x0] +
               ii[static_cast<std::size_t>(y0) * (w + 1) + x0];
    };
    for (int y = 0; y < h; ++y) {
        int y0 = std::max(0, y - r), y1 = std::min(h - 1, y + r);
        for (int x = 0; x < w; ++x) {
            int x0 = std::max(0, x - r), x1 = std::min(w - 1, x + r);
            double area = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
            double m = static_cast<double>(rect(sum, x0, y0, x1, y1)) / area;
            double m2 = static_cast<double>(rect(sum_sq, x0, y0, x1, y1)) / area;
            double var = std::max(0.0, m2 - m * m); // absorb fp cancellation
            std::size_t idx = static_cast<std::size_t>(y) * w + x;
            mean[idx] = m;
            stddev[idx] = std::sqrt(var);
        }
    }
}

// Stroke iff value < mu * (1 + k * (sigma/R - 1)).
inline BinaryMask sauvola(const GrayImage& img, const SauvolaParams& p = {}) {
    p.validate();
    if (img.pixel_count() == 0) throw std::invalid_argument("sauvola: empty image");

    std::vector<double> mean, stddev;
    local_mean_stddev(img, p.window, mean, stddev);

    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double t = mean[i] * (1.0 + p.k * (stddev[i] / p.r - 1.0));
        out.data[i] = img.data[i] < t ? 1 : 0;
    }
    return out;
}

} // namespace strokebench
