// SPDX-License-Identifier: Apache-2.0
//
// Seeded offline augmentation (weak photometric profile 70%, strong
// glare/shadow profile 30%) and the reusable online ops: flip, small-angle
// rotation, color-temperature shift, blur, noise, and 2x2 mask erosion.
// Every sampled parameter comes from a per-variant PCG32 stream derived from
// (master seed, image id, variant index), so outputs are a pure function of
// the inputs regardless of scheduling.

#pragma once

#include "strokebench/image.hpp"
#include "strokebench/morphology.hpp"
#include "strokebench/rng.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace strokebench {

// Normalized pipeline applied per channel, in the order gamma ->
// brightness -> contrast: x = (v/255)^gamma * brightness;
// v' = clamp(round(((x - 0.5) * contrast + 0.5) * 255)).
inline RgbImage adjust_photometric(const RgbImage& img, double brightness, double contrast,
                                   double gamma) {
    if (brightness < 0.7 || brightness > 1.3)
        throw std::invalid_argument("adjust_photometric: brightness outside [0.7, 1.3]");
    if (contrast < 0.8 || contrast > 1.2)
        throw std::invalid_argument("adjust_photometric: contrast outside [0.8, 1.2]");
    if (gamma < 0.7 || gamma > 1.4)
        throw std::invalid_argument("adjust_photometric: gamma outside [0.7, 1.4]");

    // 256-entry LUT: the transform is per-value
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v) {
        double x = std::pow(v / 255.0, gamma) * brightness;
        x = (x - 0.5) * contrast + 0.5;
        lut[static_cast<std::size_t>(v)] = clamp_u8(static_cast<double>(round_half_away(std::max(0.0, x * 255.0))));
    }
    RgbImage out = img;
    for (auto& v : out.data) v = lut[v];
    return out;
}

// Opposing R/B channel gains; shift in [-0.1, 0.1].
inline RgbImage color_temperature(const RgbImage& img, double shift) {
    if (shift < -0.1 || shift > 0.1)
        throw std::invalid_argument("color_temperature: shift outside [-0.1, 0.1]");
    RgbImage out = img;
    for (std::size_t i = 0; i < out.data.size(); i += 3) {
        out.data[i] = clamp_u8(std::round(out.data[i] * (1.0 + shift)));
        out.data[i + 2] = clamp_u8(std::round(out.data[i + 2] * (1.0 - shift)));
    }
    return out;
}

// Separable Gaussian kernel truncated at 3*sigma, replicate border.
inline RgbImage gaussian_blur(const RgbImage& img, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_blur: sigma must be positive");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        kernel[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += kernel[static_cast<std::size_t>(i + r)];
    }
    for (auto& k : kernel) k /= sum;

    const int w = img.width, h = img.height;
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    int xx = std::clamp(x + i, 0, w - 1);
                    acc += kernel[static_cast<std::size_t>(i + r)] *
                           img.data[(static_cast<std::size_t>(y) * w + xx) * 3 + c];
                }
                tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
            }
        }
    }
    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    int yy = std::clamp(y + i, 0, h - 1);
                    acc += kernel[static_cast<std::size_t>(i + r)] *
                           tmp[(static_cast<std::size_t>(yy) * w + x) * 3 + c];
                }
                out.data[(static_cast<std::size_t>(y) * w + x) * 3 + c] =
                    clamp_u8(std::round(acc));
            }
        }
    }
    return out;
}

// i.i.d. N(0, sigma^2) per channel from the seeded generator, clamped.
inline RgbImage add_gaussian_noise(const RgbImage& img, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: sigma must be nonnegative");
    Pcg32 rng(seed);
    RgbImage out = img;
    for (auto& v : out.data) v = clamp_u8(std::round(v + rng.normal(0.0, sigma)));
    return out;
}

// Linear brightness ramp along one of 8 directions (multiples of 45 degrees),
// scaled by strength; the ramp is 0 at the trailing edge and strength*255 at
// the leading edge.
inline RgbImage overlay_glare(const RgbImage& img, int angle_index, double strength) {
    if (angle_index < 0 || angle_index > 7)
        throw std::invalid_argument("overlay_glare: angle index must be in [0, 7]");
    if (strength < 0.0 || strength > 1.0)
        throw std::invalid_argument("overlay_glare: strength outside [0, 1]");

    const double theta = angle_index * 45.0 * std::numbers::pi / 180.0;
    const double ux = std::cos(theta), uy = std::sin(theta);
    const int w = img.width, h = img.height;
    // projection range over the four corners
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int cy : {0, h - 1}) {
        for (int cx : {0, w - 1}) {
            double p = ux * cx + uy * cy;
            if (first) { lo = hi = p; first = false; }
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    const double span = std::max(1e-12, hi - lo);

    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double t = (ux * x + uy * y - lo) / span;
            double add = strength * 255.0 * t;
            const std::uint8_t* src = img.pixel(x, y);
            std::uint8_t* dst = out.pixel(x, y);
            for (int c = 0; c < 3; ++c) dst[c] = clamp_u8(std::round(src[c] + add));
        }
    }
    return out;
}

// Multiplies a band of `width` columns (or rows) starting at `offset` by
// (1 - strength).
inline RgbImage overlay_shadow(const RgbImage& img, int offset, int width, double strength,
                               bool vertical_band = true) {
    if (width < 0) throw std::invalid_argument("overlay_shadow: width must be nonnegative");
    if (strength < 0.0 || strength > 1.0)
        throw std::invalid_argument("overlay_shadow: strength outside [0, 1]");
    RgbImage out = img;
    const double gain = 1.0 - strength;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int band_pos = vertical_band ? x : y;
            if (band_pos < offset || band_pos >= offset + width) continue;
            std::uint8_t* px = out.pixel(x, y);
            for (int c = 0; c < 3; ++c) px[c] = clamp_u8(std::round(px[c] * gain));
        }
    }
    return out;
}

inline std::pair<RgbImage, BinaryMask> flip_h(const RgbImage& img, const BinaryMask& mask) {
    if (img.width != mask.width || img.height != mask.height)
        throw std::invalid_argument("flip_h: image and mask dimensions differ");
    RgbImage oi(img.width, img.height);
    BinaryMask om(mask.width, mask.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int sx = img.width - 1 - x;
            const std::uint8_t* sp = img.pixel(sx, y);
            std::uint8_t* dp = oi.pixel(x, y);
            dp[0] = sp[0]; dp[1] = sp[1]; dp[2] = sp[2];
            om.set(x, y, mask.at(sx, y));
        }
    }
    return {std::move(oi), std::move(om)};
}

// Rotation about the image center; image sampled bilinear with white fill,
// mask nearest with background fill. Degrees restricted to [-10, 10].
inline std::pair<RgbImage, BinaryMask> rotate(const RgbImage& img, const BinaryMask& mask,
                                              double degrees) {
    if (degrees < -10.0 || degrees > 10.0)
        throw std::invalid_argument("rotate: degrees outside [-10, 10]");
    if (img.width != mask.width || img.height != mask.height)
        throw std::invalid_argument("rotate: image and mask dimensions differ");

    const double theta = degrees * std::numbers::pi / 180.0;
    const double cos_t = std::cos(theta), sin_t = std::sin(theta);
    const double cx = (img.width - 1) * 0.5, cy = (img.height - 1) * 0.5;
    RgbImage oi(img.width, img.height);
    BinaryMask om(mask.width, mask.height);

    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // inverse mapping
            double dx = x - cx, dy = y - cy;
            double sx = cos_t * dx + sin_t * dy + cx;
            double sy = -sin_t * dx + cos_t * dy + cy;

            std::uint8_t* dst = oi.pixel(x, y);
            int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
            double fx = sx - x0, fy = sy - y0;
            for (int c = 0; c < 3; ++c) {
                auto sample = [&](int xx, int yy) -> double {
                    if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) return 255.0;
                    return img.pixel(xx, yy)[c];
                };
                double v = (1 - fx) * (1 - fy) * sample(x0, y0) + fx * (1 - fy) * sample(x0 + 1, y0) +
                           (1 - fx) * fy * sample(x0, y0 + 1) + fx * fy * sample(x0 + 1, y0 + 1);
                dst[c] = clamp_u8(std::round(v));
            }

            int nx = static_cast<int>(std::lround(sx)), ny = static_cast<int>(std::lround(sy));
            bool inside = nx >= 0 && ny >= 0 && nx < mask.width && ny < mask.height;
            om.set(x, y, inside && mask.at(nx, ny));
        }
    }
    return {std::move(oi), std::move(om)};
}

struct AugmentProfile {
    enum class Kind { Weak, Strong };
    Kind kind = Kind::Weak;
    std::uint64_t rng_seed = 0;
    std::map<std::string, double> params; // sampled op parameters, by name
};

inline const char* to_string(AugmentProfile::Kind k) {
    return k == AugmentProfile::Kind::Weak ? "weak" : "strong";
}

struct AugmentVariant {
    RgbImage image;
    BinaryMask mask;
    AugmentProfile profile;
};

// Small-stroke images receive a gentler profile (blur and noise halved).
inline bool is_small_stroke_id(int image_id) { return image_id >= 22 && image_id <= 37; }

inline constexpr double kWeakProbability = 0.7;

// One offline variant from its derived seed. Offline ops are photometric
// only, so the mask passes through untouched.
inline AugmentVariant make_offline_variant(const RgbImage& img, const BinaryMask& mask,
                                           int image_id, std::uint64_t variant_seed) {
    Pcg32 rng(variant_seed);
    AugmentProfile profile;
    profile.rng_seed = variant_seed;
    const bool gentle = is_small_stroke_id(image_id);
    const double damp = gentle ? 0.5 : 1.0;
    profile.params["gentle"] = gentle ? 1.0 : 0.0;

    RgbImage out = img;
    if (rng.bernoulli(kWeakProbability)) {
        profile.kind = AugmentProfile::Kind::Weak;
        double gamma = rng.uniform(0.7, 1.4);
        double brightness = rng.uniform(0.7, 1.3);
        double contrast = rng.uniform(0.8, 1.2);
        double temperature = rng.uniform(-0.1, 0.1);
        double blur_sigma = rng.uniform(0.4, 1.2) * damp;
        double noise_sigma = rng.uniform(2.0, 8.0) * damp;
        out = adjust_photometric(out, brightness, contrast, gamma);
        out = color_temperature(out, temperature);
        out = gaussian_blur(out, blur_sigma);
        std::uint64_t noise_state = variant_seed;
        out = add_gaussian_noise(out, noise_sigma, splitmix64_next(noise_state));
        profile.params["gamma"] = gamma;
        profile.params["brightness"] = brightness;
        profile.params["contrast"] = contrast;
        profile.params["temperature"] = temperature;
        profile.params["blur_sigma"] = blur_sigma;
        profile.params["noise_sigma"] = noise_sigma;
    } else {
        profile.kind = AugmentProfile::Kind::Strong;
        int mode = static_cast<int>(rng.next_below(3)); // glare, shadow, both
        profile.params["mode"] = mode;
        if (mode == 0 || mode == 2) {
            int angle = static_cast<int>(rng.next_below(8));
            double strength = rng.uniform(0.15, 0.45);
            out = overlay_glare(out, angle, strength);
            profile.params["glare_angle"] = angle * 45.0;
            profile.params["glare_strength"] = strength;
        }
        if (mode == 1 || mode == 2) {
            bool vertical = rng.bernoulli(0.5);
            int extent = vertical ? img.width : img.height;
            int band_width = std::max(1, static_cast<int>(rng.uniform(0.1, 0.35) * extent));
            int offset = static_cast<int>(rng.next_below(
                static_cast<std::uint32_t>(std::max(1, extent - band_width))));
            double strength = rng.uniform(0.2, 0.6);
            out = overlay_shadow(out, offset, band_width, strength, vertical);
            profile.params["shadow_vertical"] = vertical ? 1.0 : 0.0;
            profile.params["shadow_offset"] = offset;
            profile.params["shadow_width"] = band_width;
            profile.params["shadow_strength"] = strength;
        }
    }
    return {std::move(out), mask, std::move(profile)};
}

// Ten (by default) deterministic offline variants per original image; a pure
// function of (image, mask, image_id, master_seed).
inline std::vector<AugmentVariant> generate_offline(const RgbImage& img, const BinaryMask& mask,
                                                    int image_id, int n = 10,
                                                    std::uint64_t master_seed = 42) {
    if (n < 0) throw std::invalid_argument("generate_offline: n must be nonnegative");
    std::vector<AugmentVariant> variants;
    variants.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(image_id),
                                         static_cast<std::uint64_t>(k));
        variants.push_back(make_offline_variant(img, mask, image_id, seed));
    }
    return variants;
}

} // namespace strokebench
