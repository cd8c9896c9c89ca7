// SPDX-License-Identifier: Apache-2.0
//
// Decoding and encoding of the two raster formats the tool accepts: an 8-bit
// PNG subset (gray, gray+alpha, RGB, RGBA; no interlace, no palette) and
// binary PGM (P5) / PPM (P6). Compression is delegated to zlib; chunk and
// filter handling is implemented here so the failure modes stay distinct.

#pragma once

#include "strokebench/image.hpp"

#include <zlib.h>

#include <array>
#include <cctype>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <variant>

namespace strokebench {

enum class ImageIoError {
    MalformedHeader,
    UnsupportedBitDepth,
    UnsupportedColorType,
    UnsupportedInterlace,
    TruncatedData,
    CorruptData,
    BadDimensions,
    IoFailure,
};

inline const char* to_string(ImageIoError e) {
    switch (e) {
        case ImageIoError::MalformedHeader: return "malformed header";
        case ImageIoError::UnsupportedBitDepth: return "unsupported bit depth";
        case ImageIoError::UnsupportedColorType: return "unsupported color type";
        case ImageIoError::UnsupportedInterlace: return "unsupported interlace mode";
        case ImageIoError::TruncatedData: return "truncated data";
        case ImageIoError::CorruptData: return "corrupt data";
        case ImageIoError::BadDimensions: return "bad dimensions";
        case ImageIoError::IoFailure: return "i/o failure";
    }
    return "unknown";
}

class ImageIoException : public std::runtime_error {
public:
    ImageIoException(ImageIoError code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    ImageIoError code() const { return code_; }

private:
    ImageIoError code_;
};

using DecodedImage = std::variant<GrayImage, RgbImage>;

namespace pngio {

[[noreturn]] inline void fail(ImageIoError code, const std::string& detail) {
    throw ImageIoException(code, detail);
}

inline std::uint32_t read_u32be(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

inline std::vector<std::uint8_t> inflate_exact(const std::vector<std::uint8_t>& in,
                                               std::size_t expected_size) {
    std::vector<std::uint8_t> out(expected_size);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) fail(ImageIoError::IoFailure, "zlib init failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = out.size() - zs.avail_out;
    inflateEnd(&zs);
    if (rc == Z_DATA_ERROR || rc == Z_NEED_DICT)
        fail(ImageIoError::CorruptData, "zlib stream is corrupt");
    if (rc != Z_STREAM_END || produced != expected_size)
        fail(ImageIoError::TruncatedData, "pixel stream shorter than header promises");
    return out;
}

inline std::vector<std::uint8_t> deflate_all(const std::vector<std::uint8_t>& in) {
    uLongf bound = compressBound(static_cast<uLong>(in.size()));
    std::vector<std::uint8_t> out(bound);
    if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), Z_DEFAULT_COMPRESSION) != Z_OK)
        fail(ImageIoError::IoFailure, "zlib compression failed");
    out.resize(bound);
    return out;
}

inline std::uint8_t paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

// In-place per-row unfiltering of the inflated scanline stream.
inline std::vector<std::uint8_t> unfilter(const std::vector<std::uint8_t>& raw, int width,
                                          int height, int channels) {
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> out(stride * height);
    std::vector<std::uint8_t> prior(stride, 0);
    const int bpp = channels;
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        std::uint8_t filter = src[0];
        const std::uint8_t* cur = src + 1;
        std::uint8_t* dst = out.data() + static_cast<std::size_t>(y) * stride;
        switch (filter) {
            case 0:
                std::memcpy(dst, cur, stride);
                break;
            case 1:
                for (std::size_t i = 0; i < stride; ++i) {
                    int left = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
                    dst[i] = static_cast<std::uint8_t>(cur[i] + left);
                }
                break;
            case 2:
                for (std::size_t i = 0; i < stride; ++i)
                    dst[i] = static_cast<std::uint8_t>(cur[i] + prior[i]);
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    int left = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
                    dst[i] = static_cast<std::uint8_t>(cur[i] + ((left + prior[i]) >> 1));
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    int left = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
                    int up_left = i >= static_cast<std::size_t>(bpp) ? prior[i - bpp] : 0;
                    dst[i] = static_cast<std::uint8_t>(cur[i] + paeth(left, prior[i], up_left));
                }
                break;
            default:
                fail(ImageIoError::CorruptData, "invalid scanline filter byte");
        }
        std::memcpy(prior.data(), dst, stride);
    }
    return out;
}

inline DecodedImage decode(const std::uint8_t* bytes, std::size_t size) {
    if (size < kSignature.size()) fail(ImageIoError::TruncatedData, "shorter than PNG signature");
    std::size_t pos = kSignature.size();

    int width = 0, height = 0, channels = 0;
    bool have_ihdr = false, have_iend = false;
    std::vector<std::uint8_t> idat;

    while (pos < size) {
        if (size - pos < 8) fail(ImageIoError::TruncatedData, "chunk header cut off");
        std::uint32_t len = read_u32be(bytes + pos);
        char type[5] = {0};
        std::memcpy(type, bytes + pos + 4, 4);
        pos += 8;
        if (size - pos < static_cast<std::size_t>(len) + 4)
            fail(ImageIoError::TruncatedData, std::string("chunk ") + type + " cut off");
        const std::uint8_t* data = bytes + pos;

        std::uint32_t crc = static_cast<std::uint32_t>(crc32(0L, Z_NULL, 0));
        crc = static_cast<std::uint32_t>(crc32(crc, reinterpret_cast<const Bytef*>(type), 4));
        crc = static_cast<std::uint32_t>(crc32(crc, data, len));
        if (crc != read_u32be(data + len))
            fail(ImageIoError::CorruptData, std::string("chunk ") + type + " CRC mismatch");

        if (!have_ihdr) {
            if (std::strcmp(type, "IHDR") != 0 || len != 13)
                fail(ImageIoError::MalformedHeader, "first chunk is not a valid IHDR");
            std::uint32_t w = read_u32be(data), h = read_u32be(data + 4);
            int bit_depth = data[8], color_type = data[9];
            int compression = data[10], filter = data[11], interlace = data[12];
            if (w == 0 || h == 0 || w > static_cast<std::uint32_t>(kMaxImageDim) ||
                h > static_cast<std::uint32_t>(kMaxImageDim))
                fail(ImageIoError::BadDimensions, "width/height outside (0, 16384]");
            if (bit_depth != 8) fail(ImageIoError::UnsupportedBitDepth, "only 8-bit channels supported");
            switch (color_type) {
                case 0: channels = 1; break;
                case 2: channels = 3; break;
                case 4: channels = 2; break;
                case 6: channels = 4; break;
                default: fail(ImageIoError::UnsupportedColorType, "palette/other color types unsupported");
            }
            if (compression != 0 || filter != 0)
                fail(ImageIoError::MalformedHeader, "nonzero compression/filter method");
            if (interlace != 0) fail(ImageIoError::UnsupportedInterlace, "Adam7 interlace unsupported");
            width = static_cast<int>(w);
            height = static_cast<int>(h);
            have_ihdr = true;
        } else if (std::strcmp(type, "IDAT") == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::strcmp(type, "IEND") == 0) {
            have_iend = true;
            pos += len + 4;
            break;
        } // ancillary chunks skipped
        pos += len + 4;
    }

    if (!have_ihdr) fail(ImageIoError::TruncatedData, "no IHDR chunk");
    if (!have_iend) fail(ImageIoError::TruncatedData, "stream ends before IEND");
    if (idat.empty()) fail(ImageIoError::TruncatedData, "no IDAT data");

    const std::size_t expected =
        (static_cast<std::size_t>(width) * channels + 1) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> raw = inflate_exact(idat, expected);
    std::vector<std::uint8_t> pixels = unfilter(raw, width, height, channels);

    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (channels == 1) return GrayImage(width, height, std::move(pixels));
    if (channels == 2) { // gray + alpha: drop alpha
        std::vector<std::uint8_t> gray(n);
        for (std::size_t i = 0; i < n; ++i) gray[i] = pixels[2 * i];
        return GrayImage(width, height, std::move(gray));
    }
    if (channels == 3) return RgbImage(width, height, std::move(pixels));
    std::vector<std::uint8_t> rgb(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        rgb[3 * i] = pixels[4 * i];
        rgb[3 * i + 1] = pixels[4 * i + 1];
        rgb[3 * i + 2] = pixels[4 * i + 2];
    }
    return RgbImage(width, height, std::move(rgb));
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                         const std::uint8_t* data, std::size_t len) {
    put_u32be(out, static_cast<std::uint32_t>(len));
    out.insert(out.end(), type, type + 4);
    if (len) out.insert(out.end(), data, data + len);
    std::uint32_t crc = static_cast<std::uint32_t>(crc32(0L, Z_NULL, 0));
    crc = static_cast<std::uint32_t>(crc32(crc, reinterpret_cast<const Bytef*>(type), 4));
    if (len) crc = static_cast<std::uint32_t>(crc32(crc, data, len));
    put_u32be(out, crc);
}

inline std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int width, int height,
                                        int channels) {
    if (width <= 0 || height <= 0)
        fail(ImageIoError::BadDimensions, "cannot encode an empty image");
    if (width > kMaxImageDim || height > kMaxImageDim)
        fail(ImageIoError::BadDimensions, "dimensions exceed sanity bound");

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kSignature.begin(), kSignature.end());

    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(width >> 24);
    ihdr[1] = static_cast<std::uint8_t>(width >> 16);
    ihdr[2] = static_cast<std::uint8_t>(width >> 8);
    ihdr[3] = static_cast<std::uint8_t>(width);
    ihdr[4] = static_cast<std::uint8_t>(height >> 24);
    ihdr[5] = static_cast<std::uint8_t>(height >> 16);
    ihdr[6] = static_cast<std::uint8_t>(height >> 8);
    ihdr[7] = static_cast<std::uint8_t>(height);
    ihdr[8] = 8;                                      // bit depth
    ihdr[9] = channels == 1 ? 0 : 2;                  // gray or truecolor
    ihdr[10] = 0;
    ihdr[11] = 0;
    ihdr[12] = 0;                                     // no interlace
    append_chunk(out, "IHDR", ihdr, sizeof(ihdr));

    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0; // filter None
        std::memcpy(row + 1, pixels + static_cast<std::size_t>(y) * stride, stride);
    }
    std::vector<std::uint8_t> compressed = deflate_all(raw);
    append_chunk(out, "IDAT", compressed.data(), compressed.size());
    append_chunk(out, "IEND", nullptr, 0);
    return out;
}

} // namespace pngio

namespace pnmio {

// Binary PGM (P5) / PPM (P6) with a maxval of at most 255.
inline DecodedImage decode(const std::uint8_t* bytes, std::size_t size) {
    if (size < 2) pngio::fail(ImageIoError::TruncatedData, "shorter than a PNM magic");
    bool color = bytes[1] == '6';
    std::size_t pos = 2;
    auto next_token = [&]() -> long {
        // skip whitespace and '#' comments
        while (pos < size) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < size && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        if (pos >= size) pngio::fail(ImageIoError::TruncatedData, "PNM header cut off");
        if (!std::isdigit(bytes[pos])) pngio::fail(ImageIoError::MalformedHeader, "expected integer in PNM header");
        long v = 0;
        while (pos < size && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000) pngio::fail(ImageIoError::MalformedHeader, "absurd integer in PNM header");
            ++pos;
        }
        return v;
    };

    long w = next_token(), h = next_token(), maxval = next_token();
    if (pos >= size || !std::isspace(bytes[pos]))
        pngio::fail(ImageIoError::MalformedHeader, "missing whitespace after maxval");
    ++pos; // exactly one whitespace byte before the raster
    if (w <= 0 || h <= 0 || w > kMaxImageDim || h > kMaxImageDim)
        pngio::fail(ImageIoError::BadDimensions, "width/height outside (0, 16384]");
    if (maxval <= 0 || maxval > 255)
        pngio::fail(ImageIoError::UnsupportedBitDepth, "PNM maxval above 255");

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * (color ? 3 : 1);
    if (size - pos < n) pngio::fail(ImageIoError::TruncatedData, "PNM raster cut off");
    std::vector<std::uint8_t> pixels(bytes + pos, bytes + pos + n);
    if (color) return RgbImage(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

} // namespace pnmio

// Decodes PNG, binary PGM or binary PPM from memory.
inline DecodedImage decode_image(const std::uint8_t* bytes, std::size_t size) {
    if (size >= 8 && std::memcmp(bytes, pngio::kSignature.data(), 8) == 0)
        return pngio::decode(bytes, size);
    if (size >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
        return pnmio::decode(bytes, size);
    pngio::fail(ImageIoError::MalformedHeader, "not a PNG/PGM/PPM stream");
}

inline DecodedImage decode_image(const std::vector<std::uint8_t>& bytes) {
    return decode_image(bytes.data(), bytes.size());
}

inline std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    return pngio::encode(img.data.data(), img.width, img.height, 1);
}

inline std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    return pngio::encode(img.data.data(), img.width, img.height, 3);
}

// Masks encode as 8-bit gray with values {0, 255}.
inline std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
    GrayImage g = mask_to_gray(mask);
    return pngio::encode(g.data.data(), g.width, g.height, 1);
}

inline std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) pngio::fail(ImageIoError::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) pngio::fail(ImageIoError::IoFailure, "read error on " + path.string());
    return bytes;
}

inline void write_binary_file(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) pngio::fail(ImageIoError::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) pngio::fail(ImageIoError::IoFailure, "write error on " + path.string());
}

inline DecodedImage load_image(const std::filesystem::path& path) {
    return decode_image(read_binary_file(path));
}

// Loads an image file as a stroke mask: RGB inputs are grayscaled first, then
// thresholded at the fixed mask threshold.
inline BinaryMask load_mask(const std::filesystem::path& path, const GrayWeights& weights = {},
                            int threshold = 127) {
    DecodedImage img = load_image(path);
    if (std::holds_alternative<GrayImage>(img))
        return binarize(std::get<GrayImage>(img), threshold);
    return binarize(to_gray(std::get<RgbImage>(img), weights), threshold);
}

inline GrayImage load_gray(const std::filesystem::path& path, const GrayWeights& weights = {}) {
    DecodedImage img = load_image(path);
    if (std::holds_alternative<GrayImage>(img)) return std::get<GrayImage>(img);
    return to_gray(std::get<RgbImage>(img), weights);
}

inline void save_png(const std::filesystem::path& path, const BinaryMask& mask) {
    write_binary_file(path, encode_png(mask));
}
inline void save_png(const std::filesystem::path& path, const GrayImage& img) {
    write_binary_file(path, encode_png(img));
}
inline void save_png(const std::filesystem::path& path, const RgbImage& img) {
    write_binary_file(path, encode_png(img));
}

} // namespace strokebench
