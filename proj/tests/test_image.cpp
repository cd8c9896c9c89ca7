// SPDX-License-Identifier: Apache-2.0

#include "strokebench/image.hpp"
#include "strokebench/image_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace strokebench;

TEST_CASE("decode binary PGM header round-trip") {
    // P5 2 2 255 + 4 raster bytes
    std::vector<std::uint8_t> bytes = {'P', '5', ' ', '2', ' ', '2', ' ', '2', '5', '5', '\n',
                                       10, 20, 30, 40};
    DecodedImage img = decode_image(bytes);
    REQUIRE(std::holds_alternative<GrayImage>(img));
    const auto& g = std::get<GrayImage>(img);
    CHECK(g.width == 2);
    CHECK(g.height == 2);
    CHECK(g.data == std::vector<std::uint8_t>{10, 20, 30, 40});
}

TEST_CASE("decode PPM with comments and high maxval rejection") {
    std::vector<std::uint8_t> ok = {'P', '6', '\n', '#', 'c', '\n', '1', ' ', '1', ' ',
                                    '2', '5', '5', '\n', 1, 2, 3};
    auto img = decode_image(ok);
    REQUIRE(std::holds_alternative<RgbImage>(img));

    std::vector<std::uint8_t> deep = {'P', '5', ' ', '1', ' ', '1', ' ', '6', '5', '5',
                                      '3', '5', '\n', 0, 0};
    try {
        decode_image(deep);
        FAIL("16-bit PGM must be rejected");
    } catch (const ImageIoException& e) {
        CHECK(e.code() == ImageIoError::UnsupportedBitDepth);
    }
}

TEST_CASE("truncated streams raise TruncatedData") {
    GrayImage g(8, 8);
    for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = static_cast<std::uint8_t>(i);
    std::vector<std::uint8_t> png = encode_png(g);

    for (std::size_t cut : {png.size() - 1, png.size() - 13, static_cast<std::size_t>(24)}) {
        std::vector<std::uint8_t> trunc(png.begin(), png.begin() + static_cast<long>(cut));
        try {
            decode_image(trunc);
            FAIL("truncated PNG must not decode");
        } catch (const ImageIoException& e) {
            CHECK(e.code() == ImageIoError::TruncatedData);
        }
    }

    std::vector<std::uint8_t> pgm = {'P', '5', ' ', '4', ' ', '4', ' ', '2', '5', '5', '\n', 1, 2};
    try {
        decode_image(pgm);
        FAIL("truncated PGM must not decode");
    } catch (const ImageIoException& e) {
        CHECK(e.code() == ImageIoError::TruncatedData);
    }
}

TEST_CASE("malformed headers are distinct from truncation") {
    std::vector<std::uint8_t> junk = {'X', 'Y', 'Z', 'W', 1, 2, 3, 4, 5, 6, 7, 8};
    try {
        decode_image(junk);
        FAIL("junk must not decode");
    } catch (const ImageIoException& e) {
        CHECK(e.code() == ImageIoError::MalformedHeader);
    }
}

TEST_CASE("png round-trips gray, rgb and masks exactly") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);

    for (int trial = 0; trial < 8; ++trial) {
        int w = 1 + trial * 3, h = 2 + trial;
        GrayImage g(w, h);
        for (auto& v : g.data) v = static_cast<std::uint8_t>(byte(rng));
        auto round = decode_image(encode_png(g));
        REQUIRE(std::holds_alternative<GrayImage>(round));
        CHECK(std::get<GrayImage>(round).data == g.data);

        RgbImage c(w, h);
        for (auto& v : c.data) v = static_cast<std::uint8_t>(byte(rng));
        auto round_c = decode_image(encode_png(c));
        REQUIRE(std::holds_alternative<RgbImage>(round_c));
        CHECK(std::get<RgbImage>(round_c).data == c.data);
    }

    BinaryMask m(5, 4);
    m.set(0, 0, true);
    m.set(4, 3, true);
    auto round_m = decode_image(encode_png(m));
    REQUIRE(std::holds_alternative<GrayImage>(round_m));
    const auto& gm = std::get<GrayImage>(round_m);
    for (std::size_t i = 0; i < gm.data.size(); ++i) {
        CHECK((gm.data[i] == 0 || gm.data[i] == 255));
        CHECK((gm.data[i] == 255) == (m.data[i] == 1));
    }
}

TEST_CASE("encode of empty image errors") {
    BinaryMask empty;
    REQUIRE_THROWS_AS(encode_png(empty), ImageIoException);
}

TEST_CASE("native-resolution photo dimensions survive decode") {
    RgbImage native(3712, 2784);
    for (std::size_t i = 0; i < native.data.size(); i += 3) native.data[i] = 200;
    auto round = decode_image(encode_png(native));
    REQUIRE(std::holds_alternative<RgbImage>(round));
    CHECK(std::get<RgbImage>(round).width == 3712);
    CHECK(std::get<RgbImage>(round).height == 2784);
}

namespace {
// The encoder never emits alpha, so build alpha-carrying PNGs by hand.
std::vector<std::uint8_t> make_png(int width, int height, int color_type,
                                   const std::vector<std::uint8_t>& scanlines_with_filter) {
    std::vector<std::uint8_t> idat = pngio::deflate_all(scanlines_with_filter);
    std::vector<std::uint8_t> out(pngio::kSignature.begin(), pngio::kSignature.end());
    std::uint8_t ihdr[13] = {};
    ihdr[3] = static_cast<std::uint8_t>(width);
    ihdr[7] = static_cast<std::uint8_t>(height);
    ihdr[8] = 8;
    ihdr[9] = static_cast<std::uint8_t>(color_type);
    pngio::append_chunk(out, "IHDR", ihdr, 13);
    pngio::append_chunk(out, "IDAT", idat.data(), idat.size());
    pngio::append_chunk(out, "IEND", nullptr, 0);
    return out;
}
} // namespace

TEST_CASE("png decoder drops alpha from gray+alpha and rgba") {
    auto ga = make_png(1, 2, 4, {0, 100, 255, 0, 200, 7});
    auto img = decode_image(ga);
    REQUIRE(std::holds_alternative<GrayImage>(img));
    CHECK(std::get<GrayImage>(img).data == std::vector<std::uint8_t>{100, 200});

    auto rgba = make_png(2, 1, 6, {0, 10, 20, 30, 128, 40, 50, 60, 0});
    auto img2 = decode_image(rgba);
    REQUIRE(std::holds_alternative<RgbImage>(img2));
    CHECK(std::get<RgbImage>(img2).data == std::vector<std::uint8_t>{10, 20, 30, 40, 50, 60});
}

TEST_CASE("png decoder rejects palette and 16-bit inputs") {
    auto pal = make_png(1, 1, 3, {0, 0});
    try {
        decode_image(pal);
        FAIL("palette PNG must be rejected");
    } catch (const ImageIoException& e) {
        CHECK(e.code() == ImageIoError::UnsupportedColorType);
    }

    std::vector<std::uint8_t> raw16 = {0, 0, 1};
    std::vector<std::uint8_t> idat = pngio::deflate_all(raw16);
    std::vector<std::uint8_t> deep(pngio::kSignature.begin(), pngio::kSignature.end());
    std::uint8_t ihdr[13] = {};
    ihdr[3] = 1; ihdr[7] = 1; ihdr[8] = 16; ihdr[9] = 0;
    pngio::append_chunk(deep, "IHDR", ihdr, 13);
    pngio::append_chunk(deep, "IDAT", idat.data(), idat.size());
    pngio::append_chunk(deep, "IEND", nullptr, 0);
    try {
        decode_image(deep);
        FAIL("16-bit PNG must be rejected");
    } catch (const ImageIoException& e) {
        CHECK(e.code() == ImageIoError::UnsupportedBitDepth);
    }
}

TEST_CASE("to_gray uses BT.601 with round half away") {
    RgbImage img(3, 1);
    std::uint8_t* p0 = img.pixel(0, 0);
    p0[0] = 255; p0[1] = 255; p0[2] = 255;
    std::uint8_t* p1 = img.pixel(1, 0);
    p1[0] = 255; p1[1] = 0; p1[2] = 0;
    // pixel(2,0) stays black
    GrayImage g = to_gray(img);
    CHECK(g.data[0] == 255);
    CHECK(g.data[1] == 76); // round(0.299*255) = round(76.245)
    CHECK(g.data[2] == 0);
}

TEST_CASE("to_gray stays within 1 of the exact weighted sum") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(16, 16);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(byte(rng));
    GrayImage g = to_gray(img);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        const std::uint8_t* px = img.data.data() + 3 * i;
        double exact = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        CHECK(std::abs(g.data[i] - exact) <= 1.0);
    }
}

TEST_CASE("binarize uses strict greater-than at the threshold") {
    GrayImage g(2, 1);
    g.data = {127, 128};
    BinaryMask m = binarize(g);
    CHECK_FALSE(m.at(0, 0));
    CHECK(m.at(1, 0));

    GrayImage zeros(3, 3);
    CHECK(binarize(zeros).foreground_count() == 0);
    GrayImage full(3, 3);
    for (auto& v : full.data) v = 255;
    CHECK(binarize(full).foreground_count() == 9);
}

TEST_CASE("binarize is monotone in the threshold") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> byte(0, 255);
    GrayImage g(12, 9);
    for (auto& v : g.data) v = static_cast<std::uint8_t>(byte(rng));
    for (int t = 0; t < 255; ++t) {
        BinaryMask lo = binarize(g, t), hi = binarize(g, t + 1);
        for (std::size_t i = 0; i < lo.data.size(); ++i)
            CHECK(hi.data[i] <= lo.data[i]); // raising threshold never adds foreground
    }
}

TEST_CASE("resize_nearest identity and upscale") {
    BinaryMask one(1, 1);
    one.set(0, 0, true);
    BinaryMask up = resize_nearest(one, 2, 2);
    CHECK(up.foreground_count() == 4);

    std::mt19937 rng(5);
    BinaryMask m(7, 5);
    std::bernoulli_distribution bit(0.5);
    for (auto& v : m.data) v = bit(rng) ? 1 : 0;
    CHECK(resize_nearest(m, 7, 5) == m);

    REQUIRE_THROWS_AS(resize_nearest(m, 0, 5), std::invalid_argument);
}

TEST_CASE("resize_nearest samples pixel centers on downscale") {
    // 4x4 checkerboard to 2x2: centers of each 2x2 block land on source
    // pixel floor((x+0.5)*2) = {1, 3}
    BinaryMask board(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) board.set(x, y, (x + y) % 2 == 0);
    BinaryMask small = resize_nearest(board, 2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            int sx = (2 * x + 1) * 4 / 4, sy = (2 * y + 1) * 4 / 4; // index formula
            CHECK(small.at(x, y) == board.at(sx, sy));
        }
}
