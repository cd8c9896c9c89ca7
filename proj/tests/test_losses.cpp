// SPDX-License-Identifier: Apache-2.0

#include "strokebench/losses.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace strokebench;

namespace {
BinaryMask random_labels(std::mt19937& rng, int w, int h, double density = 0.4) {
    BinaryMask g(w, h);
    std::bernoulli_distribution bit(density);
    for (auto& v : g.data) v = bit(rng) ? 1 : 0;
    return g;
}
} // namespace

TEST_CASE("ce loss hand values") {
    ProbMap p(1, 1, {0.5});
    BinaryMask g(1, 1);
    g.set(0, 0, true);
    CHECK(ce_loss(p, g).value == Catch::Approx(std::log(2.0)).margin(1e-12));

    // perfect prediction collapses to the clamp scale
    ProbMap perfect(2, 2, {1.0, 0.0, 1.0, 0.0});
    BinaryMask labels(2, 2, {1, 0, 1, 0});
    CHECK(ce_loss(perfect, labels).value < 1e-6);

    ProbMap wrong_dims(3, 1);
    REQUIRE_THROWS_AS(ce_loss(wrong_dims, labels), std::invalid_argument);
}

TEST_CASE("focal loss hand value at p_t = 0.5") {
    ProbMap p(1, 1, {0.5});
    BinaryMask g(1, 1);
    g.set(0, 0, true);
    // -0.25 * 0.25 * ln 0.5
    CHECK(focal_loss(p, g).value == Catch::Approx(0.25 * 0.25 * std::log(2.0)).margin(1e-12));

    // well-classified pixels vanish
    ProbMap sure(1, 1, {1.0});
    CHECK(focal_loss(sure, g).value < 1e-10);
}

TEST_CASE("dice loss hand values") {
    // p = g with s foreground pixels: 1 - (2s+1)/(2s+1) = 0
    BinaryMask g(3, 1, {1, 1, 0});
    ProbMap p(3, 1, {1.0, 1.0, 0.0});
    CHECK(dice_loss(p, g).value == Catch::Approx(0.0).margin(1e-12));

    // p = 0 against 3 foreground pixels: 1 - 1/(3+1)
    BinaryMask g3(4, 1, {1, 1, 1, 0});
    ProbMap zeros(4, 1);
    CHECK(dice_loss(zeros, g3).value == Catch::Approx(0.75).margin(1e-12));

    // both empty: epsilon rescues the ratio
    BinaryMask none(2, 2);
    ProbMap zero4(2, 2);
    CHECK(dice_loss(zero4, none).value == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("tversky loss hand values") {
    BinaryMask g(5, 2);
    for (int i = 0; i < 10; ++i) g.data[static_cast<std::size_t>(i)] = 1;
    ProbMap zeros(5, 2);
    // 1 - 1/(0.7*10 + 1)
    CHECK(tversky_loss(zeros, g).value == Catch::Approx(0.875).margin(1e-12));

    ProbMap perfect(5, 2, std::vector<double>(10, 1.0));
    CHECK(tversky_loss(perfect, g).value == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("tversky with alpha=beta=0.5 matches the doubled-numerator dice") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        ProbMap p = oracles::random_prob_map(rng, 8, 8);
        BinaryMask g = random_labels(rng, 8, 8);
        LossParams tv;
        tv.tversky_alpha = 0.5;
        tv.tversky_beta = 0.5;
        LossParams dice;
        dice.dice_eps = 2.0 * tv.tversky_eps; // align the epsilon terms
        CHECK(tversky_loss(p, g, tv).value ==
              Catch::Approx(dice_loss(p, g, dice).value).margin(1e-12));
    }
}

TEST_CASE("dice+focal combination is exactly linear") {
    std::mt19937 rng(43);
    ProbMap p = oracles::random_prob_map(rng, 8, 8);
    BinaryMask g = random_labels(rng, 8, 8);
    LossParams params;
    LossResult combo = dice_focal_loss(p, g, params);
    LossResult dice = dice_loss(p, g, params);
    LossResult focal = focal_loss(p, g, params);
    CHECK(combo.value == Catch::Approx(0.6 * dice.value + 0.4 * focal.value).margin(1e-15));
    for (std::size_t i = 0; i < combo.gradient.size(); ++i)
        CHECK(combo.gradient[i] ==
              Catch::Approx(0.6 * dice.gradient[i] + 0.4 * focal.gradient[i]).margin(1e-15));

    ProbMap perfect(2, 1, {1.0, 0.0});
    BinaryMask labels(2, 1, {1, 0});
    CHECK(dice_focal_loss(perfect, labels).value < 1e-3); // dice eps leaves a small residue
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937 rng(47);
    LossParams params;
    const double h = 1e-4, tol = 1e-5;
    struct Named {
        const char* name;
        std::function<LossResult(const ProbMap&, const BinaryMask&)> fn;
    };
    const Named losses[] = {
        {"ce", [&](const ProbMap& p, const BinaryMask& g) { return ce_loss(p, g); }},
        {"focal", [&](const ProbMap& p, const BinaryMask& g) { return focal_loss(p, g, params); }},
        {"dice", [&](const ProbMap& p, const BinaryMask& g) { return dice_loss(p, g, params); }},
        {"dice_focal",
         [&](const ProbMap& p, const BinaryMask& g) { return dice_focal_loss(p, g, params); }},
        {"tversky",
         [&](const ProbMap& p, const BinaryMask& g) { return tversky_loss(p, g, params); }},
    };

    for (int trial = 0; trial < 100; ++trial) {
        ProbMap p = oracles::random_prob_map(rng, 8, 8);
        BinaryMask g = random_labels(rng, 8, 8);
        for (const auto& loss : losses) {
            LossResult res = loss.fn(p, g);
            auto fd = oracles::fd_gradient(
                p, [&](const ProbMap& q) { return loss.fn(q, g).value; }, h);
            for (std::size_t i = 0; i < fd.size(); ++i) {
                INFO(loss.name << " pixel " << i);
                CHECK(res.gradient[i] == Catch::Approx(fd[i]).margin(tol));
            }
        }
    }
}

TEST_CASE("losses are nonnegative and permutation invariant") {
    std::mt19937 rng(53);
    ProbMap p = oracles::random_prob_map(rng, 6, 6);
    BinaryMask g = random_labels(rng, 6, 6);

    CHECK(ce_loss(p, g).value >= 0.0);
    CHECK(focal_loss(p, g).value >= 0.0);
    CHECK(dice_loss(p, g).value >= 0.0);
    CHECK(tversky_loss(p, g).value >= 0.0);

    // shuffle pixels jointly: ce and focal are pixel-separable means
    std::vector<std::size_t> perm(p.data.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ProbMap ps(6, 6);
    BinaryMask gs(6, 6);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        ps.data[i] = p.data[perm[i]];
        gs.data[i] = g.data[perm[i]];
    }
    CHECK(ce_loss(ps, gs).value == Catch::Approx(ce_loss(p, g).value).margin(1e-12));
    CHECK(focal_loss(ps, gs).value == Catch::Approx(focal_loss(p, g).value).margin(1e-12));
}

TEST_CASE("dice and tversky ignore appended background given fixed epsilon") {
    ProbMap p(3, 1, {0.8, 0.2, 0.5});
    BinaryMask g(3, 1, {1, 0, 1});
    ProbMap p_pad(6, 1, {0.8, 0.2, 0.5, 0.0, 0.0, 0.0});
    BinaryMask g_pad(6, 1, {1, 0, 1, 0, 0, 0});
    CHECK(dice_loss(p, g).value == Catch::Approx(dice_loss(p_pad, g_pad).value).margin(1e-15));
    CHECK(tversky_loss(p, g).value ==
          Catch::Approx(tversky_loss(p_pad, g_pad).value).margin(1e-15));
}

TEST_CASE("prob map constructor validates the range") {
    REQUIRE_THROWS_AS(ProbMap(1, 2, {0.5, 1.5}), std::invalid_argument);
}
