#include "thermoporo/error.hpp"
#include "thermoporo/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace thermoporo;

TEST(TwoScale, PresetsAreRegistered) {
    EXPECT_GE(two_scale_presets().size(), 3u);
    EXPECT_EQ(two_scale_preset("trig-product").name, "trig-product");
    EXPECT_THROW((void)two_scale_preset("nope"), std::invalid_argument);
}

TEST(TwoScale, ConstantOscillationIsExact) {
    const auto rep = two_scale_check(two_scale_preset("constant"), {0.5, 0.25});
    for (const auto& row : rep.rows) EXPECT_LT(row.error, 1e-12);
    EXPECT_TRUE(std::isnan(rep.order));
}

TEST(TwoScale, TrigonometricErrorsDecay) {
    const auto rep = two_scale_check(two_scale_preset("trig-checker"), {0.5, 0.25, 0.125});
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_LT(rep.rows[2].error, rep.rows[1].error);
    EXPECT_LT(rep.rows[1].error, rep.rows[0].error);
    EXPECT_GT(rep.order, 1.5);
    const std::string table = format_two_scale(rep);
    EXPECT_NE(table.find("order"), std::string::npos);
}

TEST(TwoScale, RejectsBadEpsLists) {
    const auto& p = two_scale_preset("trig-product");
    EXPECT_THROW((void)two_scale_check(p, {0.3}), std::invalid_argument);
    EXPECT_THROW((void)two_scale_check(p, {0.25, 0.5}), std::invalid_argument);
    EXPECT_THROW((void)two_scale_check(p, {}), std::invalid_argument);
}

TEST(Dns, HomogeneousConductionIsExact) {
    Vector G(2);
    G << 0.3, -1.0;
    const auto r = dns_conduction(make_laminate(2, 4, 0.5), 2.0, 2.0, 2, G);
    EXPECT_LT(r.relative_error, 1e-8);
    EXPECT_NEAR(r.observable[1], -2.0, 1e-8);
}

TEST(Dns, LaminateErrorDecreases) {
    Vector G(2);
    G << 1.0, 0.0;
    const auto g = make_laminate(2, 8, 0.5);
    const double a = dns_conduction(g, 1.0, 4.0, 1, G).relative_error;
    const double b = dns_conduction(g, 1.0, 4.0, 2, G).relative_error;
    EXPECT_LT(b, a);
}

TEST(Dns, StokesTilingMatchesCell) {
    const auto g = make_centered_cube(2, 8, 0.5);
    const auto r = dns_stokes(g, 1.0, 2, 1);
    EXPECT_LT(r.relative_error, 1e-8);
    EXPECT_THROW((void)dns_stokes(make_laminate(2, 8, 0.5), 1.0, 2, 0), DegenerateGeometry);
}

TEST(Suites, NamesAndFormatting) {
    EXPECT_EQ(suite_names().back(), "all");
    EXPECT_THROW((void)run_suite("bogus"), std::invalid_argument);
    const auto rep = run_suite("two-scale");
    EXPECT_TRUE(rep.passed());
    const std::string text = format_suite(rep);
    EXPECT_NE(text.find("check "), std::string::npos);
    EXPECT_NE(text.find("result PASS"), std::string::npos);
}
