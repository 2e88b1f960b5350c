#include "thermoporo/config.hpp"
#include "thermoporo/error.hpp"
#include "thermoporo/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace thermoporo;

TEST(Config, ParsesKeysCommentsAndTypes) {
    const auto cfg = KeyValueConfig::parse("# header\n a = 1.5 \nb=7 # trailing\n\nc = yes\nname = hello world\n");
    EXPECT_DOUBLE_EQ(cfg.get_double("a"), 1.5);
    EXPECT_EQ(cfg.get_int("b"), 7);
    EXPECT_TRUE(cfg.get_bool("c", false));
    EXPECT_EQ(cfg.get_string("name"), "hello world");
    EXPECT_EQ(cfg.get_int("missing", 3), 3);
    EXPECT_NO_THROW(cfg.require_all_consumed());
}

TEST(Config, Errors) {
    EXPECT_THROW((void)KeyValueConfig::parse("novalue\n"), ConfigError);
    EXPECT_THROW((void)KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
    const auto cfg = KeyValueConfig::parse("a = x\nb = 1.5\nc = maybe\n");
    EXPECT_THROW((void)cfg.get_double("a"), ConfigError);
    EXPECT_THROW((void)cfg.get_int("b"), ConfigError);
    EXPECT_THROW((void)cfg.get_bool("c", true), ConfigError);
    EXPECT_THROW((void)cfg.get_string("zzz"), ConfigError);
    EXPECT_THROW((void)KeyValueConfig::load("/nonexistent/cfg.txt"), ConfigError);
}

TEST(Config, UnconsumedKeysAreReported) {
    const auto cfg = KeyValueConfig::parse("used = 1\ntypo = 2\n");
    (void)cfg.get_int("used");
    try {
        cfg.require_all_consumed();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("typo"), std::string::npos);
    }
}

TEST(Params, Classification) {
    LimitParameters p;
    EXPECT_EQ(classify(p), Regime::MemoryDarcy);
    p.tau0 = 0.0;
    EXPECT_EQ(classify(p), Regime::SteadyDarcy);
    p.tau0 = 1.0;
    p.mu1 = 0.0;
    EXPECT_EQ(classify(p), Regime::InviscidDarcy);
    p.tau0 = 0.0;
    EXPECT_THROW((void)classify(p), InadmissibleParameters);
}

TEST(Params, ValidationListsEveryViolation) {
    LimitParameters p;
    p.pstar = 0.0;
    p.kappa0s = -1.0;
    p.c_pf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(validate(p).size(), 3u);
    EXPECT_TRUE(validate(LimitParameters{}).empty());
}

TEST(Params, RegimeNames) {
    for (Regime r : {Regime::MemoryDarcy, Regime::SteadyDarcy, Regime::InviscidDarcy})
        EXPECT_EQ(regime_from_string(to_string(r)), r);
    EXPECT_THROW((void)regime_from_string("Darcy"), ConfigError);
}

TEST(Params, EffectiveCapacity) {
    LimitParameters p;
    p.rho_f = 2.0;
    p.c_pf = 3.0;
    p.c_ps = 5.0;
    const double m = 0.25;
    EXPECT_NEAR(effective_capacity(p, m), m * 3.0 + (1.0 - m) * 5.0, 1e-12);
    EXPECT_THROW((void)effective_capacity(p, 1.5), std::invalid_argument);
}

TEST(Params, ReadFromConfig) {
    const auto cfg = KeyValueConfig::parse("mu1 = 2\ntau0 = 0\nkappa0s = 4\n");
    const auto p = read_parameters(cfg);
    EXPECT_DOUBLE_EQ(p.mu1, 2.0);
    EXPECT_DOUBLE_EQ(p.tau0, 0.0);
    EXPECT_DOUBLE_EQ(p.kappa0s, 4.0);
    EXPECT_DOUBLE_EQ(p.pstar, LimitParameters{}.pstar);
}

TEST(Params, DnsScaling) {
    LimitParameters p;
    p.mu1 = 3.0;
    const auto d = DnsParameters::from_limits(p, 0.1);
    EXPECT_NEAR(d.alpha_mu, 3.0 * 0.01, 1e-15);
    EXPECT_THROW((void)DnsParameters::from_limits(p, 0.0), std::invalid_argument);
}
