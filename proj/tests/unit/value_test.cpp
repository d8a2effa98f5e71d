#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "huuzlee/canon.hpp"
#include "huuzlee/value.hpp"

using namespace huuzlee;

TEST(Decimal, Canonicalization) {
    EXPECT_EQ(Decimal::parse("10")->str(), "10");
    EXPECT_EQ(Decimal::parse("010")->str(), "10");
    EXPECT_EQ(Decimal::parse("10.500")->str(), "10.5");
    EXPECT_EQ(Decimal::parse("10.0")->str(), "10");
    EXPECT_EQ(Decimal::parse("-0.0")->str(), "0");
    EXPECT_EQ(Decimal::parse("-0.25")->str(), "-0.25");
    EXPECT_EQ(Decimal::parse("0.000")->str(), "0");
}

TEST(Decimal, RejectsMalformed) {
    for (const char* bad : {"", "-", "1.", ".5", "1e3", "+1", "1.2.3", " 1", "0x10"})
        EXPECT_FALSE(Decimal::parse(bad).has_value()) << bad;
}

TEST(Decimal, EqualityIsExactOnValue) {
    EXPECT_EQ(*Decimal::parse("1.10"), *Decimal::parse("1.1"));
    EXPECT_NE(*Decimal::parse("1.1"), *Decimal::parse("1.01"));
}

TEST(Decimal, OrderingAgreesWithIntegerOracle) {
    // compare scaled integers for all pairs of hundredths in [-300, 300]
    auto dec = [](int hundredths) {
        int a = std::abs(hundredths);
        std::string s = (hundredths < 0 ? "-" : "") + std::to_string(a / 100) + "." + (a % 100 < 10 ? "0" : "") +
                        std::to_string(a % 100);
        return *Decimal::parse(s);
    };
    for (int x = -300; x <= 300; x += 7)
        for (int y = -300; y <= 300; y += 11) {
            EXPECT_EQ(dec(x) < dec(y), x < y) << x << " " << y;
            EXPECT_EQ(dec(x) == dec(y), x == y) << x << " " << y;
        }
    EXPECT_LT(*Decimal::parse("99999999999999999999999"), *Decimal::parse("100000000000000000000000"));
}

TEST(Value, Rendering) {
    EXPECT_EQ(render_value(Unbound{}), "?");
    EXPECT_EQ(render_value(std::string("X")), "X");
    EXPECT_EQ(render_value(*Decimal::parse("10.50")), "10.5");
    EXPECT_EQ(render_value(Address{"B"}), "B");
    EXPECT_EQ(value_literal(std::string("a\"b")), "\"a\\\"b\"");
}

TEST(Value, KindsNeverCompareEqual) {
    EXPECT_NE(Value{std::string("B")}, Value{Address{"B"}});
    EXPECT_NE(Value{std::string("10")}, Value{*Decimal::parse("10")});
}

TEST(Canon, DistinctValuesSerializeDistinctly) {
    std::vector<Value> vs{Unbound{}, std::string(""), std::string("1"), *Decimal::parse("1"), Address{"1"},
                          std::string("1:"), Address{""}};
    std::set<std::string> seen;
    for (const auto& v : vs) {
        canon::Writer w;
        w.value(v);
        EXPECT_TRUE(seen.insert(w.take()).second) << render_value(v);
    }
}

TEST(Canon, PayloadKeysDoNotBleed) {
    canon::Writer a, b;
    a.payload({{"ab", std::string("c")}});
    b.payload({{"a", std::string("bc")}});
    EXPECT_NE(a.take(), b.take());
}

TEST(Canon, Sha256KnownVector) {
    EXPECT_EQ(canon::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(canon::zero_digest(), std::string(64, '0'));
    EXPECT_TRUE(canon::is_digest(canon::sha256_hex("")));
    EXPECT_FALSE(canon::is_digest("ABC"));
}

TEST(Canon, HmacKnownVector) {
    // RFC 4231 test case 2
    EXPECT_EQ(canon::hmac_sha256_hex("Jefe", "what do ya want for nothing?"),
              "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}
