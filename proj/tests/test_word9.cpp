#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "art9/word9.hpp"

using namespace art9;

namespace {

// Independent little-endian digit oracle for the value <-> trits bijection.
std::array<int, 9> oracle_digits(int32_t balanced) {
    std::array<int, 9> d{};
    int64_t v = balanced;
    for (int i = 0; i < 9; ++i) {
        int64_t r = ((v % 3) + 3) % 3;
        if (r == 2) r = -1;
        d[static_cast<size_t>(i)] = static_cast<int>(r);
        v = (v - r) / 3;
    }
    return d;
}

int64_t wrap_balanced(int64_t v) {
    int64_t m = ((v % kWordStates) + kWordStates) % kWordStates; // [0, 3^9)
    if (m > kMaxBalanced) m -= kWordStates;
    return m;
}

} // namespace

TEST_CASE("value/pattern bijection over all 19683 words") {
    for (int v = -kMaxBalanced; v <= kMaxBalanced; ++v) {
        Word9 w = Word9::from_balanced(v);
        CHECK(w.balanced() == v);
        CHECK(w.to_unsigned() == v + kMaxBalanced);
        auto d = oracle_digits(v);
        for (int i = 0; i < 9; ++i) CHECK(w.trit(i) == d[static_cast<size_t>(i)]);
        CHECK(Word9::parse(w.str()) == w);
    }
}

TEST_CASE("from_balanced wraps mod 3^9") {
    CHECK(Word9::from_balanced(kMaxBalanced + 1).balanced() == -kMaxBalanced);
    CHECK(Word9::from_balanced(-kMaxBalanced - 1).balanced() == kMaxBalanced);
    CHECK(Word9::from_balanced(kWordStates).balanced() == 0);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int64_t> dist(-1000000, 1000000);
    for (int i = 0; i < 1000; ++i) {
        int64_t v = dist(rng);
        CHECK(Word9::from_balanced(v).balanced() == wrap_balanced(v));
    }
}

TEST_CASE("notation: MS trit first with - 0 +") {
    CHECK(Word9::from_balanced(0).str() == "000000000");
    CHECK(Word9::from_balanced(1).str() == "00000000+");
    CHECK(Word9::from_balanced(-1).str() == "00000000-");
    CHECK(Word9::from_balanced(kMaxBalanced).str() == "+++++++++");
    CHECK(Word9::from_balanced(-kMaxBalanced).str() == "---------");
    CHECK(Word9::parse("0000000+-").balanced() == 2);
    CHECK_THROWS_AS(Word9::parse("00000000"), Error);   // too short
    CHECK_THROWS_AS(Word9::parse("00000000x"), Error);  // bad character
}

TEST_CASE("trit truth tables, exhaustively") {
    // inverters
    CHECK(invert_trit(InvertKind::Sti, -1) == 1);
    CHECK(invert_trit(InvertKind::Sti, 0) == 0);
    CHECK(invert_trit(InvertKind::Sti, 1) == -1);
    CHECK(invert_trit(InvertKind::Nti, -1) == 1);
    CHECK(invert_trit(InvertKind::Nti, 0) == -1);
    CHECK(invert_trit(InvertKind::Nti, 1) == -1);
    CHECK(invert_trit(InvertKind::Pti, -1) == 1);
    CHECK(invert_trit(InvertKind::Pti, 0) == 1);
    CHECK(invert_trit(InvertKind::Pti, 1) == -1);
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            CHECK(logic_trit(LogicKind::And, a, b) == std::min(a, b));
            CHECK(logic_trit(LogicKind::Or, a, b) == std::max(a, b));
            // modular sum with representative in {-1, 0, +1}
            int s = a + b;
            if (s == 2) s = -1;
            if (s == -2) s = 1;
            CHECK(logic_trit(LogicKind::Xor, a, b) == s);
        }
    }
}

TEST_CASE("word logic is trit-wise") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dist(-kMaxBalanced, kMaxBalanced);
    for (int i = 0; i < 2000; ++i) {
        Word9 a = Word9::from_balanced(dist(rng));
        Word9 b = Word9::from_balanced(dist(rng));
        for (auto kind : {LogicKind::And, LogicKind::Or, LogicKind::Xor}) {
            Word9 r = logic_word(kind, a, b);
            for (int t = 0; t < 9; ++t)
                CHECK(r.trit(t) == logic_trit(kind, a.trit(t), b.trit(t)));
        }
        for (auto kind : {InvertKind::Sti, InvertKind::Nti, InvertKind::Pti}) {
            Word9 r = invert_word(kind, a);
            for (int t = 0; t < 9; ++t)
                CHECK(r.trit(t) == invert_trit(kind, a.trit(t)));
        }
    }
}

TEST_CASE("add/sub/negate/compare against the integer oracle") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> dist(-kMaxBalanced, kMaxBalanced);
    for (int i = 0; i < 100000; ++i) {
        int32_t x = dist(rng), y = dist(rng);
        Word9 a = Word9::from_balanced(x), b = Word9::from_balanced(y);
        CHECK(add_word(a, b).balanced() == wrap_balanced(static_cast<int64_t>(x) + y));
        CHECK(sub_word(a, b).balanced() == wrap_balanced(static_cast<int64_t>(x) - y));
        CHECK(negate_word(a).balanced() == wrap_balanced(-static_cast<int64_t>(x)));
        CHECK(negate_word(a) == invert_word(InvertKind::Sti, a));
        int sign = x < y ? -1 : (x > y ? 1 : 0);
        CHECK(compare_word(a, b) == sign);
    }
}

TEST_CASE("left shift multiplies by 3^s mod 3^9") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> dist(-kMaxBalanced, kMaxBalanced);
    for (int i = 0; i < 20000; ++i) {
        int32_t x = dist(rng);
        int s = std::uniform_int_distribution<int>(0, 4)(rng);
        Word9 w = Word9::from_balanced(x);
        int64_t pow = 1;
        for (int k = 0; k < s; ++k) pow *= 3;
        CHECK(shift_word(w, s, ShiftDir::Left).balanced() == wrap_balanced(x * pow));
        // negative amount flips direction
        CHECK(shift_word(w, -s, ShiftDir::Right) == shift_word(w, s, ShiftDir::Left));
    }
}

TEST_CASE("right shift is round-to-nearest division by 3^s") {
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> dist(-kMaxBalanced, kMaxBalanced);
    for (int i = 0; i < 20000; ++i) {
        int32_t x = dist(rng);
        int s = std::uniform_int_distribution<int>(0, 4)(rng);
        Word9 w = Word9::from_balanced(x);
        double pow = std::pow(3.0, s);
        // balanced-ternary truncation rounds to nearest; ties cannot occur
        int64_t expect = std::llround(static_cast<double>(x) / pow);
        CHECK(shift_word(w, s, ShiftDir::Right).balanced() == expect);
        CHECK(shift_word(w, -s, ShiftDir::Left) == shift_word(w, s, ShiftDir::Right));
    }
    // frozen examples: 5/3 rounds to 2, -5/3 to -2, 4/3 to 1
    CHECK(shift_word(Word9::from_balanced(5), 1, ShiftDir::Right).balanced() == 2);
    CHECK(shift_word(Word9::from_balanced(-5), 1, ShiftDir::Right).balanced() == -2);
    CHECK(shift_word(Word9::from_balanced(4), 1, ShiftDir::Right).balanced() == 1);
}

TEST_CASE("shift amount outside [-4, 4] is rejected") {
    Word9 w = Word9::from_balanced(5);
    CHECK_THROWS_AS(shift_word(w, 5, ShiftDir::Left), Error);
    CHECK_THROWS_AS(shift_word(w, -5, ShiftDir::Right), Error);
}
