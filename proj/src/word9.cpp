#include "art9/word9.hpp"

#include <cassert>
#include <cstdlib>

namespace art9 {

int invert_trit(InvertKind kind, int t) {
    assert(t >= -1 && t <= 1);
    switch (kind) {
    case InvertKind::Sti: return -t;
    case InvertKind::Nti: return t == -1 ? 1 : -1;
    case InvertKind::Pti: return t == 1 ? -1 : 1;
    }
    return 0;
}

int logic_trit(LogicKind kind, int a, int b) {
    assert(a >= -1 && a <= 1 && b >= -1 && b <= 1);
    switch (kind) {
    case LogicKind::And: return a < b ? a : b;
    case LogicKind::Or: return a > b ? a : b;
    case LogicKind::Xor: return (a + b + 4) % 3 - 1; // (a+b) mod 3, balanced
    }
    return 0;
}

char trit_char(int t) {
    assert(t >= -1 && t <= 1);
    return t < 0 ? '-' : (t > 0 ? '+' : '0');
}

int char_trit(char c) {
    switch (c) {
    case '-': return -1;
    case '0': return 0;
    case '+': return 1;
    }
    throw Error(std::string("invalid trit character '") + c + "'");
}

Word9 Word9::from_balanced(int64_t v) {
    v %= kWordStates;
    if (v > kMaxBalanced) v -= kWordStates;
    if (v < -kMaxBalanced) v += kWordStates;
    Word9 w;
    for (int i = 0; i < kWordTrits; ++i) {
        int r = static_cast<int>(((v % 3) + 3) % 3);
        int d = (r == 2) ? -1 : r;
        w.trits_[static_cast<size_t>(i)] = static_cast<int8_t>(d);
        v = (v - d) / 3;
    }
    assert(v == 0);
    return w;
}

Word9 Word9::parse(std::string_view text) {
    if (text.size() != kWordTrits)
        throw Error("word literal must have exactly 9 trits: '" + std::string(text) + "'");
    Word9 w;
    for (int i = 0; i < kWordTrits; ++i)
        w.set_trit(kWordTrits - 1 - i, char_trit(text[static_cast<size_t>(i)]));
    return w;
}

void Word9::set_trit(int i, int v) {
    assert(i >= 0 && i < kWordTrits);
    assert(v >= -1 && v <= 1);
    trits_[static_cast<size_t>(i)] = static_cast<int8_t>(v);
}

int32_t Word9::balanced() const {
    int32_t v = 0;
    for (int i = kWordTrits - 1; i >= 0; --i)
        v = v * 3 + trits_[static_cast<size_t>(i)];
    return v;
}

std::string Word9::str() const {
    std::string s(kWordTrits, '0');
    for (int i = 0; i < kWordTrits; ++i)
        s[static_cast<size_t>(i)] = trit_char(trit(kWordTrits - 1 - i));
    return s;
}

Word9 invert_word(InvertKind kind, const Word9& w) {
    Word9 r;
    for (int i = 0; i < kWordTrits; ++i)
        r.set_trit(i, invert_trit(kind, w.trit(i)));
    return r;
}

Word9 logic_word(LogicKind kind, const Word9& a, const Word9& b) {
    Word9 r;
    for (int i = 0; i < kWordTrits; ++i)
        r.set_trit(i, logic_trit(kind, a.trit(i), b.trit(i)));
    return r;
}

Word9 add_word(const Word9& a, const Word9& b) {
    return Word9::from_balanced(static_cast<int64_t>(a.balanced()) + b.balanced());
}

Word9 sub_word(const Word9& a, const Word9& b) {
    return add_word(a, negate_word(b));
}

Word9 negate_word(const Word9& w) {
    return invert_word(InvertKind::Sti, w);
}

Word9 shift_word(const Word9& w, int amount, ShiftDir dir) {
    if (amount < -4 || amount > 4)
        throw Error("shift amount out of [-4, 4]: " + std::to_string(amount));
    if (amount < 0) {
        amount = -amount;
        dir = dir == ShiftDir::Left ? ShiftDir::Right : ShiftDir::Left;
    }
    Word9 r;
    for (int i = 0; i < kWordTrits; ++i) {
        int src = dir == ShiftDir::Left ? i - amount : i + amount;
        r.set_trit(i, (src >= 0 && src < kWordTrits) ? w.trit(src) : 0);
    }
    return r;
}

int compare_word(const Word9& a, const Word9& b) {
    int32_t d = a.balanced() - b.balanced();
    return d < 0 ? -1 : (d > 0 ? 1 : 0);
}

} // namespace art9
