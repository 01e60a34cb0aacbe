#ifndef ART9_WORD9_HPP
#define ART9_WORD9_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "art9/error.hpp"

namespace art9 {

inline constexpr int kWordTrits = 9;
inline constexpr int32_t kWordStates = 19683;  // 3^9
inline constexpr int32_t kMaxBalanced = 9841;  // (3^9 - 1) / 2
inline constexpr int32_t kMaxUnsigned = 19682; // 3^9 - 1

// One-input ternary inverters and two-input logic functions.
enum class InvertKind { Sti, Nti, Pti };
enum class LogicKind { And, Or, Xor };
enum class ShiftDir { Left, Right };

// Scalar trit operations. Trits are plain ints constrained to {-1, 0, +1}.
int invert_trit(InvertKind kind, int t);
int logic_trit(LogicKind kind, int a, int b);

char trit_char(int t);
int char_trit(char c); // throws Error on anything but '-', '0', '+'

// A 9-trit balanced-ternary word, index 0 = least significant trit (LST).
// Immutable value type; all operations below are pure.
class Word9 {
public:
    Word9() = default;

    // Unique word whose balanced value is congruent to v mod 3^9.
    static Word9 from_balanced(int64_t v);

    // 9 characters, most significant trit first, e.g. "00000000+" = 1.
    static Word9 parse(std::string_view text);

    int trit(int i) const { return trits_[static_cast<size_t>(i)]; }
    void set_trit(int i, int v);

    // Sum of trit_k * 3^k, in [-9841, 9841].
    int32_t balanced() const;

    // Level-monotone unsigned view: balanced() + 9841, in [0, 19682].
    // Used for register indices and TIM/TDM addresses.
    int32_t to_unsigned() const { return balanced() + kMaxBalanced; }

    std::string str() const;

    bool operator==(const Word9&) const = default;

private:
    std::array<int8_t, kWordTrits> trits_{};
};

Word9 invert_word(InvertKind kind, const Word9& w);
Word9 logic_word(LogicKind kind, const Word9& a, const Word9& b);

// Wrapping add/sub/negate mod 3^9; no flags.
Word9 add_word(const Word9& a, const Word9& b);
Word9 sub_word(const Word9& a, const Word9& b);
Word9 negate_word(const Word9& w); // same as invert_word(Sti, w)

// amount in [-4, +4]; negative amounts shift the opposite direction.
// Left fills with 0 discarding overflow (multiply by 3^s mod 3^9); right
// fills with 0 (round-to-nearest division by 3^s in balanced ternary).
Word9 shift_word(const Word9& w, int amount, ShiftDir dir);

// sign(balanced(a) - balanced(b)) as a trit.
int compare_word(const Word9& a, const Word9& b);

} // namespace art9

#endif
