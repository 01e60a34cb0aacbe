#ifndef ART9_ASSEMBLER_HPP
#define ART9_ASSEMBLER_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "art9/isa.hpp"
#include "art9/word9.hpp"

namespace art9 {

// Assembled memory image: `words` placed at memory index `base`.
// `symbols` maps label -> memory index (assembler output only; the .tmem
// container does not serialize it).
struct ProgramImage {
    int base = 0;
    std::vector<Word9> words;
    std::map<std::string, int> symbols;

    bool operator==(const ProgramImage& o) const {
        return base == o.base && words == o.words;
    }
};

// Two-pass assembler for the grammar in the README: one statement per
// line, `label:` prefixes, case-insensitive mnemonics, registers T0-T8,
// immediates as signed decimals or 0t trit literals, branch targets as
// labels or decimal offsets, comments from ';' or '#', pseudos NOP and
// HALT, raw words via `.word 0t<9 trits>`.
ProgramImage assemble_program(std::string_view source);

// One line per word; decodable words print canonical mnemonic syntax,
// anything else prints `.word 0t<trits>`. assemble(disassemble(img))
// reproduces img word for word.
std::string disassemble_program(const ProgramImage& image);

// .tmem container: optional `base <index>` header line, then one
// 9-character trit word per line, MS first; '#' comments allowed.
ProgramImage parse_tmem(std::string_view text);
std::string format_tmem(const ProgramImage& image);

} // namespace art9

#endif
