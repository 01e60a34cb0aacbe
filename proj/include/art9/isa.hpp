#ifndef ART9_ISA_HPP
#define ART9_ISA_HPP

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "art9/word9.hpp"

namespace art9 {

// The 24 ART-9 instructions.
enum class Mnemonic {
    Mv, Pti, Nti, Sti, And, Or, Xor, Add, Sub, Sr, Sl, Comp, // R-type
    Andi, Addi, Sri, Sli, Lui, Li,                            // I-type
    Beq, Bne, Jal, Jalr,                                      // B-type
    Load, Store,                                              // M-type
};
inline constexpr int kMnemonicCount = 24;

enum class Format { R, I, B, M };

// Static description of one instruction: name, format, opcode codeword
// (prefix-free variable-length ternary code at the MS end) and operand
// field widths. Operand fields follow the opcode in declaration order,
// each MS-trit first, packed down to trit 0.
struct OpInfo {
    Mnemonic mn;
    const char* name;
    Format fmt;
    const char* opcode;  // trit string, MS first
    bool has_ta;
    bool has_tb;
    bool has_cond;       // 1-trit B field (BEQ/BNE)
    int imm_trits;       // 0, 2, 3, 4 or 5
};

const OpInfo& op_info(Mnemonic mn);
const std::array<OpInfo, kMnemonicCount>& op_table();
const OpInfo* find_op(std::string_view name); // case-insensitive, null if unknown

// Balanced range limit of a k-trit immediate field: (3^k - 1) / 2.
int imm_limit(int trits);

// Decoded instruction. For BEQ/BNE the single register field is the
// condition register, stored in `ta`; `cond` is the B trit.
struct Instruction {
    Mnemonic mn = Mnemonic::Addi;
    int ta = 4;
    int tb = 4;
    int cond = 0;
    int imm = 0;

    bool operator==(const Instruction&) const = default;
};

// The canonical NOP (ADDI T4, 0) and the HALT idiom (JAL T4, 0: self-jump).
inline Instruction make_nop() { return Instruction{Mnemonic::Addi, 4, 4, 0, 0}; }
inline Instruction make_halt() { return Instruction{Mnemonic::Jal, 4, 4, 0, 0}; }

// Throws Error if a field is out of range for the format.
Word9 encode_instruction(const Instruction& ins);

// Exact inverse of encode_instruction; throws IllegalInstruction when no
// opcode codeword matches.
Instruction decode_instruction(const Word9& w);

// Register sets touched by an instruction, used by the hazard model and
// the transpiler's peephole pass.
std::vector<int> ex_read_regs(const Instruction& ins); // operands read in EX
std::vector<int> id_read_regs(const Instruction& ins); // branch cond / JALR base
bool ex_reads_ta(const Instruction& ins);
bool ex_reads_tb(const Instruction& ins);
int dest_reg(const Instruction& ins);                  // -1 if none
bool is_control_transfer(const Instruction& ins);

// Canonical assembly text for one instruction (branch offsets as decimals).
std::string format_instruction(const Instruction& ins);

} // namespace art9

#endif
