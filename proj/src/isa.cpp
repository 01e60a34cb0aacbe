#include "art9/isa.hpp"

#include <cassert>
#include <cstring>
#include <string>

namespace art9 {

namespace {

// Codeword lengths are forced by operand widths: every format must fill
// exactly 9 trits. Regions "+0+...", "+00++" and the unused "++..." leaves
// are reserved and decode as illegal instructions.
constexpr std::array<OpInfo, kMnemonicCount> kOps = {{
    {Mnemonic::Mv, "MV", Format::R, "++---", true, true, false, 0},
    {Mnemonic::Pti, "PTI", Format::R, "++--0", true, true, false, 0},
    {Mnemonic::Nti, "NTI", Format::R, "++--+", true, true, false, 0},
    {Mnemonic::Sti, "STI", Format::R, "++-0-", true, true, false, 0},
    {Mnemonic::And, "AND", Format::R, "++-00", true, true, false, 0},
    {Mnemonic::Or, "OR", Format::R, "++-0+", true, true, false, 0},
    {Mnemonic::Xor, "XOR", Format::R, "++-+-", true, true, false, 0},
    {Mnemonic::Add, "ADD", Format::R, "++-+0", true, true, false, 0},
    {Mnemonic::Sub, "SUB", Format::R, "++-++", true, true, false, 0},
    {Mnemonic::Sr, "SR", Format::R, "++0--", true, true, false, 0},
    {Mnemonic::Sl, "SL", Format::R, "++0-0", true, true, false, 0},
    {Mnemonic::Comp, "COMP", Format::R, "++0-+", true, true, false, 0},
    {Mnemonic::Andi, "ANDI", Format::I, "+00-", true, false, false, 3},
    {Mnemonic::Addi, "ADDI", Format::I, "+000", true, false, false, 3},
    {Mnemonic::Sri, "SRI", Format::I, "+00+-", true, false, false, 2},
    {Mnemonic::Sli, "SLI", Format::I, "+00+0", true, false, false, 2},
    {Mnemonic::Lui, "LUI", Format::I, "+0-", true, false, false, 4},
    {Mnemonic::Li, "LI", Format::I, "--", true, false, false, 5},
    {Mnemonic::Beq, "BEQ", Format::B, "-0", true, false, true, 4},
    {Mnemonic::Bne, "BNE", Format::B, "-+", true, false, true, 4},
    {Mnemonic::Jal, "JAL", Format::B, "0-", true, false, false, 5},
    {Mnemonic::Jalr, "JALR", Format::B, "00", true, true, false, 3},
    {Mnemonic::Load, "LOAD", Format::M, "0+", true, true, false, 3},
    {Mnemonic::Store, "STORE", Format::M, "+-", true, true, false, 3},
}};

bool ieq(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

// Writes a balanced value as `width` trits, MS first, starting at trit
// index `hi` counting down.
void put_field(Word9& w, int hi, int width, int value) {
    Word9 enc = Word9::from_balanced(value);
    for (int i = 0; i < width; ++i)
        w.set_trit(hi - width + 1 + i, enc.trit(i));
}

int get_field_balanced(const Word9& w, int hi, int width) {
    int v = 0;
    for (int i = 0; i < width; ++i)
        v = v * 3 + w.trit(hi - i);
    return v;
}

int get_field_unsigned(const Word9& w, int hi, int width) {
    int v = 0;
    for (int i = 0; i < width; ++i)
        v = v * 3 + (w.trit(hi - i) + 1);
    return v;
}

} // namespace

const std::array<OpInfo, kMnemonicCount>& op_table() { return kOps; }

const OpInfo& op_info(Mnemonic mn) {
    for (const auto& op : kOps)
        if (op.mn == mn) return op;
    assert(false);
    return kOps[0];
}

const OpInfo* find_op(std::string_view name) {
    for (const auto& op : kOps)
        if (ieq(op.name, name)) return &op;
    return nullptr;
}

int imm_limit(int trits) {
    int p = 1;
    for (int i = 0; i < trits; ++i) p *= 3;
    return (p - 1) / 2;
}

Word9 encode_instruction(const Instruction& ins) {
    const OpInfo& op = op_info(ins.mn);
    const int oplen = static_cast<int>(std::strlen(op.opcode));
    Word9 w;
    int pos = kWordTrits - 1;
    for (int i = 0; i < oplen; ++i, --pos)
        w.set_trit(pos, char_trit(op.opcode[i]));
    if (op.has_ta) {
        if (ins.ta < 0 || ins.ta > 8)
            throw Error(std::string(op.name) + ": register index out of [0,8]");
        put_field(w, pos, 2, ins.ta - 4); // unsigned 2-trit value == index
        pos -= 2;
    }
    if (op.has_tb) {
        if (ins.tb < 0 || ins.tb > 8)
            throw Error(std::string(op.name) + ": register index out of [0,8]");
        put_field(w, pos, 2, ins.tb - 4);
        pos -= 2;
    }
    if (op.has_cond) {
        if (ins.cond < -1 || ins.cond > 1)
            throw Error(std::string(op.name) + ": condition trit out of {-1,0,+1}");
        w.set_trit(pos, ins.cond);
        --pos;
    }
    if (op.imm_trits > 0) {
        const int lim = imm_limit(op.imm_trits);
        if (ins.imm < -lim || ins.imm > lim)
            throw Error(std::string(op.name) + ": immediate " + std::to_string(ins.imm) +
                        " out of [" + std::to_string(-lim) + "," + std::to_string(lim) + "]");
        put_field(w, pos, op.imm_trits, ins.imm);
        pos -= op.imm_trits;
    }
    assert(pos == -1);
    return w;
}

Instruction decode_instruction(const Word9& w) {
    for (const auto& op : kOps) {
        const int oplen = static_cast<int>(std::strlen(op.opcode));
        bool match = true;
        for (int i = 0; i < oplen && match; ++i)
            match = w.trit(kWordTrits - 1 - i) == char_trit(op.opcode[i]);
        if (!match) continue;
        Instruction ins;
        ins.mn = op.mn;
        int pos = kWordTrits - 1 - oplen;
        if (op.has_ta) {
            ins.ta = get_field_unsigned(w, pos, 2);
            pos -= 2;
        }
        if (op.has_tb) {
            ins.tb = get_field_unsigned(w, pos, 2);
            pos -= 2;
        }
        if (op.has_cond) {
            ins.cond = w.trit(pos);
            --pos;
        }
        if (op.imm_trits > 0) {
            ins.imm = get_field_balanced(w, pos, op.imm_trits);
            pos -= op.imm_trits;
        }
        assert(pos == -1);
        return ins;
    }
    throw IllegalInstruction("illegal instruction word " + w.str());
}

std::vector<int> ex_read_regs(const Instruction& ins) {
    std::vector<int> regs;
    if (ex_reads_ta(ins)) regs.push_back(ins.ta);
    if (ex_reads_tb(ins)) regs.push_back(ins.tb);
    return regs;
}

bool ex_reads_ta(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::And:
    case Mnemonic::Or:
    case Mnemonic::Xor:
    case Mnemonic::Add:
    case Mnemonic::Sub:
    case Mnemonic::Sr:
    case Mnemonic::Sl:
    case Mnemonic::Comp:
    case Mnemonic::Andi:
    case Mnemonic::Addi:
    case Mnemonic::Sri:
    case Mnemonic::Sli:
    case Mnemonic::Li:
    case Mnemonic::Store:
        return true;
    default:
        return false;
    }
}

bool ex_reads_tb(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Mv:
    case Mnemonic::Pti:
    case Mnemonic::Nti:
    case Mnemonic::Sti:
    case Mnemonic::And:
    case Mnemonic::Or:
    case Mnemonic::Xor:
    case Mnemonic::Add:
    case Mnemonic::Sub:
    case Mnemonic::Sr:
    case Mnemonic::Sl:
    case Mnemonic::Comp:
    case Mnemonic::Load:
    case Mnemonic::Store:
        return true;
    default:
        return false;
    }
}

std::vector<int> id_read_regs(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Beq:
    case Mnemonic::Bne:
        return {ins.ta}; // condition register
    case Mnemonic::Jalr:
        return {ins.tb}; // jump base
    default:
        return {};
    }
}

int dest_reg(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Store:
        return -1;
    default:
        return ins.ta;
    }
}

bool is_control_transfer(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Beq:
    case Mnemonic::Bne:
    case Mnemonic::Jal:
    case Mnemonic::Jalr:
        return true;
    default:
        return false;
    }
}

std::string format_instruction(const Instruction& ins) {
    const OpInfo& op = op_info(ins.mn);
    std::string s = op.name;
    auto reg = [](int r) { return "T" + std::to_string(r); };
    switch (op.fmt) {
    case Format::R:
        s += " " + reg(ins.ta) + ", " + reg(ins.tb);
        break;
    case Format::I:
        s += " " + reg(ins.ta) + ", " + std::to_string(ins.imm);
        break;
    case Format::B:
        if (op.has_cond) {
            s += " " + reg(ins.ta) + ", " + std::string(1, trit_char(ins.cond)) + ", " +
                 std::to_string(ins.imm);
        } else if (ins.mn == Mnemonic::Jal) {
            s += " " + reg(ins.ta) + ", " + std::to_string(ins.imm);
        } else { // JALR
            s += " " + reg(ins.ta) + ", " + reg(ins.tb) + ", " + std::to_string(ins.imm);
        }
        break;
    case Format::M:
        s += " " + reg(ins.ta) + ", " + reg(ins.tb) + ", " + std::to_string(ins.imm);
        break;
    }
    return s;
}

} // namespace art9
