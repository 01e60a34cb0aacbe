#ifndef ART9_TRANSPILER_HPP
#define ART9_TRANSPILER_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "art9/isa.hpp"

namespace art9 {

// One parsed RV-32I instruction from the supported subset. `target` holds
// the label operand of branch/jump instructions when one was written.
struct RvInstruction {
    std::string mnemonic;
    int rd = 0;
    int rs1 = 0;
    int rs2 = 0;
    long imm = 0;
    std::string target;
    int line = 0;
};

struct RvProgram {
    std::vector<RvInstruction> ins;
    std::map<std::string, int> labels; // label -> instruction index
};

// Supported subset: add, sub, and, or, xor, addi, andi, xori, slli, srli,
// lui, lw, sw, beq, bne, blt, bge, jal, jalr and the pseudos li, mv, j,
// nop, ret. Registers as xN or ABI names. Anything else is rejected.
RvProgram parse_rv32i(std::string_view source);

// Where an RV register lives on the ART-9 side.
struct RegSlot {
    enum Kind { Direct, Spill } kind = Direct;
    int treg = 0;       // Direct: T register index
    int spill_addr = 0; // Spill: unsigned TDM index
};

using RegMap = std::map<int, RegSlot>;

// Pinned map: x0->T0 (kept zero), ra->T1, sp->T2; T7/T8 reserved as
// scratch; remaining registers get T3..T6 by descending static use count,
// the rest spill to TDM slots at spill_base downward. The default base is
// word address -1 (unsigned 9840): the first 13 slots sit in the T0-relative
// LOAD/STORE window, so spill traffic costs one instruction per access.
// Programs must leave negative word addresses to the spill area.
RegMap allocate_registers(const RvProgram& prog, int spill_base);

struct TranspileOptions {
    bool peephole = true;
    int stack_top = 9000;        // balanced value loaded into T2 (sp)
    int spill_base = 9840;       // unsigned TDM index of the first spill slot
};

struct TranspileStats {
    int input_count = 0;
    int output_count = 0;
    int removed = 0;
    int spills = 0;
    long memory_cells = 0; // 9 * output_count
};

struct TranspileResult {
    std::string assembly; // accepted by assemble_program
    TranspileStats stats;
};

// parse -> allocate -> map/materialize -> eliminate -> retarget -> emit.
TranspileResult transpile(std::string_view source, const TranspileOptions& opt = {});

std::string format_stats(const TranspileStats& stats);

} // namespace art9

#endif
