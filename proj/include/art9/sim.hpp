#ifndef ART9_SIM_HPP
#define ART9_SIM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "art9/assembler.hpp"
#include "art9/isa.hpp"
#include "art9/word9.hpp"

namespace art9 {

enum class MemTarget { Tim, Tdm };

// Architectural state. Memories are word-addressed, one Word9 per address,
// 19683 words each; addresses are the unsigned view of 9-trit patterns.
// Cold state: PC at unsigned index 0, registers and memories all zero.
struct MachineState {
    Word9 pc = Word9::from_balanced(-kMaxBalanced);
    std::array<Word9, 9> trf{};
    std::vector<Word9> tim = std::vector<Word9>(kWordStates);
    std::vector<Word9> tdm = std::vector<Word9>(kWordStates);
    bool halted = false;
    int64_t retired = 0;
};

// Copies image words at image.base; throws on overflow of the 19683-word
// space. Resets pc to unsigned index 0.
void load_image(MachineState& state, const ProgramImage& image, MemTarget target);

// Executes exactly one instruction. Throws TrapError on an illegal
// instruction word at pc. A control transfer targeting its own address
// sets `halted` (the HALT convention).
void step_functional(MachineState& state);

// Steps until halted or `max_steps` instructions retired; throws
// TimeoutError if the bound is hit (state stays inspectable).
void run_functional(MachineState& state, int64_t max_steps);

// Per-cycle pipeline occupancy; labels are TIM indices, or the BUBBLE /
// SQUASH / empty markers.
struct TraceRow {
    int64_t cycle = 0;
    std::array<std::string, 5> stage; // IF, ID, EX, MEM, WB
    std::string pc;                   // fetch pc trits
};

struct PipelineStats {
    int64_t cycles = 0;
    int64_t retired = 0;
    int64_t load_use_stalls = 0;
    int64_t branch_squashes = 0;
    int64_t branch_value_stalls = 0;
    std::vector<TraceRow> trace; // filled only when requested

    int64_t total_stalls() const {
        return load_use_stalls + branch_squashes + branch_value_stalls;
    }
};

// Cycle-accurate 5-stage model (IF/ID/EX/MEM/WB): full-word forwarding
// EX-output->EX and MEM-output->EX, write-first register file, branches
// resolved in ID with EX-output value forwarding, one squashed fetch slot
// per taken transfer, load-use stall rules per the hazard unit.
// Architectural results are identical to run_functional.
PipelineStats run_pipelined(MachineState& state, int64_t max_cycles,
                            bool record_trace = false);

// CSV: cycle, IF, ID, EX, MEM, WB, pc.
std::string format_trace_csv(const PipelineStats& stats);

} // namespace art9

#endif
