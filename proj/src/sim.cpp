#include "art9/sim.hpp"

#include <cassert>

#include "art9/error.hpp"

namespace art9 {

namespace {

Word9 imm_word(const Instruction& ins) { return Word9::from_balanced(ins.imm); }

// EX-stage datapath (TALU plus link pass-through). `a` and `b` are the
// forwarded values of TRF[ta] / TRF[tb]; `link` is PC+1 for JAL/JALR.
Word9 alu_result(const Instruction& ins, const Word9& a, const Word9& b, const Word9& link) {
    switch (ins.mn) {
    case Mnemonic::Mv: return b;
    case Mnemonic::Pti: return invert_word(InvertKind::Pti, b);
    case Mnemonic::Nti: return invert_word(InvertKind::Nti, b);
    case Mnemonic::Sti: return invert_word(InvertKind::Sti, b);
    case Mnemonic::And: return logic_word(LogicKind::And, a, b);
    case Mnemonic::Or: return logic_word(LogicKind::Or, a, b);
    case Mnemonic::Xor: return logic_word(LogicKind::Xor, a, b);
    case Mnemonic::Add: return add_word(a, b);
    case Mnemonic::Sub: return sub_word(a, b);
    case Mnemonic::Sr: return shift_word(a, b.trit(0) + 3 * b.trit(1), ShiftDir::Right);
    case Mnemonic::Sl: return shift_word(a, b.trit(0) + 3 * b.trit(1), ShiftDir::Left);
    case Mnemonic::Comp: return Word9::from_balanced(compare_word(a, b));
    case Mnemonic::Andi: return logic_word(LogicKind::And, a, imm_word(ins));
    case Mnemonic::Addi: return add_word(a, imm_word(ins));
    case Mnemonic::Sri: return shift_word(a, ins.imm, ShiftDir::Right);
    case Mnemonic::Sli: return shift_word(a, ins.imm, ShiftDir::Left);
    case Mnemonic::Lui: return Word9::from_balanced(ins.imm * 243); // {imm[3:0],00000}
    case Mnemonic::Li: {
        // {TRF[Ta][8:5], imm[4:0]}
        Word9 r = Word9::from_balanced(ins.imm);
        for (int i = 5; i < kWordTrits; ++i) r.set_trit(i, a.trit(i));
        return r;
    }
    case Mnemonic::Jal:
    case Mnemonic::Jalr:
        return link;
    default:
        return Word9{};
    }
}

Instruction fetch_decode(const MachineState& st) {
    const Word9 word = st.tim[static_cast<size_t>(st.pc.to_unsigned())];
    try {
        return decode_instruction(word);
    } catch (const IllegalInstruction&) {
        throw TrapError("illegal instruction " + word.str() + " at pc " + st.pc.str() +
                        " (index " + std::to_string(st.pc.to_unsigned()) + ")");
    }
}

} // namespace

void load_image(MachineState& state, const ProgramImage& image, MemTarget target) {
    if (image.base < 0 ||
        image.base + static_cast<int>(image.words.size()) > kWordStates)
        throw Error("image of " + std::to_string(image.words.size()) + " words at base " +
                    std::to_string(image.base) + " exceeds the 19683-word space");
    auto& mem = target == MemTarget::Tim ? state.tim : state.tdm;
    for (size_t i = 0; i < image.words.size(); ++i)
        mem[static_cast<size_t>(image.base) + i] = image.words[i];
    state.pc = Word9::from_balanced(-kMaxBalanced);
}

void step_functional(MachineState& st) {
    assert(!st.halted);
    const Instruction ins = fetch_decode(st);
    const Word9 one = Word9::from_balanced(1);
    const Word9 next = add_word(st.pc, one);

    auto transfer = [&](const Word9& target) {
        if (target == st.pc)
            st.halted = true; // self-jump HALT convention
        else
            st.pc = target;
    };

    switch (ins.mn) {
    case Mnemonic::Beq:
    case Mnemonic::Bne: {
        const bool eq = st.trf[static_cast<size_t>(ins.ta)].trit(0) == ins.cond;
        const bool taken = ins.mn == Mnemonic::Beq ? eq : !eq;
        if (taken)
            transfer(add_word(st.pc, imm_word(ins)));
        else
            st.pc = next;
        break;
    }
    case Mnemonic::Jal: {
        const Word9 target = add_word(st.pc, imm_word(ins));
        st.trf[static_cast<size_t>(ins.ta)] = next;
        transfer(target);
        break;
    }
    case Mnemonic::Jalr: {
        const Word9 target = add_word(st.trf[static_cast<size_t>(ins.tb)], imm_word(ins));
        st.trf[static_cast<size_t>(ins.ta)] = next;
        transfer(target);
        break;
    }
    case Mnemonic::Load: {
        const Word9 addr = add_word(st.trf[static_cast<size_t>(ins.tb)], imm_word(ins));
        st.trf[static_cast<size_t>(ins.ta)] = st.tdm[static_cast<size_t>(addr.to_unsigned())];
        st.pc = next;
        break;
    }
    case Mnemonic::Store: {
        const Word9 addr = add_word(st.trf[static_cast<size_t>(ins.tb)], imm_word(ins));
        st.tdm[static_cast<size_t>(addr.to_unsigned())] = st.trf[static_cast<size_t>(ins.ta)];
        st.pc = next;
        break;
    }
    default:
        st.trf[static_cast<size_t>(ins.ta)] =
            alu_result(ins, st.trf[static_cast<size_t>(ins.ta)],
                       st.trf[static_cast<size_t>(ins.tb)], next);
        st.pc = next;
        break;
    }
    ++st.retired;
}

void run_functional(MachineState& st, int64_t max_steps) {
    const int64_t limit = st.retired + max_steps;
    while (!st.halted) {
        if (st.retired >= limit)
            throw TimeoutError("functional run exceeded " + std::to_string(max_steps) +
                               " retired instructions without halting");
        step_functional(st);
    }
}

namespace {

struct PipeEntry {
    Instruction ins;
    Word9 pc;
    Word9 raw;
    int tim_idx = 0;
    Word9 a_val, b_val;   // TRF[ta] / TRF[tb] read at dispatch
    Word9 result;         // EX output; loaded data after MEM
    Word9 addr_word;
    Word9 store_data;
    int dest = -1;
    bool is_load = false;
    bool is_store = false;
    bool halts = false;
};

struct Slot {
    enum Kind { Empty, Bubble, Squash, Insn } kind = Empty;
    PipeEntry e;
};

std::string slot_label(const Slot& s) {
    switch (s.kind) {
    case Slot::Empty: return "-";
    case Slot::Bubble: return "BUBBLE";
    case Slot::Squash: return "SQUASH";
    case Slot::Insn: return std::to_string(s.e.tim_idx);
    }
    return "-";
}

bool is_load_with_dest(const Slot& s, int r) {
    return s.kind == Slot::Insn && s.e.is_load && s.e.dest == r;
}

} // namespace

PipelineStats run_pipelined(MachineState& st, int64_t max_cycles, bool record_trace) {
    PipelineStats stats;
    Slot ifid, idex, exmem, memwb;
    Word9 fetch_pc = st.pc;
    bool fetch_stop = false;
    bool trap_pending = false;
    std::string trap_msg;
    const Word9 one = Word9::from_balanced(1);
    bool finished = false;

    for (int64_t cycle = 1;; ++cycle) {
        if (cycle > max_cycles)
            throw TimeoutError("pipelined run exceeded " + std::to_string(max_cycles) +
                               " cycles without halting");

        // WB: write-first register file, visible to this cycle's ID read.
        if (memwb.kind == Slot::Insn) {
            const PipeEntry& e = memwb.e;
            if (e.dest >= 0) st.trf[static_cast<size_t>(e.dest)] = e.result;
            ++st.retired;
            ++stats.retired;
            if (e.halts) {
                st.halted = true;
                st.pc = e.pc;
                finished = true;
            }
        }

        // MEM
        Slot new_memwb = exmem;
        if (new_memwb.kind == Slot::Insn) {
            PipeEntry& e = new_memwb.e;
            if (e.is_load)
                e.result = st.tdm[static_cast<size_t>(e.addr_word.to_unsigned())];
            else if (e.is_store)
                st.tdm[static_cast<size_t>(e.addr_word.to_unsigned())] = e.store_data;
        }

        // EX: forwarding from EX-output (exmem) and MEM-output (memwb).
        Slot new_exmem = idex;
        if (new_exmem.kind == Slot::Insn) {
            PipeEntry& e = new_exmem.e;
            auto fwd = [&](int r, const Word9& carried) -> Word9 {
                if (exmem.kind == Slot::Insn && exmem.e.dest == r) {
                    assert(!exmem.e.is_load); // hazard unit inserts a stall
                    return exmem.e.result;
                }
                if (memwb.kind == Slot::Insn && memwb.e.dest == r) return memwb.e.result;
                return carried;
            };
            const Word9 av = ex_reads_ta(e.ins) ? fwd(e.ins.ta, e.a_val) : e.a_val;
            const Word9 bv = ex_reads_tb(e.ins) ? fwd(e.ins.tb, e.b_val) : e.b_val;
            if (e.is_load || e.is_store) {
                e.addr_word = add_word(bv, imm_word(e.ins));
                if (e.is_store) e.store_data = av;
            } else {
                e.result = alu_result(e.ins, av, bv, e.result);
            }
        }

        // ID: decode, hazard detection, branch resolution.
        bool stall = false;
        bool stall_is_value = false;
        bool redirect = false;
        bool halt_now = false;
        Word9 target;
        Slot new_idex;
        new_idex.kind = ifid.kind == Slot::Empty ? Slot::Empty : Slot::Bubble;
        if (ifid.kind == Slot::Insn) {
            Instruction ins;
            bool decoded = true;
            try {
                ins = decode_instruction(ifid.e.raw);
            } catch (const IllegalInstruction&) {
                decoded = false;
                trap_pending = true;
                trap_msg = "illegal instruction " + ifid.e.raw.str() + " at pc " +
                           ifid.e.pc.str() + " (index " + std::to_string(ifid.e.tim_idx) + ")";
                fetch_stop = true;
            }
            if (decoded) {
                for (int r : id_read_regs(ins))
                    if (is_load_with_dest(new_exmem, r) || is_load_with_dest(new_memwb, r)) {
                        stall = true;
                        stall_is_value = true;
                    }
                if (!stall)
                    for (int r : ex_read_regs(ins))
                        if (is_load_with_dest(new_exmem, r)) stall = true;
                if (stall) {
                    if (stall_is_value)
                        ++stats.branch_value_stalls;
                    else
                        ++stats.load_use_stalls;
                } else {
                    PipeEntry e;
                    e.ins = ins;
                    e.pc = ifid.e.pc;
                    e.raw = ifid.e.raw;
                    e.tim_idx = ifid.e.tim_idx;
                    e.a_val = st.trf[static_cast<size_t>(ins.ta)];
                    e.b_val = st.trf[static_cast<size_t>(ins.tb)];
                    e.dest = dest_reg(ins);
                    e.is_load = ins.mn == Mnemonic::Load;
                    e.is_store = ins.mn == Mnemonic::Store;
                    if (ins.mn == Mnemonic::Jal || ins.mn == Mnemonic::Jalr)
                        e.result = add_word(e.pc, one); // link, passed through EX

                    // 1-trit condition / jump base forwarding from EX output.
                    auto id_val = [&](int r, const Word9& carried) -> Word9 {
                        if (new_exmem.kind == Slot::Insn && new_exmem.e.dest == r) {
                            assert(!new_exmem.e.is_load);
                            return new_exmem.e.result;
                        }
                        if (new_memwb.kind == Slot::Insn && new_memwb.e.dest == r) {
                            assert(!new_memwb.e.is_load);
                            return new_memwb.e.result;
                        }
                        return carried;
                    };

                    bool taken = false;
                    switch (ins.mn) {
                    case Mnemonic::Beq:
                    case Mnemonic::Bne: {
                        const Word9 cv = id_val(ins.ta, e.a_val);
                        const bool eq = cv.trit(0) == ins.cond;
                        taken = ins.mn == Mnemonic::Beq ? eq : !eq;
                        if (taken) target = add_word(e.pc, imm_word(ins));
                        break;
                    }
                    case Mnemonic::Jal:
                        taken = true;
                        target = add_word(e.pc, imm_word(ins));
                        break;
                    case Mnemonic::Jalr: {
                        const Word9 base = id_val(ins.tb, e.b_val);
                        taken = true;
                        target = add_word(base, imm_word(ins));
                        break;
                    }
                    default:
                        break;
                    }
                    if (taken) {
                        if (target == e.pc) {
                            e.halts = true;
                            halt_now = true;
                        } else {
                            redirect = true;
                        }
                    }
                    new_idex.kind = Slot::Insn;
                    new_idex.e = e;
                }
            }
        }

        // IF
        Slot new_ifid;
        if (stall) {
            new_ifid = ifid; // hold the stalled instruction in ID
        } else if (halt_now || fetch_stop) {
            fetch_stop = true;
            new_ifid.kind = Slot::Empty;
        } else if (redirect) {
            // the slot fetched this cycle is wrong-path: squash it
            new_ifid.kind = Slot::Squash;
            ++stats.branch_squashes;
            fetch_pc = target;
        } else {
            new_ifid.kind = Slot::Insn;
            new_ifid.e.tim_idx = fetch_pc.to_unsigned();
            new_ifid.e.pc = fetch_pc;
            new_ifid.e.raw = st.tim[static_cast<size_t>(new_ifid.e.tim_idx)];
            fetch_pc = add_word(fetch_pc, one);
        }

        if (record_trace) {
            TraceRow row;
            row.cycle = cycle;
            row.stage[0] = stall ? "-" : slot_label(new_ifid);
            row.stage[1] = slot_label(ifid);
            row.stage[2] = slot_label(idex);
            row.stage[3] = slot_label(exmem);
            row.stage[4] = slot_label(memwb);
            row.pc = fetch_pc.str();
            stats.trace.push_back(std::move(row));
        }

        memwb = new_memwb;
        exmem = new_exmem;
        idex = new_idex;
        ifid = new_ifid;
        stats.cycles = cycle;

        if (finished) break;
        if (trap_pending && ifid.kind != Slot::Insn && idex.kind != Slot::Insn &&
            exmem.kind != Slot::Insn && memwb.kind != Slot::Insn)
            throw TrapError(trap_msg);
    }
    return stats;
}

std::string format_trace_csv(const PipelineStats& stats) {
    std::string out = "cycle,IF,ID,EX,MEM,WB,pc\n";
    for (const TraceRow& row : stats.trace) {
        out += std::to_string(row.cycle);
        for (const auto& s : row.stage) out += "," + s;
        out += "," + row.pc + "\n";
    }
    return out;
}

} // namespace art9
