#include "art9/transpiler.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <optional>
#include <sstream>

#include "art9/error.hpp"
#include "art9/techmodel.hpp"
#include "art9/word9.hpp"

namespace art9 {

namespace {

constexpr int kScratch0 = 8; // T8: primary scratch for lowering sequences
constexpr int kScratch1 = 7; // T7: secondary scratch (spill staging, constants)

[[noreturn]] void fail(int line, const std::string& msg) {
    throw SourceError("line " + std::to_string(line) + ": " + msg);
}

std::string strip(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

const std::map<std::string, int>& abi_names() {
    static const std::map<std::string, int> names = [] {
        std::map<std::string, int> m;
        const char* base[] = {"zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2"};
        for (int i = 0; i < 8; ++i) m[base[i]] = i;
        m["s0"] = 8;
        m["fp"] = 8;
        m["s1"] = 9;
        for (int i = 0; i < 8; ++i) m["a" + std::to_string(i)] = 10 + i;
        for (int i = 2; i <= 11; ++i) m["s" + std::to_string(i)] = 16 + i;
        for (int i = 3; i <= 6; ++i) m["t" + std::to_string(i)] = 25 + i;
        return m;
    }();
    return names;
}

int parse_rv_reg(const std::string& tok, int line) {
    if (tok.size() >= 2 && (tok[0] == 'x' || tok[0] == 'X')) {
        bool digits = true;
        for (size_t i = 1; i < tok.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(tok[i]));
        if (digits) {
            int n = std::stoi(tok.substr(1));
            if (n >= 0 && n <= 31) return n;
        }
    }
    auto it = abi_names().find(tok);
    if (it != abi_names().end()) return it->second;
    fail(line, "expected RV register, got '" + tok + "'");
}

std::optional<long> try_parse_rv_int(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos, 0); // handles decimal and 0x
        if (pos != tok.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

long parse_rv_imm(const std::string& tok, int line) {
    auto v = try_parse_rv_int(tok);
    if (!v) fail(line, "expected immediate, got '" + tok + "'");
    return *v;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = strip(cur);
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

// "imm(reg)" memory operand
void parse_mem_operand(const std::string& tok, int line, long& imm, int& reg) {
    size_t open = tok.find('(');
    size_t close = tok.find(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        fail(line, "expected 'imm(reg)' operand, got '" + tok + "'");
    std::string imm_str = strip(tok.substr(0, open));
    imm = imm_str.empty() ? 0 : parse_rv_imm(imm_str, line);
    reg = parse_rv_reg(strip(tok.substr(open + 1, close - open - 1)), line);
}

bool rv_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool valid_rv_label(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!rv_label_char(c)) return false;
    return true;
}

const std::vector<std::string>& supported_mnemonics() {
    static const std::vector<std::string> v = {
        "add", "sub", "and", "or", "xor", "addi", "andi", "xori", "slli", "srli",
        "lui", "lw", "sw", "beq", "bne", "blt", "bge", "jal", "jalr",
        "li", "mv", "j", "nop", "ret"};
    return v;
}

} // namespace

RvProgram parse_rv32i(std::string_view source) {
    RvProgram prog;
    std::istringstream in{std::string(source)};
    std::string line_text;
    int line_no = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        size_t cut = line_text.find_first_of("#;");
        if (cut != std::string::npos) line_text.resize(cut);
        std::string text = strip(line_text);
        for (;;) {
            size_t colon = text.find(':');
            if (colon == std::string::npos) break;
            std::string lbl = strip(text.substr(0, colon));
            if (!valid_rv_label(lbl)) break;
            if (prog.labels.count(lbl)) fail(line_no, "duplicate label '" + lbl + "'");
            prog.labels[lbl] = static_cast<int>(prog.ins.size());
            text = strip(text.substr(colon + 1));
        }
        if (text.empty()) continue;
        if (text[0] == '.') continue; // directives (.globl etc.) are ignored

        size_t sp = text.find_first_of(" \t");
        std::string mn = text.substr(0, sp);
        for (auto& c : mn) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::string rest = sp == std::string::npos ? "" : strip(text.substr(sp));
        auto ops = split_commas(rest);

        const auto& sup = supported_mnemonics();
        if (std::find(sup.begin(), sup.end(), mn) == sup.end())
            fail(line_no, "unsupported RV-32I instruction '" + mn + "'");

        auto expect = [&](size_t n) {
            if (ops.size() != n)
                fail(line_no, mn + ": expected " + std::to_string(n) + " operands");
        };

        RvInstruction rv;
        rv.mnemonic = mn;
        rv.line = line_no;
        if (mn == "add" || mn == "sub" || mn == "and" || mn == "or" || mn == "xor") {
            expect(3);
            rv.rd = parse_rv_reg(ops[0], line_no);
            rv.rs1 = parse_rv_reg(ops[1], line_no);
            rv.rs2 = parse_rv_reg(ops[2], line_no);
        } else if (mn == "addi" || mn == "andi" || mn == "xori" || mn == "slli" ||
                   mn == "srli") {
            expect(3);
            rv.rd = parse_rv_reg(ops[0], line_no);
            rv.rs1 = parse_rv_reg(ops[1], line_no);
            rv.imm = parse_rv_imm(ops[2], line_no);
            if ((mn == "slli" || mn == "srli") && (rv.imm < 0 || rv.imm > 31))
                fail(line_no, mn + ": shift amount out of [0,31]");
        } else if (mn == "lui" || mn == "li") {
            expect(2);
            rv.rd = parse_rv_reg(ops[0], line_no);
            rv.imm = parse_rv_imm(ops[1], line_no);
        } else if (mn == "mv") {
            expect(2);
            rv.rd = parse_rv_reg(ops[0], line_no);
            rv.rs1 = parse_rv_reg(ops[1], line_no);
        } else if (mn == "lw") {
            expect(2);
            rv.rd = parse_rv_reg(ops[0], line_no);
            parse_mem_operand(ops[1], line_no, rv.imm, rv.rs1);
        } else if (mn == "sw") {
            expect(2);
            rv.rs2 = parse_rv_reg(ops[0], line_no);
            parse_mem_operand(ops[1], line_no, rv.imm, rv.rs1);
        } else if (mn == "beq" || mn == "bne" || mn == "blt" || mn == "bge") {
            expect(3);
            rv.rs1 = parse_rv_reg(ops[0], line_no);
            rv.rs2 = parse_rv_reg(ops[1], line_no);
            rv.target = ops[2];
        } else if (mn == "jal") {
            if (ops.size() == 1) {
                rv.rd = 1;
                rv.target = ops[0];
            } else {
                expect(2);
                rv.rd = parse_rv_reg(ops[0], line_no);
                rv.target = ops[1];
            }
        } else if (mn == "jalr") {
            if (ops.size() == 1) {
                rv.rd = 1;
                rv.rs1 = parse_rv_reg(ops[0], line_no);
            } else {
                expect(3);
                rv.rd = parse_rv_reg(ops[0], line_no);
                rv.rs1 = parse_rv_reg(ops[1], line_no);
                rv.imm = parse_rv_imm(ops[2], line_no);
            }
        } else if (mn == "j") {
            expect(1);
            rv.mnemonic = "jal";
            rv.rd = 0;
            rv.target = ops[0];
        } else if (mn == "ret") {
            expect(0);
            rv.mnemonic = "jalr";
            rv.rd = 0;
            rv.rs1 = 1;
            rv.imm = 0;
        } else if (mn == "nop") {
            expect(0);
            rv.mnemonic = "addi";
            rv.rd = 0;
            rv.rs1 = 0;
            rv.imm = 0;
        }
        prog.ins.push_back(std::move(rv));
    }
    for (const auto& ins : prog.ins) {
        if (!ins.target.empty() && ins.target != "." &&
            !prog.labels.count(ins.target) && !try_parse_rv_int(ins.target))
            fail(ins.line, "undefined label '" + ins.target + "'");
    }
    return prog;
}

RegMap allocate_registers(const RvProgram& prog, int spill_base) {
    RegMap map;
    map[0] = {RegSlot::Direct, 0, 0};
    map[1] = {RegSlot::Direct, 1, 0};
    map[2] = {RegSlot::Direct, 2, 0};

    std::map<int, int> use_count;
    auto count = [&](int r) {
        if (r > 2) ++use_count[r];
    };
    for (const auto& ins : prog.ins) {
        count(ins.rd);
        count(ins.rs1);
        count(ins.rs2);
    }
    std::vector<std::pair<int, int>> order(use_count.begin(), use_count.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    int next_direct = 3;
    int next_spill = spill_base;
    for (const auto& [reg, uses] : order) {
        if (next_direct <= 6)
            map[reg] = {RegSlot::Direct, next_direct++, 0};
        else
            map[reg] = {RegSlot::Spill, 0, next_spill--};
    }
    return map;
}

namespace {

// Intermediate ART-9 op: a concrete instruction, or one whose immediate is
// resolved from a label at emission time (PC-relative branch target, or the
// hi/lo halves of an absolute address materialization).
struct TOp {
    Instruction ins;
    std::string target;     // non-empty: label-relative branch/jump
    bool abs_hi = false;    // LUI: imm = upper 4 trits of target's address
    bool abs_lo = false;    // LI: imm = lower 5 trits of target's address
    std::vector<std::string> labels;
};

void split_hi_lo(int value, int& hi, int& lo) {
    Word9 w = Word9::from_balanced(value);
    lo = 0;
    for (int i = 4; i >= 0; --i) lo = lo * 3 + w.trit(i);
    hi = 0;
    for (int i = 8; i >= 5; --i) hi = hi * 3 + w.trit(i);
    assert(hi * 243 + lo == Word9::from_balanced(value).balanced());
}

class Codegen {
public:
    Codegen(const RvProgram& prog, const RegMap& map, const TranspileOptions& opt)
        : prog_(prog), map_(map), opt_(opt) {}

    std::vector<TOp> run() {
        // prologue: pin T0 to zero, point sp at the stack top
        emit({Mnemonic::Sub, 0, 0, 0, 0});
        mat(opt_.stack_top, 2);

        std::map<int, std::vector<std::string>> labels_at;
        for (const auto& [lbl, idx] : prog_.labels) labels_at[idx].push_back(lbl);
        for (size_t i = 0; i < prog_.ins.size(); ++i) {
            auto it = labels_at.find(static_cast<int>(i));
            if (it != labels_at.end())
                for (const auto& l : it->second) pending_.push_back(l);
            lower(prog_.ins[i]);
        }
        auto it = labels_at.find(static_cast<int>(prog_.ins.size()));
        if (it != labels_at.end())
            for (const auto& l : it->second) pending_.push_back(l);
        emit(make_halt());
        return std::move(out_);
    }

private:
    const RvProgram& prog_;
    const RegMap& map_;
    const TranspileOptions& opt_;
    std::vector<TOp> out_;
    std::vector<std::string> pending_;
    int next_label_ = 0;

    const RegSlot& slot(int rv) const {
        auto it = map_.find(rv);
        assert(it != map_.end());
        return it->second;
    }
    bool direct(int rv) const { return slot(rv).kind == RegSlot::Direct; }
    int dreg(int rv) const { return slot(rv).treg; }

    std::string new_label() { return ".Lt" + std::to_string(next_label_++); }

    void emit(const Instruction& ins, const std::string& target = "") {
        TOp op;
        op.ins = ins;
        op.target = target;
        op.labels = std::move(pending_);
        pending_.clear();
        out_.push_back(std::move(op));
    }

    void label_here(const std::string& l) { pending_.push_back(l); }

    // TRF[t] = encode_balanced(v), independent of t's prior contents
    void mat(int v, int t) {
        int hi = 0, lo = 0;
        split_hi_lo(v, hi, lo);
        emit({Mnemonic::Lui, t, 4, 0, hi});
        emit({Mnemonic::Li, t, 4, 0, lo});
    }

    void check_range(long v, int line) {
        if (v < -kMaxBalanced || v > kMaxBalanced)
            fail(line, "constant " + std::to_string(v) +
                           " exceeds the 9-trit balanced range [-9841, 9841]");
    }

    // Makes the value of rv register readable; returns the T register
    // holding it (the register itself, or `scratch` after a reload).
    // Spill slots close to the zero address are reachable off T0 with one
    // LOAD; farther slots need a materialized absolute address.
    int read_into(int rv, int scratch) {
        const RegSlot& s = slot(rv);
        if (s.kind == RegSlot::Direct) return s.treg;
        const int bal = s.spill_addr - kMaxBalanced;
        if (bal >= -13 && bal <= 13) {
            emit({Mnemonic::Load, scratch, 0, 0, bal});
        } else {
            mat(bal, scratch);
            emit({Mnemonic::Load, scratch, scratch, 0, 0});
        }
        return scratch;
    }

    void write_back(int rv, int valreg) {
        const RegSlot& s = slot(rv);
        if (s.kind == RegSlot::Direct) {
            if (s.treg != valreg) emit({Mnemonic::Mv, s.treg, valreg, 0, 0});
            return;
        }
        const int bal = s.spill_addr - kMaxBalanced;
        if (bal >= -13 && bal <= 13) {
            emit({Mnemonic::Store, valreg, 0, 0, bal});
            return;
        }
        int addr = valreg == kScratch0 ? kScratch1 : kScratch0;
        mat(bal, addr);
        emit({Mnemonic::Store, valreg, addr, 0, 0});
    }

    void lower_binary(const RvInstruction& rv, Mnemonic mn, bool commutative) {
        if (rv.rd == 0) return;
        if (direct(rv.rd)) {
            const int d = dreg(rv.rd);
            if (rv.rd == rv.rs1) {
                emit({mn, d, read_into(rv.rs2, kScratch0), 0, 0});
            } else if (rv.rd == rv.rs2 && commutative) {
                emit({mn, d, read_into(rv.rs1, kScratch0), 0, 0});
            } else if (rv.rd == rv.rs2) { // sub rd, rs1, rd
                emit({Mnemonic::Mv, kScratch0, d, 0, 0});
                int r1 = read_into(rv.rs1, kScratch1);
                emit({Mnemonic::Mv, d, r1, 0, 0});
                emit({mn, d, kScratch0, 0, 0});
            } else {
                int r1 = read_into(rv.rs1, kScratch0);
                emit({Mnemonic::Mv, d, r1, 0, 0});
                emit({mn, d, read_into(rv.rs2, kScratch0), 0, 0});
            }
        } else {
            int r1 = read_into(rv.rs1, kScratch0);
            if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
            int r2 = read_into(rv.rs2, kScratch1);
            emit({mn, kScratch0, r2, 0, 0});
            write_back(rv.rd, kScratch0);
        }
    }

    void lower_imm_op(const RvInstruction& rv, Mnemonic imm_mn, Mnemonic reg_mn) {
        if (rv.rd == 0) return;
        check_range(rv.imm, rv.line);
        const int imm = static_cast<int>(rv.imm);
        const bool small = imm >= -13 && imm <= 13;
        if (direct(rv.rd)) {
            const int d = dreg(rv.rd);
            if (rv.rd != rv.rs1) {
                int r1 = read_into(rv.rs1, kScratch0);
                emit({Mnemonic::Mv, d, r1, 0, 0});
            }
            if (small) {
                emit({imm_mn, d, 4, 0, imm});
            } else {
                mat(imm, kScratch0);
                emit({reg_mn, d, kScratch0, 0, 0});
            }
        } else {
            int r1 = read_into(rv.rs1, kScratch0);
            if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
            if (small) {
                emit({imm_mn, kScratch0, 4, 0, imm});
            } else {
                mat(imm, kScratch1);
                emit({reg_mn, kScratch0, kScratch1, 0, 0});
            }
            write_back(rv.rd, kScratch0);
        }
    }

    void lower_xori(const RvInstruction& rv) {
        if (rv.rd == 0) return;
        check_range(rv.imm, rv.line);
        if (direct(rv.rd)) {
            const int d = dreg(rv.rd);
            if (rv.rd != rv.rs1) {
                int r1 = read_into(rv.rs1, kScratch0);
                emit({Mnemonic::Mv, d, r1, 0, 0});
            }
            mat(static_cast<int>(rv.imm), kScratch0);
            emit({Mnemonic::Xor, d, kScratch0, 0, 0});
        } else {
            int r1 = read_into(rv.rs1, kScratch0);
            if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
            mat(static_cast<int>(rv.imm), kScratch1);
            emit({Mnemonic::Xor, kScratch0, kScratch1, 0, 0});
            write_back(rv.rd, kScratch0);
        }
    }

    void lower_mv(const RvInstruction& rv) {
        if (rv.rd == 0) return;
        int r1 = read_into(rv.rs1, kScratch0);
        write_back(rv.rd, r1);
    }

    void lower_li(const RvInstruction& rv, long value) {
        if (rv.rd == 0) return;
        check_range(value, rv.line);
        if (direct(rv.rd)) {
            mat(static_cast<int>(value), dreg(rv.rd));
        } else {
            mat(static_cast<int>(value), kScratch0);
            write_back(rv.rd, kScratch0);
        }
    }

    // multiply by 2^sh through repeated doubling
    void lower_slli(const RvInstruction& rv) {
        if (rv.rd == 0) return;
        const int sh = static_cast<int>(rv.imm);
        if (sh == 0) {
            lower_mv(rv);
            return;
        }
        if (direct(rv.rd)) {
            const int d = dreg(rv.rd);
            int r1 = read_into(rv.rs1, kScratch0);
            if (d != r1) emit({Mnemonic::Mv, d, r1, 0, 0});
            for (int i = 0; i < sh; ++i) emit({Mnemonic::Add, d, d, 0, 0});
        } else {
            int r1 = read_into(rv.rs1, kScratch0);
            if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
            for (int i = 0; i < sh; ++i)
                emit({Mnemonic::Add, kScratch0, kScratch0, 0, 0});
            write_back(rv.rd, kScratch0);
        }
    }

    // floor division by 2^sh for non-negative inputs, by repeated
    // subtraction of the full divisor
    void lower_srli(const RvInstruction& rv) {
        if (rv.rd == 0) return;
        const int sh = static_cast<int>(rv.imm);
        if (sh == 0) {
            lower_mv(rv);
            return;
        }
        if (!direct(rv.rd))
            fail(rv.line, "srli with a spilled destination register is not supported");
        const int d = dreg(rv.rd);
        int r1 = read_into(rv.rs1, kScratch0);
        if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
        if (sh > 13 || (1L << sh) > kMaxBalanced) {
            emit({Mnemonic::Mv, d, 0, 0, 0}); // every in-range input shifts to 0
            return;
        }
        const int divisor = 1 << sh;
        emit({Mnemonic::Sub, d, d, 0, 0}); // quotient = 0
        std::string loop = new_label();
        std::string done = new_label();
        label_here(loop);
        mat(divisor, kScratch1);
        emit({Mnemonic::Comp, kScratch1, kScratch0, 0, 0}); // sign(divisor - r)
        emit({Mnemonic::Beq, kScratch1, 4, 1, 0}, done);
        mat(divisor, kScratch1);
        emit({Mnemonic::Sub, kScratch0, kScratch1, 0, 0});
        emit({Mnemonic::Addi, d, 4, 0, 1});
        emit({Mnemonic::Jal, kScratch1, 4, 0, 0}, loop);
        label_here(done);
    }

    void lower_lui(const RvInstruction& rv) {
        // RV lui loads imm << 12 into the upper bits of a 32-bit register
        long value = static_cast<int32_t>(static_cast<uint32_t>(rv.imm) << 12);
        lower_li(rv, value);
    }

    int word_offset(const RvInstruction& rv) {
        if (rv.imm % 4 != 0)
            fail(rv.line, "byte offset " + std::to_string(rv.imm) +
                              " is not a multiple of the 4-byte word size");
        long woff = rv.imm / 4;
        check_range(woff, rv.line);
        return static_cast<int>(woff);
    }

    void lower_lw(const RvInstruction& rv) {
        if (rv.rd == 0) return;
        const int woff = word_offset(rv);
        int addr_reg, addr_imm;
        if (woff >= -13 && woff <= 13) {
            addr_reg = read_into(rv.rs1, kScratch0);
            addr_imm = woff;
        } else {
            int b = read_into(rv.rs1, kScratch0);
            mat(woff, kScratch1);
            emit({Mnemonic::Add, kScratch1, b, 0, 0});
            addr_reg = kScratch1;
            addr_imm = 0;
        }
        if (direct(rv.rd)) {
            emit({Mnemonic::Load, dreg(rv.rd), addr_reg, 0, addr_imm});
        } else {
            emit({Mnemonic::Load, kScratch0, addr_reg, 0, addr_imm});
            write_back(rv.rd, kScratch0);
        }
    }

    void lower_sw(const RvInstruction& rv) {
        const int woff = word_offset(rv);
        if (woff >= -13 && woff <= 13) {
            int v = read_into(rv.rs2, kScratch0);
            int b = read_into(rv.rs1, kScratch1);
            emit({Mnemonic::Store, v, b, 0, woff});
        } else {
            int b = read_into(rv.rs1, kScratch0);
            mat(woff, kScratch1);
            emit({Mnemonic::Add, kScratch1, b, 0, 0});
            int v = read_into(rv.rs2, kScratch0);
            emit({Mnemonic::Store, v, kScratch1, 0, 0});
        }
    }

    void lower_branch(const RvInstruction& rv) {
        int r1 = read_into(rv.rs1, kScratch0);
        if (r1 != kScratch0) emit({Mnemonic::Mv, kScratch0, r1, 0, 0});
        int r2 = read_into(rv.rs2, kScratch1);
        emit({Mnemonic::Comp, kScratch0, r2, 0, 0});
        Mnemonic mn;
        int cond;
        if (rv.mnemonic == "beq") {
            mn = Mnemonic::Beq;
            cond = 0;
        } else if (rv.mnemonic == "bne") {
            mn = Mnemonic::Bne;
            cond = 0;
        } else if (rv.mnemonic == "blt") {
            mn = Mnemonic::Beq;
            cond = -1;
        } else { // bge
            mn = Mnemonic::Bne;
            cond = -1;
        }
        emit({mn, kScratch0, 4, cond, 0}, rv.target);
    }

    void lower_jal(const RvInstruction& rv) {
        int link;
        if (rv.rd == 0)
            link = kScratch0;
        else if (direct(rv.rd))
            link = dreg(rv.rd);
        else
            link = kScratch0;
        emit({Mnemonic::Jal, link, 4, 0, 0}, rv.target);
        if (rv.rd != 0 && !direct(rv.rd)) write_back(rv.rd, link);
    }

    void lower_jalr(const RvInstruction& rv) {
        check_range(rv.imm, rv.line);
        int imm = static_cast<int>(rv.imm);
        int base = read_into(rv.rs1, kScratch1);
        if (imm < -13 || imm > 13) {
            mat(imm, kScratch0);
            emit({Mnemonic::Add, kScratch0, base, 0, 0});
            base = kScratch0;
            imm = 0;
        }
        int link;
        if (rv.rd == 0 || !direct(rv.rd))
            link = base == kScratch0 ? kScratch1 : kScratch0;
        else
            link = dreg(rv.rd);
        emit({Mnemonic::Jalr, link, base, 0, imm});
        if (rv.rd != 0 && !direct(rv.rd)) write_back(rv.rd, link);
    }

    void lower(const RvInstruction& rv) {
        const std::string& mn = rv.mnemonic;
        if (mn == "add") lower_binary(rv, Mnemonic::Add, true);
        else if (mn == "sub") lower_binary(rv, Mnemonic::Sub, false);
        else if (mn == "and") lower_binary(rv, Mnemonic::And, true);
        else if (mn == "or") lower_binary(rv, Mnemonic::Or, true);
        else if (mn == "xor") lower_binary(rv, Mnemonic::Xor, true);
        else if (mn == "addi") lower_imm_op(rv, Mnemonic::Addi, Mnemonic::Add);
        else if (mn == "andi") lower_imm_op(rv, Mnemonic::Andi, Mnemonic::And);
        else if (mn == "xori") lower_xori(rv);
        else if (mn == "slli") lower_slli(rv);
        else if (mn == "srli") lower_srli(rv);
        else if (mn == "lui") lower_lui(rv);
        else if (mn == "li") lower_li(rv, rv.imm);
        else if (mn == "mv") lower_mv(rv);
        else if (mn == "lw") lower_lw(rv);
        else if (mn == "sw") lower_sw(rv);
        else if (mn == "beq" || mn == "bne" || mn == "blt" || mn == "bge")
            lower_branch(rv);
        else if (mn == "jal") lower_jal(rv);
        else if (mn == "jalr") lower_jalr(rv);
        else assert(false);
    }
};

// ---------------------------------------------------------------------------
// redundancy elimination

bool reads_reg(const Instruction& ins, int r) {
    if (ex_reads_ta(ins) && ins.ta == r) return true;
    if (ex_reads_tb(ins) && ins.tb == r) return true;
    for (int q : id_read_regs(ins))
        if (q == r) return true;
    return false;
}

// conservative deadness: r is dead after position i if it is overwritten
// before any read, giving up at labels and control transfers
bool dead_after(const std::vector<TOp>& ops, size_t i, int r) {
    for (size_t j = i + 1; j < ops.size(); ++j) {
        const TOp& op = ops[j];
        if (!op.labels.empty()) return false;
        if (reads_reg(op.ins, r)) return false;
        if (is_control_transfer(op.ins)) return false;
        if (dest_reg(op.ins) == r) return true;
    }
    return true;
}

void migrate_and_erase(std::vector<TOp>& ops, size_t i) {
    std::vector<std::string> labels = std::move(ops[i].labels);
    ops.erase(ops.begin() + static_cast<long>(i));
    if (!labels.empty()) {
        assert(i < ops.size()); // the epilogue HALT is never removed
        for (auto it = labels.rbegin(); it != labels.rend(); ++it)
            ops[i].labels.insert(ops[i].labels.begin(), *it);
    }
}

bool is_identity(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Addi:
    case Mnemonic::Sri:
    case Mnemonic::Sli:
        return ins.imm == 0;
    default:
        return false;
    }
}

bool is_idempotent_copy(const Instruction& ins) {
    switch (ins.mn) {
    case Mnemonic::Mv:
    case Mnemonic::Li:
    case Mnemonic::Lui:
        return true;
    default:
        return false;
    }
}

int eliminate_redundancy(std::vector<TOp>& ops) {
    int removed = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < ops.size(); ++i) {
            const Instruction& ins = ops[i].ins;
            // (a) MV Ta,Ta
            if (ins.mn == Mnemonic::Mv && ins.ta == ins.tb) {
                migrate_and_erase(ops, i);
                ++removed;
                changed = true;
                break;
            }
            // (c) identity ADDI/SRI/SLI by zero; the canonical NOP stays
            // when it is a branch target
            if (is_identity(ins) && ops[i].labels.empty()) {
                migrate_and_erase(ops, i);
                ++removed;
                changed = true;
                break;
            }
            // (b) second of two identical adjacent idempotent copies
            if (i + 1 < ops.size() && is_idempotent_copy(ins) &&
                ops[i + 1].ins == ins && ops[i + 1].labels.empty() &&
                ops[i + 1].target.empty() && ops[i].target.empty()) {
                migrate_and_erase(ops, i + 1);
                ++removed;
                changed = true;
                break;
            }
            // (d) MV X,Y feeding a single adjacent consumer through tb
            if (ins.mn == Mnemonic::Mv && i + 1 < ops.size()) {
                const int x = ins.ta, y = ins.tb;
                TOp& next = ops[i + 1];
                const OpInfo& nop = op_info(next.ins.mn);
                const bool tb_is_x = nop.has_tb && next.ins.tb == x;
                const bool ta_clash =
                    (ex_reads_ta(next.ins) || !id_read_regs(next.ins).empty()) &&
                    next.ins.ta == x;
                if (tb_is_x && !ta_clash && next.labels.empty() &&
                    dead_after(ops, i + 1, x)) {
                    next.ins.tb = y;
                    migrate_and_erase(ops, i);
                    ++removed;
                    changed = true;
                    break;
                }
            }
        }
    }
    return removed;
}

// ---------------------------------------------------------------------------
// branch retargeting

std::map<std::string, int> label_positions(const std::vector<TOp>& ops) {
    std::map<std::string, int> pos;
    for (size_t i = 0; i < ops.size(); ++i)
        for (const auto& l : ops[i].labels) pos[l] = static_cast<int>(i);
    return pos;
}

int resolve_target(const TOp& op, int own, const std::map<std::string, int>& pos) {
    if (op.target == ".") return own;
    auto lit = try_parse_rv_int(op.target);
    if (lit) return own + static_cast<int>(*lit);
    auto it = pos.find(op.target);
    if (it == pos.end()) throw SourceError("undefined branch target '" + op.target + "'");
    return it->second;
}

void retarget_branches(std::vector<TOp>& ops, int& next_label) {
    for (;;) {
        auto pos = label_positions(ops);
        bool changed = false;
        for (size_t i = 0; i < ops.size() && !changed; ++i) {
            TOp& op = ops[i];
            if (op.target.empty()) continue;
            const int off = resolve_target(op, static_cast<int>(i), pos) -
                            static_cast<int>(i);
            if ((op.ins.mn == Mnemonic::Beq || op.ins.mn == Mnemonic::Bne) &&
                (off < -40 || off > 40)) {
                // invert the condition to skip a JAL trampoline
                TOp inv = op;
                inv.ins.mn = op.ins.mn == Mnemonic::Beq ? Mnemonic::Bne : Mnemonic::Beq;
                inv.target = ".Lt" + std::to_string(next_label++);
                TOp jmp;
                jmp.ins = {Mnemonic::Jal, kScratch0, 4, 0, 0};
                jmp.target = op.target;
                std::string skip = inv.target;
                ops[i] = inv;
                ops.insert(ops.begin() + static_cast<long>(i) + 1, jmp);
                ops[i + 2].labels.insert(ops[i + 2].labels.begin(), skip);
                changed = true;
            } else if (op.ins.mn == Mnemonic::Jal && (off < -121 || off > 121)) {
                // materialize the absolute target and jump through JALR
                TOp hi, lo, jr;
                hi.ins = {Mnemonic::Lui, kScratch0, 4, 0, 0};
                hi.abs_hi = true;
                hi.target = op.target;
                hi.labels = std::move(op.labels);
                lo.ins = {Mnemonic::Li, kScratch0, 4, 0, 0};
                lo.abs_lo = true;
                lo.target = op.target;
                jr.ins = {Mnemonic::Jalr, op.ins.ta, kScratch0, 0, 0};
                ops[i] = hi;
                ops.insert(ops.begin() + static_cast<long>(i) + 1, lo);
                ops.insert(ops.begin() + static_cast<long>(i) + 2, jr);
                changed = true;
            }
        }
        if (!changed) break;
    }
    if (static_cast<int>(ops.size()) > kWordStates)
        throw SourceError("transpiled program exceeds TIM capacity");
}

std::string emit_assembly(const std::vector<TOp>& ops) {
    auto pos = label_positions(ops);
    std::string out;
    for (size_t i = 0; i < ops.size(); ++i) {
        const TOp& op = ops[i];
        for (const auto& l : op.labels) out += l + ":\n";
        Instruction ins = op.ins;
        if (!op.target.empty()) {
            const int tidx = resolve_target(op, static_cast<int>(i), pos);
            if (op.abs_hi || op.abs_lo) {
                int hi = 0, lo = 0;
                split_hi_lo(tidx - kMaxBalanced, hi, lo); // balanced pc of target
                ins.imm = op.abs_hi ? hi : lo;
            } else {
                ins.imm = tidx - static_cast<int>(i);
            }
        }
        out += "    " + format_instruction(ins) + "\n";
    }
    return out;
}

} // namespace

TranspileResult transpile(std::string_view source, const TranspileOptions& opt) {
    RvProgram prog = parse_rv32i(source);
    RegMap map = allocate_registers(prog, opt.spill_base);

    TranspileResult res;
    res.stats.input_count = static_cast<int>(prog.ins.size());
    for (const auto& [reg, s] : map)
        if (s.kind == RegSlot::Spill) ++res.stats.spills;

    Codegen gen(prog, map, opt);
    std::vector<TOp> ops = gen.run();
    if (opt.peephole) res.stats.removed = eliminate_redundancy(ops);

    int next_label = 1000000; // trampoline labels, disjoint from codegen's
    retarget_branches(ops, next_label);

    res.assembly = emit_assembly(ops);
    res.stats.output_count = static_cast<int>(ops.size());
    res.stats.memory_cells = code_size_cells(res.stats.output_count, 0);
    return res;
}

std::string format_stats(const TranspileStats& stats) {
    std::ostringstream out;
    out << "input_instructions: " << stats.input_count << "\n";
    out << "output_instructions: " << stats.output_count << "\n";
    out << "removed_by_peephole: " << stats.removed << "\n";
    out << "spilled_registers: " << stats.spills << "\n";
    out << "memory_cells: " << stats.memory_cells << "\n";
    return out.str();
}

} // namespace art9
