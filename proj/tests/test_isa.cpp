#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <set>
#include <string>

#include "art9/isa.hpp"

using namespace art9;

namespace {

Instruction random_instruction(std::mt19937& rng) {
    auto rnd = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    const OpInfo& op = op_table()[static_cast<size_t>(rnd(0, kMnemonicCount - 1))];
    Instruction ins;
    ins.mn = op.mn;
    if (op.has_ta) ins.ta = rnd(0, 8);
    if (op.has_tb) ins.tb = rnd(0, 8);
    if (op.has_cond) ins.cond = rnd(-1, 1);
    if (op.imm_trits > 0) {
        int lim = imm_limit(op.imm_trits);
        ins.imm = rnd(-lim, lim);
    }
    return ins;
}

} // namespace

TEST_CASE("opcode table shape") {
    CHECK(op_table().size() == 24);
    std::set<std::string> names;
    for (const OpInfo& op : op_table()) {
        names.insert(op.name);
        // operand fields fill the word exactly
        int field_trits = (op.has_ta ? 2 : 0) + (op.has_tb ? 2 : 0) +
                          (op.has_cond ? 1 : 0) + op.imm_trits;
        CHECK(static_cast<int>(std::strlen(op.opcode)) + field_trits == 9);
    }
    CHECK(names.size() == 24);
}

TEST_CASE("opcode code is prefix-free with Kraft sum 218/243") {
    int kraft_numerator = 0; // sum of 3^(5 - len), denominator 3^5 = 243
    for (const OpInfo& a : op_table()) {
        int len = static_cast<int>(std::strlen(a.opcode));
        CHECK(len >= 2);
        CHECK(len <= 5);
        int pow = 1;
        for (int i = 0; i < 5 - len; ++i) pow *= 3;
        kraft_numerator += pow;
        for (const OpInfo& b : op_table()) {
            if (a.mn == b.mn) continue;
            std::string sa = a.opcode, sb = b.opcode;
            CHECK(sa.substr(0, std::min(sa.size(), sb.size())) !=
                  sb.substr(0, std::min(sa.size(), sb.size())));
        }
    }
    CHECK(kraft_numerator == 218);
}

TEST_CASE("frozen encodings") {
    // two-address R-type: ADD T5, T2
    CHECK(encode_instruction({Mnemonic::Add, 5, 2, 0, 0}).str() == "++-+00+-+");
    // the canonical NOP and the HALT idiom
    CHECK(encode_instruction(make_nop()).str() == "+00000000");
    CHECK(encode_instruction(make_halt()).str() == "0-0000000");
    // shortest opcode family
    CHECK(encode_instruction({Mnemonic::Li, 0, 4, 0, -121}).str() == "---------");
}

TEST_CASE("decode(encode) identity: boundary and random operands") {
    for (const OpInfo& op : op_table()) {
        int lim = imm_limit(op.imm_trits);
        for (int ta : {0, 4, 8}) {
            for (int imm : {-lim, 0, lim}) {
                Instruction ins;
                ins.mn = op.mn;
                if (op.has_ta) ins.ta = ta;
                if (op.has_tb) ins.tb = 8 - ta;
                if (op.has_cond) ins.cond = imm == 0 ? 0 : (imm < 0 ? -1 : 1);
                ins.imm = op.imm_trits > 0 ? imm : 0;
                CHECK(decode_instruction(encode_instruction(ins)) == ins);
            }
        }
    }
    std::mt19937 rng(101);
    for (int i = 0; i < 100000; ++i) {
        Instruction ins = random_instruction(rng);
        CHECK(decode_instruction(encode_instruction(ins)) == ins);
    }
}

TEST_CASE("immediate field limits") {
    CHECK(imm_limit(2) == 4);
    CHECK(imm_limit(3) == 13);
    CHECK(imm_limit(4) == 40);
    CHECK(imm_limit(5) == 121);
    CHECK_THROWS_AS(encode_instruction({Mnemonic::Addi, 0, 4, 0, 14}), Error);
    CHECK_THROWS_AS(encode_instruction({Mnemonic::Beq, 0, 4, 0, 41}), Error);
    CHECK_THROWS_AS(encode_instruction({Mnemonic::Jal, 0, 4, 0, 122}), Error);
    CHECK_THROWS_AS(encode_instruction({Mnemonic::Sri, 0, 4, 0, 5}), Error);
    CHECK_THROWS_AS(encode_instruction({Mnemonic::Add, 9, 0, 0, 0}), Error);
}

TEST_CASE("reserved codewords decode to IllegalInstruction") {
    CHECK_THROWS_AS(decode_instruction(Word9::parse("+0+000000")), IllegalInstruction);
    CHECK_THROWS_AS(decode_instruction(Word9::parse("+00++0000")), IllegalInstruction);
    CHECK_THROWS_AS(decode_instruction(Word9::parse("+++++0000")), IllegalInstruction);
}

TEST_CASE("register fields use the unsigned two-trit view") {
    // layout of ADD: trits 8..4 = opcode "++-+0", 3..2 = ta, 1..0 = tb;
    // register index = unsigned view of the 2-trit field (T5 = "0+", T2 = "-+")
    Word9 w = encode_instruction({Mnemonic::Add, 5, 2, 0, 0});
    CHECK(w.trit(3) == 0);
    CHECK(w.trit(2) == 1);
    CHECK(w.trit(1) == -1);
    CHECK(w.trit(0) == 1);
}

TEST_CASE("find_op is case-insensitive") {
    CHECK(find_op("add") != nullptr);
    CHECK(find_op("ADD")->mn == Mnemonic::Add);
    CHECK(find_op("CoMp")->mn == Mnemonic::Comp);
    CHECK(find_op("mul") == nullptr);
}

TEST_CASE("formatting is canonical") {
    CHECK(format_instruction({Mnemonic::Add, 5, 2, 0, 0}) == "ADD T5, T2");
    CHECK(format_instruction({Mnemonic::Addi, 3, 4, 0, -7}) == "ADDI T3, -7");
    CHECK(format_instruction({Mnemonic::Beq, 1, 4, -1, 12}) == "BEQ T1, -, 12");
    CHECK(format_instruction({Mnemonic::Load, 2, 6, 0, 5}) == "LOAD T2, T6, 5");
}
