#include "art9/assembler.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "art9/error.hpp"

namespace art9 {

namespace {

struct Statement {
    int line = 0;
    std::vector<std::string> labels;
    std::string mnemonic;              // empty for .word
    std::vector<std::string> operands;
    std::optional<Word9> raw;          // .word payload
};

std::string strip(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool valid_label(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!is_label_char(c)) return false;
    return true;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw SourceError("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_operands(const std::string& text) {
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

int parse_reg(const std::string& tok, int line) {
    if (tok.size() == 2 && (tok[0] == 'T' || tok[0] == 't') && tok[1] >= '0' && tok[1] <= '8')
        return tok[1] - '0';
    fail(line, "expected register T0..T8, got '" + tok + "'");
}

std::optional<long> try_parse_int(const std::string& tok) {
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 't' || tok[1] == 'T')) {
        long v = 0;
        for (size_t i = 2; i < tok.size(); ++i) {
            if (i - 2 >= static_cast<size_t>(kWordTrits)) return std::nullopt;
            v = v * 3 + char_trit(tok[i]);
        }
        return v;
    }
    size_t i = 0;
    bool neg = false;
    if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) neg = tok[i++] == '-';
    if (i >= tok.size()) return std::nullopt;
    long v = 0;
    for (; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
        v = v * 10 + (tok[i] - '0');
    }
    return neg ? -v : v;
}

int parse_imm(const std::string& tok, int line) {
    auto v = try_parse_int(tok);
    if (!v) fail(line, "expected immediate, got '" + tok + "'");
    return static_cast<int>(*v);
}

int parse_trit(const std::string& tok, int line) {
    if (tok.size() != 1) fail(line, "expected condition trit '-', '0' or '+', got '" + tok + "'");
    try {
        return char_trit(tok[0]);
    } catch (const Error&) {
        fail(line, "expected condition trit '-', '0' or '+', got '" + tok + "'");
    }
}

std::vector<Statement> parse_statements(std::string_view source) {
    std::vector<Statement> stmts;
    std::vector<std::string> pending_labels;
    std::istringstream in{std::string(source)};
    std::string line_text;
    int line_no = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        size_t cut = line_text.find_first_of(";#");
        if (cut != std::string::npos) line_text.resize(cut);
        std::string text = strip(line_text);
        // leading labels
        for (;;) {
            size_t colon = text.find(':');
            if (colon == std::string::npos) break;
            std::string lbl = strip(text.substr(0, colon));
            bool plain = valid_label(lbl);
            if (!plain) break; // ':' belongs to something else -> syntax error later
            pending_labels.push_back(lbl);
            text = strip(text.substr(colon + 1));
        }
        if (text.empty()) continue;

        Statement st;
        st.line = line_no;
        st.labels = std::move(pending_labels);
        pending_labels.clear();

        size_t sp = text.find_first_of(" \t");
        st.mnemonic = text.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : strip(text.substr(sp));
        st.operands = split_operands(rest);
        stmts.push_back(std::move(st));
    }
    if (!pending_labels.empty()) {
        // trailing labels bind to the end of the program; keep them as a
        // statement-less marker by attaching to a synthetic empty entry
        Statement st;
        st.line = line_no;
        st.labels = std::move(pending_labels);
        st.mnemonic = "";
        stmts.push_back(std::move(st));
    }
    return stmts;
}

} // namespace

ProgramImage assemble_program(std::string_view source) {
    std::vector<Statement> stmts = parse_statements(source);

    ProgramImage img;
    // pass 1: assign instruction indices, collect labels
    int index = 0;
    for (auto& st : stmts) {
        for (const auto& lbl : st.labels) {
            if (img.symbols.count(lbl)) fail(st.line, "duplicate label '" + lbl + "'");
            img.symbols[lbl] = index;
        }
        if (!st.mnemonic.empty()) ++index;
    }

    // optional load base, first statement only
    size_t first = 0;
    if (!stmts.empty() && stmts[0].mnemonic == "base" && stmts[0].labels.empty()) {
        const auto& st = stmts[0];
        if (st.operands.size() != 1) fail(st.line, "base: expected one operand");
        auto v = try_parse_int(st.operands[0]);
        if (!v || *v < 0 || *v > kMaxUnsigned) fail(st.line, "invalid base index");
        img.base = static_cast<int>(*v);
        first = 1;
        for (auto& [lbl, idx] : img.symbols) --idx; // base consumed an index
    }

    // pass 2: encode
    for (size_t si = first; si < stmts.size(); ++si) {
        const auto& st = stmts[si];
        if (st.mnemonic.empty()) continue;
        const int own = static_cast<int>(img.words.size());
        const auto& ops = st.operands;
        auto expect = [&](size_t n) {
            if (ops.size() != n)
                fail(st.line, st.mnemonic + ": expected " + std::to_string(n) +
                                  " operands, got " + std::to_string(ops.size()));
        };
        auto target_offset = [&](const std::string& tok) -> int {
            auto lit = try_parse_int(tok);
            if (lit) return static_cast<int>(*lit);
            auto it = img.symbols.find(tok);
            if (it == img.symbols.end()) fail(st.line, "undefined label '" + tok + "'");
            return it->second - own;
        };

        if (st.mnemonic == ".word") {
            expect(1);
            const std::string& tok = ops[0];
            if (tok.size() != 11 || tok[0] != '0' || (tok[1] != 't' && tok[1] != 'T'))
                fail(st.line, ".word expects a 0t literal with 9 trits");
            try {
                img.words.push_back(Word9::parse(tok.substr(2)));
            } catch (const Error& e) {
                fail(st.line, e.what());
            }
            continue;
        }

        Instruction ins;
        std::string mn = st.mnemonic;
        for (auto& c : mn) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (mn == "NOP") {
            expect(0);
            ins = make_nop();
        } else if (mn == "HALT") {
            expect(0);
            ins = make_halt();
        } else {
            const OpInfo* op = find_op(mn);
            if (!op) fail(st.line, "unknown mnemonic '" + st.mnemonic + "'");
            ins.mn = op->mn;
            switch (op->fmt) {
            case Format::R:
                expect(2);
                ins.ta = parse_reg(ops[0], st.line);
                ins.tb = parse_reg(ops[1], st.line);
                break;
            case Format::I:
                expect(2);
                ins.ta = parse_reg(ops[0], st.line);
                ins.imm = parse_imm(ops[1], st.line);
                break;
            case Format::B:
                if (op->has_cond) {
                    expect(3);
                    ins.ta = parse_reg(ops[0], st.line);
                    ins.cond = parse_trit(ops[1], st.line);
                    ins.imm = target_offset(ops[2]);
                } else if (op->mn == Mnemonic::Jal) {
                    expect(2);
                    ins.ta = parse_reg(ops[0], st.line);
                    ins.imm = target_offset(ops[1]);
                } else { // JALR
                    expect(3);
                    ins.ta = parse_reg(ops[0], st.line);
                    ins.tb = parse_reg(ops[1], st.line);
                    ins.imm = parse_imm(ops[2], st.line);
                }
                break;
            case Format::M:
                expect(3);
                ins.ta = parse_reg(ops[0], st.line);
                ins.tb = parse_reg(ops[1], st.line);
                ins.imm = parse_imm(ops[2], st.line);
                break;
            }
        }
        try {
            img.words.push_back(encode_instruction(ins));
        } catch (const Error& e) {
            fail(st.line, e.what());
        }
    }
    if (static_cast<int>(img.words.size()) > kWordStates)
        throw SourceError("program exceeds TIM capacity");
    return img;
}

std::string disassemble_program(const ProgramImage& image) {
    std::string out;
    if (image.base != 0) out += "base " + std::to_string(image.base) + "\n";
    for (const Word9& w : image.words) {
        try {
            out += format_instruction(decode_instruction(w));
        } catch (const IllegalInstruction&) {
            out += ".word 0t" + w.str();
        }
        out += '\n';
    }
    return out;
}

ProgramImage parse_tmem(std::string_view text) {
    ProgramImage img;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        size_t cut = line.find('#');
        if (cut != std::string::npos) line.resize(cut);
        std::string t = strip(line);
        if (t.empty()) continue;
        if (first_content && t.rfind("base ", 0) == 0) {
            auto v = try_parse_int(strip(t.substr(5)));
            if (!v || *v < 0 || *v > kMaxUnsigned) fail(line_no, "invalid base index");
            img.base = static_cast<int>(*v);
            first_content = false;
            continue;
        }
        first_content = false;
        try {
            img.words.push_back(Word9::parse(t));
        } catch (const Error& e) {
            fail(line_no, e.what());
        }
    }
    return img;
}

std::string format_tmem(const ProgramImage& image) {
    std::string out;
    if (image.base != 0) out += "base " + std::to_string(image.base) + "\n";
    for (const Word9& w : image.words) out += w.str() + "\n";
    return out;
}

} // namespace art9
