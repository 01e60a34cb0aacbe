#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "art9/assembler.hpp"
#include "art9/error.hpp"
#include "art9/isa.hpp"
#include "art9/sim.hpp"
#include "art9/techmodel.hpp"
#include "art9/transpiler.hpp"
#include "art9/word9.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw art9::Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw art9::Error("cannot write '" + path + "'");
    out << text;
}

uint64_t fnv1a64(uint64_t h, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t tdm_hash(const art9::MachineState& st) {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& w : st.tdm) h = fnv1a64(h, static_cast<uint64_t>(w.to_unsigned()));
    return h;
}

std::string digest(const art9::MachineState& st) {
    std::ostringstream out;
    out << "pc: " << st.pc.str() << " (" << st.pc.to_unsigned() << ")\n";
    for (int i = 0; i < 9; ++i)
        out << "T" << i << ": " << st.trf[i].str() << " (" << st.trf[i].balanced()
            << ")\n";
    out << "retired: " << st.retired << "\n";
    out << "tdm_hash: " << std::hex << std::setw(16) << std::setfill('0')
        << tdm_hash(st) << "\n";
    return out.str();
}

struct BenchRow {
    std::string name;
    int instructions = 0;
    long memory_cells = 0;
    int64_t retired = 0;
    int64_t cycles = 0;
    int64_t stalls = 0;
    double ipc = 0;
};

BenchRow bench_one(const std::string& path, int64_t max_cycles) {
    BenchRow row;
    size_t slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = name.find_last_of('.');
    row.name = dot == std::string::npos ? name : name.substr(0, dot);

    art9::TranspileResult tr = art9::transpile(read_file(path));
    art9::ProgramImage img = art9::assemble_program(tr.assembly);
    row.instructions = static_cast<int>(img.words.size());
    row.memory_cells = art9::code_size_cells(row.instructions, 0);

    art9::MachineState fn;
    art9::load_image(fn, img, art9::MemTarget::Tim);
    art9::run_functional(fn, max_cycles);
    row.retired = fn.retired;

    art9::MachineState pl;
    art9::load_image(pl, img, art9::MemTarget::Tim);
    art9::PipelineStats st = art9::run_pipelined(pl, max_cycles);
    row.cycles = st.cycles;
    row.stalls = st.total_stalls();
    row.ipc = st.cycles > 0 ? static_cast<double>(st.retired) / st.cycles : 0;
    if (digest(fn) != digest(pl))
        throw art9::Error(row.name + ": simulator modes disagree on final state");
    return row;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"ART-9 balanced-ternary processor toolchain"};
    app.require_subcommand(1);

    // asm
    auto* asm_cmd = app.add_subcommand("asm", "Assemble ART-9 source to a .tmem image");
    std::string asm_in, asm_out;
    asm_cmd->add_option("input", asm_in, "assembly source file")->required();
    asm_cmd->add_option("-o,--output", asm_out, ".tmem output file")->required();

    // disasm
    auto* dis_cmd = app.add_subcommand("disasm", "Disassemble a .tmem image");
    std::string dis_in, dis_out;
    dis_cmd->add_option("input", dis_in, ".tmem input file")->required();
    dis_cmd->add_option("-o,--output", dis_out, "output file (default: stdout)");

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute a .tmem image");
    std::string run_in, run_mode = "functional", run_trace;
    int64_t run_max = 100000000;
    run_cmd->add_option("input", run_in, ".tmem input file")->required();
    run_cmd->add_option("--mode", run_mode, "functional or pipeline")
        ->check(CLI::IsMember({"functional", "pipeline"}));
    run_cmd->add_option("--max-cycles", run_max, "execution bound");
    run_cmd->add_option("--trace", run_trace, "write a per-cycle CSV trace (pipeline)");

    // transpile
    auto* tp_cmd = app.add_subcommand("transpile", "Translate RV-32I assembly to ART-9");
    std::string tp_in, tp_out;
    art9::TranspileOptions tp_opt;
    bool no_peephole = false;
    tp_cmd->add_option("input", tp_in, "RV-32I source file")->required();
    tp_cmd->add_option("-o,--output", tp_out, "ART-9 assembly output file")->required();
    tp_cmd->add_flag("--no-peephole", no_peephole, "disable redundancy elimination");
    tp_cmd->add_option("--stack-top", tp_opt.stack_top, "initial sp value");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Delay/power/DMIPS estimate");
    std::string est_tech, est_netlist;
    double est_cpi = 0, est_freq = 0, est_power = 0, est_cycles = 0;
    long est_iters = 0;
    est_cmd->add_option("--tech", est_tech, "tech library file")->required();
    est_cmd->add_option("--netlist", est_netlist, "structural netlist file")->required();
    est_cmd->add_option("--cycles-per-iter", est_cpi, "cycles per benchmark iteration");
    est_cmd->add_option("--total-cycles", est_cycles, "total cycles of a benchmark run");
    est_cmd->add_option("--iterations", est_iters,
                        "iterations behind --total-cycles");
    est_cmd->add_option("--freq-mhz", est_freq, "override derived frequency");
    est_cmd->add_option("--power-w", est_power, "override derived power");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run every fixture benchmark");
    std::vector<std::string> bench_files;
    int64_t bench_max = 100000000;
    bench_cmd->add_option("fixtures", bench_files, "RV-32I benchmark sources")
        ->required();
    bench_cmd->add_option("--max-cycles", bench_max, "execution bound per run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*asm_cmd) {
        write_file(asm_out, art9::format_tmem(art9::assemble_program(read_file(asm_in))));
        return 0;
    }
    if (*dis_cmd) {
        std::string text = art9::disassemble_program(art9::parse_tmem(read_file(dis_in)));
        if (dis_out.empty())
            std::cout << text;
        else
            write_file(dis_out, text);
        return 0;
    }
    if (*run_cmd) {
        art9::MachineState st;
        art9::load_image(st, art9::parse_tmem(read_file(run_in)), art9::MemTarget::Tim);
        if (run_mode == "functional") {
            art9::run_functional(st, run_max);
            std::cout << "mode: functional\n";
        } else {
            art9::PipelineStats ps = art9::run_pipelined(st, run_max, !run_trace.empty());
            if (!run_trace.empty()) write_file(run_trace, art9::format_trace_csv(ps));
            std::cout << "mode: pipeline\n";
            std::cout << "cycles: " << ps.cycles << "\n";
            std::cout << "load_use_stalls: " << ps.load_use_stalls << "\n";
            std::cout << "branch_value_stalls: " << ps.branch_value_stalls << "\n";
            std::cout << "branch_squashes: " << ps.branch_squashes << "\n";
        }
        std::cout << digest(st);
        return 0;
    }
    if (*tp_cmd) {
        tp_opt.peephole = !no_peephole;
        art9::TranspileResult res = art9::transpile(read_file(tp_in), tp_opt);
        write_file(tp_out, res.assembly);
        std::cout << art9::format_stats(res.stats);
        return 0;
    }
    if (*est_cmd) {
        art9::TechLibrary lib = art9::parse_tech_library(read_file(est_tech));
        art9::StructuralNetlist nl = art9::parse_netlist(read_file(est_netlist));
        art9::EstimateInputs in;
        if (est_cpi > 0) {
            in.cycles_per_iteration = est_cpi;
        } else if (est_cycles > 0 && est_iters > 0) {
            in.cycles_per_iteration = est_cycles / static_cast<double>(est_iters);
        } else {
            std::cerr << "estimate: give --cycles-per-iter or --total-cycles with "
                         "--iterations\n";
            return 2;
        }
        in.freq_mhz_override = est_freq;
        in.power_w_override = est_power;
        std::cout << art9::format_estimate(art9::make_estimate(nl, lib, in));
        return 0;
    }
    if (*bench_cmd) {
        std::cout << "name instructions memory_cells retired cycles stalls ipc\n";
        for (const auto& f : bench_files) {
            BenchRow r = bench_one(f, bench_max);
            std::cout << r.name << ' ' << r.instructions << ' ' << r.memory_cells
                      << ' ' << r.retired << ' ' << r.cycles << ' ' << r.stalls << ' '
                      << std::fixed << std::setprecision(3) << r.ipc << "\n";
        }
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const art9::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
