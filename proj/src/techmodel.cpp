#include "art9/techmodel.hpp"

#include <cmath>
#include <sstream>

#include "art9/error.hpp"

namespace art9 {

namespace {

constexpr double kVaxDhrystonesPerSec = 1757.0;

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

double parse_double(const std::string& tok, int line) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + tok + "'");
    }
}

} // namespace

TechLibrary parse_tech_library(std::string_view text) {
    TechLibrary lib;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        size_t cut = line.find('#');
        if (cut != std::string::npos) line.resize(cut);
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0] == "library") {
            if (tok.size() != 4 || tok[2] != "voltage")
                fail(line_no, "expected 'library <name> voltage <V>'");
            lib.name = tok[1];
            lib.voltage = parse_double(tok[3], line_no);
            have_header = true;
        } else if (tok[0] == "gate") {
            if (tok.size() != 8 || tok[2] != "delay_ps" || tok[4] != "dyn_nw_per_mhz" ||
                tok[6] != "static_nw")
                fail(line_no,
                     "expected 'gate <name> delay_ps <f> dyn_nw_per_mhz <f> static_nw <f>'");
            GateProps g;
            g.delay_ps = parse_double(tok[3], line_no);
            g.dyn_nw_per_mhz = parse_double(tok[5], line_no);
            g.static_nw = parse_double(tok[7], line_no);
            if (g.delay_ps <= 0) fail(line_no, "gate delay must be positive");
            if (g.dyn_nw_per_mhz < 0 || g.static_nw < 0)
                fail(line_no, "gate power must be non-negative");
            if (!lib.gates.emplace(tok[1], g).second)
                fail(line_no, "duplicate gate '" + tok[1] + "'");
        } else {
            fail(line_no, "unrecognized directive '" + tok[0] + "'");
        }
    }
    if (!have_header) throw Error("tech library is missing a 'library' header line");
    return lib;
}

StructuralNetlist parse_netlist(std::string_view text) {
    StructuralNetlist nl;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    std::string cur_module;
    while (std::getline(in, line)) {
        ++line_no;
        size_t cut = line.find('#');
        if (cut != std::string::npos) line.resize(cut);
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0] == "module") {
            if (tok.size() != 2) fail(line_no, "expected 'module <name>'");
            cur_module = tok[1];
            nl.modules[cur_module]; // define even if empty
        } else if (tok[0] == "path") {
            if (tok.size() < 2) fail(line_no, "critical path must name at least one gate");
            nl.critical_path.assign(tok.begin() + 1, tok.end());
        } else {
            if (cur_module.empty()) fail(line_no, "gate count outside a module");
            if (tok.size() != 2) fail(line_no, "expected '<gate> <count>'");
            long count = 0;
            try {
                count = std::stol(tok[1]);
            } catch (const std::exception&) {
                fail(line_no, "invalid count '" + tok[1] + "'");
            }
            if (count < 0) fail(line_no, "gate count must be non-negative");
            nl.modules[cur_module][tok[0]] += count;
        }
    }
    if (nl.critical_path.empty())
        throw Error("netlist is missing a 'path' line");
    return nl;
}

long total_gates(const StructuralNetlist& nl) {
    long total = 0;
    for (const auto& [mod, gates] : nl.modules)
        for (const auto& [gate, count] : gates) total += count;
    return total;
}

namespace {

const GateProps& gate_props(const TechLibrary& lib, const std::string& name) {
    auto it = lib.gates.find(name);
    if (it == lib.gates.end())
        throw Error("gate '" + name + "' not found in library '" + lib.name + "'");
    return it->second;
}

} // namespace

double critical_delay_ps(const StructuralNetlist& nl, const TechLibrary& lib) {
    double delay = 0;
    for (const auto& g : nl.critical_path) delay += gate_props(lib, g).delay_ps;
    return delay;
}

double total_power_w(const StructuralNetlist& nl, const TechLibrary& lib,
                     double frequency_mhz) {
    double nw = 0;
    for (const auto& [mod, gates] : nl.modules)
        for (const auto& [gate, count] : gates) {
            const GateProps& g = gate_props(lib, gate);
            nw += static_cast<double>(count) *
                  (g.static_nw + g.dyn_nw_per_mhz * frequency_mhz);
        }
    return nw * 1e-9;
}

double dmips_per_mhz(double cycles_per_iteration) {
    if (cycles_per_iteration <= 0)
        throw Error("cycles per iteration must be positive");
    return 1e6 / (cycles_per_iteration * kVaxDhrystonesPerSec);
}

double efficiency_dmips_per_watt(double dmips_per_mhz_v, double frequency_mhz,
                                 double power_w) {
    if (power_w <= 0) throw Error("power must be positive");
    return dmips_per_mhz_v * frequency_mhz / power_w;
}

long code_size_cells(long instructions, long data_words, int word_trits) {
    return static_cast<long>(word_trits) * (instructions + data_words);
}

Estimate make_estimate(const StructuralNetlist& nl, const TechLibrary& lib,
                       const EstimateInputs& in) {
    Estimate est;
    est.total_gates = total_gates(nl);
    est.critical_delay_ps = critical_delay_ps(nl, lib);
    est.frequency_mhz = in.freq_mhz_override > 0 ? in.freq_mhz_override
                                                 : 1e6 / est.critical_delay_ps;
    est.power_w = in.power_w_override > 0
                      ? in.power_w_override
                      : total_power_w(nl, lib, est.frequency_mhz);
    est.dmips_per_mhz = dmips_per_mhz(in.cycles_per_iteration);
    est.dmips = est.dmips_per_mhz * est.frequency_mhz;
    est.dmips_per_watt = efficiency_dmips_per_watt(est.dmips_per_mhz,
                                                   est.frequency_mhz, est.power_w);
    return est;
}

std::string format_estimate(const Estimate& est) {
    std::ostringstream out;
    out << "total_gates: " << est.total_gates << "\n";
    out << "critical_delay_ps: " << est.critical_delay_ps << "\n";
    out << "frequency_mhz: " << est.frequency_mhz << "\n";
    out << "power_w: " << est.power_w << "\n";
    out << "dmips_per_mhz: " << est.dmips_per_mhz << "\n";
    out << "dmips: " << est.dmips << "\n";
    out << "dmips_per_watt: " << est.dmips_per_watt << "\n";
    return out.str();
}

} // namespace art9
