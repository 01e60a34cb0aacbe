#ifndef ART9_TECHMODEL_HPP
#define ART9_TECHMODEL_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace art9 {

struct GateProps {
    double delay_ps = 0;        // > 0
    double dyn_nw_per_mhz = 0;  // >= 0
    double static_nw = 0;       // >= 0
};

// Delay/power properties of the primitive ternary building blocks of one
// design technology.
struct TechLibrary {
    std::string name;
    double voltage = 0;
    std::map<std::string, GateProps> gates;
};

// Structural summary of a design: per-module gate counts plus a declared
// critical-path gate sequence.
struct StructuralNetlist {
    std::map<std::string, std::map<std::string, long>> modules;
    std::vector<std::string> critical_path; // non-empty
};

struct Estimate {
    long total_gates = 0;
    double critical_delay_ps = 0;
    double frequency_mhz = 0;   // 1e6 / critical_delay_ps
    double power_w = 0;
    double dmips_per_mhz = 0;
    double dmips = 0;           // dmips_per_mhz * frequency_mhz
    double dmips_per_watt = 0;  // dmips / power_w
};

// Line-oriented formats:
//   library <name> voltage <V>
//   gate <name> delay_ps <f> dyn_nw_per_mhz <f> static_nw <f>
// and
//   module <name>
//     <gate> <count>
//   path <gate> <gate> ...
TechLibrary parse_tech_library(std::string_view text);
StructuralNetlist parse_netlist(std::string_view text);

long total_gates(const StructuralNetlist& nl);

// Sum of delays along the declared critical path; throws on unknown gates.
double critical_delay_ps(const StructuralNetlist& nl, const TechLibrary& lib);

// Sum over gates of count * (static_nw + dyn_nw_per_mhz * frequency), in watts.
double total_power_w(const StructuralNetlist& nl, const TechLibrary& lib,
                     double frequency_mhz);

// Dhrystones/second at 1 MHz divided by the 1757 dhrystones/s VAX baseline.
double dmips_per_mhz(double cycles_per_iteration);

// dmips_per_mhz * frequency / power.
double efficiency_dmips_per_watt(double dmips_per_mhz, double frequency_mhz,
                                 double power_w);

// Trit cells needed to store a program: word_trits * (instructions + data).
long code_size_cells(long instructions, long data_words, int word_trits = 9);

struct EstimateInputs {
    double cycles_per_iteration = 0; // required unless dmips_per_mhz given
    double freq_mhz_override = 0;    // 0 = derive from critical path
    double power_w_override = 0;     // 0 = derive from library
};

Estimate make_estimate(const StructuralNetlist& nl, const TechLibrary& lib,
                       const EstimateInputs& in);

std::string format_estimate(const Estimate& est);

} // namespace art9

#endif
