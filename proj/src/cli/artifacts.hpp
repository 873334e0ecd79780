// Run artifacts: the diagnostics table, raw field dumps with JSON sidecars,
// and the readers check-energy uses to audit a finished run.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "polyflow/config.hpp"
#include "polyflow/scheme.hpp"

namespace polyflow {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

inline constexpr const char* kDiagnosticsHeader =
    "step,t,kinetic,internal,entropy,interaction,dissipation,work,total,"
    "residual,pass,mass_rho_err,mass_psi_err,min_rho,min_psi,picard_iters";

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const StepRecord& r);

// One parsed diagnostics row; field order mirrors the header.
struct DiagRow {
    long step;
    double t, kinetic, internal, entropy, interaction, dissipation, work, total,
        residual;
    int pass;
    double mass_rho_err, mass_psi_err, min_rho, min_psi;
    int picard_iters;
};

// Reads what write_diagnostics_* produced. Throws ParseError on malformed rows.
std::vector<DiagRow> read_diagnostics(const std::string& path);

// Raw little-endian f64 dump plus a JSON sidecar describing it. `path_base`
// gets the ".f64" / ".json" suffixes. shape is row-major, x outermost.
void dump_field(const std::string& path_base, const std::string& field,
                const std::vector<double>& data, const std::vector<int>& shape,
                const SimConfig& cfg, double t);

// Reads a .f64 file written by dump_field. Throws ParseError on short files.
std::vector<double> read_f64(const std::string& path);

}  // namespace polyflow
