#pragma once

#include <string>
#include <vector>

#include "doifbp/integrator.hpp"
#include "doifbp/limit_lab.hpp"

namespace doifbp {

/// Header of the diagnostics CSV, one column per DiagnosticsRecord field.
inline constexpr const char* kDiagnosticsHeader =
    "t,E_total,E_kinetic,E_pressure,E_eta,E_entropy,D_fisher_tau,D_fisher_x,D_grad_u,D_div_u,D_grad_eta,mass,rod_mass";

/// Header of the sweep CSV. slope_L2 repeats the fitted slope on every row
/// and is left empty when the fit is undefined.
inline constexpr const char* kSweepHeader =
    "gamma,excess_L1,excess_L2,excess_L4,excess_Linf,rho_gamma_time_integral,complementarity,"
    "incompressibility_defect,congested_volume,eps,steps,slope_L2";

/// Writes the records with 17 significant digits. Throws IoError.
void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::string& path);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path);

void write_sweep(const SweepResult& sweep, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty cells read as NaN
};

CsvTable read_csv(const std::string& path);

/// Binary snapshot, all integers and floats little-endian:
///
///   magic    8 bytes  "DOIFBP01"
///   header   u32 dim, u32 bc (0 periodic, 1 dirichlet), u32 nx, u32 ny,
///            f64 hx, f64 hy, u32 L, f64 gamma, f64 mu, f64 lambda,
///            f64 D, f64 D_tau, f64 t
///   rho      u64 n, n x f64
///   u        u64 n, n x f64 (component-major)
///   eta      u64 n, n x f64
///   f        u64 n, n x f64 (coefficients of cell 0, then cell 1, ...)
void snapshot(const FluidState& state, const std::string& path);

/// Restores a snapshot bit-exactly. Errors name the offending section.
FluidState load_snapshot(const std::string& path);

}  // namespace doifbp
