#pragma once

#include "thermoporo/cell_flow.hpp"
#include "thermoporo/geometry.hpp"
#include "thermoporo/grid.hpp"
#include "thermoporo/linear_solvers.hpp"
#include "thermoporo/tensor.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace thermoporo {

// ---- two-scale pairing ----------------------------------------------------------

/// Closed-form ingredients of an oscillating test sequence on Ω = (0,1)² over
/// t in (0,1): the sequence is φ(x,t) ψ(x/ε), tested against σ(x,t,x/ε).
/// ψ and σ are 1-periodic in y.
struct TwoScalePreset {
    std::string name;
    std::string description;
    /// Trigonometric presets have a non-trivial oscillation whose pairing error
    /// decays strictly as ε decreases.
    bool trigonometric = true;
    std::function<double(double x1, double x2, double t)> phi;
    std::function<double(double y1, double y2)> psi;
    std::function<double(double x1, double x2, double t, double y1, double y2)> sigma;
};

[[nodiscard]] const std::vector<TwoScalePreset>& two_scale_presets();
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] const TwoScalePreset& two_scale_preset(std::string_view name);

struct TwoScaleRow {
    double eps = 0.0;
    double pairing = 0.0;
    double error = 0.0;  ///< |pairing - limit|
};

struct TwoScaleReport {
    std::string preset;
    double limit = 0.0;
    std::vector<TwoScaleRow> rows;
    /// Least-squares slope of log(error) against log(ε); NaN when an error is
    /// at round-off level (the pairing is exact).
    double order = 0.0;
};

struct TwoScaleOptions {
    int subintervals_per_period = 4;  ///< composite Gauss-Legendre panels per ε-period and axis
    int time_panels = 2;
    int limit_panels = 4;             ///< panels per axis for the limit's x-integral
    int cell_points = 32;             ///< midpoint nodes per axis for the periodic y-integral
};

/// Pairing ∫∫ φ(x,t) ψ(x/ε) σ(x,t,x/ε) dx dt for each ε against its two-scale
/// limit ∫∫∫ φ ψ σ dy dx dt. Each ε must be 1/k for an integer k and the list
/// must be strictly decreasing; violations throw std::invalid_argument.
[[nodiscard]] TwoScaleReport two_scale_check(const TwoScalePreset& preset, const std::vector<double>& eps,
                                             const TwoScaleOptions& opt = {});

/// Whitespace-separated table "eps pairing limit error" plus the fitted order.
[[nodiscard]] std::string format_two_scale(const TwoScaleReport& r);

// ---- fine-scale oracles ---------------------------------------------------------

struct DnsResult {
    double eps = 1.0;
    int N = 0;               ///< fine grid cells per axis
    CellField field;         ///< θ^ε, or the cell-averaged velocity along the drive
    Vector observable;       ///< mean flux <K∇θ> or mean velocity <χv>
    Vector reference;        ///< B^θ G or B₂ e_axis
    double relative_error = 0.0;
    SolverReport report;
};

/// Steady conduction div(K^ε ∇θ) = 0 on Ω = (0,1)^dim with θ = G·x on the
/// boundary, K^ε the ε = 1/k periodic inflation of the cell at its own
/// resolution. Boundary faces use a half-cell stencil with the adjacent cell's
/// conductivity; the mean flux is the trapezoid-weighted face average. The
/// reference B^θ is computed by the cell solver unless supplied.
[[nodiscard]] DnsResult dns_conduction(const UnitCellGeometry& g, double kappa_f, double kappa_s, int k,
                                       const Vector& G, const Matrix* Btheta = nullptr,
                                       const SolverOptions& opt = {});

/// Steady Stokes with viscosity μ₁ε² on the periodic tiling of k^dim cells of
/// Ω = (0,1)^dim, driven by a unit mean pressure gradient along `axis`. Throws
/// DegenerateGeometry when the fluid does not percolate along the drive. The
/// reference B₂ is computed by the cell solver unless supplied.
[[nodiscard]] DnsResult dns_stokes(const UnitCellGeometry& g, double mu1, int k, int axis,
                                   const Matrix* B2 = nullptr, const SolverOptions& opt = {});

// ---- suites -----------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    std::vector<std::string> tables;
    [[nodiscard]] bool passed() const noexcept;
};

/// laminate, checkerboard, two-scale, stokes-tiling, all.
[[nodiscard]] const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for unknown suites.
[[nodiscard]] SuiteReport run_suite(std::string_view name, const SolverOptions& opt = {});
/// One "check <name> value <v> threshold <t> PASS|FAIL" line per check, then the tables.
[[nodiscard]] std::string format_suite(const SuiteReport& r);

}  // namespace thermoporo
