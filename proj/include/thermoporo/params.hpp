#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thermoporo {

class KeyValueConfig;

/// Limiting dimensionless constants of the rigid-skeleton regime
/// (μ₀ = 0, λ₀ = η₀ = ∞; the infinite limits are implicit and not stored).
///
/// beta0s and rho_s do not enter the homogenized equations; they are kept so a
/// parameter file can describe the full material.
struct LimitParameters {
    double mu1 = 1.0;      ///< μ₁ = lim α_μ/ε²
    double tau0 = 1.0;     ///< τ₀
    double pstar = 1.0;    ///< p*
    double nu0 = 0.0;      ///< ν₀
    double beta0f = 0.0;   ///< β₀f
    double beta0s = 0.0;   ///< β₀s (unused by the limit system)
    double kappa0f = 1.0;  ///< κ₀f
    double kappa0s = 1.0;  ///< κ₀s
    double rho_f = 1.0;
    double rho_s = 1.0;    ///< unused by the limit system
    double c_pf = 1.0;
    double c_ps = 1.0;

    friend bool operator==(const LimitParameters&, const LimitParameters&) = default;
};

/// Which Darcy law governs the filtration velocity.
enum class Regime {
    MemoryDarcy,    ///< τ₀ > 0 and μ₁ > 0: v = -∫ B₁(t-s) ∇q(s) ds
    SteadyDarcy,    ///< τ₀ = 0: v = -B₂ ∇q
    InviscidDarcy,  ///< μ₁ = 0: v = -(mI - B₃) ∫ ∇q / (τ₀ρ_f)
};

[[nodiscard]] std::string_view to_string(Regime r) noexcept;
/// Throws ConfigError for unknown names.
[[nodiscard]] Regime regime_from_string(std::string_view name);

/// Every violated admissibility constraint; empty when admissible.
[[nodiscard]] std::vector<std::string> validate(const LimitParameters& p);

/// Throws InadmissibleParameters when validate(p) is not empty.
[[nodiscard]] Regime classify(const LimitParameters& p);

/// ĉ_p = m c_pf + (1-m) c_ps.
[[nodiscard]] double effective_capacity(const LimitParameters& p, double m);

/// Finite-ε coefficients used by the fine-scale oracles.
struct DnsParameters {
    double eps = 1.0;
    double alpha_mu = 1.0;  ///< μ₁ ε²
    double alpha_kappa_f = 1.0;
    double alpha_kappa_s = 1.0;
    double alpha_tau = 1.0;

    [[nodiscard]] static DnsParameters from_limits(const LimitParameters& p, double eps);
};

/// Reads the keys mu1, tau0, pstar, nu0, beta0f, beta0s, kappa0f, kappa0s,
/// rho_f, rho_s, c_pf, c_ps (all optional, defaults above).
[[nodiscard]] LimitParameters read_parameters(const KeyValueConfig& cfg);

}  // namespace thermoporo
