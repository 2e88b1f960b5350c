#include "thermoporo/params.hpp"

#include "thermoporo/config.hpp"
#include "thermoporo/error.hpp"

#include <cmath>
#include <stdexcept>

namespace thermoporo {

std::string_view to_string(Regime r) noexcept {
    switch (r) {
    case Regime::MemoryDarcy: return "MemoryDarcy";
    case Regime::SteadyDarcy: return "SteadyDarcy";
    case Regime::InviscidDarcy: return "InviscidDarcy";
    }
    return "unknown";
}

Regime regime_from_string(std::string_view name) {
    if (name == "MemoryDarcy") return Regime::MemoryDarcy;
    if (name == "SteadyDarcy") return Regime::SteadyDarcy;
    if (name == "InviscidDarcy") return Regime::InviscidDarcy;
    throw ConfigError("unknown regime '" + std::string(name) + "'");
}

std::vector<std::string> validate(const LimitParameters& p) {
    std::vector<std::string> v;
    auto require = [&v](bool ok, const char* what) {
        if (!ok) v.emplace_back(what);
    };
    const auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    const auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };

    require(finite_nonneg(p.mu1), "mu1 >= 0 and finite");
    require(finite_nonneg(p.tau0), "tau0 >= 0 and finite");
    require(!(p.mu1 + p.tau0 <= 0.0), "mu1 + tau0 > 0");
    require(finite_pos(p.pstar), "pstar > 0 and finite");
    require(finite_nonneg(p.nu0), "nu0 >= 0 and finite");
    require(finite_nonneg(p.beta0f), "beta0f >= 0 and finite");
    require(finite_nonneg(p.beta0s), "beta0s >= 0 and finite");
    require(finite_pos(p.kappa0f), "kappa0f > 0 and finite");
    require(finite_pos(p.kappa0s), "kappa0s > 0 and finite");
    require(finite_pos(p.rho_f), "rho_f > 0 and finite");
    require(finite_pos(p.rho_s), "rho_s > 0 and finite");
    require(finite_pos(p.c_pf), "c_pf > 0 and finite");
    require(finite_pos(p.c_ps), "c_ps > 0 and finite");
    return v;
}

Regime classify(const LimitParameters& p) {
    const auto violations = validate(p);
    if (!violations.empty()) {
        std::string msg = "inadmissible parameters:";
        for (const auto& s : violations) msg += " [" + s + "]";
        throw InadmissibleParameters(msg);
    }
    if (p.tau0 == 0.0) return Regime::SteadyDarcy;
    if (p.mu1 == 0.0) return Regime::InviscidDarcy;
    return Regime::MemoryDarcy;
}

double effective_capacity(const LimitParameters& p, double m) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("effective_capacity: porosity must lie in [0,1]");
    return m * p.c_pf + (1.0 - m) * p.c_ps;
}

DnsParameters DnsParameters::from_limits(const LimitParameters& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("DnsParameters: eps must be positive");
    return DnsParameters{eps, p.mu1 * eps * eps, p.kappa0f, p.kappa0s, p.tau0};
}

LimitParameters read_parameters(const KeyValueConfig& cfg) {
    LimitParameters p;
    p.mu1 = cfg.get_double("mu1", p.mu1);
    p.tau0 = cfg.get_double("tau0", p.tau0);
    p.pstar = cfg.get_double("pstar", p.pstar);
    p.nu0 = cfg.get_double("nu0", p.nu0);
    p.beta0f = cfg.get_double("beta0f", p.beta0f);
    p.beta0s = cfg.get_double("beta0s", p.beta0s);
    p.kappa0f = cfg.get_double("kappa0f", p.kappa0f);
    p.kappa0s = cfg.get_double("kappa0s", p.kappa0s);
    p.rho_f = cfg.get_double("rho_f", p.rho_f);
    p.rho_s = cfg.get_double("rho_s", p.rho_s);
    p.c_pf = cfg.get_double("c_pf", p.c_pf);
    p.c_ps = cfg.get_double("c_ps", p.c_ps);
    return p;
}

}  // namespace thermoporo
