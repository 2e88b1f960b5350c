#include "thermoporo/medium_io.hpp"

#include "thermoporo/config.hpp"
#include "thermoporo/error.hpp"
#include "thermoporo/version.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace thermoporo {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string flags(const std::array<bool, 3>& f, int dim) {
    std::string out;
    for (int d = 0; d < dim; ++d) out += (d ? " " : "") + std::string(f[static_cast<std::size_t>(d)] ? "1" : "0");
    return out;
}

void put(std::ostringstream& out, const std::string& key, const std::string& value) {
    out << key << " = " << value << '\n';
}

void put_matrix(std::ostringstream& out, const std::string& name, const Matrix& a) {
    for (int r = 0; r < a.rows(); ++r) put(out, name + ".row" + std::to_string(r), format_row(a, r));
}

std::vector<double> numbers(const KeyValueConfig& cfg, const std::string& key, std::size_t expected) {
    const std::string text = cfg.get_string(key);
    std::vector<double> out;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p == end) break;
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t'))
            throw ConfigError(cfg.source() + ": key '" + key + "' holds a malformed number");
        out.push_back(v);
        p = next;
    }
    if (out.size() != expected)
        throw ConfigError(cfg.source() + ": key '" + key + "' expects " + std::to_string(expected) + " numbers, got " +
                          std::to_string(out.size()));
    return out;
}

Matrix read_matrix(const KeyValueConfig& cfg, const std::string& name, int dim) {
    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto row = numbers(cfg, name + ".row" + std::to_string(r), static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c) a(r, c) = row[static_cast<std::size_t>(c)];
    }
    return a;
}

std::array<bool, 3> read_flags(const KeyValueConfig& cfg, const std::string& key, int dim) {
    const auto v = numbers(cfg, key, static_cast<std::size_t>(dim));
    std::array<bool, 3> out{false, false, false};
    for (int d = 0; d < dim; ++d) out[static_cast<std::size_t>(d)] = v[static_cast<std::size_t>(d)] != 0.0;
    return out;
}

}  // namespace

std::string format_medium(const EffectiveMedium& m) {
    m.check();
    std::ostringstream out;
    put(out, "format", std::string(medium_format_tag));
    put(out, "version", library_version);
    put(out, "regime", std::string(to_string(m.regime)));
    put(out, "dim", std::to_string(m.dim));
    put(out, "porosity", num(m.porosity));
    put(out, "c_hat", num(m.c_hat));
    put(out, "kappa_hat", num(m.kappa_hat));
    put_matrix(out, "Btheta", m.Btheta);

    const LimitParameters& p = m.params;
    put(out, "param.mu1", num(p.mu1));
    put(out, "param.tau0", num(p.tau0));
    put(out, "param.pstar", num(p.pstar));
    put(out, "param.nu0", num(p.nu0));
    put(out, "param.beta0f", num(p.beta0f));
    put(out, "param.beta0s", num(p.beta0s));
    put(out, "param.kappa0f", num(p.kappa0f));
    put(out, "param.kappa0s", num(p.kappa0s));
    put(out, "param.rho_f", num(p.rho_f));
    put(out, "param.rho_s", num(p.rho_s));
    put(out, "param.c_pf", num(p.c_pf));
    put(out, "param.c_ps", num(p.c_ps));

    put(out, "provenance.geometry_hash", m.geometry_hash.empty() ? "none" : m.geometry_hash);
    put(out, "provenance.cell_resolution", std::to_string(m.cell_resolution));
    put(out, "provenance.tolerance", num(m.tolerance));

    if (m.steady) {
        put_matrix(out, "B2", m.steady->B2);
        put(out, "B2.mu1", num(m.steady->mu1));
        put(out, "B2.asymmetry", num(m.steady->asymmetry));
        put(out, "B2.degenerate", flags(m.steady->degenerate, m.dim));
    }
    if (m.kernel) {
        const PermeabilityKernel& k = *m.kernel;
        put(out, "kernel.mu1", num(k.mu1));
        put(out, "kernel.tau0", num(k.tau0));
        put(out, "kernel.rho_f", num(k.rho_f));
        put(out, "kernel.lambda_est", num(k.lambda_est));
        put(out, "kernel.tail", num(k.tail));
        put(out, "kernel.gap_estimate", num(k.gap_estimate));
        put(out, "kernel.degenerate", flags(k.degenerate, m.dim));
        put(out, "kernel.samples", std::to_string(k.t.size()));
        for (std::size_t s = 0; s < k.t.size(); ++s) {
            std::string row = num(k.t[s]);
            for (int r = 0; r < m.dim; ++r)
                for (int c = 0; c < m.dim; ++c) row += " " + num(k.B1[s](r, c));
            for (int r = 0; r < m.dim; ++r)
                for (int c = 0; c < m.dim; ++c) row += " " + num(k.A[s](r, c));
            put(out, "kernel.row." + std::to_string(s), row);
        }
    }
    if (m.inertial) {
        put_matrix(out, "M", m.inertial->M);
        put_matrix(out, "B3", m.inertial->B3);
        put(out, "inertial.porosity", num(m.inertial->porosity));
        put(out, "inertial.asymmetry", num(m.inertial->asymmetry));
    }
    return out.str();
}

EffectiveMedium parse_medium(std::string_view text, const std::string& source) {
    const std::string_view key = "format";
    const auto first = text.substr(0, text.find('\n'));
    if (first.substr(0, key.size()) != key)
        throw FormatError(source + ": not a medium file (missing format tag)", 0);
    const auto cfg = KeyValueConfig::parse(text, source);
    if (cfg.get_string("format") != medium_format_tag)
        throw FormatError(source + ": unsupported medium format '" + cfg.get_string("format") + "'", 0);
    (void)cfg.get_string("version");

    EffectiveMedium m;
    m.regime = regime_from_string(cfg.get_string("regime"));
    m.dim = cfg.get_int("dim");
    if (m.dim != 2 && m.dim != 3) throw ConfigError(source + ": dim must be 2 or 3");
    m.porosity = cfg.get_double("porosity");
    m.c_hat = cfg.get_double("c_hat");
    m.kappa_hat = cfg.get_double("kappa_hat");
    m.Btheta = read_matrix(cfg, "Btheta", m.dim);

    LimitParameters& p = m.params;
    p.mu1 = cfg.get_double("param.mu1");
    p.tau0 = cfg.get_double("param.tau0");
    p.pstar = cfg.get_double("param.pstar");
    p.nu0 = cfg.get_double("param.nu0");
    p.beta0f = cfg.get_double("param.beta0f");
    p.beta0s = cfg.get_double("param.beta0s");
    p.kappa0f = cfg.get_double("param.kappa0f");
    p.kappa0s = cfg.get_double("param.kappa0s");
    p.rho_f = cfg.get_double("param.rho_f");
    p.rho_s = cfg.get_double("param.rho_s");
    p.c_pf = cfg.get_double("param.c_pf");
    p.c_ps = cfg.get_double("param.c_ps");

    m.geometry_hash = cfg.get_string("provenance.geometry_hash");
    if (m.geometry_hash == "none") m.geometry_hash.clear();
    m.cell_resolution = cfg.get_int("provenance.cell_resolution");
    m.tolerance = cfg.get_double("provenance.tolerance");

    switch (m.regime) {
    case Regime::SteadyDarcy: {
        SteadyPermeability s;
        s.B2 = read_matrix(cfg, "B2", m.dim);
        s.raw = s.B2;
        s.mu1 = cfg.get_double("B2.mu1");
        s.asymmetry = cfg.get_double("B2.asymmetry");
        s.degenerate = read_flags(cfg, "B2.degenerate", m.dim);
        m.steady = std::move(s);
        break;
    }
    case Regime::MemoryDarcy: {
        PermeabilityKernel k;
        k.dim = m.dim;
        k.mu1 = cfg.get_double("kernel.mu1");
        k.tau0 = cfg.get_double("kernel.tau0");
        k.rho_f = cfg.get_double("kernel.rho_f");
        k.lambda_est = cfg.get_double("kernel.lambda_est");
        k.tail = cfg.get_double("kernel.tail");
        k.gap_estimate = cfg.get_double("kernel.gap_estimate");
        k.degenerate = read_flags(cfg, "kernel.degenerate", m.dim);
        const int samples = cfg.get_int("kernel.samples");
        if (samples < 2) throw ConfigError(source + ": kernel needs at least two samples");
        const auto dd = static_cast<std::size_t>(m.dim * m.dim);
        for (int s = 0; s < samples; ++s) {
            const auto row = numbers(cfg, "kernel.row." + std::to_string(s), 1 + 2 * dd);
            k.t.push_back(row[0]);
            Matrix b(m.dim, m.dim), a(m.dim, m.dim);
            for (int r = 0; r < m.dim; ++r)
                for (int c = 0; c < m.dim; ++c) {
                    const auto i = static_cast<std::size_t>(r * m.dim + c);
                    b(r, c) = row[1 + i];
                    a(r, c) = row[1 + dd + i];
                }
            k.B1.push_back(b);
            k.A.push_back(a);
        }
        for (std::size_t s = 1; s < k.t.size(); ++s)
            if (!(k.t[s] > k.t[s - 1])) throw ConfigError(source + ": kernel times must be increasing");
        k.rebuild_integrals();
        m.kernel = std::move(k);
        break;
    }
    case Regime::InviscidDarcy: {
        InertialTensor it;
        it.M = read_matrix(cfg, "M", m.dim);
        it.raw = it.M;
        it.B3 = read_matrix(cfg, "B3", m.dim);
        it.porosity = cfg.get_double("inertial.porosity");
        it.asymmetry = cfg.get_double("inertial.asymmetry");
        m.inertial = std::move(it);
        break;
    }
    }
    cfg.require_all_consumed();
    m.check();
    return m;
}

void save_medium(const EffectiveMedium& m, const std::filesystem::path& path) {
    const std::string text = format_medium(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write medium file " + path.string());
    out << text;
    if (!out) throw Error("failed writing medium file " + path.string());
}

EffectiveMedium load_medium(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open medium file " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_medium(text, path.string());
}

}  // namespace thermoporo
