#include "thermoporo/vtk.hpp"

#include "thermoporo/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thermoporo {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::size_t cell_count(int dim, int N) {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(N);
    return n;
}

/// Storage index of the cell with VTK rank r (first axis fastest).
std::size_t storage_index(int dim, int N, std::size_t r) {
    std::array<std::size_t, 3> x{0, 0, 0};
    const auto n = static_cast<std::size_t>(N);
    for (int d = 0; d < dim; ++d) {
        x[static_cast<std::size_t>(d)] = r % n;
        r /= n;
    }
    std::size_t i = 0;
    for (int d = 0; d < dim; ++d) i = i * n + x[static_cast<std::size_t>(d)];
    return i;
}

}  // namespace

std::string format_vtk(const VtkCellData& data, const std::string& title) {
    if (data.dim != 2 && data.dim != 3) throw std::invalid_argument("format_vtk: dim must be 2 or 3");
    if (data.N < 1) throw std::invalid_argument("format_vtk: N must be positive");
    const std::size_t n = cell_count(data.dim, data.N);
    for (const auto& [name, values] : data.scalars)
        if (values.size() != n) throw std::invalid_argument("format_vtk: field '" + name + "' has the wrong size");
    for (const auto& [name, values] : data.vectors)
        if (values.size() != n) throw std::invalid_argument("format_vtk: field '" + name + "' has the wrong size");

    const double h = 1.0 / data.N;
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\n" << title.substr(0, 255) << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << data.N + 1 << ' ' << data.N + 1 << ' ' << (data.dim == 3 ? data.N + 1 : 1) << '\n';
    out << "ORIGIN 0 0 0\n";
    out << "SPACING " << num(h) << ' ' << num(h) << ' ' << (data.dim == 3 ? num(h) : "1") << '\n';
    out << "CELL_DATA " << n << '\n';
    for (const auto& [name, values] : data.scalars) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t r = 0; r < n; ++r) out << num(values[storage_index(data.dim, data.N, r)]) << '\n';
    }
    for (const auto& [name, values] : data.vectors) {
        out << "VECTORS " << name << " double\n";
        for (std::size_t r = 0; r < n; ++r) {
            const auto& v = values[storage_index(data.dim, data.N, r)];
            out << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << '\n';
        }
    }
    return out.str();
}

VtkCellData macro_state_data(const MacroGrid& g, const MacroState& s) {
    VtkCellData data;
    data.dim = g.dim();
    data.N = g.N();
    data.scalars.emplace_back("p", s.p);
    data.scalars.emplace_back("q", s.q);
    data.scalars.emplace_back("theta", s.theta);
    std::vector<std::array<double, 3>> v(g.cells(), {0.0, 0.0, 0.0});
    for (std::size_t c = 0; c < g.cells(); ++c)
        for (int d = 0; d < g.dim(); ++d)
            v[c][static_cast<std::size_t>(d)] = 0.5 * (s.v[d][g.low_face(d, c)] + s.v[d][g.high_face(d, c)]);
    data.vectors.emplace_back("v", std::move(v));
    return data;
}

void write_vtk(const std::filesystem::path& path, const VtkCellData& data, const std::string& title) {
    const std::string text = format_vtk(data, title);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace thermoporo
