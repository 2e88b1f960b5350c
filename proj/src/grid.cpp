#include "thermoporo/grid.hpp"

#include <stdexcept>
#include <string>

namespace thermoporo {

namespace {

void check_dim(int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
}

std::size_t ipow(int base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

}  // namespace

FaceField::FaceField(int dim_, std::array<std::size_t, 3> sizes, double value) : dim(dim_) {
    for (int d = 0; d < dim; ++d) comp[static_cast<std::size_t>(d)].assign(sizes[static_cast<std::size_t>(d)], value);
}

// ---- PeriodicGrid ---------------------------------------------------------------

PeriodicGrid::PeriodicGrid(int dim, int n, double h) : dim_(dim), n_(n), h_(h) {
    check_dim(dim);
    if (n < 2) throw std::invalid_argument("grid: resolution must be >= 2 per axis");
    if (!(h > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    cells_ = ipow(n, dim);
    volume_ = 1.0;
    for (int d = 0; d < dim; ++d) volume_ *= h;
    for (int d = 0; d < dim; ++d) {
        plus_[d].resize(cells_);
        minus_[d].resize(cells_);
    }
    for (std::size_t c = 0; c < cells_; ++c) {
        const auto x = coords(c);
        for (int d = 0; d < dim; ++d) {
            auto p = x;
            p[d] = (x[d] + 1) % n;
            auto m = x;
            m[d] = (x[d] + n - 1) % n;
            plus_[d][c] = static_cast<std::uint32_t>(index(p));
            minus_[d][c] = static_cast<std::uint32_t>(index(m));
        }
    }
}

std::array<int, 3> PeriodicGrid::coords(std::size_t c) const noexcept {
    std::array<int, 3> x{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        x[d] = static_cast<int>(c % static_cast<std::size_t>(n_));
        c /= static_cast<std::size_t>(n_);
    }
    return x;
}

std::size_t PeriodicGrid::index(std::array<int, 3> x) const noexcept {
    std::size_t c = 0;
    for (int d = 0; d < dim_; ++d) c = c * static_cast<std::size_t>(n_) + static_cast<std::size_t>(((x[d] % n_) + n_) % n_);
    return c;
}

FaceField PeriodicGrid::make_faces(double value) const { return FaceField(dim_, {cells_, cells_, cells_}, value); }

// ---- MacroGrid ------------------------------------------------------------------

MacroGrid::MacroGrid(int dim, int N) : dim_(dim), N_(N), h_(1.0 / N) {
    check_dim(dim);
    if (N < 2) throw std::invalid_argument("macro grid: N must be >= 2");
    cells_ = ipow(N, dim);
    volume_ = 1.0;
    for (int d = 0; d < dim; ++d) volume_ *= h_;
    for (int d = 0; d < dim; ++d) faces_[d] = cells_ / static_cast<std::size_t>(N) * static_cast<std::size_t>(N + 1);
}

std::array<int, 3> MacroGrid::coords(std::size_t c) const noexcept {
    std::array<int, 3> x{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        x[d] = static_cast<int>(c % static_cast<std::size_t>(N_));
        c /= static_cast<std::size_t>(N_);
    }
    return x;
}

std::size_t MacroGrid::index(std::array<int, 3> x) const noexcept {
    std::size_t c = 0;
    for (int d = 0; d < dim_; ++d) c = c * static_cast<std::size_t>(N_) + static_cast<std::size_t>(x[d]);
    return c;
}

std::array<int, 3> MacroGrid::face_coords(int d, std::size_t f) const noexcept {
    std::array<int, 3> x{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto extent = static_cast<std::size_t>(a == d ? N_ + 1 : N_);
        x[a] = static_cast<int>(f % extent);
        f /= extent;
    }
    return x;
}

std::size_t MacroGrid::face_index(int d, std::array<int, 3> x) const noexcept {
    std::size_t f = 0;
    for (int a = 0; a < dim_; ++a) {
        const auto extent = static_cast<std::size_t>(a == d ? N_ + 1 : N_);
        f = f * extent + static_cast<std::size_t>(x[a]);
    }
    return f;
}

std::size_t MacroGrid::low_face(int d, std::size_t c) const noexcept { return face_index(d, coords(c)); }

std::size_t MacroGrid::high_face(int d, std::size_t c) const noexcept {
    auto x = coords(c);
    x[d] += 1;
    return face_index(d, x);
}

std::array<double, 3> MacroGrid::center(std::size_t c) const noexcept {
    const auto x = coords(c);
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int d = 0; d < dim_; ++d) p[d] = (x[d] + 0.5) * h_;
    return p;
}

std::array<double, 3> MacroGrid::face_center(int d, std::size_t f) const noexcept {
    const auto x = face_coords(d, f);
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) p[a] = a == d ? x[a] * h_ : (x[a] + 0.5) * h_;
    return p;
}

FaceField MacroGrid::make_faces(double value) const { return FaceField(dim_, faces_, value); }

// ---- periodic operators ---------------------------------------------------------

FaceField grad(const PeriodicGrid& g, std::span<const double> f) {
    if (f.size() != g.cells()) throw std::invalid_argument("grad: field does not match grid");
    FaceField out = g.make_faces();
    const double inv_h = 1.0 / g.h();
    for (int d = 0; d < g.dim(); ++d)
        for (std::size_t c = 0; c < g.cells(); ++c) out[d][c] = (f[g.plus(d, c)] - f[c]) * inv_h;
    return out;
}

CellField div(const PeriodicGrid& g, const FaceField& v) {
    if (v.dim != g.dim()) throw std::invalid_argument("div: layout mismatch (dimension)");
    for (int d = 0; d < g.dim(); ++d)
        if (v[d].size() != g.cells()) throw std::invalid_argument("div: layout mismatch (face count)");
    CellField out = g.make_cells();
    const double inv_h = 1.0 / g.h();
    for (int d = 0; d < g.dim(); ++d)
        for (std::size_t c = 0; c < g.cells(); ++c) out[c] += (v[d][c] - v[d][g.minus(d, c)]) * inv_h;
    return out;
}

double inner(const PeriodicGrid& g, std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * g.cell_volume();
}

double inner(const PeriodicGrid& g, const FaceField& a, const FaceField& b) {
    double s = 0.0;
    for (int d = 0; d < g.dim(); ++d)
        for (std::size_t i = 0; i < a[d].size(); ++i) s += a[d][i] * b[d][i];
    return s * g.cell_volume();
}

ComponentLabels label_components(const PeriodicGrid& g, std::span<const std::uint8_t> mask) {
    ComponentLabels out;
    out.label.assign(g.cells(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < g.cells(); ++seed) {
        if (!mask[seed] || out.label[seed] >= 0) continue;
        const int comp = out.count++;
        out.label[seed] = comp;
        stack.push_back(seed);
        while (!stack.empty()) {
            const auto c = stack.back();
            stack.pop_back();
            for (int d = 0; d < g.dim(); ++d) {
                for (std::size_t nb : {g.plus(d, c), g.minus(d, c)}) {
                    if (mask[nb] && out.label[nb] < 0) {
                        out.label[nb] = comp;
                        stack.push_back(nb);
                    }
                }
            }
        }
    }
    return out;
}

// ---- macro operators ------------------------------------------------------------

FaceField grad(const MacroGrid& g, std::span<const double> f) {
    if (f.size() != g.cells()) throw std::invalid_argument("grad: field does not match grid");
    FaceField out = g.make_faces();
    const double inv_h = 1.0 / g.h();
    for (int d = 0; d < g.dim(); ++d) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            const auto x = g.coords(c);
            if (x[d] == 0) continue;
            auto lo = x;
            lo[d] -= 1;
            out[d][g.low_face(d, c)] = (f[c] - f[g.index(lo)]) * inv_h;
        }
    }
    return out;
}

FaceField grad_dirichlet(const MacroGrid& g, std::span<const double> f, const FaceField& boundary) {
    FaceField out = grad(g, f);
    const double inv_half = 2.0 / g.h();
    for (int d = 0; d < g.dim(); ++d) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            const auto x = g.coords(c);
            if (x[d] == 0) {
                const auto face = g.low_face(d, c);
                out[d][face] = (f[c] - boundary[d][face]) * inv_half;
            }
            if (x[d] == g.N() - 1) {
                const auto face = g.high_face(d, c);
                out[d][face] = (boundary[d][face] - f[c]) * inv_half;
            }
        }
    }
    return out;
}

CellField div(const MacroGrid& g, const FaceField& v) {
    if (v.dim != g.dim()) throw std::invalid_argument("div: layout mismatch (dimension)");
    for (int d = 0; d < g.dim(); ++d)
        if (v[d].size() != g.faces(d)) throw std::invalid_argument("div: layout mismatch (face count)");
    CellField out = g.make_cells();
    const double inv_h = 1.0 / g.h();
    for (std::size_t c = 0; c < g.cells(); ++c) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) s += v[d][g.high_face(d, c)] - v[d][g.low_face(d, c)];
        out[c] = s * inv_h;
    }
    return out;
}

double inner(const MacroGrid& g, std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * g.cell_volume();
}

}  // namespace thermoporo
