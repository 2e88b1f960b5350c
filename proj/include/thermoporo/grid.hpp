#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace thermoporo {

/// Cell-centered scalar values, one per grid cell in row-major order.
using CellField = std::vector<double>;

/// Staggered (MAC) vector field: component d lives on faces normal to axis d.
struct FaceField {
    int dim = 0;
    std::array<std::vector<double>, 3> comp;

    FaceField() = default;
    FaceField(int dim, std::array<std::size_t, 3> sizes, double value = 0.0);

    [[nodiscard]] std::vector<double>& operator[](int d) { return comp[static_cast<std::size_t>(d)]; }
    [[nodiscard]] const std::vector<double>& operator[](int d) const { return comp[static_cast<std::size_t>(d)]; }
};

/// Periodic n^dim grid of spacing h. Face (d, c) is the face between cell c and
/// its +e_d neighbor, so every face array has one entry per cell.
class PeriodicGrid {
public:
    PeriodicGrid(int dim, int n, double h);
    PeriodicGrid(int dim, int n) : PeriodicGrid(dim, n, 1.0 / n) {}

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
    [[nodiscard]] double cell_volume() const noexcept { return volume_; }

    [[nodiscard]] std::size_t plus(int d, std::size_t c) const noexcept { return plus_[d][c]; }
    [[nodiscard]] std::size_t minus(int d, std::size_t c) const noexcept { return minus_[d][c]; }
    [[nodiscard]] std::array<int, 3> coords(std::size_t c) const noexcept;
    [[nodiscard]] std::size_t index(std::array<int, 3> coords) const noexcept;

    [[nodiscard]] CellField make_cells(double value = 0.0) const { return CellField(cells_, value); }
    [[nodiscard]] FaceField make_faces(double value = 0.0) const;

private:
    int dim_;
    int n_;
    double h_;
    std::size_t cells_;
    double volume_;
    std::array<std::vector<std::uint32_t>, 3> plus_;
    std::array<std::vector<std::uint32_t>, 3> minus_;
};

/// Ω=(0,1)^dim with N cells per axis and physical boundary faces. Faces normal
/// to axis d have extent N+1 along d; cell c owns low face `low_face(d,c)` and
/// high face `high_face(d,c)`.
class MacroGrid {
public:
    MacroGrid(int dim, int N);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int N() const noexcept { return N_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
    [[nodiscard]] double cell_volume() const noexcept { return volume_; }
    [[nodiscard]] std::size_t faces(int d) const noexcept { return faces_[d]; }

    [[nodiscard]] std::array<int, 3> coords(std::size_t c) const noexcept;
    [[nodiscard]] std::size_t index(std::array<int, 3> coords) const noexcept;
    [[nodiscard]] std::array<int, 3> face_coords(int d, std::size_t f) const noexcept;
    [[nodiscard]] std::size_t face_index(int d, std::array<int, 3> coords) const noexcept;
    [[nodiscard]] std::size_t low_face(int d, std::size_t c) const noexcept;
    [[nodiscard]] std::size_t high_face(int d, std::size_t c) const noexcept;

    [[nodiscard]] std::array<double, 3> center(std::size_t c) const noexcept;
    [[nodiscard]] std::array<double, 3> face_center(int d, std::size_t f) const noexcept;

    [[nodiscard]] CellField make_cells(double value = 0.0) const { return CellField(cells_, value); }
    [[nodiscard]] FaceField make_faces(double value = 0.0) const;

private:
    int dim_;
    int N_;
    double h_;
    std::size_t cells_;
    double volume_;
    std::array<std::size_t, 3> faces_{0, 0, 0};
};

// ---- periodic operators -------------------------------------------------------

/// (grad f)_d on face (d,c) = (f[c+e_d] - f[c]) / h.
[[nodiscard]] FaceField grad(const PeriodicGrid& g, std::span<const double> f);
/// (div v)[c] = Σ_d (v_d[c] - v_d[c-e_d]) / h. Exactly -adjoint of grad.
[[nodiscard]] CellField div(const PeriodicGrid& g, const FaceField& v);

[[nodiscard]] double inner(const PeriodicGrid& g, std::span<const double> a, std::span<const double> b);
[[nodiscard]] double inner(const PeriodicGrid& g, const FaceField& a, const FaceField& b);

/// Connected components of the cells with mask != 0 (face adjacency, periodic).
/// Cells outside the mask get label -1.
struct ComponentLabels {
    std::vector<int> label;
    int count = 0;
};
[[nodiscard]] ComponentLabels label_components(const PeriodicGrid& g, std::span<const std::uint8_t> mask);

// ---- macro operators ------------------------------------------------------------

/// Interior faces get (f[hi] - f[lo]) / h; boundary faces are left at zero
/// (zero-flux stencil).
[[nodiscard]] FaceField grad(const MacroGrid& g, std::span<const double> f);

/// Like grad, but boundary faces use the one-sided half-cell difference against
/// Dirichlet values `boundary[d][f]` stored at the boundary face positions.
[[nodiscard]] FaceField grad_dirichlet(const MacroGrid& g, std::span<const double> f, const FaceField& boundary);

/// (div v)[c] = Σ_d (v_d[high face] - v_d[low face]) / h.
[[nodiscard]] CellField div(const MacroGrid& g, const FaceField& v);

[[nodiscard]] double inner(const MacroGrid& g, std::span<const double> a, std::span<const double> b);

}  // namespace thermoporo
