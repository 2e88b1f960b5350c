#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thermoporo {

enum class Phase { Fluid, Solid };

/// Voxelized periodic unit cell Y=(0,1)^dim. chi = 1 marks the fluid part Y_f,
/// chi = 0 the solid part Y_s. Voxels are stored row-major (last axis fastest)
/// and wrap around periodically. Immutable once constructed.
class UnitCellGeometry {
public:
    /// Validates dim in {2,3}, n >= 1, chi.size() == n^dim and chi values in {0,1}.
    UnitCellGeometry(int dim, int n, std::vector<std::uint8_t> chi);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return chi_.size(); }
    [[nodiscard]] std::span<const std::uint8_t> chi() const noexcept { return chi_; }
    [[nodiscard]] std::uint8_t operator[](std::size_t i) const noexcept { return chi_[i]; }

    /// Value at integer voxel coordinates, wrapped periodically (unused axes ignored).
    [[nodiscard]] std::uint8_t at(std::array<int, 3> idx) const noexcept;
    [[nodiscard]] std::size_t index(std::array<int, 3> idx) const noexcept;
    [[nodiscard]] std::array<int, 3> coords(std::size_t i) const noexcept;

    [[nodiscard]] std::size_t fluid_count() const noexcept;
    [[nodiscard]] bool has_both_phases() const noexcept;
    /// Throws DegenerateGeometry for all-fluid or all-solid cells.
    void require_both_phases(std::string_view who) const;

    friend bool operator==(const UnitCellGeometry&, const UnitCellGeometry&) = default;

private:
    int dim_;
    int n_;
    std::vector<std::uint8_t> chi_;
};

/// Ω=(0,1)^dim with N cells per axis and optionally ε = 1/cells_per_side.
struct MacroDomain {
    int dim = 2;
    int N = 32;
    std::optional<int> cells_per_side;

    /// Throws std::invalid_argument when dim/N/cells_per_side are not admissible.
    void validate() const;
    [[nodiscard]] double h() const noexcept { return 1.0 / N; }
    [[nodiscard]] std::optional<double> eps() const noexcept;
};

/// Voxel field over Ω (e.g. χ^ε), same storage order as UnitCellGeometry.
struct VoxelField {
    int dim = 0;
    int N = 0;
    std::vector<std::uint8_t> values;
};

// ---- file format ----------------------------------------------------------

/// Parses "dim n1 [n2 [n3]]\n" followed by either whitespace separated 0/1 values
/// or (binary variant) exactly n^dim raw bytes of value 0x00 / 0x01.
/// Errors carry the byte offset of the offending token.
[[nodiscard]] UnitCellGeometry parse_geometry(std::string_view bytes);
[[nodiscard]] UnitCellGeometry load_geometry(const std::filesystem::path& path);
[[nodiscard]] std::string format_geometry(const UnitCellGeometry& g, bool binary = false);
void save_geometry(const UnitCellGeometry& g, const std::filesystem::path& path, bool binary = false);

// ---- queries ---------------------------------------------------------------

/// Fluid volume fraction m = ⟨χ⟩_Y.
[[nodiscard]] double porosity(const UnitCellGeometry& g) noexcept;

/// True iff the voxels of `phase` form a single face-connected component under
/// periodic wrap. An empty phase counts as connected.
[[nodiscard]] bool connectivity(const UnitCellGeometry& g, Phase phase);

/// Axes along which `phase` forms a periodic loop, i.e. connects a voxel to its
/// own periodic image. Flow along axis i through the fluid requires entry i set.
[[nodiscard]] std::array<bool, 3> percolating_axes(const UnitCellGeometry& g, Phase phase);

/// 64-bit FNV-1a hash of (dim, n, chi), hex encoded.
[[nodiscard]] std::string geometry_hash(const UnitCellGeometry& g);

// ---- transforms ------------------------------------------------------------

/// χ^ε(x) = χ(frac(x/ε)) sampled at the centers of an N^dim grid on Ω, ε = 1/k.
/// Requires N divisible by k·n.
[[nodiscard]] VoxelField inflate(const UnitCellGeometry& g, int k, int N);

/// Cell whose voxel (i) holds g's voxel (i - shift) (periodic).
[[nodiscard]] UnitCellGeometry cyclic_shift(const UnitCellGeometry& g, std::array<int, 3> shift);

/// Rotate by +90° about the cell center in the (axis_a, axis_b) plane: new voxel i'
/// holds the old voxel with i_a = i'_b, i_b = n-1-i'_a. Effective tensors transform
/// as R T Rᵀ with R e_a = e_b, R e_b = -e_a.
[[nodiscard]] UnitCellGeometry rotate90(const UnitCellGeometry& g, int axis_a, int axis_b);

/// χ ↔ 1-χ.
[[nodiscard]] UnitCellGeometry swap_phases(const UnitCellGeometry& g);

// ---- canned geometries -----------------------------------------------------

/// Fluid layers: χ=1 where y₁ < f (round(f·n) voxel slabs normal to axis 0).
[[nodiscard]] UnitCellGeometry make_laminate(int dim, int n, double f);
/// 2^dim blocks of side n/2 with alternating phase; block (0,..,0) is fluid.
[[nodiscard]] UnitCellGeometry make_checkerboard(int dim, int n);
/// Straight fluid channel along axis 0 of width w (round(w·n) voxels, centered across axis 1).
[[nodiscard]] UnitCellGeometry make_channel(int dim, int n, double w);
/// Centered solid cube of side a (round(a·n) voxels) in fluid.
[[nodiscard]] UnitCellGeometry make_centered_cube(int dim, int n, double a);
/// Union of 1-3 random solid boxes, redrawn until the solid is connected, the
/// fluid percolates along every axis, and both phases are present. Deterministic in seed.
[[nodiscard]] UnitCellGeometry make_random_connected(int dim, int n, std::uint64_t seed);

}  // namespace thermoporo
