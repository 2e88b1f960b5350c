#pragma once

#include "thermoporo/grid.hpp"
#include "thermoporo/macro_solver.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace thermoporo {

/// Cell data for a legacy ASCII VTK STRUCTURED_POINTS file on (0,1)^dim with
/// N cells per axis.
struct VtkCellData {
    int dim = 2;
    int N = 1;
    std::vector<std::pair<std::string, std::vector<double>>> scalars;
    std::vector<std::pair<std::string, std::vector<std::array<double, 3>>>> vectors;
};

/// Values are given in the library's storage order (last axis fastest) and
/// written in VTK order (first axis fastest).
[[nodiscard]] std::string format_vtk(const VtkCellData& data, const std::string& title);

/// p, q, θ and the cell-averaged velocity of a macro state.
[[nodiscard]] VtkCellData macro_state_data(const MacroGrid& g, const MacroState& s);

void write_vtk(const std::filesystem::path& path, const VtkCellData& data, const std::string& title);

}  // namespace thermoporo
