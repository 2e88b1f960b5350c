#include "thermoporo/error.hpp"
#include "thermoporo/macro_solver.hpp"
#include "thermoporo/medium_io.hpp"
#include "thermoporo/vtk.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thermoporo;

namespace {

EffectiveMedium medium(Regime r) {
    LimitParameters p;
    p.kappa0s = 2.0;
    if (r == Regime::SteadyDarcy) p.tau0 = 0.0;
    if (r == Regime::InviscidDarcy) p.mu1 = 0.0;
    return assemble(make_centered_cube(2, 8, 0.5), p);
}

}  // namespace

TEST(MediumIo, RoundTripIsByteIdentical) {
    for (Regime r : {Regime::SteadyDarcy, Regime::MemoryDarcy, Regime::InviscidDarcy}) {
        const auto m = medium(r);
        const std::string text = format_medium(m);
        EXPECT_EQ(text.rfind("format = " + std::string(medium_format_tag), 0), 0u);
        const auto back = parse_medium(text);
        EXPECT_EQ(back.regime, r);
        EXPECT_EQ(back.Btheta, m.Btheta);
        EXPECT_EQ(format_medium(back), text);
    }
}

TEST(MediumIo, KernelIntegralsAreRebuilt) {
    const auto m = medium(Regime::MemoryDarcy);
    const auto back = parse_medium(format_medium(m));
    ASSERT_TRUE(back.kernel.has_value());
    EXPECT_EQ(back.kernel->C.size(), m.kernel->C.size());
    EXPECT_LT((back.kernel->C.back() - m.kernel->C.back()).norm(), 1e-14);
}

TEST(MediumIo, Errors) {
    EXPECT_THROW((void)parse_medium("format = something else\n"), FormatError);
    EXPECT_THROW((void)parse_medium(""), FormatError);
    std::string text = format_medium(medium(Regime::SteadyDarcy));
    EXPECT_THROW((void)parse_medium(text + "extra.key = 1\n"), ConfigError);
    const auto pos = text.find("Btheta.row0");
    const auto eol = text.find('\n', pos);
    EXPECT_THROW((void)parse_medium(text.substr(0, pos) + "Btheta.row0 = 1\n" + text.substr(eol + 1)), ConfigError);
}

TEST(MediumIo, SaveAndLoad) {
    const auto path = std::filesystem::temp_directory_path() / "thermoporo_medium_test.txt";
    const auto m = medium(Regime::InviscidDarcy);
    save_medium(m, path);
    EXPECT_EQ(format_medium(load_medium(path)), format_medium(m));
    std::filesystem::remove(path);
}

TEST(Vtk, HeaderAndOrdering) {
    VtkCellData d;
    d.dim = 2;
    d.N = 2;
    d.scalars.push_back({"p", {0.0, 1.0, 2.0, 3.0}});
    d.vectors.push_back({"v", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}});
    const std::string s = format_vtk(d, "test");
    EXPECT_NE(s.find("# vtk DataFile Version"), std::string::npos);
    EXPECT_NE(s.find("DATASET STRUCTURED_POINTS"), std::string::npos);
    EXPECT_NE(s.find("DIMENSIONS 3 3 1"), std::string::npos);
    EXPECT_NE(s.find("CELL_DATA 4"), std::string::npos);
    const auto lookup = s.find("LOOKUP_TABLE default\n");
    ASSERT_NE(lookup, std::string::npos);
    std::istringstream values(s.substr(lookup + 21));
    std::vector<double> order(4);
    for (double& x : order) values >> x;
    EXPECT_EQ(order, (std::vector<double>{0.0, 2.0, 1.0, 3.0}));
}

TEST(Vtk, MacroStateFields) {
    MacroProblem prob;
    prob.domain.N = 4;
    prob.medium = medium(Regime::SteadyDarcy);
    MacroSolver solver(prob);
    const auto data = macro_state_data(solver.grid(), solver.initial_state());
    EXPECT_EQ(data.scalars.size(), 3u);
    EXPECT_EQ(data.vectors.size(), 1u);
    const auto path = std::filesystem::temp_directory_path() / "thermoporo_vtk_test.vtk";
    write_vtk(path, data, "state");
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# vtk", 0), 0u);
    std::filesystem::remove(path);
}
