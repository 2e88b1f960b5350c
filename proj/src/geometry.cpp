#include "thermoporo/geometry.hpp"

#include "thermoporo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

namespace thermoporo {

namespace {

std::size_t ipow(int base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

}  // namespace

UnitCellGeometry::UnitCellGeometry(int dim, int n, std::vector<std::uint8_t> chi)
    : dim_(dim), n_(n), chi_(std::move(chi)) {
    if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("geometry: dim must be 2 or 3");
    if (n_ < 1) throw std::invalid_argument("geometry: n must be positive");
    if (chi_.size() != ipow(n_, dim_))
        throw std::invalid_argument("geometry: voxel count " + std::to_string(chi_.size()) +
                                    " does not match n^dim = " + std::to_string(ipow(n_, dim_)));
    for (auto v : chi_)
        if (v > 1) throw std::invalid_argument("geometry: voxel value outside {0,1}");
}

std::size_t UnitCellGeometry::index(std::array<int, 3> idx) const noexcept {
    std::size_t i = 0;
    for (int d = 0; d < dim_; ++d) i = i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(wrap(idx[d], n_));
    return i;
}

std::array<int, 3> UnitCellGeometry::coords(std::size_t i) const noexcept {
    std::array<int, 3> c{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        c[d] = static_cast<int>(i % static_cast<std::size_t>(n_));
        i /= static_cast<std::size_t>(n_);
    }
    return c;
}

std::uint8_t UnitCellGeometry::at(std::array<int, 3> idx) const noexcept { return chi_[index(idx)]; }

std::size_t UnitCellGeometry::fluid_count() const noexcept {
    return static_cast<std::size_t>(std::count(chi_.begin(), chi_.end(), std::uint8_t{1}));
}

bool UnitCellGeometry::has_both_phases() const noexcept {
    const auto f = fluid_count();
    return f > 0 && f < chi_.size();
}

void UnitCellGeometry::require_both_phases(std::string_view who) const {
    if (!has_both_phases())
        throw DegenerateGeometry(std::string(who) + ": cell must contain both a fluid and a solid phase");
}

void MacroDomain::validate() const {
    if (dim != 2 && dim != 3) throw std::invalid_argument("macro domain: dim must be 2 or 3");
    if (N < 2) throw std::invalid_argument("macro domain: N must be >= 2");
    if (cells_per_side && *cells_per_side < 1)
        throw std::invalid_argument("macro domain: 1/eps must be a positive integer");
}

std::optional<double> MacroDomain::eps() const noexcept {
    if (!cells_per_side) return std::nullopt;
    return 1.0 / *cells_per_side;
}

// ---- file format -------------------------------------------------------------

UnitCellGeometry parse_geometry(std::string_view bytes) {
    std::size_t pos = 0;
    const auto header_end = bytes.find('\n');
    if (header_end == std::string_view::npos) throw FormatError("malformed header: missing newline", bytes.size());

    std::vector<int> header;
    while (pos < header_end) {
        while (pos < header_end && is_space(bytes[pos])) ++pos;
        if (pos >= header_end) break;
        const std::size_t start = pos;
        while (pos < header_end && !is_space(bytes[pos])) ++pos;
        int value = 0;
        const auto* first = bytes.data() + start;
        const auto* last = bytes.data() + pos;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) throw FormatError("malformed header: expected integer", start);
        header.push_back(value);
    }
    if (header.empty()) throw FormatError("malformed header: empty", 0);
    const int dim = header[0];
    if (dim != 2 && dim != 3) throw FormatError("malformed header: dim must be 2 or 3", 0);
    if (static_cast<int>(header.size()) != dim + 1)
        throw FormatError("malformed header: expected " + std::to_string(dim) + " axis sizes", 0);
    const int n = header[1];
    for (int d = 1; d <= dim; ++d) {
        if (header[d] < 1) throw FormatError("malformed header: axis size must be positive", 0);
        if (header[d] != n) throw FormatError("malformed header: non-cubic cells are not supported", 0);
    }

    const std::size_t expected = ipow(n, dim);
    const std::size_t body = header_end + 1;
    std::vector<std::uint8_t> chi;
    chi.reserve(expected);

    if (body < bytes.size() && (bytes[body] == '\0' || bytes[body] == '\x01')) {
        const std::size_t count = bytes.size() - body;
        if (count != expected)
            throw FormatError("voxel count mismatch: expected " + std::to_string(expected) + ", found " +
                                  std::to_string(count),
                              bytes.size());
        for (std::size_t i = body; i < bytes.size(); ++i) {
            const auto v = static_cast<unsigned char>(bytes[i]);
            if (v > 1) throw FormatError("voxel value outside {0,1}", i);
            chi.push_back(static_cast<std::uint8_t>(v));
        }
        return UnitCellGeometry(dim, n, std::move(chi));
    }

    pos = body;
    while (true) {
        while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
        if (pos >= bytes.size()) break;
        const std::size_t start = pos;
        while (pos < bytes.size() && !is_space(bytes[pos])) ++pos;
        const auto token = bytes.substr(start, pos - start);
        if (token != "0" && token != "1") throw FormatError("voxel value outside {0,1}", start);
        if (chi.size() == expected)
            throw FormatError("voxel count mismatch: more than " + std::to_string(expected) + " values", start);
        chi.push_back(token == "1" ? 1 : 0);
    }
    if (chi.size() != expected)
        throw FormatError("voxel count mismatch: expected " + std::to_string(expected) + ", found " +
                              std::to_string(chi.size()),
                          bytes.size());
    return UnitCellGeometry(dim, n, std::move(chi));
}

UnitCellGeometry load_geometry(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open geometry file " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_geometry(bytes);
}

std::string format_geometry(const UnitCellGeometry& g, bool binary) {
    std::string out = std::to_string(g.dim());
    for (int d = 0; d < g.dim(); ++d) out += ' ' + std::to_string(g.n());
    out += '\n';
    if (binary) {
        for (auto v : g.chi()) out.push_back(static_cast<char>(v));
        return out;
    }
    const auto row = static_cast<std::size_t>(g.n());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.push_back(g[i] ? '1' : '0');
        out.push_back((i + 1) % row == 0 ? '\n' : ' ');
    }
    return out;
}

void save_geometry(const UnitCellGeometry& g, const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write geometry file " + path.string());
    out << format_geometry(g, binary);
}

// ---- queries -------------------------------------------------------------------

double porosity(const UnitCellGeometry& g) noexcept {
    return static_cast<double>(g.fluid_count()) / static_cast<double>(g.size());
}

namespace {

/// Flood fill of one phase tracking how many times each step wraps around the
/// cell. A loop with nonzero winding along an axis means the phase connects a
/// voxel to its periodic image along that axis.
struct FloodResult {
    int components = 0;
    std::array<bool, 3> percolates{false, false, false};
};

FloodResult flood(const UnitCellGeometry& g, Phase phase) {
    const std::uint8_t want = phase == Phase::Fluid ? 1 : 0;
    const int n = g.n();
    const int dim = g.dim();
    std::vector<int> label(g.size(), -1);
    std::vector<std::array<int, 3>> winding(g.size(), {0, 0, 0});
    std::vector<std::size_t> stack;
    FloodResult result;

    for (std::size_t seed = 0; seed < g.size(); ++seed) {
        if (g[seed] != want || label[seed] >= 0) continue;
        const int comp = result.components++;
        label[seed] = comp;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            const auto c = g.coords(cur);
            for (int d = 0; d < dim; ++d) {
                for (int step : {-1, 1}) {
                    auto nc = c;
                    nc[d] += step;
                    auto w = winding[cur];
                    if (nc[d] < 0) {
                        nc[d] += n;
                        w[d] -= 1;
                    } else if (nc[d] >= n) {
                        nc[d] -= n;
                        w[d] += 1;
                    }
                    const std::size_t nb = g.index(nc);
                    if (g[nb] != want) continue;
                    if (label[nb] < 0) {
                        label[nb] = comp;
                        winding[nb] = w;
                        stack.push_back(nb);
                    } else {
                        for (int a = 0; a < dim; ++a)
                            if (winding[nb][a] != w[a]) result.percolates[a] = true;
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace

bool connectivity(const UnitCellGeometry& g, Phase phase) { return flood(g, phase).components <= 1; }

std::array<bool, 3> percolating_axes(const UnitCellGeometry& g, Phase phase) { return flood(g, phase).percolates; }

std::string geometry_hash(const UnitCellGeometry& g) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint8_t b) {
        h ^= b;
        h *= 1099511628211ULL;
    };
    for (int v : {g.dim(), g.n()})
        for (int s = 0; s < 4; ++s) mix(static_cast<std::uint8_t>((static_cast<unsigned>(v) >> (8 * s)) & 0xffU));
    for (auto v : g.chi()) mix(v);
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

// ---- transforms ----------------------------------------------------------------

VoxelField inflate(const UnitCellGeometry& g, int k, int N) {
    if (k < 1) throw std::invalid_argument("inflate: 1/eps must be a positive integer");
    if (N < 1 || N % (k * g.n()) != 0)
        throw std::invalid_argument("inflate: N=" + std::to_string(N) + " is not divisible by k*n=" +
                                    std::to_string(k * g.n()));
    const int block = N / (k * g.n());
    VoxelField out{g.dim(), N, std::vector<std::uint8_t>(ipow(N, g.dim()))};
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        std::size_t rest = i;
        std::array<int, 3> cell{0, 0, 0};
        for (int d = g.dim() - 1; d >= 0; --d) {
            const int macro = static_cast<int>(rest % static_cast<std::size_t>(N));
            rest /= static_cast<std::size_t>(N);
            cell[d] = (macro / block) % g.n();
        }
        out.values[i] = g.at(cell);
    }
    return out;
}

UnitCellGeometry cyclic_shift(const UnitCellGeometry& g, std::array<int, 3> shift) {
    std::vector<std::uint8_t> chi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto c = g.coords(i);
        for (int d = 0; d < g.dim(); ++d) c[d] -= shift[d];
        chi[i] = g.at(c);
    }
    return UnitCellGeometry(g.dim(), g.n(), std::move(chi));
}

UnitCellGeometry rotate90(const UnitCellGeometry& g, int axis_a, int axis_b) {
    if (axis_a == axis_b || axis_a < 0 || axis_b < 0 || axis_a >= g.dim() || axis_b >= g.dim())
        throw std::invalid_argument("rotate90: invalid rotation plane");
    std::vector<std::uint8_t> chi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto c = g.coords(i);
        auto old = c;
        old[axis_a] = c[axis_b];
        old[axis_b] = g.n() - 1 - c[axis_a];
        chi[i] = g.at(old);
    }
    return UnitCellGeometry(g.dim(), g.n(), std::move(chi));
}

UnitCellGeometry swap_phases(const UnitCellGeometry& g) {
    std::vector<std::uint8_t> chi(g.chi().begin(), g.chi().end());
    for (auto& v : chi) v = static_cast<std::uint8_t>(1 - v);
    return UnitCellGeometry(g.dim(), g.n(), std::move(chi));
}

// ---- canned geometries ---------------------------------------------------------

namespace {

std::vector<std::uint8_t> filled(int dim, int n, std::uint8_t v) { return std::vector<std::uint8_t>(ipow(n, dim), v); }

int voxels_for(double fraction, int n, const char* what) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
    return static_cast<int>(std::lround(fraction * n));
}

}  // namespace

UnitCellGeometry make_laminate(int dim, int n, double f) {
    const int k = voxels_for(f, n, "laminate fraction");
    UnitCellGeometry shape(dim, n, filled(dim, n, 0));
    auto chi = filled(dim, n, 0);
    for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = shape.coords(i)[0] < k ? 1 : 0;
    return UnitCellGeometry(dim, n, std::move(chi));
}

UnitCellGeometry make_checkerboard(int dim, int n) {
    if (n % 2 != 0) throw std::invalid_argument("checkerboard requires even n");
    UnitCellGeometry shape(dim, n, filled(dim, n, 0));
    auto chi = filled(dim, n, 0);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        const auto c = shape.coords(i);
        int parity = 0;
        for (int d = 0; d < dim; ++d) parity += c[d] >= n / 2 ? 1 : 0;
        chi[i] = parity % 2 == 0 ? 1 : 0;
    }
    return UnitCellGeometry(dim, n, std::move(chi));
}

UnitCellGeometry make_channel(int dim, int n, double w) {
    const int k = voxels_for(w, n, "channel width");
    const int start = (n - k) / 2;
    UnitCellGeometry shape(dim, n, filled(dim, n, 0));
    auto chi = filled(dim, n, 0);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        const int j = shape.coords(i)[1];
        chi[i] = (j >= start && j < start + k) ? 1 : 0;
    }
    return UnitCellGeometry(dim, n, std::move(chi));
}

UnitCellGeometry make_centered_cube(int dim, int n, double a) {
    const int k = voxels_for(a, n, "cube size");
    const int start = (n - k) / 2;
    UnitCellGeometry shape(dim, n, filled(dim, n, 0));
    auto chi = filled(dim, n, 1);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        const auto c = shape.coords(i);
        bool inside = true;
        for (int d = 0; d < dim; ++d) inside = inside && c[d] >= start && c[d] < start + k;
        if (inside) chi[i] = 0;
    }
    return UnitCellGeometry(dim, n, std::move(chi));
}

UnitCellGeometry make_random_connected(int dim, int n, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("random geometry requires n >= 4");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> boxes(1, 3);
    std::uniform_int_distribution<int> extent(2, std::max(2, (3 * n) / 5));
    std::uniform_int_distribution<int> offset(0, n - 1);
    UnitCellGeometry shape(dim, n, filled(dim, n, 0));
    for (int attempt = 0; attempt < 10000; ++attempt) {
        auto chi = filled(dim, n, 1);
        const int count = boxes(rng);
        for (int b = 0; b < count; ++b) {
            std::array<int, 3> lo{0, 0, 0};
            std::array<int, 3> len{1, 1, 1};
            for (int d = 0; d < dim; ++d) {
                lo[d] = offset(rng);
                len[d] = extent(rng);
            }
            for (std::size_t i = 0; i < chi.size(); ++i) {
                const auto c = shape.coords(i);
                bool inside = true;
                for (int d = 0; d < dim; ++d) inside = inside && ((c[d] - lo[d] + n) % n) < len[d];
                if (inside) chi[i] = 0;
            }
        }
        UnitCellGeometry g(dim, n, std::move(chi));
        if (!g.has_both_phases() || !connectivity(g, Phase::Solid) || !connectivity(g, Phase::Fluid)) continue;
        const auto perc = percolating_axes(g, Phase::Fluid);
        bool all = true;
        for (int d = 0; d < dim; ++d) all = all && perc[d];
        if (all) return g;
    }
    throw DegenerateGeometry("random geometry: no admissible sample found");
}

}  // namespace thermoporo
