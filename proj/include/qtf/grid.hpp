#ifndef QTF_GRID_HPP
#define QTF_GRID_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qtf/mat3.hpp"

namespace qtf {

// Whole-domain boundary treatment: a box carries no-slip walls for the
// velocity and homogeneous Neumann for cell-centered fields; periodic
// wraps every axis.
enum class Domain { box, periodic };

// Per-field boundary condition.
enum class Bc { periodic, neumann, noslip };

// Uniform structured grid over a 2D or 3D box. Cell centers sit at
// (i+1/2) h; 2D grids carry full 3x3 tensors and in-plane velocity.
struct Grid {
    int dim = 2;
    std::array<int, 3> n{0, 0, 1};      // cells per axis (n[2] = 1 in 2D)
    std::array<double, 3> h{0.0, 0.0, 0.0};
    Domain domain = Domain::box;

    // Throws std::invalid_argument for dim not in {2,3}, fewer than 4
    // cells on an axis, or non-positive spacing.
    static Grid make(int dim, std::array<int, 3> cells, double spacing, Domain dom);

    bool periodic() const { return domain == Domain::periodic; }
    long cells() const { return static_cast<long>(n[0]) * n[1] * n[2]; }
    double cell_volume() const {
        double v = h[0] * h[1];
        return dim == 3 ? v * h[2] : v;
    }
    double volume() const { return cell_volume() * static_cast<double>(cells()); }

    // Row-major in file order: i slowest, k fastest.
    long cell_index(int i, int j, int k) const {
        return (static_cast<long>(i) * n[1] + j) * n[2] + k;
    }
    double coord(int axis, int idx) const { return (idx + 0.5) * h[static_cast<size_t>(axis)]; }

    bool operator==(const Grid&) const = default;
};

// Default cell-field Bc for the domain kind.
inline Bc cell_bc(const Grid& g) { return g.periodic() ? Bc::periodic : Bc::neumann; }

struct ScalarField {
    Grid g;
    Bc bc = Bc::neumann;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(const Grid& grid, Bc b) : g(grid), bc(b), v(static_cast<size_t>(grid.cells()), 0.0) {}
    explicit ScalarField(const Grid& grid) : ScalarField(grid, cell_bc(grid)) {}
    double& at(long c) { return v[static_cast<size_t>(c)]; }
    double at(long c) const { return v[static_cast<size_t>(c)]; }
};

struct TensorField {
    Grid g;
    Bc bc = Bc::neumann;
    std::vector<double> v;  // 9 entries per cell, row-major matrix within cell

    TensorField() = default;
    TensorField(const Grid& grid, Bc b)
        : g(grid), bc(b), v(static_cast<size_t>(grid.cells()) * 9, 0.0) {}
    explicit TensorField(const Grid& grid) : TensorField(grid, cell_bc(grid)) {}

    Mat3 at(long c) const {
        Mat3 m;
        const double* p = &v[static_cast<size_t>(c) * 9];
        for (int i = 0; i < 9; ++i) m.m[static_cast<size_t>(i)] = p[i];
        return m;
    }
    void set(long c, const Mat3& m) {
        double* p = &v[static_cast<size_t>(c) * 9];
        for (int i = 0; i < 9; ++i) p[i] = m.m[static_cast<size_t>(i)];
    }
    void add(long c, const Mat3& m) {
        double* p = &v[static_cast<size_t>(c) * 9];
        for (int i = 0; i < 9; ++i) p[i] += m.m[static_cast<size_t>(i)];
    }
};

// MAC staggered velocity: component a lives on faces normal to axis a.
// Box domains store the wall faces too; they are pinned to zero and
// excluded from all solves (no-slip).
struct VectorField {
    Grid g;
    Bc bc = Bc::noslip;
    std::array<std::vector<double>, 3> comp;
    std::array<std::array<int, 3>, 3> ext{};  // ext[a] = lattice extents of comp a

    VectorField() = default;
    explicit VectorField(const Grid& grid)
        : g(grid), bc(grid.periodic() ? Bc::periodic : Bc::noslip) {
        for (int a = 0; a < 3; ++a) {
            for (int d = 0; d < 3; ++d) ext[static_cast<size_t>(a)][static_cast<size_t>(d)] = grid.n[static_cast<size_t>(d)];
            if (a < grid.dim && !grid.periodic())
                ext[static_cast<size_t>(a)][static_cast<size_t>(a)] = grid.n[static_cast<size_t>(a)] + 1;
        }
        for (int a = 0; a < grid.dim; ++a)
            comp[static_cast<size_t>(a)].assign(static_cast<size_t>(faces(a)), 0.0);
    }

    long faces(int a) const {
        const auto& e = ext[static_cast<size_t>(a)];
        return static_cast<long>(e[0]) * e[1] * e[2];
    }
    long findex(int a, int i, int j, int k) const {
        const auto& e = ext[static_cast<size_t>(a)];
        return (static_cast<long>(i) * e[1] + j) * e[2] + k;
    }
    double fat(int a, long f) const { return comp[static_cast<size_t>(a)][static_cast<size_t>(f)]; }
    double& fat(int a, long f) { return comp[static_cast<size_t>(a)][static_cast<size_t>(f)]; }
};

void require_same_grid(const Grid& a, const Grid& b, const char* who);

// Discrete L2 inner products (cell-volume weights, deterministic
// pairwise-tree summation).
double dot(const ScalarField& a, const ScalarField& b);
double dot(const TensorField& a, const TensorField& b);
double dot(const VectorField& a, const VectorField& b);
double norm_l2(const ScalarField& a);
double norm_l2(const TensorField& a);
double norm_l2(const VectorField& a);

double field_mean(const ScalarField& a);
double max_abs_trace(const TensorField& q);
double max_asymmetry(const TensorField& q);
double max_fnorm(const TensorField& q);
bool all_finite(const ScalarField& a);
bool all_finite(const TensorField& a);
bool all_finite(const VectorField& a);

}  // namespace qtf

#endif
