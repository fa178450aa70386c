#include "qtf/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qtf/parallel.hpp"
#include "qtf/qtensor.hpp"

namespace qtf {

Grid Grid::make(int dim, std::array<int, 3> cells, double spacing, Domain dom) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
    if (!(spacing > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    Grid g;
    g.dim = dim;
    g.domain = dom;
    for (int a = 0; a < dim; ++a) {
        if (cells[static_cast<size_t>(a)] < 4)
            throw std::invalid_argument("grid: need at least 4 cells per axis");
        g.n[static_cast<size_t>(a)] = cells[static_cast<size_t>(a)];
        g.h[static_cast<size_t>(a)] = spacing;
    }
    if (dim == 2) {
        g.n[2] = 1;
        g.h[2] = 0.0;
    }
    return g;
}

void require_same_grid(const Grid& a, const Grid& b, const char* who) {
    if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

double dot(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.g, b.g, "dot");
    const double* x = a.v.data();
    const double* y = b.v.data();
    return a.g.cell_volume() *
           tree_sum(a.g.cells(), [&](long i) { return x[i] * y[i]; });
}

double dot(const TensorField& a, const TensorField& b) {
    require_same_grid(a.g, b.g, "dot");
    const double* x = a.v.data();
    const double* y = b.v.data();
    return a.g.cell_volume() *
           tree_sum(a.g.cells() * 9, [&](long i) { return x[i] * y[i]; });
}

double dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.g, b.g, "dot");
    double s = 0.0;
    for (int c = 0; c < a.g.dim; ++c) {
        const double* x = a.comp[static_cast<size_t>(c)].data();
        const double* y = b.comp[static_cast<size_t>(c)].data();
        s += tree_sum(a.faces(c), [&](long i) { return x[i] * y[i]; });
    }
    return a.g.cell_volume() * s;
}

double norm_l2(const ScalarField& a) { return std::sqrt(dot(a, a)); }
double norm_l2(const TensorField& a) { return std::sqrt(dot(a, a)); }
double norm_l2(const VectorField& a) { return std::sqrt(dot(a, a)); }

double field_mean(const ScalarField& a) {
    const double* x = a.v.data();
    return tree_sum(a.g.cells(), [&](long i) { return x[i]; }) /
           static_cast<double>(a.g.cells());
}

double max_abs_trace(const TensorField& q) {
    double v = 0.0;
    for (long c = 0; c < q.g.cells(); ++c) v = std::max(v, std::fabs(trace(q.at(c))));
    return v;
}

double max_asymmetry(const TensorField& q) {
    double v = 0.0;
    for (long c = 0; c < q.g.cells(); ++c) v = std::max(v, asymmetry(q.at(c)));
    return v;
}

double max_fnorm(const TensorField& q) {
    double v = 0.0;
    for (long c = 0; c < q.g.cells(); ++c) v = std::max(v, fnorm(q.at(c)));
    return v;
}

bool all_finite(const ScalarField& a) {
    for (double x : a.v)
        if (!std::isfinite(x)) return false;
    return true;
}
bool all_finite(const TensorField& a) {
    for (double x : a.v)
        if (!std::isfinite(x)) return false;
    return true;
}
bool all_finite(const VectorField& a) {
    for (int c = 0; c < a.g.dim; ++c)
        for (double x : a.comp[static_cast<size_t>(c)])
            if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace qtf
