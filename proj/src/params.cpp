#include "qtf/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtf {

double compute_mu(double a, double b, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("compute_mu: requires c > 0");
    const double bb = std::fabs(b);
    auto g = [&](double r) {
        return 0.5 * a * r * r - (bb / 3.0) * r * r * r + 0.125 * c * r * r * r * r;
    };
    // g'(r) = r (a - |b| r + (c/2) r^2); candidate minima at r = 0 and the
    // real roots of the quadratic factor.
    double gmin = g(0.0);
    const double disc = bb * bb - 2.0 * a * c;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        for (double r : {(bb + s) / c, (bb - s) / c})
            if (r > 0.0) gmin = std::min(gmin, g(r));
    }
    return std::max(0.0, -gmin);
}

PotentialParams make_params(double a, double b, double c, double epsilon,
                            double nu, double gamma) {
    if (!(c > 0.0)) throw std::invalid_argument("params: requires c > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("params: requires epsilon > 0");
    if (!(nu > 0.0)) throw std::invalid_argument("params: requires nu > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("params: requires gamma > 0");
    PotentialParams p;
    p.a = a;
    p.b = b;
    p.c = c;
    p.epsilon = epsilon;
    p.nu = nu;
    p.gamma = gamma;
    p.mu = compute_mu(a, b, c);
    return p;
}

}  // namespace qtf
