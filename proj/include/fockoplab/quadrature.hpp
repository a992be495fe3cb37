#pragma once

#include <functional>

namespace fockoplab::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;       // estimated absolute error
    long evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Panels are split worst-first until the summed error estimate drops below
/// max(abs_tol, rel_tol * |integral|) or the panel budget runs out.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_panels = 4000);

}  // namespace fockoplab::quad
