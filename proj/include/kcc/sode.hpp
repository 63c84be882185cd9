#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcc {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;
using Tensor3 = std::vector<Mat>;
using Tensor4 = std::vector<Tensor3>;

inline Vec zeros1(int n) { return Vec(n, 0.0); }
inline Mat zeros2(int n) { return Mat(n, Vec(n, 0.0)); }
inline Tensor3 zeros3(int n) { return Tensor3(n, zeros2(n)); }
inline Tensor4 zeros4(int n) { return Tensor4(n, zeros3(n)); }

/// Evaluation point (x, y, t) in the extended phase space of a
/// second-order system; y holds the velocities dx/dt.
struct Jet {
    Vec x;
    Vec y;
    double t = 0.0;
};

/// Thrown when a system evaluation produces a non-finite value.
/// Carries the offending jet.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::string what, Jet jet)
        : std::runtime_error(std::move(what)), jet(std::move(jet)) {}
    Jet jet;
};

/// An n-dimensional second-order system  d2x/dt2 + 2 G(x, y, t) = 0,
/// given by G and, optionally, its analytic first derivatives.
struct SodeSystem {
    int dimension = 0;
    std::function<Vec(const Vec&, const Vec&, double)> g_eval;
    // Optional: n x n matrices dG^i/dy^j and dG^i/dx^j. Empty targets mean
    // "use central finite differences of g_eval".
    std::function<Mat(const Vec&, const Vec&, double)> analytic_dg_dy;
    std::function<Mat(const Vec&, const Vec&, double)> analytic_dg_dx;
    bool time_dependent = false;

    /// Evaluate G at a jet, rejecting non-finite output.
    Vec eval(const Jet& jet) const {
        Vec g = g_eval(jet.x, jet.y, jet.t);
        for (double v : g) {
            if (!std::isfinite(v))
                throw EvaluationError("non-finite G evaluation", jet);
        }
        return g;
    }
};

namespace fd {

/// Step for first derivatives of user-supplied functions:
/// relative 1e-5 with absolute floor 1e-5.
inline double step1(double v) { return std::max(1e-5, 1e-5 * std::abs(v)); }

/// Step for derivatives of quantities that are themselves finite
/// differences (nested first differences).
inline constexpr double kNestedStep = 1e-4;

/// Step for first derivatives of analytically supplied quantities that
/// feed higher-order assemblies; larger than step1 to keep cancellation
/// noise well below the accuracy of the assembled tensors.
inline constexpr double kDeepStep = 1e-2;

/// Step for direct second differences of the user-supplied right-hand
/// side; cancellation noise scales like eps*|G|/h^2, so a wide step is
/// needed to keep it below 1e-10 per component.
inline constexpr double kWideStep = 5e-2;

}  // namespace fd

}  // namespace kcc
