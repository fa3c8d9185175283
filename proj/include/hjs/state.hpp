#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "hjs/grid.hpp"
#include "hjs/phase.hpp"

namespace hjs {

// Complex deformation parameter kappa = re + i im. Treated as a plain number;
// the library works in units with m = omega = 1 unless a run says otherwise.
struct Kappa {
    double re = 1.0;
    double im = 0.0;

    std::complex<double> value() const { return {re, im}; }
    double abs() const { return std::hypot(re, im); }
    double abs2() const { return re * re + im * im; }
    bool is_real() const { return im == 0.0; }
    // theta = im/re; undefined (throws ParameterError) when re == 0.
    double theta() const;
    std::string str() const;
};

void require_nonzero(const Kappa& kappa);

// Amplitude/action pair on a grid. R >= 0 is enforced at construction.
struct EnsembleState {
    RealField R;
    RealField S;
    Grid grid;
    bool normalized = false;

    EnsembleState() = default;
    EnsembleState(RealField R_, RealField S_, Grid grid_, bool normalized_ = false);
};

struct WaveField {
    ComplexField psi;
    Grid grid;

    WaveField() = default;
    WaveField(ComplexField psi_, Grid grid_);
};

struct Potential {
    enum class Kind { free, harmonic, quartic, tabulated };
    Kind kind = Kind::free;
    double m = 1.0;
    double omega = 0.0;
    double lambda = 0.0;
    RealField values;

    static Potential free_particle();
    static Potential harmonic(double m, double omega);
    static Potential quartic(double m, double omega, double lambda);
    static Potential tabulated(RealField values);
    std::string describe() const;
};

// Unit total Born probability. For an EnsembleState only R is scaled (the Born
// density of an embedded state is R^2 whatever kappa is). For a WaveField with
// theta != 0 the Born density is the weight; see observables.
EnsembleState normalize(const EnsembleState& state);
WaveField normalize(const WaveField& field, double theta, const PhaseAnchor& anchor = {});

RealField evaluate_potential(const Potential& V, const Grid& grid);

}  // namespace hjs
