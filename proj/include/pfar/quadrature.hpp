#pragma once

#include <vector>

namespace pfar {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

// Controls for the composite rule used for every frequency-domain integral.
// The half-interval (0, pi] is cut into `base_panels` equal panels (more when
// an oscillating factor needs them); the panel touching 0 is replaced by a
// geometric sequence of panels shrinking by `grading_ratio` until
// `inner_cutoff`. Callers account for (0, inner_cutoff] analytically.
struct QuadratureSpec {
    int order = 20;
    int base_panels = 16;
    double grading_ratio = 0.5;
    double inner_cutoff = 1e-10;
    double rel_tol = 1e-8;
    int max_doublings = 6;
    // Largest phase advance (radians) of an oscillating factor over one panel.
    double max_phase_per_panel = 8.0;
};

// Nodes and weights for the integral over [inner_cutoff, upper].
struct Mesh {
    std::vector<double> nodes;
    std::vector<double> weights;
    double inner_cutoff = 0.0;
    int panels = 0;
};

// `oscillation` is the largest angular frequency w of a cos(w x) factor the
// mesh must resolve; 0 for non-oscillatory integrands.
Mesh graded_mesh(const QuadratureSpec& spec, double upper, double oscillation, int panel_multiplier = 1);

}  // namespace pfar
