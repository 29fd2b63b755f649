#include "pfar/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pfar {

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1) {
        throw std::invalid_argument("gauss_legendre: order must be positive");
    }
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
    const auto legendre = [order](double x) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
    };
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) {
        rule.nodes[half - 1] = 0.0;
    }
    return rule;
}

namespace {

void append_panel(Mesh& mesh, const GaussLegendreRule& rule, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mesh.nodes.push_back(mid + half * rule.nodes[i]);
        mesh.weights.push_back(half * rule.weights[i]);
    }
    ++mesh.panels;
}

}  // namespace

Mesh graded_mesh(const QuadratureSpec& spec, double upper, double oscillation, int panel_multiplier) {
    if (!(upper > spec.inner_cutoff) || spec.grading_ratio <= 0.0 || spec.grading_ratio >= 1.0) {
        throw std::invalid_argument("graded_mesh: invalid geometry");
    }
    const GaussLegendreRule rule = gauss_legendre(spec.order);

    int panels = spec.base_panels;
    if (oscillation > 0.0) {
        const int needed = static_cast<int>(std::ceil(upper * oscillation / spec.max_phase_per_panel));
        panels = std::max(panels, needed);
    }
    panels *= panel_multiplier;
    const double width = upper / panels;

    Mesh mesh;
    mesh.inner_cutoff = spec.inner_cutoff;
    const std::size_t graded_levels =
        width > spec.inner_cutoff
            ? static_cast<std::size_t>(std::ceil(std::log(spec.inner_cutoff / width) / std::log(spec.grading_ratio)))
            : 0;
    mesh.nodes.reserve((panels + graded_levels) * rule.nodes.size());
    mesh.weights.reserve(mesh.nodes.capacity());

    double hi = width;
    for (std::size_t level = 0; level < graded_levels; ++level) {
        const double lo = std::max(hi * spec.grading_ratio, spec.inner_cutoff);
        append_panel(mesh, rule, lo, hi);
        hi = lo;
    }
    for (int p = 1; p < panels; ++p) {
        append_panel(mesh, rule, p * width, (p + 1) * width);
    }
    return mesh;
}

}  // namespace pfar
