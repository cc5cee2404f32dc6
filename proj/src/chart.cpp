#include "imdiff/chart.hpp"

#include <cmath>

#include "imdiff/errors.hpp"

namespace imdiff {

CanonicalChart make_rigid_body_chart(std::array<double, 3> inertia, double c_value,
                                     double chi_max, double z_max)
{
    if (c_value <= 0.0 || chi_max <= 0.0 || z_max <= 0.0)
        throw ConfigError("chart: c_value, chi_max and z_max must be positive");
    if (z_max * z_max >= 2.0 * c_value)
        throw ConfigError("chart: z_max^2 must stay below 2C");

    const double ix = inertia[0], iy = inertia[1], iz = inertia[2];
    if (ix <= 0.0 || iy <= 0.0 || iz <= 0.0)
        throw ConfigError("chart: moments of inertia must be positive");

    CanonicalChart chart;
    chart.c_value = c_value;
    chart.chi_max = chi_max;
    chart.z_max = z_max;
    chart.h = [=](double chi, double z) {
        const double rho2 = 2.0 * c_value - z * z;
        const double phi = chi * std::exp(0.5 * z * z);
        const double c = std::cos(phi), s = std::sin(phi);
        return 0.5 * (rho2 * (c * c / ix + s * s / iy) + z * z / iz);
    };
    chart.grad_h = [=](double chi, double z) -> std::array<double, 2> {
        const double rho2 = 2.0 * c_value - z * z;
        const double g = std::exp(0.5 * z * z);
        const double phi = chi * g;
        const double c = std::cos(phi), s = std::sin(phi);
        const double a = c * c / ix + s * s / iy;
        const double b = s * c * (1.0 / iy - 1.0 / ix);
        const double h_chi = rho2 * b * g;
        const double h_z = -z * a + rho2 * b * phi * z + z / iz;
        return {h_chi, h_z};
    };
    return chart;
}

CanonicalChart make_constant_chart(double chi_max, double z_max, double h0)
{
    CanonicalChart chart;
    chart.c_value = z_max * z_max; // unused by a constant H; keep z_max^2 < 2C
    chart.chi_max = chi_max;
    chart.z_max = z_max;
    chart.h = [h0](double, double) { return h0; };
    chart.grad_h = [](double, double) -> std::array<double, 2> { return {0.0, 0.0}; };
    return chart;
}

std::array<double, 2> chart_gradient(const CanonicalChart& chart, double chi, double z)
{
    if (chart.grad_h) return chart.grad_h(chi, z);
    const double h = 1e-4 * std::max({1.0, chart.chi_max, chart.z_max});
    const double h_chi = (chart.h(chi + h, z) - chart.h(chi - h, z)) / (2.0 * h);
    const double h_z = (chart.h(chi, z + h) - chart.h(chi, z - h)) / (2.0 * h);
    return {h_chi, h_z};
}

std::array<double, 2> canonical_velocity(const CanonicalChart& chart, double chi, double z)
{
    if (!chart.contains(chi, z))
        throw ConfigError("canonical_velocity: point outside the chart rectangle");
    const auto g = chart_gradient(chart, chi, z);
    return {-g[1], g[0]};
}

double advective_cap(const CanonicalChart& chart)
{
    // Dense wall scan; the margin covers the sampling gap so that any corner
    // node of any solver grid on the same rectangle stays below the cap.
    constexpr int kSamples = 4096;
    double hmax = -HUGE_VAL;
    for (int i = 0; i <= kSamples; ++i) {
        const double chi = -chart.chi_max + 2.0 * chart.chi_max * i / kSamples;
        const double z = -chart.z_max + 2.0 * chart.z_max * i / kSamples;
        hmax = std::max(hmax, chart.h(chi, chart.z_max));
        hmax = std::max(hmax, chart.h(chi, -chart.z_max));
        hmax = std::max(hmax, chart.h(chart.chi_max, z));
        hmax = std::max(hmax, chart.h(-chart.chi_max, z));
    }
    return hmax + 1e-6 * std::max(1.0, std::abs(hmax));
}

EffectiveDrift make_effective_drift(const CanonicalChart& chart)
{
    return EffectiveDrift{&chart, advective_cap(chart)};
}

ChartOrbitResult integrate_orbit(const CanonicalChart& chart,
                                 std::array<double, 2> q0, double dt, int steps)
{
    if (!std::isfinite(dt * steps) || steps < 0)
        throw ConfigError("integrate_orbit: dt*steps must be finite");
    if (!chart.contains(q0[0], q0[1]))
        throw ConfigError("integrate_orbit: start point outside the chart rectangle");

    const auto rhs = [&chart](std::array<double, 2> q) -> std::array<double, 2> {
        const auto g = chart_gradient(chart, q[0], q[1]);
        return {-g[1], g[0]};
    };

    ChartOrbitResult out;
    out.points.reserve(static_cast<size_t>(steps) + 1);
    out.points.push_back(q0);

    std::array<double, 2> q = q0;
    for (int n = 0; n < steps; ++n) {
        const auto k1 = rhs(q);
        const auto k2 = rhs({q[0] + 0.5 * dt * k1[0], q[1] + 0.5 * dt * k1[1]});
        const auto k3 = rhs({q[0] + 0.5 * dt * k2[0], q[1] + 0.5 * dt * k2[1]});
        const auto k4 = rhs({q[0] + dt * k3[0], q[1] + dt * k3[1]});
        const std::array<double, 2> qn{
            q[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            q[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
        if (!chart.contains(qn[0], qn[1])) {
            out.truncated = true;
            break;
        }
        q = qn;
        out.points.push_back(q);
    }

    const double h0 = chart.h(q0[0], q0[1]);
    const double h1 = chart.h(q[0], q[1]);
    out.energy_drift_rel = std::abs(h1 - h0) / std::max(std::abs(h0), 1e-300);
    return out;
}

} // namespace imdiff
