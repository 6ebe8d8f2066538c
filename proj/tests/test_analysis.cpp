#include <cmath>

#include "doctest.h"
#include "gpeoct/fft.hpp"
#include "gpeoct/observables.hpp"
#include "gpeoct/propagation.hpp"
#include "gpeoct/wigner.hpp"
#include "support/testutil.hpp"

using namespace gpeoct;
using testutil::coherent_state;

namespace {

struct Moments {
    double mean_x, mean_p, std_x, std_p;
};

Moments wigner_moments(const WignerMap& w) {
    double mass = 0, mx = 0, mp = 0, mxx = 0, mpp = 0;
    for (int i = 0; i < w.n_x(); ++i)
        for (int a = 0; a < w.n_p(); ++a) {
            const double v = w.value(i, a);
            mass += v;
            mx += v * w.x_axis[i];
            mp += v * w.p_axis[a];
            mxx += v * w.x_axis[i] * w.x_axis[i];
            mpp += v * w.p_axis[a] * w.p_axis[a];
        }
    Moments m;
    m.mean_x = mx / mass;
    m.mean_p = mp / mass;
    m.std_x = std::sqrt(mxx / mass - m.mean_x * m.mean_x);
    m.std_p = std::sqrt(mpp / mass - m.mean_p * m.mean_p);
    return m;
}

} // namespace

TEST_CASE("groundstate Wigner map is a minimum-uncertainty Gaussian") {
    const Grid1D g(-10.0, 10.0, 256, 1.0, 10);
    Wave1D psi = coherent_state(g, 0.0);
    normalize(psi);
    const WignerMap w = wigner(psi);

    CHECK(w.max_imag_residue < 1e-10);
    const Moments m = wigner_moments(w);
    CHECK(std::abs(m.mean_x) < 1e-8);
    CHECK(std::abs(m.mean_p) < 1e-8);
    CHECK(m.std_x * m.std_p == doctest::Approx(0.5).epsilon(0.02));
    // circular level sets for the oscillator groundstate
    CHECK(m.std_x == doctest::Approx(m.std_p).epsilon(0.02));
}

TEST_CASE("Wigner translation covariance") {
    const Grid1D g(-10.0, 14.0, 256, 1.0, 10);
    Wave1D psi = coherent_state(g, 3.0);
    normalize(psi);
    const Moments m = wigner_moments(wigner(psi));
    CHECK(m.mean_x == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(std::abs(m.mean_p) < 1e-8);
    CHECK(m.std_x * m.std_p == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("two-lobe superposition shows alternating-sign fringes at x = 0") {
    const Grid1D g(-12.0, 12.0, 384, 1.0, 10);
    Wave1D psi(g);
    const double d = 4.0;
    for (int i = 0; i < g.n_x; ++i) {
        const double xl = g.x(i) + d / 2, xr = g.x(i) - d / 2;
        psi.values[i] = std::exp(-0.5 * xl * xl) + std::exp(-0.5 * xr * xr);
    }
    normalize(psi);
    const WignerMap w = wigner(psi);

    // two positive lobes at +/- d/2
    int i_left = 0, i_right = 0, i_zero = 0;
    for (int i = 0; i < w.n_x(); ++i) {
        if (std::abs(w.x_axis[i] + d / 2) < g.dx() / 2) i_left = i;
        if (std::abs(w.x_axis[i] - d / 2) < g.dx() / 2) i_right = i;
        if (std::abs(w.x_axis[i]) < g.dx() / 2) i_zero = i;
    }
    const int a0 = w.n_p() / 2;
    CHECK(w.value(i_left, a0) > 0.0);
    CHECK(w.value(i_right, a0) > 0.0);

    // sign changes along p through the interference region
    double peak = 0.0;
    for (int a = 0; a < w.n_p(); ++a) peak = std::max(peak, std::abs(w.value(i_zero, a)));
    int sign_changes = 0;
    int last_sign = 0;
    for (int a = 0; a < w.n_p(); ++a) {
        const double v = w.value(i_zero, a);
        if (std::abs(v) < 1e-6 * peak) continue;
        const int s = v > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++sign_changes;
        last_sign = s;
    }
    CHECK(sign_changes >= 3);
}

TEST_CASE("Wigner marginals recover both densities") {
    const Grid1D g(-10.0, 10.0, 256, 1.0, 10);
    Wave1D psi = testutil::random_smooth_field(g, 31);
    const WignerMap w = wigner(psi);
    const double dp = w.p_axis[1] - w.p_axis[0];

    // marginal over p equals 2 pi |psi(x)|^2
    for (int i = 0; i < g.n_x; i += 9) {
        double acc = 0.0;
        for (int a = 0; a < w.n_p(); ++a) acc += w.value(i, a) * dp;
        const double expect = 2.0 * M_PI * std::norm(psi.values[i]);
        CHECK(acc == doctest::Approx(expect).epsilon(1e-6));
    }

    // marginal over x is proportional to the momentum density at the bins
    // shared with the state's own transform
    Fft fft(g.n_x);
    std::vector<cplx> spec = psi.values;
    fft.forward(spec);
    double ratio = 0.0;
    bool have_ratio = false;
    for (int a = 0; a < w.n_p(); a += 2) {
        const int k_signed = a - w.n_p() / 2; // even by construction
        const int q = ((k_signed / 2) % g.n_x + g.n_x) % g.n_x;
        const double mom_density = std::norm(spec[q]);
        if (mom_density < 1e-8) continue;
        double acc = 0.0;
        for (int i = 0; i < g.n_x; ++i) acc += w.value(i, a) * g.dx();
        if (!have_ratio) {
            ratio = acc / mom_density;
            have_ratio = true;
        } else {
            CHECK(acc / mom_density == doctest::Approx(ratio).epsilon(1e-6));
        }
    }
    CHECK(have_ratio);
}

TEST_CASE("Wigner parity and phase invariance") {
    const Grid1D g(-10.0, 10.0, 128, 1.0, 10);
    Wave1D even(g);
    for (int i = 0; i < g.n_x; ++i) {
        const double x = g.x(i);
        even.values[i] = std::exp(-0.4 * x * x) * (1.0 + 0.3 * std::cos(2.0 * M_PI * x / g.length() * 2));
    }
    normalize(even);
    const WignerMap w = wigner(even);
    for (int i = 0; i < w.n_x(); i += 7)
        for (int a = 1; a < w.n_p(); a += 5)
            CHECK(std::abs(w.value(i, a) - w.value(i, w.n_p() - a)) < 1e-10);

    Wave1D phased = even;
    for (auto& v : phased.values) v *= std::exp(cplx(0.0, 2.2));
    const WignerMap w2 = wigner(phased);
    double diff = 0.0;
    for (size_t q = 0; q < w.values.size(); ++q)
        diff = std::max(diff, std::abs(w.values[q] - w2.values[q]));
    CHECK(diff < 1e-12);
}

TEST_CASE("wigner rejects 2D fields") {
    const Grid2D g(-4, 4, 16, -4, 4, 16, 1.0, 10);
    Wave2D psi(g);
    psi.values[0] = 1.0;
    CHECK_THROWS_AS((void)wigner(psi), DimensionError);
}

TEST_CASE("time-integrated Wigner of a stationary state is T times the snapshot") {
    // dt small enough that the splitting bias of the propagated groundstate
    // stays below the stride-error budget
    const Grid1D g(-8.0, 8.0, 128, 2.0, 2000);
    const Potential1D well{ShiftedHarmonic{0.0}};
    Wave1D gs = groundstate_imaginary_time(g, well, 0.0, 0.0);

    PropagationSpec spec;
    spec.grid = g;
    spec.potential = &well;
    spec.control.assign(g.n_nodes(), 0.0);
    spec.scheme = Scheme::split_operator;
    const auto traj = propagate_split_operator(spec, gs);

    const WignerMap single = wigner(gs);
    const WignerMap integrated = wigner_time_integrated(traj, g);
    CHECK(integrated.time_integrated);
    double peak = 0.0;
    for (double v : single.values) peak = std::max(peak, std::abs(v));
    double diff = 0.0;
    for (size_t q = 0; q < single.values.size(); ++q)
        diff = std::max(diff,
                        std::abs(integrated.values[q] - g.t_final * single.values[q]));
    CHECK(diff < 1e-6 * g.t_final * peak);
}

TEST_CASE("suddenly displaced state traces an annulus over one period") {
    const double x0 = 2.0;
    const Grid1D g(-4.0, 8.0, 240, 2.0 * M_PI, 400);
    const Potential1D well{ShiftedHarmonic{x0}};
    Wave1D psi0 = coherent_state(g, 0.0);
    normalize(psi0);

    PropagationSpec spec;
    spec.grid = g;
    spec.potential = &well;
    spec.control.assign(g.n_nodes(), 1.0); // well pinned at x0, state starts at 0
    spec.scheme = Scheme::split_operator;
    const auto traj = propagate_split_operator(spec, psi0);
    const WignerMap w = wigner_time_integrated(traj, g, 4);

    // radial profile about (x0, 0)
    const double dp = w.p_axis[1] - w.p_axis[0];
    const int n_bins = 40;
    std::vector<double> mass(n_bins, 0.0);
    std::vector<int> count(n_bins, 0);
    for (int i = 0; i < w.n_x(); ++i)
        for (int a = 0; a < w.n_p(); ++a) {
            const double r = std::hypot(w.x_axis[i] - x0, w.p_axis[a]);
            const int b = static_cast<int>(r / dp);
            if (b < n_bins) {
                mass[b] += w.value(i, a);
                count[b] += 1;
            }
        }
    int peak_bin = 0;
    double peak_val = -1e300;
    for (int b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        const double avg = mass[b] / count[b];
        if (avg > peak_val) {
            peak_val = avg;
            peak_bin = b;
        }
    }
    const double r_peak = (peak_bin + 0.5) * dp;
    CHECK(std::abs(r_peak - x0) <= 1.5 * dp);
}

TEST_CASE("observable record of reference states") {
    const Grid1D g(-10.0, 14.0, 400, 1.0, 10);
    const Potential1D well{ShiftedHarmonic{4.0}};

    Wave1D gs = coherent_state(g, 0.0);
    normalize(gs);
    const Observables o = observables(gs, well, 0.0, 0.0);
    CHECK(o.norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(o.mean_x) < 1e-8);
    CHECK(o.std_x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(o.std_p == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(o.energy == doctest::Approx(0.5).epsilon(1e-4));

    // same state displaced into the lambda = 1 well
    Wave1D moved = coherent_state(g, 4.0);
    normalize(moved);
    const Observables om = observables(moved, well, 1.0, 0.0);
    CHECK(om.mean_x == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(om.energy == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(om.std_x == doctest::Approx(o.std_x).epsilon(1e-8));

    const double k1 = 2.0 * M_PI / g.length() * 7;
    Wave1D plane(g);
    for (int i = 0; i < g.n_x; ++i) plane.values[i] = std::exp(cplx(0.0, k1 * g.x(i)));
    normalize(plane);
    const Observables op = observables(plane, well, 0.0, 0.0);
    CHECK(std::abs(op.mean_p - k1) < 1e-10);
}
