#include <doctest.h>

#include <cmath>
#include <random>

#include "cptsim/analytic6.hpp"
#include "cptsim/errors.hpp"
#include "oracles/frj.hpp"

using namespace cpt;

namespace {

SixLevelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto p = pump_rates(u(rng), u(rng), u(rng) - 0.5, u(rng) - 0.5, hz(3000.0 * u(rng) + 10.0), hz(1e5));
    p.Gamma = hz(50.0 + 2000.0 * u(rng));
    p.Omega = hz(20000.0 * (u(rng) - 0.5));
    return p;
}

}  // namespace

TEST_CASE("pump rates") {
    const double v0 = 3.0, gp = 2.0, s = v0 * v0 / gp;
    auto p = pump_rates(0.4, 0.4, 0.1, 0.1, v0, gp);
    CHECK(p.W1 - p.W2 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p.W12 == 0.0);
    p = pump_rates(1.0, 1.0, 0.0, 0.0, v0, gp);
    CHECK(p.W1 == doctest::Approx(2.0 / 3.0 * s).epsilon(1e-15));
    CHECK(p.W == doctest::Approx(p.W1 + p.W2).epsilon(1e-15));
    p = pump_rates(0.2, 0.4, 0.0, 0.0, v0, gp);
    CHECK(p.W12 == doctest::Approx(0.2 * s / (4.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(p.W12 / s == doctest::Approx(0.02887).epsilon(1e-4));
    CHECK(p.W1 >= 0.0);
    CHECK(p.W2 >= 0.0);
}

TEST_CASE("symmetric uncoupled system has f = R = J = 0") {
    SixLevelParams p;
    p.W1 = p.W2 = 40.0;
    p.W = 80.0;
    p.Gamma = 10.0;
    p.Omega = 3.0;
    const auto s = frj_steady(p);
    CHECK(s.f == 0.0);
    CHECK(s.R == 0.0);
    CHECK(s.J == 0.0);
}

TEST_CASE("on resonance without D12 the stationary point is elementary") {
    SixLevelParams p;
    p.W1 = 30.0;
    p.W2 = 70.0;
    p.W = 100.0;
    p.W12 = -12.0;
    p.Delta = 4.0;
    p.Omega = 4.0;
    p.Gamma = 20.0;
    const auto s = frj_steady(p);
    CHECK(s.R == doctest::Approx(-p.W12 / (p.Gamma + p.W)).epsilon(1e-14));
    CHECK(s.f == doctest::Approx((p.W2 - p.W1) / (p.Gamma + p.W)).epsilon(1e-14));
    CHECK(s.J == doctest::Approx(0.0).epsilon(1e-14));
    const double a = p.Gamma + p.W;
    CHECK(rho_exc_closed_form(p) ==
          doctest::Approx((p.W - ((30.0 - 70.0) * (30.0 - 70.0) + 4.0 * p.W12 * p.W12) / a) / p.gamma).epsilon(1e-13));
}

TEST_CASE("numeric 3x3 solve matches the symbolic stationary point") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(rng);
        const auto s = frj_steady(p);
        const auto ref = oracle::frj_symbolic(p.Gamma + p.W, p.Omega - p.Delta, p.D12, p.W1 - p.W2, p.W12);
        const double scale = std::abs(ref.f) + std::abs(ref.R) + std::abs(ref.J);
        CHECK(std::abs(s.f - ref.f) <= 1e-12 * scale);
        CHECK(std::abs(s.R - ref.R) <= 1e-12 * scale);
        CHECK(std::abs(s.J - ref.J) <= 1e-12 * scale);
    }
}

TEST_CASE("closed form equals the (f, R, J) expression for 1000 random draws") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_params(rng);
        CHECK(rho_exc_closed_form(p) == doctest::Approx(rho_exc_from_frj(p, frj_steady(p))).epsilon(1e-12));
    }
}

TEST_CASE("equal profiles remove the Raman dependence") {
    for (double om : {-1e4, 0.0, 37.0, 1e4}) {
        auto p = pump_rates(0.3, 0.3, 0.05, -0.02, hz(1000.0), hz(1e5));
        p.Gamma = hz(500.0);
        p.Omega = hz(om);
        auto p0 = p;
        p0.Omega = 0.0;
        CHECK(rho_exc_closed_form(p) == doctest::Approx(rho_exc_closed_form(p0)).epsilon(1e-14));
    }
}

TEST_CASE("far-detuned limit") {
    auto p = pump_rates(0.3, 0.05, 0.02, -0.04, hz(2000.0), hz(1e5));
    p.Gamma = hz(400.0);
    const double a = p.Gamma + p.W;
    const double dw = p.W1 - p.W2;
    p.Omega = 1e12;
    // the CPT term leaves 4 W12^2 / a behind, so only the population term survives
    CHECK(rho_exc_closed_form(p) == doctest::Approx((p.W - dw * dw / a) / p.gamma).epsilon(1e-9));
    CHECK(rho_exc_from_frj(p, frj_steady(p)) == doctest::Approx((p.W - dw * dw / a) / p.gamma).epsilon(1e-9));
    // with W12 = 0 this coincides with W - ((W1-W2)^2 + 4 W12^2)/(Gamma+W)
    auto q = p;
    q.W12 = 0.0;
    CHECK(rho_exc_closed_form(q) ==
          doctest::Approx((q.W - (dw * dw + 4.0 * q.W12 * q.W12) / a) / q.gamma).epsilon(1e-9));
}

TEST_CASE("CPT term width") {
    SixLevelParams p;
    p.W1 = 10.0;
    p.W2 = 30.0;
    p.W = 40.0;
    p.Gamma = 5.0;
    CHECK(cpt_term_width(p) == doctest::Approx(2.0 * 45.0).epsilon(1e-15));
    p.D12 = 6.0;
    CHECK(cpt_term_width(p) == doctest::Approx(2.0 * std::sqrt(45.0 * 45.0 + 144.0)).epsilon(1e-15));
}

TEST_CASE("width is affine in intensity with intercept 2 Gamma") {
    // W proportional to |V0|^2, i.e. to intensity
    const double gamma = hz(750.0);
    for (double i : {0.0, 1.0, 2.0, 4.0}) {
        auto p = pump_rates(0.3, 0.1, 0.0, 0.0, hz(500.0) * std::sqrt(i), hz(1e5));
        p.Gamma = gamma;
        const auto p1 = [&] {
            auto q = pump_rates(0.3, 0.1, 0.0, 0.0, hz(500.0), hz(1e5));
            q.Gamma = gamma;
            return q;
        }();
        CHECK(cpt_term_width(p) == doctest::Approx(2.0 * gamma + i * (cpt_term_width(p1) - 2.0 * gamma)).epsilon(1e-13));
    }
}

TEST_CASE("sampled half-maximum width matches the formula") {
    auto p = pump_rates(0.35, 0.05, 0.03, -0.06, hz(1500.0), hz(1e5));
    p.Gamma = hz(700.0);
    const double a = p.Gamma + p.W;
    auto cpt_term = [&](double om) {
        auto q = p;
        q.Omega = om;
        auto far = p;
        far.Omega = 1e15;
        return rho_exc_closed_form(q) - rho_exc_closed_form(far);
    };
    // locate the half-maximum crossings by bisection on each side of Delta
    const double peak = cpt_term(p.Delta);
    auto crossing = [&](double dir) {
        double lo = p.Delta, hi = p.Delta + dir * 100.0 * a;
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            (std::abs(cpt_term(mid)) > 0.5 * std::abs(peak) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    CHECK(crossing(1.0) - crossing(-1.0) == doctest::Approx(cpt_term_width(p)).epsilon(1e-6));
}

TEST_CASE("non-positive Gamma + W is rejected") {
    SixLevelParams p;
    CHECK_THROWS_AS(frj_steady(p), SolverError);
}

TEST_CASE("interference null: contrast vanishes only at G1 = G2") {
    auto contrast = [](double G1, double G2) {
        double lo = 1e300, hi = -1e300;
        for (int i = -200; i <= 200; ++i) {
            auto p = pump_rates(G1, G2, 0.02, -0.03, hz(1500.0), hz(1e5));
            p.Gamma = hz(750.0);
            p.Omega = p.Delta + hz(25.0 * i);
            const double r = rho_exc_closed_form(p);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return hi - lo;
    };
    CHECK(contrast(0.3, 0.3) <= 1e-10 * contrast(0.3, 0.1));
    CHECK(contrast(0.3, 0.1) > 0.0);
    CHECK(contrast(0.1, 0.3) > 0.0);
}
