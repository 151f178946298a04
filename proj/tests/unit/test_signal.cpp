#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "leocrlb/signal.hpp"

using namespace leocrlb;

TEST_CASE("effective frequency") {
    CHECK(effective_frequency(40e9, 0.0, 0.0) == 40e9);
    CHECK(effective_frequency(40e9, 2.66851e-5, 0.0) == doctest::Approx(3.9998932596e10).epsilon(1e-10));
    CHECK(effective_frequency(10e9, 0.0, 100.0) == doctest::Approx(1.00000001e10).epsilon(1e-15));
}

TEST_CASE("omega") {
    SignalProps p;
    p.eff_bandwidth = 1e8;
    p.bcc = 0.0;
    CHECK(omega(p, 4e10) == doctest::Approx(1.6e21 + 1e16).epsilon(1e-15));

    p.eff_bandwidth = 1.0;
    CHECK(omega(p, 0.0) == 1.0);

    p.eff_bandwidth = 3e8;
    p.bcc = -1.0;
    CHECK(std::abs(omega(p, 3e8)) < 1e-6);
}

TEST_CASE("SNR conversion") {
    CHECK(snr_from_db(0.0) == 1.0);
    CHECK(snr_from_db(20.0) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(snr_from_db(3.0) == doctest::Approx(1.9953).epsilon(1e-4));
}

TEST_CASE("rms duration of a rectangular window") {
    // alpha_o^2 = 2 * mean of t^2 over a window on [0, T], by midpoint rule.
    const double t = 1e-3;
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * t / n;
        acc += x * x / n;
    }
    const double rms = rms_duration_for_window(t);
    CHECK(rms * rms == doctest::Approx(2.0 * acc).epsilon(1e-8));
    CHECK(rms == doctest::Approx(8.164965809e-4).epsilon(1e-9));
}

TEST_CASE("signal validation") {
    SignalProps p;
    p.rms_duration = 1e-3;
    CHECK_NOTHROW(p.validate());

    SignalProps bad = p;
    bad.bcc = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.snr_linear = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.eff_bandwidth = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
