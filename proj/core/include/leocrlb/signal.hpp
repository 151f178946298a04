#pragma once

namespace leocrlb {

/// Per-link summary statistics of the transmitted signal.
struct SignalProps {
    double eff_bandwidth{1e8};  // alpha_1, Hz
    double bcc{0.0};            // alpha_2, dimensionless in [-1, 1]
    double rms_duration{};      // alpha_o, s
    double snr_linear{100.0};
    double carrier_freq{40e9};  // Hz
    double gain_abs{1.0};       // |beta|

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

struct OffsetParams {
    double time_offset{0.0};  // s
    double freq_offset{0.0};  // Hz
};

double effective_frequency(double carrier_freq, double nu, double eps);

/// alpha_1^2 + 2 f_o alpha_1 alpha_2 + f_o^2
double omega(const SignalProps& props, double f_o);

double snr_from_db(double db);

/// RMS duration of a rectangular observation window of length T.
double rms_duration_for_window(double observation_time);

}  // namespace leocrlb
