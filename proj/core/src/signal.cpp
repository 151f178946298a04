#include "leocrlb/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace leocrlb {

void SignalProps::validate() const {
    if (!(eff_bandwidth > 0.0)) throw std::invalid_argument("effective bandwidth must be > 0");
    if (!(bcc >= -1.0 && bcc <= 1.0)) throw std::invalid_argument("BCC must lie in [-1, 1]");
    if (!(rms_duration > 0.0)) throw std::invalid_argument("RMS duration must be > 0");
    if (!(snr_linear >= 0.0) || !std::isfinite(snr_linear)) {
        throw std::invalid_argument("SNR must be finite and >= 0");
    }
    if (!(carrier_freq > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
    if (!(gain_abs > 0.0)) throw std::invalid_argument("gain magnitude must be > 0");
}

double effective_frequency(double carrier_freq, double nu, double eps) {
    return carrier_freq * (1.0 - nu) + eps;
}

double omega(const SignalProps& props, double f_o) {
    const double a1 = props.eff_bandwidth;
    return a1 * a1 + 2.0 * f_o * a1 * props.bcc + f_o * f_o;
}

double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

double rms_duration_for_window(double observation_time) {
    return observation_time * std::sqrt(2.0 / 3.0);
}

}  // namespace leocrlb
