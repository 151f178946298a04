#include "leocrlb/links.hpp"

#include <stdexcept>
#include <string>

namespace leocrlb {

namespace {

const LeoState& leo_at(const Scenario& s, int b) {
    if (b < 0 || b >= s.n_leo()) throw std::out_of_range("LEO index " + std::to_string(b));
    return s.leos[static_cast<std::size_t>(b)];
}

const BsState& bs_at(const Scenario& s, int q) {
    if (q < 0 || q >= s.n_bs()) throw std::out_of_range("BS index " + std::to_string(q));
    return s.base_stations[static_cast<std::size_t>(q)];
}

}  // namespace

Vec3 transmitter_position(const Scenario& s, LinkKind kind, int tx, int k) {
    if (kind == LinkKind::BsRx) return bs_at(s, tx).position;
    return leo_position(leo_at(s, tx), k, s.grid, true);
}

Direction delay_direction(const Scenario& s, const DelayRef& ref) {
    const Vec3 from = transmitter_position(s, ref.kind, ref.tx, ref.k);
    if (ref.kind == LinkKind::LeoBs) return unit_direction(from, bs_at(s, ref.rx).position);
    return unit_direction(from, antenna_position(s.receiver, ref.rx, ref.k, s.grid));
}

Direction doppler_direction(const Scenario& s, const DopplerRef& ref) {
    const Vec3 from = transmitter_position(s, ref.kind, ref.tx, ref.k);
    if (ref.kind == LinkKind::LeoBs) return unit_direction(from, bs_at(s, ref.rx).position);
    return unit_direction(from, receiver_centroid(s.receiver, ref.k, s.grid));
}

Vec3 doppler_relative_velocity(const Scenario& s, const DopplerRef& ref) {
    switch (ref.kind) {
        case LinkKind::LeoRx:
            return leo_velocity(leo_at(s, ref.tx), ref.k, true) - s.receiver.velocity;
        case LinkKind::BsRx:
            return -s.receiver.velocity;
        case LinkKind::LeoBs:
            return leo_velocity(leo_at(s, ref.tx), ref.k, true);
    }
    throw std::logic_error("unknown link kind");
}

double observed_delay(const Scenario& s, const DelayRef& ref) {
    return delay_direction(s, ref).distance / kSpeedOfLight;
}

double observed_doppler(const Scenario& s, const DopplerRef& ref) {
    return doppler(doppler_direction(s, ref).unit, doppler_relative_velocity(s, ref));
}

double doppler_for_delay(const Scenario& s, const DelayRef& ref) {
    const int rx = ref.kind == LinkKind::LeoBs ? ref.rx : 0;
    return observed_doppler(s, {ref.kind, ref.tx, rx, ref.k});
}

}  // namespace leocrlb
