// Observation geometry shared by the channel FIM and the Jacobians.
#pragma once

#include "leocrlb/geometry.hpp"
#include "leocrlb/scenario.hpp"

namespace leocrlb {

/// A delay observation. `tx` is the LEO (or BS for BS-RX); `rx` is the antenna
/// (or the base station for LEO-BS).
struct DelayRef {
    LinkKind kind{LinkKind::LeoRx};
    int tx{0};
    int rx{0};
    int k{0};
};

/// A Doppler observation. `rx` is only meaningful on LEO-BS links; receiver
/// links observe one Doppler per slot at the array centroid.
struct DopplerRef {
    LinkKind kind{LinkKind::LeoRx};
    int tx{0};
    int rx{0};
    int k{0};
};

Vec3 transmitter_position(const Scenario& s, LinkKind kind, int tx, int k);

/// Transmitter to receiving antenna (or BS).
Direction delay_direction(const Scenario& s, const DelayRef& ref);

/// Transmitter to array centroid (or BS).
Direction doppler_direction(const Scenario& s, const DopplerRef& ref);

/// Velocity whose projection gives the link's Doppler.
Vec3 doppler_relative_velocity(const Scenario& s, const DopplerRef& ref);

double observed_delay(const Scenario& s, const DelayRef& ref);
double observed_doppler(const Scenario& s, const DopplerRef& ref);

/// Doppler used to evaluate the effective frequency of a delay observation.
double doppler_for_delay(const Scenario& s, const DelayRef& ref);

}  // namespace leocrlb
