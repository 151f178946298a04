#pragma once

#include "leocrlb/scenario.hpp"

namespace fixture {

/// One LEO overhead, one base station, one antenna at the centroid, one slot.
inline leocrlb::Scenario tiny() {
    using leocrlb::Vec3;
    leocrlb::Scenario s;
    s.receiver.centroid_p0 = Vec3(10, -5, 2);
    s.receiver.velocity = Vec3(20, 10, 0);
    s.receiver.antenna_offsets = {Vec3::Zero()};
    leocrlb::LeoState leo;
    leo.reference_p0 = Vec3(3e5, -2e5, 1.9e6);
    leo.speed = 8000;
    leo.slot_directions = {Vec3(0.6, 0.8, 0)};
    s.leos = {leo};
    s.base_stations = {{Vec3(80, 60, 0)}};
    s.grid = {1, 1.0};
    for (auto* p : {&s.leo_rx, &s.bs_rx, &s.leo_bs}) {
        p->rms_duration = leocrlb::rms_duration_for_window(1e-3);
    }
    return s;
}

inline leocrlb::ScenarioTemplate small_template(int n_leo, int n_bs, int n_slots, int n_ant) {
    leocrlb::ScenarioTemplate t;
    t.n_leo = n_leo;
    t.n_bs = n_bs;
    t.n_slots = n_slots;
    t.n_ant = n_ant;
    return t;
}

}  // namespace fixture
