// Jacobians of delays and Dopplers with respect to the location parameters,
// and the congruence that maps the channel FIM onto them.
#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "leocrlb/fim_channel.hpp"
#include "leocrlb/links.hpp"

namespace leocrlb {

/// Contiguous index range.
struct BlockRange {
    int begin{0};
    int size{0};
};

/// Nuisance coordinates of one channel block inside the location vector.
struct NuisanceSlots {
    LinkKind kind{LinkKind::LeoRx};
    int link_index{0};
    int gain_begin{0};
    int n_gain{0};
    int time_offset{0};
    int freq_offset{0};
};

/// Location vector: interest part [p, v, orientation, position offsets,
/// velocity offsets] followed by per-link [gains, time offset, frequency offset].
/// All BS-RX blocks share one time and one frequency offset.
struct LocationLayout {
    int n_leo{0};
    int n_interest{9};
    int n_total{9};
    std::vector<NuisanceSlots> nuisance;  // parallel to the channel blocks

    static LocationLayout make(const Scenario& s, ParamCase param_case);
    static LocationLayout make(int n_leo, const std::vector<ChannelLayout>& blocks);

    static constexpr BlockRange position() { return {0, 3}; }
    static constexpr BlockRange velocity() { return {3, 3}; }
    static constexpr BlockRange orientation() { return {6, 3}; }
    BlockRange leo_position_offset(int b) const { return {9 + 3 * b, 3}; }
    BlockRange leo_velocity_offset(int b) const { return {9 + 3 * n_leo + 3 * b, 3}; }
    int n_nuisance() const { return n_total - n_interest; }
};

// Delay partials. Zero where the link does not depend on the parameter.
Vec3 dtau_dpU(const Scenario& s, const DelayRef& ref);
Vec3 dtau_dpoff(const Scenario& s, const DelayRef& ref);
Vec3 dtau_dvU(const Scenario& s, const DelayRef& ref);
Vec3 dtau_dvoff(const Scenario& s, const DelayRef& ref);
Vec3 dtau_dPhi(const Scenario& s, const DelayRef& ref);

// Doppler partials. Velocity partials are taken at a fixed line of sight.
Vec3 dnu_dpU(const Scenario& s, const DopplerRef& ref);
Vec3 dnu_dpoff(const Scenario& s, const DopplerRef& ref);
Vec3 dnu_dvU(const Scenario& s, const DopplerRef& ref);
Vec3 dnu_dvoff(const Scenario& s, const DopplerRef& ref);

/// Gradient of one delay over the interest parameters (length 9 + 6 N_B).
Eigen::VectorXd delay_gradient(const Scenario& s, const DelayRef& ref);
Eigen::VectorXd doppler_gradient(const Scenario& s, const DopplerRef& ref);

struct TransformationMatrix {
    Eigen::MatrixXd matrix;  // dim(kappa) x dim(eta)
    LocationLayout location;
    std::vector<ChannelLayout> channel;
    std::vector<int> channel_offsets;
};

TransformationMatrix build_transformation_matrix(const Scenario& s, ParamCase param_case);

/// Upsilon * J_eta * Upsilon^T, symmetrised.
Eigen::MatrixXd transform_fim(const Eigen::MatrixXd& j_eta, const Eigen::MatrixXd& upsilon);

}  // namespace leocrlb
