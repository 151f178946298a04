#include "leocrlb/transform.hpp"

#include <string>

#include "leocrlb/errors.hpp"

namespace leocrlb {

LocationLayout LocationLayout::make(const Scenario& s, ParamCase param_case) {
    return make(s.n_leo(), channel_layouts(s, param_case));
}

LocationLayout LocationLayout::make(int n_leo, const std::vector<ChannelLayout>& blocks) {
    LocationLayout out;
    out.n_leo = n_leo;
    out.n_interest = 9 + 6 * n_leo;

    int last_bs = -1;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].kind == LinkKind::BsRx) last_bs = static_cast<int>(i);
    }

    int idx = out.n_interest;
    int shared_time = -1;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        NuisanceSlots n{b.kind, b.link_index, idx, b.n_gain, -1, -1};
        idx += b.n_gain;
        if (b.kind != LinkKind::BsRx) {
            n.time_offset = idx;
            n.freq_offset = idx + 1;
            idx += 2;
        } else if (static_cast<int>(i) == last_bs) {
            shared_time = idx;
            idx += 2;
        }
        out.nuisance.push_back(n);
    }
    for (auto& n : out.nuisance) {
        if (n.kind == LinkKind::BsRx) {
            n.time_offset = shared_time;
            n.freq_offset = shared_time + 1;
        }
    }
    out.n_total = idx;
    return out;
}

Vec3 dtau_dpU(const Scenario& s, const DelayRef& ref) {
    if (ref.kind == LinkKind::LeoBs) return Vec3::Zero();
    return delay_direction(s, ref).unit / kSpeedOfLight;
}

Vec3 dtau_dpoff(const Scenario& s, const DelayRef& ref) {
    if (ref.kind == LinkKind::BsRx) return Vec3::Zero();
    return -delay_direction(s, ref).unit / kSpeedOfLight;
}

Vec3 dtau_dvU(const Scenario& s, const DelayRef& ref) {
    if (ref.kind == LinkKind::LeoBs) return Vec3::Zero();
    return ref.k * s.grid.spacing * delay_direction(s, ref).unit / kSpeedOfLight;
}

Vec3 dtau_dvoff(const Scenario& s, const DelayRef& ref) {
    if (ref.kind == LinkKind::BsRx) return Vec3::Zero();
    return -ref.k * s.grid.spacing * delay_direction(s, ref).unit / kSpeedOfLight;
}

Vec3 dtau_dPhi(const Scenario& s, const DelayRef& ref) {
    if (ref.kind == LinkKind::LeoBs) return Vec3::Zero();
    const Vec3 d = delay_direction(s, ref).unit;
    const Vec3& offset = s.receiver.antenna_offsets.at(static_cast<std::size_t>(ref.rx));
    const auto dq = rotation_matrix_partials(s.receiver.orientation);
    return Vec3(d.dot(dq[0] * offset), d.dot(dq[1] * offset), d.dot(dq[2] * offset)) / kSpeedOfLight;
}

namespace {

// (I - d d^T) v / (c dist)
Vec3 projected_rate(const Scenario& s, const DopplerRef& ref) {
    const Direction dir = doppler_direction(s, ref);
    const Vec3 v = doppler_relative_velocity(s, ref);
    return (v - dir.unit * dir.unit.dot(v)) / (kSpeedOfLight * dir.distance);
}

}  // namespace

Vec3 dnu_dpU(const Scenario& s, const DopplerRef& ref) {
    if (ref.kind == LinkKind::LeoBs) return Vec3::Zero();
    return projected_rate(s, ref);
}

Vec3 dnu_dpoff(const Scenario& s, const DopplerRef& ref) {
    if (ref.kind == LinkKind::BsRx) return Vec3::Zero();
    return -projected_rate(s, ref);
}

Vec3 dnu_dvU(const Scenario& s, const DopplerRef& ref) {
    if (ref.kind == LinkKind::LeoBs) return Vec3::Zero();
    return -doppler_direction(s, ref).unit / kSpeedOfLight;
}

Vec3 dnu_dvoff(const Scenario& s, const DopplerRef& ref) {
    if (ref.kind == LinkKind::BsRx) return Vec3::Zero();
    return doppler_direction(s, ref).unit / kSpeedOfLight;
}

Eigen::VectorXd delay_gradient(const Scenario& s, const DelayRef& ref) {
    const int nb = s.n_leo();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(9 + 6 * nb);
    if (ref.kind != LinkKind::LeoBs) {
        const Vec3 d = delay_direction(s, ref).unit / kSpeedOfLight;
        g.segment<3>(0) = d;
        g.segment<3>(3) = ref.k * s.grid.spacing * d;
        g.segment<3>(6) = dtau_dPhi(s, ref);
    }
    if (ref.kind != LinkKind::BsRx) {
        g.segment<3>(9 + 3 * ref.tx) = dtau_dpoff(s, ref);
        g.segment<3>(9 + 3 * nb + 3 * ref.tx) = dtau_dvoff(s, ref);
    }
    return g;
}

Eigen::VectorXd doppler_gradient(const Scenario& s, const DopplerRef& ref) {
    const int nb = s.n_leo();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(9 + 6 * nb);
    if (ref.kind != LinkKind::LeoBs) {
        g.segment<3>(0) = dnu_dpU(s, ref);
        g.segment<3>(3) = dnu_dvU(s, ref);
    }
    if (ref.kind != LinkKind::BsRx) {
        g.segment<3>(9 + 3 * ref.tx) = dnu_dpoff(s, ref);
        g.segment<3>(9 + 3 * nb + 3 * ref.tx) = dnu_dvoff(s, ref);
    }
    return g;
}

TransformationMatrix build_transformation_matrix(const Scenario& s, ParamCase param_case) {
    TransformationMatrix t;
    t.channel = channel_layouts(s, param_case);
    t.location = LocationLayout::make(s.n_leo(), t.channel);
    int dim_eta = 0;
    for (const auto& c : t.channel) {
        t.channel_offsets.push_back(dim_eta);
        dim_eta += c.dim();
    }
    const int n1 = t.location.n_interest;
    t.matrix = Eigen::MatrixXd::Zero(t.location.n_total, dim_eta);

    for (std::size_t i = 0; i < t.channel.size(); ++i) {
        const ChannelLayout& c = t.channel[i];
        const NuisanceSlots& n = t.location.nuisance[i];
        const int o = t.channel_offsets[i];
        for (int k = 0; k < c.n_slots; ++k) {
            for (int rx = 0; rx < c.n_rx; ++rx) {
                t.matrix.col(o + c.delay(rx, k)).head(n1) =
                    delay_gradient(s, {c.kind, c.link_index, rx, k});
            }
            if (c.kind == LinkKind::LeoBs) {
                for (int rx = 0; rx < c.n_rx; ++rx) {
                    t.matrix.col(o + c.doppler(rx, k)).head(n1) =
                        doppler_gradient(s, {c.kind, c.link_index, rx, k});
                }
            } else {
                t.matrix.col(o + c.doppler(k)).head(n1) =
                    doppler_gradient(s, {c.kind, c.link_index, 0, k});
            }
        }
        for (int g = 0; g < c.n_gain; ++g) t.matrix(n.gain_begin + g, o + c.gain(g)) = 1.0;
        t.matrix(n.time_offset, o + c.time_offset()) = 1.0;
        t.matrix(n.freq_offset, o + c.freq_offset()) = 1.0;
    }
    return t;
}

Eigen::MatrixXd transform_fim(const Eigen::MatrixXd& j_eta, const Eigen::MatrixXd& upsilon) {
    if (j_eta.rows() != j_eta.cols() || upsilon.cols() != j_eta.rows()) {
        throw DimensionError("transform_fim: Upsilon is " + std::to_string(upsilon.rows()) + "x" +
                             std::to_string(upsilon.cols()) + " but J_eta is " +
                             std::to_string(j_eta.rows()) + "x" + std::to_string(j_eta.cols()));
    }
    Eigen::MatrixXd out = upsilon * j_eta * upsilon.transpose();
    return 0.5 * (out + out.transpose());
}

}  // namespace leocrlb
