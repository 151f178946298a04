#include "leocrlb/fim_channel.hpp"

#include <numbers>
#include <stdexcept>

#include "leocrlb/links.hpp"

namespace leocrlb {

ChannelLayout ChannelLayout::make(LinkKind kind, int link_index, int n_rx, int n_slots,
                                  GainModel gains) {
    ChannelLayout l;
    l.kind = kind;
    l.link_index = link_index;
    l.n_rx = n_rx;
    l.n_slots = n_slots;
    l.n_delay = n_rx * n_slots;
    l.n_doppler = kind == LinkKind::LeoBs ? n_rx * n_slots : n_slots;
    if (gains == GainModel::PerObservation) {
        l.n_gain = l.n_delay;
    } else {
        l.n_gain = kind == LinkKind::LeoBs ? n_rx : 1;
    }
    return l;
}

int ChannelLayout::gain_of_delay(int rx, int k) const {
    if (n_gain == n_delay && n_gain > 1) return gain(delay(rx, k));
    if (kind == LinkKind::LeoBs && n_gain == n_rx) return gain(rx);
    return gain(0);
}

namespace {

LinkFim build_link(const Scenario& s, LinkKind kind, int tx) {
    const int n_rx = kind == LinkKind::LeoBs ? s.n_bs() : s.n_ant();
    const ChannelLayout layout = ChannelLayout::make(kind, tx, n_rx, s.n_slots(), s.gain_model);
    const SignalProps& p = s.props(kind);
    const double eps = s.offsets(kind).freq_offset;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(layout.dim(), layout.dim());
    const int it = layout.time_offset();
    const int ie = layout.freq_offset();
    const double a2 = p.rms_duration * p.rms_duration;
    const double f_nu_nu = 0.5 * p.snr_linear * p.carrier_freq * p.carrier_freq * a2;
    const double f_nu_eps = -0.5 * p.snr_linear * p.carrier_freq * a2;
    const double f_eps_eps = 0.5 * p.snr_linear * a2;
    const double f_gain = p.snr_linear / (4.0 * std::numbers::pi * std::numbers::pi * p.gain_abs * p.gain_abs);

    for (int k = 0; k < layout.n_slots; ++k) {
        for (int rx = 0; rx < n_rx; ++rx) {
            const DelayRef ref{kind, tx, rx, k};
            const double f_o = effective_frequency(p.carrier_freq, doppler_for_delay(s, ref), eps);
            const double w = p.snr_linear * omega(p, f_o);

            const int i = layout.delay(rx, k);
            m(i, i) += w;
            m(i, it) -= w;
            m(it, i) -= w;
            m(it, it) += w;

            const int j = layout.doppler_of(rx, k);
            m(j, j) += f_nu_nu;
            m(j, ie) += f_nu_eps;
            m(ie, j) += f_nu_eps;
            m(ie, ie) += f_eps_eps;

            const int g = layout.gain_of_delay(rx, k);
            m(g, g) += f_gain;
        }
    }
    return {std::move(m), layout, kind};
}

}  // namespace

LinkFim link_fim_leo_rx(const Scenario& scenario, int b) {
    if (b < 0 || b >= scenario.n_leo()) throw std::out_of_range("LEO index out of range");
    return build_link(scenario, LinkKind::LeoRx, b);
}

LinkFim link_fim_bs_rx(const Scenario& scenario, int q) {
    if (q < 0 || q >= scenario.n_bs()) throw std::out_of_range("BS index out of range");
    return build_link(scenario, LinkKind::BsRx, q);
}

LinkFim link_fim_leo_bs(const Scenario& scenario, int b) {
    if (b < 0 || b >= scenario.n_leo()) throw std::out_of_range("LEO index out of range");
    return build_link(scenario, LinkKind::LeoBs, b);
}

std::vector<ChannelLayout> channel_layouts(const Scenario& s, ParamCase param_case) {
    std::vector<ChannelLayout> out;
    for (int b = 0; b < s.n_leo(); ++b) {
        out.push_back(ChannelLayout::make(LinkKind::LeoRx, b, s.n_ant(), s.n_slots(), s.gain_model));
    }
    for (int q = 0; q < s.n_bs(); ++q) {
        out.push_back(ChannelLayout::make(LinkKind::BsRx, q, s.n_ant(), s.n_slots(), s.gain_model));
    }
    if (param_case == ParamCase::WithBsObservations && s.n_bs() > 0) {
        for (int b = 0; b < s.n_leo(); ++b) {
            out.push_back(ChannelLayout::make(LinkKind::LeoBs, b, s.n_bs(), s.n_slots(), s.gain_model));
        }
    }
    return out;
}

ChannelFim assemble_channel_fim(const Scenario& s, ParamCase param_case) {
    std::vector<LinkFim> links;
    for (const auto& l : channel_layouts(s, param_case)) {
        links.push_back(build_link(s, l.kind, l.link_index));
    }
    ChannelFim out;
    int dim = 0;
    for (const auto& l : links) {
        out.offsets.push_back(dim);
        out.blocks.push_back(l.layout);
        dim += l.layout.dim();
    }
    out.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < links.size(); ++i) {
        const int o = out.offsets[i];
        const int n = links[i].layout.dim();
        out.matrix.block(o, o, n, n) = links[i].matrix;
    }
    return out;
}

}  // namespace leocrlb
