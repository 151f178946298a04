// Channel-parameter Fisher information for the three link types.
#pragma once

#include <vector>

#include <Eigen/Core>

#include "leocrlb/scenario.hpp"

namespace leocrlb {

/// Index map of one link's channel parameters
/// [delays, Dopplers, gains, time offset, frequency offset].
///
/// `n_rx` is the number of antennas for receiver links and the number of base
/// stations for the LEO-BS link. Delays are slot-major. LEO-BS Dopplers are
/// per (base station, slot) since every base station observes its own Doppler.
struct ChannelLayout {
    LinkKind kind{LinkKind::LeoRx};
    int link_index{0};
    int n_rx{0};
    int n_slots{0};
    int n_delay{0};
    int n_doppler{0};
    int n_gain{0};

    static ChannelLayout make(LinkKind kind, int link_index, int n_rx, int n_slots, GainModel gains);

    int delay(int rx, int k) const { return k * n_rx + rx; }
    int doppler(int k) const { return n_delay + k; }
    int doppler(int rx, int k) const { return n_delay + k * n_rx + rx; }
    int gain(int i) const { return n_delay + n_doppler + i; }
    int time_offset() const { return n_delay + n_doppler + n_gain; }
    int freq_offset() const { return time_offset() + 1; }
    int dim() const { return n_delay + n_doppler + n_gain + 2; }

    /// Gain index that carries the delay observation (rx, k).
    int gain_of_delay(int rx, int k) const;
    /// Doppler coordinate observed by receiver rx in slot k.
    int doppler_of(int rx, int k) const { return kind == LinkKind::LeoBs ? doppler(rx, k) : doppler(k); }
};

struct LinkFim {
    Eigen::MatrixXd matrix;
    ChannelLayout layout;
    LinkKind link_kind{LinkKind::LeoRx};
};

LinkFim link_fim_leo_rx(const Scenario& scenario, int b);
LinkFim link_fim_bs_rx(const Scenario& scenario, int q);
LinkFim link_fim_leo_bs(const Scenario& scenario, int b);

/// Block-diagonal channel FIM: LEO-RX blocks, then BS-RX blocks, then (case 1)
/// LEO-BS blocks.
struct ChannelFim {
    Eigen::MatrixXd matrix;
    std::vector<ChannelLayout> blocks;
    std::vector<int> offsets;  // first row of each block

    int n_blocks() const { return static_cast<int>(blocks.size()); }
};

ChannelFim assemble_channel_fim(const Scenario& scenario, ParamCase param_case);

/// Block layouts in assembly order without building the matrix.
std::vector<ChannelLayout> channel_layouts(const Scenario& scenario, ParamCase param_case);

}  // namespace leocrlb
