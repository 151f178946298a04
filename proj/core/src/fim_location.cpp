#include "leocrlb/fim_location.hpp"

#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "leocrlb/errors.hpp"
#include "leocrlb/linalg.hpp"
#include "leocrlb/links.hpp"

namespace leocrlb {

const char* to_string(EfimRoute r) {
    switch (r) {
        case EfimRoute::Lemma: return "lemma";
        case EfimRoute::Schur: return "schur";
        case EfimRoute::SquareRoot: return "square_root";
    }
    return "?";
}

namespace {

// Offset groups: LEO-RX delays/Dopplers per LEO, all BS-RX delays/Dopplers,
// LEO-BS delays/Dopplers per LEO.
struct GroupIndex {
    int n_leo;
    int leo_rx_delay(int b) const { return 2 * b; }
    int leo_rx_doppler(int b) const { return 2 * b + 1; }
    int bs_rx_delay() const { return 2 * n_leo; }
    int bs_rx_doppler() const { return 2 * n_leo + 1; }
    int leo_bs_delay(int b) const { return 2 * n_leo + 2 + 2 * b; }
    int leo_bs_doppler(int b) const { return 2 * n_leo + 3 + 2 * b; }
    int count() const { return 4 * n_leo + 2; }
};

struct LinkWeights {
    double doppler;        // F(nu, nu) per receiving element
    double doppler_eps;    // F(nu, eps) per receiving element
    double eps_eps;        // F(eps, eps) per receiving element

    explicit LinkWeights(const SignalProps& p) {
        const double a2 = p.rms_duration * p.rms_duration;
        doppler = 0.5 * p.snr_linear * p.carrier_freq * p.carrier_freq * a2;
        doppler_eps = -0.5 * p.snr_linear * p.carrier_freq * a2;
        eps_eps = 0.5 * p.snr_linear * a2;
    }
};

double delay_weight(const Scenario& s, const DelayRef& ref) {
    const SignalProps& p = s.props(ref.kind);
    const double f_o = effective_frequency(p.carrier_freq, doppler_for_delay(s, ref),
                                           s.offsets(ref.kind).freq_offset);
    return p.snr_linear * omega(p, f_o);
}

// ---------------------------------------------------------------------------
// Closed-form route

struct Piece {
    BlockRange block;
    Vec3 v;
};

struct Term {
    std::vector<Piece> pieces;
    double info{0};           // F(x, x)
    double cross{0};          // F(x, offset)
    double offset_info{0};    // F(offset, offset)
    int group{0};
};

template <typename Visit>
void for_each_term(const Scenario& s, ParamCase param_case, Visit&& visit) {
    const LocationLayout layout = LocationLayout::make(s, param_case);
    const GroupIndex groups{s.n_leo()};
    const double c = kSpeedOfLight;
    const double dt = s.grid.spacing;
    const int n_ant = s.n_ant();
    const auto dq = rotation_matrix_partials(s.receiver.orientation);
    const auto orientation_rate = [&](const Vec3& d, int u) -> Vec3 {
        const Vec3& offset = s.receiver.antenna_offsets[static_cast<std::size_t>(u)];
        return Vec3(d.dot(dq[0] * offset), d.dot(dq[1] * offset), d.dot(dq[2] * offset)) / c;
    };
    const auto projected = [&](const Direction& dir, const Vec3& v) -> Vec3 {
        return (v - dir.unit * dir.unit.dot(v)) / (c * dir.distance);
    };

    const LinkWeights lw_leo(s.leo_rx);
    const LinkWeights lw_bs(s.bs_rx);
    const LinkWeights lw_lb(s.leo_bs);

    for (int b = 0; b < s.n_leo(); ++b) {
        const BlockRange pb = layout.leo_position_offset(b);
        const BlockRange vb = layout.leo_velocity_offset(b);
        for (int k = 0; k < s.n_slots(); ++k) {
            const double t = k * dt;
            for (int u = 0; u < n_ant; ++u) {
                const DelayRef ref{LinkKind::LeoRx, b, u, k};
                const Vec3 d = delay_direction(s, ref).unit;
                const double w = delay_weight(s, ref);
                visit(Term{{{LocationLayout::position(), d / c},
                            {LocationLayout::velocity(), t * d / c},
                            {LocationLayout::orientation(), orientation_rate(d, u)},
                            {pb, -d / c},
                            {vb, -t * d / c}},
                           w, -w, w, groups.leo_rx_delay(b)});
            }
            const DopplerRef ref{LinkKind::LeoRx, b, 0, k};
            const Direction dir = doppler_direction(s, ref);
            const Vec3 p = projected(dir, doppler_relative_velocity(s, ref));
            visit(Term{{{LocationLayout::position(), p},
                        {LocationLayout::velocity(), -dir.unit / c},
                        {pb, -p},
                        {vb, dir.unit / c}},
                       n_ant * lw_leo.doppler, n_ant * lw_leo.doppler_eps, n_ant * lw_leo.eps_eps,
                       groups.leo_rx_doppler(b)});
        }
    }

    for (int q = 0; q < s.n_bs(); ++q) {
        for (int k = 0; k < s.n_slots(); ++k) {
            const double t = k * dt;
            for (int u = 0; u < n_ant; ++u) {
                const DelayRef ref{LinkKind::BsRx, q, u, k};
                const Vec3 d = delay_direction(s, ref).unit;
                const double w = delay_weight(s, ref);
                visit(Term{{{LocationLayout::position(), d / c},
                            {LocationLayout::velocity(), t * d / c},
                            {LocationLayout::orientation(), orientation_rate(d, u)}},
                           w, -w, w, groups.bs_rx_delay()});
            }
            const DopplerRef ref{LinkKind::BsRx, q, 0, k};
            const Direction dir = doppler_direction(s, ref);
            const Vec3 p = projected(dir, doppler_relative_velocity(s, ref));
            visit(Term{{{LocationLayout::position(), p}, {LocationLayout::velocity(), -dir.unit / c}},
                       n_ant * lw_bs.doppler, n_ant * lw_bs.doppler_eps, n_ant * lw_bs.eps_eps,
                       groups.bs_rx_doppler()});
        }
    }

    if (param_case != ParamCase::WithBsObservations) return;
    for (int b = 0; b < s.n_leo(); ++b) {
        const BlockRange pb = layout.leo_position_offset(b);
        const BlockRange vb = layout.leo_velocity_offset(b);
        for (int k = 0; k < s.n_slots(); ++k) {
            const double t = k * dt;
            for (int q = 0; q < s.n_bs(); ++q) {
                const DelayRef dref{LinkKind::LeoBs, b, q, k};
                const Vec3 d = delay_direction(s, dref).unit;
                const double w = delay_weight(s, dref);
                visit(Term{{{pb, -d / c}, {vb, -t * d / c}}, w, -w, w, groups.leo_bs_delay(b)});

                const DopplerRef ref{LinkKind::LeoBs, b, q, k};
                const Direction dir = doppler_direction(s, ref);
                const Vec3 p = projected(dir, doppler_relative_velocity(s, ref));
                visit(Term{{{pb, -p}, {vb, dir.unit / c}}, lw_lb.doppler, lw_lb.doppler_eps,
                           lw_lb.eps_eps, groups.leo_bs_doppler(b)});
            }
        }
    }
}

void add_outer(Eigen::MatrixXd& m, double w, const Piece& a, const Piece& b) {
    m.block<3, 3>(a.block.begin, b.block.begin) += w * a.v * b.v.transpose();
}

// ---------------------------------------------------------------------------
// Square-root route

struct InformationRow {
    int group;
    double weight;
    Eigen::VectorXd grad;
};

std::vector<InformationRow> information_rows(const Scenario& s, ParamCase param_case) {
    const GroupIndex groups{s.n_leo()};
    const double n_ant = s.n_ant();
    std::vector<InformationRow> rows;
    for (int b = 0; b < s.n_leo(); ++b) {
        for (int k = 0; k < s.n_slots(); ++k) {
            for (int u = 0; u < s.n_ant(); ++u) {
                const DelayRef ref{LinkKind::LeoRx, b, u, k};
                rows.push_back({groups.leo_rx_delay(b), delay_weight(s, ref), delay_gradient(s, ref)});
            }
            rows.push_back({groups.leo_rx_doppler(b), n_ant * LinkWeights(s.leo_rx).doppler,
                            doppler_gradient(s, {LinkKind::LeoRx, b, 0, k})});
        }
    }
    for (int q = 0; q < s.n_bs(); ++q) {
        for (int k = 0; k < s.n_slots(); ++k) {
            for (int u = 0; u < s.n_ant(); ++u) {
                const DelayRef ref{LinkKind::BsRx, q, u, k};
                rows.push_back({groups.bs_rx_delay(), delay_weight(s, ref), delay_gradient(s, ref)});
            }
            rows.push_back({groups.bs_rx_doppler(), n_ant * LinkWeights(s.bs_rx).doppler,
                            doppler_gradient(s, {LinkKind::BsRx, q, 0, k})});
        }
    }
    if (param_case == ParamCase::WithBsObservations) {
        for (int b = 0; b < s.n_leo(); ++b) {
            for (int k = 0; k < s.n_slots(); ++k) {
                for (int q = 0; q < s.n_bs(); ++q) {
                    const DelayRef ref{LinkKind::LeoBs, b, q, k};
                    rows.push_back({groups.leo_bs_delay(b), delay_weight(s, ref), delay_gradient(s, ref)});
                    rows.push_back({groups.leo_bs_doppler(b), LinkWeights(s.leo_bs).doppler,
                                    doppler_gradient(s, {LinkKind::LeoBs, b, q, k})});
                }
            }
        }
    }
    return rows;
}

}  // namespace

InterestFim assemble_interest_fim(const Scenario& s, ParamCase param_case) {
    const int n1 = 9 + 6 * s.n_leo();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n1, n1);
    for_each_term(s, param_case, [&](const Term& term) {
        if (term.info == 0.0) return;
        for (const Piece& a : term.pieces) {
            for (const Piece& b : term.pieces) add_outer(m, term.info, a, b);
        }
    });
    return {0.5 * (m + m.transpose()), s.n_leo()};
}

LossMatrix assemble_information_loss(const Scenario& s, ParamCase param_case) {
    const int n1 = 9 + 6 * s.n_leo();
    const GroupIndex groups{s.n_leo()};
    std::vector<Eigen::VectorXd> coupling(static_cast<std::size_t>(groups.count()),
                                          Eigen::VectorXd::Zero(n1));
    std::vector<double> offset_info(static_cast<std::size_t>(groups.count()), 0.0);
    for_each_term(s, param_case, [&](const Term& term) {
        const auto g = static_cast<std::size_t>(term.group);
        for (const Piece& p : term.pieces) coupling[g].segment<3>(p.block.begin) += term.cross * p.v;
        offset_info[g] += term.offset_info;
    });
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n1, n1);
    for (std::size_t g = 0; g < coupling.size(); ++g) {
        // A link without offset information carries no offset ambiguity.
        if (offset_info[g] == 0.0) continue;
        m += coupling[g] * coupling[g].transpose() / offset_info[g];
    }
    return {0.5 * (m + m.transpose()), s.n_leo()};
}

Efim efim_lemma_route(const Scenario& s, ParamCase param_case) {
    Efim e;
    e.matrix = assemble_interest_fim(s, param_case).matrix - assemble_information_loss(s, param_case).matrix;
    e.n_leo = s.n_leo();
    e.route = EfimRoute::Lemma;
    return e;
}

Efim efim_schur_route(const Eigen::MatrixXd& j, int n_interest, int n_leo) {
    if (j.rows() != j.cols() || n_interest > j.rows() || n_interest < 0) {
        throw DimensionError("efim_schur_route: bad dimensions");
    }
    const int n = static_cast<int>(j.rows());
    const int n2 = n - n_interest;
    Efim e;
    e.n_leo = n_leo;
    e.route = EfimRoute::Schur;
    e.matrix = j.topLeftCorner(n_interest, n_interest);

    // Connected components of the nuisance block's sparsity graph.
    std::vector<int> component(static_cast<std::size_t>(n2), -1);
    int n_comp = 0;
    for (int start = 0; start < n2; ++start) {
        if (component[static_cast<std::size_t>(start)] >= 0) continue;
        std::vector<int> stack{start};
        component[static_cast<std::size_t>(start)] = n_comp;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int k = 0; k < n2; ++k) {
                if (component[static_cast<std::size_t>(k)] < 0 &&
                    (j(n_interest + i, n_interest + k) != 0.0 || j(n_interest + k, n_interest + i) != 0.0)) {
                    component[static_cast<std::size_t>(k)] = n_comp;
                    stack.push_back(k);
                }
            }
        }
        ++n_comp;
    }

    Eigen::MatrixXd loss = Eigen::MatrixXd::Zero(n_interest, n_interest);
    for (int cidx = 0; cidx < n_comp; ++cidx) {
        std::vector<int> members;
        for (int k = 0; k < n2; ++k) {
            if (component[static_cast<std::size_t>(k)] == cidx) members.push_back(n_interest + k);
        }
        const int m = static_cast<int>(members.size());
        Eigen::MatrixXd b(n_interest, m);
        Eigen::MatrixXd c(m, m);
        for (int a = 0; a < m; ++a) {
            b.col(a) = j.block(0, members[static_cast<std::size_t>(a)], n_interest, 1);
            for (int r = 0; r < m; ++r) {
                c(r, a) = j(members[static_cast<std::size_t>(r)], members[static_cast<std::size_t>(a)]);
            }
        }
        if ((b.array() == 0.0).all()) continue;
        const SymmetricInverse inv = symmetric_pseudo_inverse(c, 1e-12);
        e.pseudo_inverse_used = e.pseudo_inverse_used || inv.floored;
        e.nuisance_condition = std::max(e.nuisance_condition, inv.condition_number);
        loss += b * inv.inverse * b.transpose();
    }
    e.matrix -= loss;
    e.matrix = 0.5 * (e.matrix + e.matrix.transpose()).eval();
    return e;
}

Efim efim_schur_route(const Eigen::MatrixXd& j_kappa, const LocationLayout& layout) {
    if (j_kappa.rows() != layout.n_total) throw DimensionError("efim_schur_route: layout mismatch");
    return efim_schur_route(j_kappa, layout.n_interest, layout.n_leo);
}

Efim efim_square_root_route(const Scenario& s, ParamCase param_case) {
    const int n1 = 9 + 6 * s.n_leo();
    const GroupIndex groups{s.n_leo()};
    const std::vector<InformationRow> rows = information_rows(s, param_case);

    std::vector<Eigen::VectorXd> mean(static_cast<std::size_t>(groups.count()), Eigen::VectorXd::Zero(n1));
    std::vector<double> total(static_cast<std::size_t>(groups.count()), 0.0);
    for (const auto& r : rows) {
        mean[static_cast<std::size_t>(r.group)] += r.weight * r.grad;
        total[static_cast<std::size_t>(r.group)] += r.weight;
    }
    for (std::size_t g = 0; g < mean.size(); ++g) {
        if (total[g] > 0.0) mean[g] /= total[g];
    }

    Eigen::MatrixXd h(static_cast<Eigen::Index>(rows.size()), n1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double sw = r.weight > 0.0 ? std::sqrt(r.weight) : 0.0;
        h.row(static_cast<Eigen::Index>(i)) = sw * (r.grad - mean[static_cast<std::size_t>(r.group)]).transpose();
    }

    Efim e;
    e.n_leo = s.n_leo();
    e.route = EfimRoute::SquareRoot;
    e.matrix = h.transpose() * h;
    e.matrix = 0.5 * (e.matrix + e.matrix.transpose()).eval();

    e.factor = Eigen::MatrixXd::Zero(n1, n1);
    if (h.rows() > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(h);
        const Eigen::Index r = std::min<Eigen::Index>(h.rows(), n1);
        e.factor.topRows(r) = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    }
    return e;
}

}  // namespace leocrlb
