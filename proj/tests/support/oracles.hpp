// Independent reference computations for the tests: the forward model
// re-evaluated in long double and central differences over it.
#pragma once

#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "leocrlb/fim_channel.hpp"
#include "leocrlb/geometry.hpp"
#include "leocrlb/links.hpp"
#include "leocrlb/scenario.hpp"
#include "leocrlb/transform.hpp"

namespace oracle {

using Real = long double;
using V3 = leocrlb::Vec3T<Real>;

struct Model {
    leocrlb::ReceiverStateT<Real> rx;
    std::vector<leocrlb::LeoStateT<Real>> leos;
    std::vector<leocrlb::BsStateT<Real>> bss;
    leocrlb::SlotGrid grid;

    explicit Model(const leocrlb::Scenario& s) : rx(s.receiver.cast<Real>()), grid(s.grid) {
        for (const auto& l : s.leos) leos.push_back(l.cast<Real>());
        for (const auto& q : s.base_stations) bss.push_back(q.cast<Real>());
    }
};

inline V3 tx_position(const Model& m, leocrlb::LinkKind kind, int tx, int k) {
    if (kind == leocrlb::LinkKind::BsRx) return m.bss[static_cast<std::size_t>(tx)].position;
    return leocrlb::leo_position(m.leos[static_cast<std::size_t>(tx)], k, m.grid, true);
}

inline Real delay(const Model& m, const leocrlb::DelayRef& r) {
    const V3 from = tx_position(m, r.kind, r.tx, r.k);
    const V3 to = r.kind == leocrlb::LinkKind::LeoBs ? m.bss[static_cast<std::size_t>(r.rx)].position
                                                     : leocrlb::antenna_position(m.rx, r.rx, r.k, m.grid);
    return (to - from).norm() / Real(leocrlb::kSpeedOfLight);
}

inline V3 doppler_unit(const Model& m, const leocrlb::DopplerRef& r) {
    const V3 from = tx_position(m, r.kind, r.tx, r.k);
    const V3 to = r.kind == leocrlb::LinkKind::LeoBs ? m.bss[static_cast<std::size_t>(r.rx)].position
                                                     : leocrlb::receiver_centroid(m.rx, r.k, m.grid);
    return (to - from).normalized();
}

inline V3 relative_velocity(const Model& m, const leocrlb::DopplerRef& r) {
    using leocrlb::LinkKind;
    switch (r.kind) {
        case LinkKind::LeoRx:
            return leocrlb::leo_velocity(m.leos[static_cast<std::size_t>(r.tx)], r.k, true) - m.rx.velocity;
        case LinkKind::BsRx:
            return -m.rx.velocity;
        case LinkKind::LeoBs:
            return leocrlb::leo_velocity(m.leos[static_cast<std::size_t>(r.tx)], r.k, true);
    }
    return V3::Zero();
}

/// Doppler with the line of sight taken from `los` (the unperturbed model
/// when differentiating with respect to velocities).
inline Real doppler(const Model& m, const leocrlb::DopplerRef& r, const Model& los) {
    return doppler_unit(los, r).dot(relative_velocity(m, r)) / Real(leocrlb::kSpeedOfLight);
}

inline Real doppler(const Model& m, const leocrlb::DopplerRef& r) { return doppler(m, r, m); }

using Perturb = std::function<void(Model&, Real)>;

/// Central difference of f(model) along the perturbation.
inline double central_difference(const Model& base, const Perturb& perturb, Real h,
                                 const std::function<Real(const Model&)>& f) {
    Model plus = base;
    Model minus = base;
    perturb(plus, h);
    perturb(minus, -h);
    return static_cast<double>((f(plus) - f(minus)) / (Real(2) * h));
}

enum class Param { ReceiverPosition, ReceiverVelocity, Orientation, LeoPositionOffset, LeoVelocityOffset };

inline Perturb perturbation(Param p, int axis, int leo = 0) {
    switch (p) {
        case Param::ReceiverPosition:
            return [axis](Model& m, Real h) { m.rx.centroid_p0[axis] += h; };
        case Param::ReceiverVelocity:
            return [axis](Model& m, Real h) { m.rx.velocity[axis] += h; };
        case Param::Orientation:
            return [axis](Model& m, Real h) {
                if (axis == 0) m.rx.orientation.alpha += h;
                if (axis == 1) m.rx.orientation.psi += h;
                if (axis == 2) m.rx.orientation.phi += h;
            };
        case Param::LeoPositionOffset:
            return [axis, leo](Model& m, Real h) { m.leos[static_cast<std::size_t>(leo)].pos_offset[axis] += h; };
        case Param::LeoVelocityOffset:
            return [axis, leo](Model& m, Real h) { m.leos[static_cast<std::size_t>(leo)].vel_offset[axis] += h; };
    }
    return {};
}

inline Real step(Param p) { return p == Param::Orientation ? Real(1e-5) : Real(1e-3); }

inline leocrlb::Vec3 delay_gradient_fd(const leocrlb::Scenario& s, const leocrlb::DelayRef& r, Param p,
                                       int leo = 0) {
    const Model base(s);
    leocrlb::Vec3 g;
    for (int a = 0; a < 3; ++a) {
        g[a] = central_difference(base, perturbation(p, a, leo), step(p),
                                  [&](const Model& m) { return delay(m, r); });
    }
    return g;
}

/// Velocity-type parameters are differentiated at a fixed line of sight.
inline leocrlb::Vec3 doppler_gradient_fd(const leocrlb::Scenario& s, const leocrlb::DopplerRef& r, Param p,
                                         int leo = 0) {
    const Model base(s);
    const bool hold_los = p == Param::ReceiverVelocity || p == Param::LeoVelocityOffset;
    leocrlb::Vec3 g;
    for (int a = 0; a < 3; ++a) {
        g[a] = central_difference(base, perturbation(p, a, leo), step(p), [&](const Model& m) {
            return hold_los ? doppler(m, r, base) : doppler(m, r);
        });
    }
    return g;
}

/// ||a - b|| / ||b||; absolute when b vanishes.
inline double rel_err(const leocrlb::Vec3& a, const leocrlb::Vec3& b) {
    const double nb = b.norm();
    return nb > 0.0 ? (a - b).norm() / nb : a.norm();
}

/// Schur complement by direct solve, in Jacobi-scaled coordinates.
inline Eigen::MatrixXd schur_direct(const Eigen::MatrixXd& j, int n) {
    const Eigen::VectorXd d = j.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd js = d.asDiagonal() * j * d.asDiagonal();
    const int m = static_cast<int>(j.rows()) - n;
    const Eigen::MatrixXd a = js.topLeftCorner(n, n);
    const Eigen::MatrixXd b = js.topRightCorner(n, m);
    const Eigen::MatrixXd c = js.bottomRightCorner(m, m);
    const Eigen::MatrixXd e = a - b * c.ldlt().solve(b.transpose());
    const Eigen::VectorXd dn = d.head(n).cwiseInverse();
    return dn.asDiagonal() * e * dn.asDiagonal();
}

/// Top-left n x n block of the inverse, through the Jacobi-scaled matrix.
inline Eigen::MatrixXd inverse_top_left(const Eigen::MatrixXd& j, int n) {
    const Eigen::VectorXd d = j.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd js = d.asDiagonal() * j * d.asDiagonal();
    const Eigen::MatrixXd inv = js.ldlt().solve(Eigen::MatrixXd::Identity(j.rows(), j.cols()));
    return (d.asDiagonal() * inv * d.asDiagonal()).topLeftCorner(n, n);
}

using Quad = boost::multiprecision::cpp_bin_float_quad;
using MatQ = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;

/// Channel FIM accumulated in quad precision as a sum of per-observation
/// rank-one terms. Per-observation weights come from the double-precision
/// signal model.
inline MatQ channel_fim_quad(const leocrlb::Scenario& s, leocrlb::ParamCase pc) {
    using namespace leocrlb;
    const auto layouts = channel_layouts(s, pc);
    int dim = 0;
    for (const auto& l : layouts) dim += l.dim();
    MatQ j = MatQ::Zero(dim, dim);
    int o = 0;
    for (const auto& l : layouts) {
        const SignalProps& p = s.props(l.kind);
        const double eps = s.offsets(l.kind).freq_offset;
        const Quad ao2 = Quad(p.rms_duration) * Quad(p.rms_duration);
        const Quad wd = Quad(0.5) * Quad(p.snr_linear) * ao2;
        const Quad fc = Quad(p.carrier_freq);
        const Quad gain = Quad(p.snr_linear) /
                          (Quad(4) * boost::multiprecision::pow(boost::math::constants::pi<Quad>(), 2) *
                           Quad(p.gain_abs) * Quad(p.gain_abs));
        for (int k = 0; k < l.n_slots; ++k) {
            for (int rx = 0; rx < l.n_rx; ++rx) {
                const DelayRef ref{l.kind, l.link_index, rx, k};
                const double fo = effective_frequency(p.carrier_freq, doppler_for_delay(s, ref), eps);
                const Quad w = Quad(p.snr_linear) * Quad(omega(p, fo));
                const int d = o + l.delay(rx, k);
                const int t = o + l.time_offset();
                j(d, d) += w;
                j(t, t) += w;
                j(d, t) -= w;
                j(t, d) -= w;
                const int n = o + l.doppler_of(rx, k);
                const int e = o + l.freq_offset();
                j(n, n) += wd * fc * fc;
                j(e, e) += wd;
                j(n, e) -= wd * fc;
                j(e, n) -= wd * fc;
                const int g = o + l.gain_of_delay(rx, k);
                j(g, g) += gain;
            }
        }
        o += l.dim();
    }
    return j;
}

/// Leading n x n block of the inverse of the location FIM, in quad precision.
inline Eigen::MatrixXd location_inverse_top_left_quad(const leocrlb::Scenario& s, leocrlb::ParamCase pc, int n) {
    const MatQ eta = channel_fim_quad(s, pc);
    const MatQ ups = leocrlb::build_transformation_matrix(s, pc).matrix.cast<Quad>();
    const MatQ jk = ups * eta * ups.transpose();
    Eigen::Matrix<Quad, Eigen::Dynamic, 1> d(jk.rows());
    for (int i = 0; i < jk.rows(); ++i) d[i] = Quad(1) / boost::multiprecision::sqrt(jk(i, i));
    const MatQ js = d.asDiagonal() * jk * d.asDiagonal();
    const MatQ rhs = MatQ::Identity(jk.rows(), n);
    const MatQ x = js.ldlt().solve(rhs);
    const MatQ top = d.head(n).asDiagonal() * x.topRows(n) * d.head(n).asDiagonal();
    Eigen::MatrixXd out(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) out(a, b) = static_cast<double>(top(a, b));
    }
    return out;
}

/// Inverse from an upper-triangular factor R with R^T R = J.
inline Eigen::MatrixXd inverse_from_factor(const Eigen::MatrixXd& r) {
    const Eigen::MatrixXd ri = r.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(r.rows(), r.cols()));
    return ri * ri.transpose();
}

}  // namespace oracle
