// Receiver, LEO and base-station kinematics over transmission slots.
//
// All primitives are templated on the scalar type so that test oracles can
// re-evaluate the forward model in extended precision. The library itself
// instantiates them with double.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "leocrlb/errors.hpp"

namespace leocrlb {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

template <typename T>
using Vec3T = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3T = Eigen::Matrix<T, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;

/// Yaw (alpha, about z), pitch (psi, about y) and roll (phi, about x), radians.
template <typename T>
struct EulerAnglesT {
    T alpha{0};
    T psi{0};
    T phi{0};

    template <typename U>
    EulerAnglesT<U> cast() const {
        return {static_cast<U>(alpha), static_cast<U>(psi), static_cast<U>(phi)};
    }
};
using EulerAngles = EulerAnglesT<double>;

template <typename T>
struct ReceiverStateT {
    Vec3T<T> centroid_p0 = Vec3T<T>::Zero();
    Vec3T<T> velocity = Vec3T<T>::Zero();  // constant over slots
    EulerAnglesT<T> orientation{};
    std::vector<Vec3T<T>> antenna_offsets;  // body frame

    std::size_t n_antennas() const { return antenna_offsets.size(); }

    template <typename U>
    ReceiverStateT<U> cast() const {
        ReceiverStateT<U> out;
        out.centroid_p0 = centroid_p0.template cast<U>();
        out.velocity = velocity.template cast<U>();
        out.orientation = orientation.template cast<U>();
        out.antenna_offsets.reserve(antenna_offsets.size());
        for (const auto& s : antenna_offsets) out.antenna_offsets.push_back(s.template cast<U>());
        return out;
    }
};
using ReceiverState = ReceiverStateT<double>;

template <typename T>
struct LeoStateT {
    Vec3T<T> reference_p0 = Vec3T<T>::Zero();
    T speed{0};
    std::vector<Vec3T<T>> slot_directions;  // unit vectors, one per slot
    Vec3T<T> pos_offset = Vec3T<T>::Zero();
    Vec3T<T> vel_offset = Vec3T<T>::Zero();

    template <typename U>
    LeoStateT<U> cast() const {
        LeoStateT<U> out;
        out.reference_p0 = reference_p0.template cast<U>();
        out.speed = static_cast<U>(speed);
        out.slot_directions.reserve(slot_directions.size());
        for (const auto& d : slot_directions) out.slot_directions.push_back(d.template cast<U>());
        out.pos_offset = pos_offset.template cast<U>();
        out.vel_offset = vel_offset.template cast<U>();
        return out;
    }
};
using LeoState = LeoStateT<double>;

template <typename T>
struct BsStateT {
    Vec3T<T> position = Vec3T<T>::Zero();

    template <typename U>
    BsStateT<U> cast() const {
        return {position.template cast<U>()};
    }
};
using BsState = BsStateT<double>;

struct SlotGrid {
    int n_slots{1};
    double spacing{1.0};  // seconds
};

template <typename T>
struct DirectionT {
    Vec3T<T> unit;
    T distance;
};
using Direction = DirectionT<double>;

namespace detail {

template <typename T>
Mat3T<T> rot_z(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << cos(a), -sin(a), T(0), sin(a), cos(a), T(0), T(0), T(0), T(1);
    return m;
}
template <typename T>
Mat3T<T> rot_y(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << cos(a), T(0), sin(a), T(0), T(1), T(0), -sin(a), T(0), cos(a);
    return m;
}
template <typename T>
Mat3T<T> rot_x(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << T(1), T(0), T(0), T(0), cos(a), -sin(a), T(0), sin(a), cos(a);
    return m;
}
template <typename T>
Mat3T<T> drot_z(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << -sin(a), -cos(a), T(0), cos(a), -sin(a), T(0), T(0), T(0), T(0);
    return m;
}
template <typename T>
Mat3T<T> drot_y(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << -sin(a), T(0), cos(a), T(0), T(0), T(0), -cos(a), T(0), -sin(a);
    return m;
}
template <typename T>
Mat3T<T> drot_x(T a) {
    using std::cos;
    using std::sin;
    Mat3T<T> m;
    m << T(0), T(0), T(0), T(0), -sin(a), -cos(a), T(0), cos(a), -sin(a);
    return m;
}

inline void check_slot(int k, int n_slots) {
    if (k < 0 || k >= n_slots) {
        throw std::out_of_range("slot index " + std::to_string(k) + " outside [0, " +
                                std::to_string(n_slots) + ")");
    }
}

}  // namespace detail

/// Q = Rz(alpha) * Ry(psi) * Rx(phi).
template <typename T>
Mat3T<T> rotation_matrix(const EulerAnglesT<T>& a) {
    return detail::rot_z(a.alpha) * detail::rot_y(a.psi) * detail::rot_x(a.phi);
}

/// Partial derivatives of the rotation matrix with respect to (alpha, psi, phi).
template <typename T>
std::array<Mat3T<T>, 3> rotation_matrix_partials(const EulerAnglesT<T>& a) {
    const Mat3T<T> rz = detail::rot_z(a.alpha);
    const Mat3T<T> ry = detail::rot_y(a.psi);
    const Mat3T<T> rx = detail::rot_x(a.phi);
    return {detail::drot_z(a.alpha) * ry * rx, rz * detail::drot_y(a.psi) * rx,
            rz * ry * detail::drot_x(a.phi)};
}

template <typename T>
Vec3T<T> receiver_centroid(const ReceiverStateT<T>& rx, int k, const SlotGrid& grid) {
    detail::check_slot(k, grid.n_slots);
    return rx.centroid_p0 + T(k) * T(grid.spacing) * rx.velocity;
}

/// p_{u,k} = p_{U,0} + k dt v_U + Q s_u
template <typename T>
Vec3T<T> antenna_position(const ReceiverStateT<T>& rx, int u, int k, const SlotGrid& grid) {
    if (u < 0 || static_cast<std::size_t>(u) >= rx.antenna_offsets.size()) {
        throw std::out_of_range("antenna index " + std::to_string(u) + " outside [0, " +
                                std::to_string(rx.antenna_offsets.size()) + ")");
    }
    return receiver_centroid(rx, k, grid) +
           rotation_matrix(rx.orientation) * rx.antenna_offsets[static_cast<std::size_t>(u)];
}

/// Reference track p_{b,o} + k dt v_b d_{b,k}. With include_offset the constant
/// ephemeris error is added: p_off + k dt v_off.
template <typename T>
Vec3T<T> leo_position(const LeoStateT<T>& leo, int k, const SlotGrid& grid, bool include_offset) {
    detail::check_slot(k, grid.n_slots);
    if (static_cast<std::size_t>(k) >= leo.slot_directions.size()) {
        throw std::out_of_range("LEO has no direction for slot " + std::to_string(k));
    }
    const T t = T(k) * T(grid.spacing);
    Vec3T<T> p = leo.reference_p0 + t * leo.speed * leo.slot_directions[static_cast<std::size_t>(k)];
    if (include_offset) p += leo.pos_offset + t * leo.vel_offset;
    return p;
}

template <typename T>
Vec3T<T> leo_velocity(const LeoStateT<T>& leo, int k, bool include_offset) {
    if (k < 0 || static_cast<std::size_t>(k) >= leo.slot_directions.size()) {
        throw std::out_of_range("LEO has no direction for slot " + std::to_string(k));
    }
    Vec3T<T> v = leo.speed * leo.slot_directions[static_cast<std::size_t>(k)];
    if (include_offset) v += leo.vel_offset;
    return v;
}

template <typename T>
DirectionT<T> unit_direction(const Vec3T<T>& from, const Vec3T<T>& to) {
    const Vec3T<T> diff = to - from;
    const T d = diff.norm();
    if (!(d > T(0))) throw DegenerateGeometryError("coincident points have no direction");
    return {diff / d, d};
}

template <typename T>
T delay(const Vec3T<T>& from, const Vec3T<T>& to) {
    return unit_direction(from, to).distance / T(kSpeedOfLight);
}

/// Normalised Doppler d' v_rel / c. The caller supplies the link's relative velocity.
template <typename T>
T doppler(const Vec3T<T>& direction, const Vec3T<T>& v_rel) {
    return direction.dot(v_rel) / T(kSpeedOfLight);
}

}  // namespace leocrlb
