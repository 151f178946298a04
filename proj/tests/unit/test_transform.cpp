#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "leocrlb/fim_channel.hpp"
#include "leocrlb/linalg.hpp"
#include "leocrlb/transform.hpp"
#include "oracles.hpp"

using namespace leocrlb;
using oracle::Param;

TEST_CASE("axis-aligned delay partial") {
    Scenario s = fixture::tiny();
    s.receiver.centroid_p0 = Vec3(2.0e6, 0, 0);
    s.leos[0].reference_p0 = Vec3::Zero();
    const DelayRef r{LinkKind::LeoRx, 0, 0, 0};
    CHECK((dtau_dpU(s, r) - Vec3(1, 0, 0) / kSpeedOfLight).norm() < 1e-24);
    CHECK(dtau_dpoff(s, r) == -dtau_dpU(s, r));
}

TEST_CASE("delay velocity partials are linear in the slot index") {
    ScenarioTemplate t = fixture::small_template(1, 1, 3, 1);
    t.array_extent_wavelengths = 0.0;
    const Scenario s = generate_scenario(t, 4);
    CHECK(dtau_dvU(s, {LinkKind::LeoRx, 0, 0, 0}).isZero(0.0));
    // Positions move between slots, so compare against the slot's own direction.
    const DelayRef r2{LinkKind::LeoRx, 0, 0, 2};
    CHECK((dtau_dvU(s, r2) - 2.0 * dtau_dpU(s, r2)).norm() < 1e-24);
    CHECK((dtau_dvoff(s, r2) + 2.0 * dtau_dpU(s, r2)).norm() < 1e-24);
}

TEST_CASE("Doppler position partials") {
    Scenario s = fixture::tiny();
    s.receiver.velocity = Vec3::Zero();
    s.receiver.centroid_p0 = Vec3(0, 0, 0);
    s.leos[0].reference_p0 = Vec3(0, 0, -2.0e6);

    SUBCASE("relative velocity along the line of sight") {
        s.leos[0].slot_directions = {Vec3::UnitZ()};
        CHECK(dnu_dpU(s, {LinkKind::LeoRx, 0, 0, 0}).norm() < 1e-30);
    }
    SUBCASE("perpendicular relative velocity gives v / (c d)") {
        s.leos[0].slot_directions = {Vec3::UnitX()};
        const Vec3 g = dnu_dpU(s, {LinkKind::LeoRx, 0, 0, 0});
        CHECK(g.norm() == doctest::Approx(8000.0 / (kSpeedOfLight * 2.0e6)).epsilon(1e-12));
        CHECK(dnu_dpoff(s, {LinkKind::LeoRx, 0, 0, 0}) == -g);
    }
}

TEST_CASE("Doppler velocity partials have magnitude 1/c") {
    const Scenario s = generate_scenario(fixture::small_template(1, 2, 2, 2), 8);
    const DopplerRef r{LinkKind::LeoRx, 0, 0, 1};
    CHECK(dnu_dvU(s, r).norm() == doctest::Approx(1.0 / kSpeedOfLight).epsilon(1e-14));
    CHECK(dnu_dvoff(s, r) == -dnu_dvU(s, r));
    const DopplerRef q{LinkKind::BsRx, 1, 0, 1};
    CHECK((dnu_dvU(s, q) + doppler_direction(s, q).unit / kSpeedOfLight).norm() < 1e-24);
}

TEST_CASE("orientation partial") {
    Scenario s = fixture::tiny();
    SUBCASE("vanishes at the centroid") {
        CHECK(dtau_dPhi(s, {LinkKind::LeoRx, 0, 0, 0}).isZero(0.0));
    }
    SUBCASE("scales with the antenna offset") {
        s.receiver.antenna_offsets = {Vec3(0.01, -0.02, 0.005), Vec3(0.02, -0.04, 0.01)};
        const Vec3 a = dtau_dPhi(s, {LinkKind::BsRx, 0, 0, 0});
        const Vec3 b = dtau_dPhi(s, {LinkKind::BsRx, 0, 1, 0});
        // Directions differ slightly between the two antennas.
        CHECK((b - 2.0 * a).norm() / b.norm() < 1e-3);
    }
}

TEST_CASE("partials match extended-precision central differences") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int n_leo = 1 + static_cast<int>(seed % 2);
        const Scenario s = generate_scenario(fixture::small_template(n_leo, 2, 3, 3), seed);
        for (int b = 0; b < n_leo; ++b) {
            for (int k = 0; k < 3; ++k) {
                for (int u = 0; u < 3; ++u) {
                    const DelayRef r{LinkKind::LeoRx, b, u, k};
                    CHECK(oracle::rel_err(dtau_dpU(s, r), oracle::delay_gradient_fd(s, r, Param::ReceiverPosition)) < 1e-6);
                    CHECK(oracle::rel_err(dtau_dvU(s, r), oracle::delay_gradient_fd(s, r, Param::ReceiverVelocity)) < 1e-6);
                    CHECK(oracle::rel_err(dtau_dPhi(s, r), oracle::delay_gradient_fd(s, r, Param::Orientation)) < 1e-6);
                    CHECK(oracle::rel_err(dtau_dpoff(s, r), oracle::delay_gradient_fd(s, r, Param::LeoPositionOffset, b)) < 1e-6);
                    CHECK(oracle::rel_err(dtau_dvoff(s, r), oracle::delay_gradient_fd(s, r, Param::LeoVelocityOffset, b)) < 1e-6);
                }
                const DopplerRef d{LinkKind::LeoRx, b, 0, k};
                CHECK(oracle::rel_err(dnu_dpU(s, d), oracle::doppler_gradient_fd(s, d, Param::ReceiverPosition)) < 1e-6);
                CHECK(oracle::rel_err(dnu_dvU(s, d), oracle::doppler_gradient_fd(s, d, Param::ReceiverVelocity)) < 1e-6);
                CHECK(oracle::rel_err(dnu_dpoff(s, d), oracle::doppler_gradient_fd(s, d, Param::LeoPositionOffset, b)) < 1e-6);
                CHECK(oracle::rel_err(dnu_dvoff(s, d), oracle::doppler_gradient_fd(s, d, Param::LeoVelocityOffset, b)) < 1e-6);
            }
        }
    }
}

TEST_CASE("links without a parameter have zero partials") {
    const Scenario s = generate_scenario(fixture::small_template(1, 2, 2, 2), 2);
    const DelayRef bs{LinkKind::BsRx, 1, 1, 1};
    CHECK(dtau_dpoff(s, bs).isZero(0.0));
    CHECK(dtau_dvoff(s, bs).isZero(0.0));
    const DelayRef lb{LinkKind::LeoBs, 0, 1, 1};
    CHECK(dtau_dpU(s, lb).isZero(0.0));
    CHECK(dtau_dvU(s, lb).isZero(0.0));
    CHECK(dtau_dPhi(s, lb).isZero(0.0));
    const DopplerRef lbd{LinkKind::LeoBs, 0, 1, 1};
    CHECK(dnu_dpU(s, lbd).isZero(0.0));
    CHECK(dnu_dvU(s, lbd).isZero(0.0));
}

TEST_CASE("transformation matrix structure") {
    const Scenario s = generate_scenario(fixture::small_template(2, 3, 2, 2), 6);
    const TransformationMatrix t = build_transformation_matrix(s, ParamCase::WithBsObservations);
    const LocationLayout& loc = t.location;
    REQUIRE(t.matrix.rows() == loc.n_total);

    // Nuisance rows select channel coordinates with unit weight.
    const Eigen::MatrixXd nuis = t.matrix.bottomRows(loc.n_nuisance());
    for (int r = 0; r < nuis.rows(); ++r) {
        for (int c = 0; c < nuis.cols(); ++c) CHECK((nuis(r, c) == 0.0 || nuis(r, c) == 1.0));
    }
    // Every channel nuisance column is picked by exactly one row.
    for (std::size_t i = 0; i < t.channel.size(); ++i) {
        const ChannelLayout& l = t.channel[i];
        const int o = t.channel_offsets[i];
        CHECK(nuis.col(o + l.time_offset()).sum() == 1.0);
        CHECK(nuis.col(o + l.freq_offset()).sum() == 1.0);
        if (l.kind == LinkKind::BsRx) {
            // BS delays do not depend on the LEO offsets.
            const int d = o + l.delay(1, 1);
            CHECK(t.matrix.block(9, d, 12, 1).isZero(0.0));
        }
    }
    // All base-station links share one time and one frequency offset.
    int shared = -1;
    for (const auto& n : loc.nuisance) {
        if (n.kind != LinkKind::BsRx) continue;
        if (shared < 0) shared = n.time_offset;
        CHECK(n.time_offset == shared);
    }
}

TEST_CASE("congruence") {
    const Scenario s = generate_scenario(fixture::small_template(1, 2, 2, 2), 12);
    const ChannelFim c = assemble_channel_fim(s, ParamCase::WithBsObservations);

    SUBCASE("identity leaves the FIM unchanged") {
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(c.matrix.rows(), c.matrix.cols());
        CHECK(relative_frobenius(transform_fim(c.matrix, id), c.matrix) < 1e-15);
    }
    SUBCASE("matches an explicit triple product and keeps rank") {
        const TransformationMatrix t = build_transformation_matrix(s, ParamCase::WithBsObservations);
        const Eigen::MatrixXd jk = transform_fim(c.matrix, t.matrix);
        Eigen::MatrixXd explicit_product = Eigen::MatrixXd::Zero(jk.rows(), jk.cols());
        for (int i = 0; i < jk.rows(); ++i) {
            for (int j = 0; j < jk.cols(); ++j) {
                double acc = 0.0;
                for (int a = 0; a < c.matrix.rows(); ++a) {
                    for (int b = 0; b < c.matrix.cols(); ++b) acc += t.matrix(i, a) * c.matrix(a, b) * t.matrix(j, b);
                }
                explicit_product(i, j) = acc;
            }
        }
        CHECK(relative_frobenius(jk, explicit_product) < 1e-12);
        CHECK(relative_asymmetry(jk) == 0.0);

        const Eigen::VectorXd d = jacobi_scaling(jk);
        const Eigen::MatrixXd sc = d.asDiagonal() * jk * d.asDiagonal();
        const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sc).eigenvalues();
        CHECK(ev.minCoeff() > -1e-9 * ev.maxCoeff());
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(transform_fim(c.matrix, Eigen::MatrixXd::Identity(3, 4)), DimensionError);
    }
}
