#include <doctest.h>

#include <vector>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "leocrlb/fim_channel.hpp"
#include "leocrlb/fim_location.hpp"
#include "leocrlb/linalg.hpp"
#include "leocrlb/random.hpp"
#include "oracles.hpp"

using namespace leocrlb;

namespace {

Eigen::MatrixXd location_fim(const Scenario& s, ParamCase pc) {
    const ChannelFim c = assemble_channel_fim(s, pc);
    return transform_fim(c.matrix, build_transformation_matrix(s, pc).matrix);
}

double scaled_min_eig_ratio(const Eigen::MatrixXd& m, const Eigen::VectorXd& d) {
    const Eigen::MatrixXd sc = d.asDiagonal() * m * d.asDiagonal();
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sc).eigenvalues();
    return ev.minCoeff() / ev.maxCoeff();
}

Eigen::MatrixXd random_spd(int n, SplitMix64& rng) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    }
    return a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("all SNRs zero give zero interest FIM and zero loss") {
    ScenarioTemplate t = fixture::small_template(1, 3, 3, 2);
    t.snr_leo_rx = t.snr_bs_rx = t.snr_leo_bs = 0.0;
    const Scenario s = generate_scenario(t, 1);
    CHECK(assemble_interest_fim(s, ParamCase::WithBsObservations).matrix.isZero(0.0));
    CHECK(assemble_information_loss(s, ParamCase::WithBsObservations).matrix.isZero(0.0));
}

TEST_CASE("interest FIM equals the interest block of the transformed FIM") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const ParamCase pc = seed % 2 ? ParamCase::WithBsObservations : ParamCase::ReceiverOnly;
        const int n_leo = 1 + static_cast<int>(seed % 3);
        const Scenario s = generate_scenario(fixture::small_template(n_leo, 3, 3, 3), seed);
        const int n = 9 + 6 * n_leo;
        const Eigen::MatrixXd jk = location_fim(s, pc);
        CHECK(relative_frobenius(assemble_interest_fim(s, pc).matrix, jk.topLeftCorner(n, n)) < 1e-12);
    }
}

TEST_CASE("orientation information vanishes without an antenna aperture") {
    ScenarioTemplate t = fixture::small_template(1, 3, 3, 3);
    t.array_extent_wavelengths = 0.0;
    const Scenario s = generate_scenario(t, 2);
    const Eigen::MatrixXd j = assemble_interest_fim(s, ParamCase::WithBsObservations).matrix;
    CHECK(j.block(6, 0, 3, j.cols()).isZero(0.0));
    CHECK(j.block(0, 6, j.rows(), 3).isZero(0.0));
}

TEST_CASE("Schur route on hand-sized matrices") {
    SUBCASE("[[2,1],[1,1]] leaves one") {
        Eigen::MatrixXd j(2, 2);
        j << 2, 1, 1, 1;
        const Efim e = efim_schur_route(j, 1, 0);
        CHECK(e.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("loss of a scalar against one nuisance is J12^2 / J22") {
        Eigen::MatrixXd j(2, 2);
        j << 7.5, -2.0, -2.0, 3.2;
        const Efim e = efim_schur_route(j, 1, 0);
        CHECK(7.5 - e.matrix(0, 0) == doctest::Approx(4.0 / 3.2).epsilon(1e-13));
    }
    SUBCASE("zero coupling keeps the interest block exactly") {
        SplitMix64 rng(3);
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(7, 7);
        j.topLeftCorner(4, 4) = random_spd(4, rng);
        j.bottomRightCorner(3, 3) = random_spd(3, rng);
        CHECK(efim_schur_route(j, 4, 0).matrix == j.topLeftCorner(4, 4));
    }
    SUBCASE("inverse of the EFIM is the leading block of the inverse") {
        SplitMix64 rng(5);
        for (int i = 0; i < 10; ++i) {
            const Eigen::MatrixXd j = random_spd(9, rng);
            const Efim e = efim_schur_route(j, 5, 0);
            const Eigen::MatrixXd lhs = e.matrix.inverse();
            const Eigen::MatrixXd rhs = j.inverse().topLeftCorner(5, 5);
            CHECK(relative_frobenius(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("three routes agree on random scenarios") {
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        const ParamCase pc = seed % 2 ? ParamCase::WithBsObservations : ParamCase::ReceiverOnly;
        const int n_leo = 1 + static_cast<int>(seed % 3);
        const Scenario s = generate_scenario(fixture::small_template(n_leo, 3, 3 + n_leo / 3, 4), seed);
        const LocationLayout layout = LocationLayout::make(s, pc);
        const Efim schur = efim_schur_route(location_fim(s, pc), layout);
        const Efim lemma = efim_lemma_route(s, pc);
        const Efim root = efim_square_root_route(s, pc);
        CHECK(relative_frobenius(lemma.matrix, schur.matrix) < 1e-8);
        CHECK(relative_frobenius(root.matrix, schur.matrix) < 1e-8);
        CHECK(relative_frobenius(root.factor.transpose() * root.factor, root.matrix) < 1e-14);
        CHECK(root.factor.isUpperTriangular(0.0));
    }
}

TEST_CASE("lemma route is interest FIM minus loss") {
    const Scenario s = generate_scenario(fixture::small_template(2, 3, 3, 2), 4);
    const auto pc = ParamCase::WithBsObservations;
    const Eigen::MatrixXd diff =
        assemble_interest_fim(s, pc).matrix - assemble_information_loss(s, pc).matrix;
    CHECK(relative_frobenius(efim_lemma_route(s, pc).matrix, diff) < 1e-15);
}

TEST_CASE("EFIM is dominated by the interest FIM") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Scenario s = generate_scenario(fixture::small_template(1, 3, 3, 4), seed);
        const auto pc = ParamCase::WithBsObservations;
        const Eigen::MatrixXd j = assemble_interest_fim(s, pc).matrix;
        const Eigen::MatrixXd loss = j - compute_efim(s, pc).matrix;
        CHECK(scaled_min_eig_ratio(loss, jacobi_scaling(j)) > -1e-9);
    }
}

TEST_CASE("removing the gains leaves the Schur route unchanged") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Scenario s = generate_scenario(fixture::small_template(2, 3, 3, 3), seed);
        const auto pc = ParamCase::WithBsObservations;
        const LocationLayout layout = LocationLayout::make(s, pc);
        const Eigen::MatrixXd j = location_fim(s, pc);

        std::vector<int> keep;
        for (int i = 0; i < layout.n_total; ++i) keep.push_back(i);
        for (const auto& n : layout.nuisance) {
            for (int g = n.gain_begin; g < n.gain_begin + n.n_gain; ++g) std::erase(keep, g);
        }
        const int m = static_cast<int>(keep.size());
        Eigen::MatrixXd reduced(m, m);
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) reduced(a, b) = j(keep[a], keep[b]);
        }
        const Efim with = efim_schur_route(j, layout);
        const Efim without = efim_schur_route(reduced, layout.n_interest, layout.n_leo);
        CHECK(with.matrix == without.matrix);
    }
}

TEST_CASE("EFIM inverse is the leading block of the full inverse on scenarios") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Scenario s = generate_scenario(fixture::small_template(1, 3, 3, 4), seed);
        const auto pc = ParamCase::WithBsObservations;
        const Efim e = compute_efim(s, pc);
        const Eigen::MatrixXd lhs = oracle::inverse_from_factor(e.factor);
        const Eigen::MatrixXd rhs = oracle::location_inverse_top_left_quad(s, pc, e.dim());
        CHECK(relative_frobenius(lhs, rhs) < 1e-9);
    }
}
