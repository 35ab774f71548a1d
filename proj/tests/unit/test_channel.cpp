#include <cmath>

#include <Eigen/SVD>

#include "doctest.h"
#include "rotirs/beamform.hpp"
#include "rotirs/channel.hpp"
#include "rotirs/rng.hpp"
#include "support.hpp"

using namespace rotirs;
using testing::random_orientation;
using testing::reference_geometry;

namespace {

constexpr double kBeta = 1e-4;

bool bit_equal(const CMatrix& a, const CMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("anchor distances") {
    const FarFieldDistances d = far_field_distances(reference_geometry(8, 32, 32));
    CHECK(d.t11 == doctest::Approx(std::sqrt(1674.0)).epsilon(1e-14));
    CHECK(d.d11 == doctest::Approx(std::sqrt(2075.0)).epsilon(1e-14));
    CHECK(d.r1 == doctest::Approx(std::sqrt(1800.0)).epsilon(1e-14));
}

TEST_CASE("a pair one wavelength apart has zero phase") {
    const double lambda = 0.125;
    const std::vector<Vec3> tx{Vec3(0, 0, 0)}, rx{Vec3(0, lambda, 0)};
    const CMatrix m = los_matrix(tx, rx, kBeta, lambda, 20.0);
    CHECK(std::abs(std::arg(m(0, 0))) < 1e-12);
    CHECK(std::abs(m(0, 0)) == doctest::Approx(std::sqrt(kBeta) / 20.0).epsilon(1e-14));
}

TEST_CASE("LoS entries have the anchor amplitude and the exact-distance phase") {
    const ScenarioGeometry g = reference_geometry(8, 32, 16);
    std::mt19937_64 rng(1);
    const auto bs = bs_antenna_positions(g);
    const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), random_orientation(rng), Surface::Irs1);
    const double k = 2 * kPi / g.wavelength();
    const CMatrix m = los_matrix(bs, e1, kBeta, g.wavelength(), 40.0);
    REQUIRE(m.rows() == 32);
    REQUIRE(m.cols() == 8);
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double want = -k * (e1[size_t(n)] - bs[size_t(j)]).norm();
            REQUIRE(std::abs(wrap_phase(std::arg(m(n, j)) - want)) < 1e-9);
            REQUIRE(std::abs(std::abs(m(n, j)) - std::sqrt(kBeta) / 40.0) < 1e-15);
        }
    }
}

TEST_CASE("exact LoS matrices are numerically rank one at the reference distances") {
    const ScenarioGeometry g = reference_geometry(8, 32, 32);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const Orientation o1 = random_orientation(rng), o2 = random_orientation(rng);
        const auto bs = bs_antenna_positions(g);
        const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o1, Surface::Irs1);
        const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);
        const FarFieldDistances d = far_field_distances(g);
        const CMatrix gm = los_matrix(bs, e1, kBeta, g.wavelength(), d.t11);
        const CMatrix sm = los_matrix(e1, e2, kBeta, g.wavelength(), d.d11);
        const LosSignature sig = los_signature_decomposition(g, o1, o2, kBeta);
        CHECK(sig.far_field);
        for (const auto& [exact, recon] : {std::pair{gm, CMatrix(sig.g2 * sig.g1.transpose())},
                                           std::pair{sm, CMatrix(sig.s2 * sig.s1.transpose())}}) {
            Eigen::JacobiSVD<CMatrix> svd(exact, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto sv = svd.singularValues();
            CHECK(sv(0) * sv(0) / sv.squaredNorm() >= 0.99);
            const CMatrix best = sv(0) * svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
            // The signature fixes the phase reference; compare up to one global phase.
            const cplx align = (best.array() * recon.array().conjugate()).sum();
            const CMatrix aligned = recon * (align / std::abs(align));
            // Wavefront curvature across the apertures leaves a few percent at these distances.
            CHECK((aligned - best).norm() / best.norm() <= 0.1);
        }
    }
}

TEST_CASE("signature factors rebuild the planar matrices exactly") {
    const ScenarioGeometry g = reference_geometry(8, 32, 32);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Orientation o1 = random_orientation(rng), o2 = random_orientation(rng);
        const LosSignature sig = los_signature_decomposition(g, o1, o2, kBeta);
        const auto bs = bs_antenna_positions(g);
        const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o1, Surface::Irs1);
        const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);
        const FarFieldDistances d = far_field_distances(g);
        const CMatrix gp = planar_los_matrix(bs, e1, kBeta, g.wavelength(), d.t11);
        const CMatrix sp = planar_los_matrix(e1, e2, kBeta, g.wavelength(), d.d11);
        CHECK((sig.g2 * sig.g1.transpose() - gp).norm() / gp.norm() <= 1e-10);
        CHECK((sig.s2 * sig.s1.transpose() - sp).norm() / sp.norm() <= 1e-10);
        // Unit-modulus receive factors, common-magnitude transmit factors.
        CHECK((sig.g2.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
        CHECK((sig.s2.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
        CHECK((sig.g1.cwiseAbs().array() - std::sqrt(kBeta) / d.t11).abs().maxCoeff() < 1e-15);
        CHECK((sig.s1.cwiseAbs().array() - std::sqrt(kBeta) / d.d11).abs().maxCoeff() < 1e-15);

        ChannelOptions planar;
        planar.los_model = LosModel::Planar;
        const ChannelSet ch = synthesize_channels(g, o1, o2, RicianParams::uniform(kPureLos, kBeta), 0, planar);
        CHECK((ch.g - gp).norm() / gp.norm() <= 1e-12);
        CHECK((ch.f - planar_user_channel(g, o2, kBeta)).norm() <= 1e-15);
    }
}

TEST_CASE("single-element arrays reduce the signature to the LoS scalar") {
    const ScenarioGeometry g = reference_geometry(1, 1, 1);
    const LosSignature sig = los_signature_decomposition(g, {0.1, 0.2}, {-0.3, 0.1}, kBeta);
    const std::vector<Vec3> bs{g.bs_origin()}, e1{g.irs1_origin()};
    const CMatrix m = los_matrix(bs, e1, kBeta, g.wavelength(), (g.irs1_origin() - g.bs_origin()).norm());
    CHECK(std::abs(sig.g2(0) * sig.g1(0) - m(0, 0)) < 1e-12 * std::abs(m(0, 0)));
}

TEST_CASE("close, large arrays are flagged outside the far field") {
    const double lambda = testing::wavelength_24ghz();
    const ScenarioGeometry g({0, 0, 0}, {0, 3, 0}, {3, 0, 0}, {4, 4, 0}, near_square_layout(16, lambda / 2),
                             near_square_layout(1024, lambda / 2), near_square_layout(1024, lambda / 2), lambda);
    const LosSignature sig = los_signature_decomposition(g, {0, 0}, {0, 0}, kBeta);
    CHECK_FALSE(sig.far_field);
    CHECK(sig.aperture_ratio > 0.1);
}

TEST_CASE("complex Gaussian draws are CN(0, 1) and reproducible") {
    const CMatrix a = complex_gaussian(400, 250, 9);
    CHECK(bit_equal(a, complex_gaussian(400, 250, 9)));
    CHECK_FALSE(bit_equal(a, complex_gaussian(400, 250, 10)));
    const double n = static_cast<double>(a.size());
    CHECK(std::abs(a.sum() / n) < 0.01);
    CHECK(a.real().array().square().sum() / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(a.imag().array().square().sum() / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs((a.real().array() * a.imag().array()).sum() / n) < 0.01);
}

TEST_CASE("Rician mixing limits") {
    std::mt19937_64 rng(4);
    const CMatrix los = testing::random_cmatrix(rng, 6, 4) * 1e-3;
    CHECK(bit_equal(rician_channel(los, kPureLos, kBeta, 30.0, 5), los));
    const CMatrix nlos_only = rician_channel(los, 0.0, kBeta, 30.0, 5);
    const CMatrix want = (std::sqrt(kBeta) / 30.0) * complex_gaussian(6, 4, 5);
    CHECK((nlos_only - want).norm() <= 1e-15 * want.norm());
    CHECK_THROWS_AS(rician_channel(los, -1.0, kBeta, 30.0, 5), DomainError);
}

TEST_CASE("Rician mixing keeps the per-entry second moment") {
    const double amp = 40.0;
    const double target = kBeta / (amp * amp);
    for (double kappa : {0.5, 1.0, 10.0}) {
        CAPTURE(kappa);
        // Unit-modulus LoS with the anchor amplitude, 1e5 fading draws.
        const CMatrix los = CMatrix::Constant(1000, 100, std::polar(std::sqrt(kBeta) / amp, 0.7));
        const CMatrix h = rician_channel(los, kappa, kBeta, amp, 77);
        const double second = h.cwiseAbs2().sum() / static_cast<double>(h.size());
        CHECK(std::abs(second / target - 1.0) <= 0.02);
    }
}

TEST_CASE("the synthesizer composes los_matrix and rician_channel") {
    const ScenarioGeometry g = reference_geometry(4, 16, 9);
    const Orientation o1{0.2, -0.3}, o2{-0.5, 0.4};
    const auto bs = bs_antenna_positions(g);
    const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o1, Surface::Irs1);
    const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);
    const std::vector<Vec3> user{g.user_pos()};
    const FarFieldDistances d = far_field_distances(g);
    const CMatrix gl = los_matrix(bs, e1, kBeta, g.wavelength(), d.t11);
    const CMatrix sl = los_matrix(e1, e2, kBeta, g.wavelength(), d.d11);
    const CMatrix fl = los_matrix(user, e2, kBeta, g.wavelength(), d.r1);

    const ChannelSet pure = synthesize_channels(g, o1, o2, RicianParams::uniform(kPureLos, kBeta), 3);
    CHECK(bit_equal(pure.g, gl));
    CHECK(bit_equal(pure.s, sl));
    CHECK(bit_equal(pure.f, fl.col(0)));

    const std::uint64_t seed = 1234;
    const ChannelSet mixed = synthesize_channels(g, o1, o2, RicianParams{2.0, 3.0, 0.5, kBeta}, seed);
    CHECK(bit_equal(mixed.g, rician_channel(gl, 2.0, kBeta, d.t11, derive_seed(seed, kLinkG))));
    CHECK(bit_equal(mixed.s, rician_channel(sl, 3.0, kBeta, d.d11, derive_seed(seed, kLinkS))));
    CHECK(bit_equal(mixed.f, rician_channel(fl, 0.5, kBeta, d.r1, derive_seed(seed, kLinkF)).col(0)));
}

TEST_CASE("per-element NLoS amplitudes use element distances") {
    const ScenarioGeometry g = reference_geometry(2, 4, 4);
    ChannelOptions opts;
    opts.nlos_amplitude = NlosAmplitude::PerElement;
    const Orientation o{0.1, 0.1};
    const ChannelSet ch = synthesize_channels(g, o, o, RicianParams::uniform(0.0, kBeta), 8, opts);
    const CMatrix draws = complex_gaussian(4, 2, derive_seed(8, kLinkG));
    const auto bs = bs_antenna_positions(g);
    const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o, Surface::Irs1);
    for (Eigen::Index n = 0; n < 4; ++n)
        for (Eigen::Index m = 0; m < 2; ++m)
            CHECK(std::abs(ch.g(n, m) - std::sqrt(kBeta) / (e1[size_t(n)] - bs[size_t(m)]).norm() * draws(n, m)) <
                  1e-16);
}

TEST_CASE("orientation changes move only the links they touch") {
    const ScenarioGeometry g = reference_geometry(4, 16, 16);
    const RicianParams p = RicianParams::uniform(1.0, kBeta);
    const ChannelSynthesizer synth(g, p, 42);
    const ChannelSet base = synth({0.1, 0.2}, {0.3, -0.1});
    const ChannelSet moved1 = synth({-0.4, 0.5}, {0.3, -0.1});
    const ChannelSet moved2 = synth({0.1, 0.2}, {-0.6, 0.2});
    CHECK(bit_equal(moved1.f, base.f));
    CHECK_FALSE(bit_equal(moved1.g, base.g));
    CHECK_FALSE(bit_equal(moved1.s, base.s));
    CHECK(bit_equal(moved2.g, base.g));
    CHECK_FALSE(bit_equal(moved2.s, base.s));
    CHECK_FALSE(bit_equal(moved2.f, base.f));
    // Frozen draws: re-synthesizing returns identical channels.
    const ChannelSet again = synth({0.1, 0.2}, {0.3, -0.1});
    CHECK(bit_equal(again.g, base.g));
    CHECK(bit_equal(again.s, base.s));
    CHECK(bit_equal(again.f, base.f));
}

TEST_CASE("channel parameters are validated") {
    CHECK_THROWS(RicianParams{-1.0, 1.0, 1.0, kBeta}.validate());
    CHECK_THROWS(RicianParams{1.0, 1.0, 1.0, 0.0}.validate());
    CHECK(RicianParams::uniform(kPureLos, kBeta).pure_los());
    CHECK_FALSE(RicianParams{kPureLos, 1.0, kPureLos, kBeta}.pure_los());
}
