#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mplc/beam_array.hpp"
#include "mplc/errors.hpp"

using namespace mplc;

namespace {

constexpr double lambda = 637e-9;
const SamplingGrid grid = SamplingGrid::centered(256, 256, 20e-6);

BeamArraySpec untilted_reference() {
    auto s = BeamArraySpec::reference_input();
    s.tilt_beam = 0;
    s.tilt_gradient = 0.0;
    return s;
}

} // namespace

TEST(BeamArray, ReferenceOverlapOfNeighbouringBeams) {
    const auto beams = make_beam_array(untilted_reference(), grid).beams;
    ASSERT_EQ(beams.size(), 2u);
    const double closed = std::exp(-std::pow(704.0 / 161.5, 2) / 2);
    EXPECT_NEAR(closed, 7.4776e-5, 1e-9);
    EXPECT_NEAR(std::abs(inner_product(beams[0], beams[1])), closed, 1e-9);
}

TEST(BeamArray, OverlapIsInverseEOnePerSqrtTwoWaists) {
    auto s = untilted_reference();
    s.spacing = std::sqrt(2.0) * s.waist;
    const auto beams = make_beam_array(s, grid).beams;
    EXPECT_NEAR(std::abs(inner_product(beams[0], beams[1])), std::exp(-1.0), 1e-9);
}

TEST(BeamArray, BeamsAreUnitNorm) {
    const auto arr = make_beam_array(BeamArraySpec::reference_input(), grid);
    EXPECT_FALSE(arr.window_clip);
    for (const auto& b : arr.beams) EXPECT_NEAR(norm(b), 1.0, 1e-12);
}

TEST(BeamArray, TiltAddsLinearPhaseOnTheChosenBeamOnly) {
    auto s = BeamArraySpec::reference_input();
    s.waist_offset = 0.0;
    const auto g = SamplingGrid::centered(64, 64, 20e-6);
    s.axis_origin = {0.0, g.y(20)};
    s.spacing = 24 * 20e-6;
    const auto beams = make_beam_array(s, g).beams;
    const double step = std::arg(beams[1](32, 45) / beams[1](32, 44));
    EXPECT_NEAR(step, std::numbers::pi / 18.0, 1e-12);
    EXPECT_NEAR(std::arg(beams[0](32, 21) / beams[0](32, 20)), 0.0, 1e-12);
}

TEST(BeamArray, SizeAtPlaneUsesWaistOffset) {
    const auto s = BeamArraySpec::reference_input();
    const double z0 = std::numbers::pi * 161.5e-6 * 161.5e-6 / lambda;
    EXPECT_NEAR(s.rayleigh_range(), z0, 1e-15);
    EXPECT_NEAR(s.size_at_plane(), 161.5e-6 * std::sqrt(1 + std::pow(0.0208 / z0, 2)), 1e-15);
    EXPECT_NEAR(s.size_at_plane(), 163.6e-6, 0.1e-6);
}

TEST(BeamArray, ReferenceCentresStraddleTheAxis) {
    const auto s = BeamArraySpec::reference_input();
    EXPECT_NEAR(s.center(1).y, -352e-6, 1e-18);
    EXPECT_NEAR(s.center(2).y, 352e-6, 1e-18);
    EXPECT_EQ(s.tilt_beam, 2u);
    EXPECT_NEAR(s.tilt_gradient * 20e-6, std::numbers::pi / 18.0, 1e-15);
}

TEST(BeamArray, DemagnifiedOutputArray) {
    const auto out = BeamArraySpec::reference_input().demagnified(4.0);
    EXPECT_NEAR(out.waist, 40.375e-6, 1e-18);
    EXPECT_NEAR(out.spacing, 176e-6, 1e-18);
    EXPECT_NEAR(out.center(1).y, -88e-6, 1e-18);
    EXPECT_NEAR(out.center(2).y, 88e-6, 1e-18);
    EXPECT_EQ(out.waist_offset, 0.0);
    EXPECT_EQ(out.tilt_beam, 0u);
    EXPECT_THROW(out.demagnified(0.0), ParameterRange);
}

TEST(BeamArray, ClipFlagWhenBeamReachesWindowEdge) {
    const auto g = SamplingGrid::centered(32, 32, 20e-6);
    EXPECT_TRUE(gaussian_beam(g, {0, 250e-6}, 100e-6, 0.0, 0.0, lambda).window_clip);
    EXPECT_FALSE(gaussian_beam(g, {0, 0}, 50e-6, 0.0, 0.0, lambda).window_clip);
}

TEST(BeamArray, ValidationRejectsBadSpecs) {
    auto s = BeamArraySpec::reference_input();
    s.tilt_beam = 3;
    EXPECT_THROW(s.validate(), ParameterRange);
    s = BeamArraySpec::reference_input();
    s.waist = 0.0;
    EXPECT_THROW(make_beam_array(s, grid), ParameterRange);
}

TEST(BeamArray, OverlapMatrixOfOrthonormalSet) {
    const auto out = make_beam_array(BeamArraySpec::reference_input().demagnified(4.0), grid).beams;
    const auto m = overlap_matrix(out, out);
    EXPECT_NEAR(std::abs(m(0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(m(1, 1) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(m(0, 1)), std::exp(-std::pow(176.0 / 40.375, 2) / 2), 1e-9);
}

TEST(BeamArray, TargetStatesSuperposeTheBasis) {
    const auto spec = BeamArraySpec::reference_input().demagnified(4.0);
    const auto basis = make_beam_array(spec, grid).beams;
    TransferMatrix u(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    u << r, cplx(0, r), cplx(0, r), r;
    const auto t = target_states(basis, u);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_NEAR(norm(t[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(inner_product(basis[0], t[0])), r, 1e-4);
    EXPECT_NEAR(std::abs(inner_product(basis[1], t[0])), r, 1e-4);
    const auto id = target_states(spec, grid, TransferMatrix::Identity(2, 2));
    EXPECT_LT(rms_difference(id[1], basis[1]), 1e-12);
    EXPECT_THROW(target_states(basis, TransferMatrix::Identity(3, 3)), DimensionMismatch);
}
