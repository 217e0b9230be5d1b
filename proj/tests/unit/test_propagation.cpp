#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mplc/beam_array.hpp"
#include "mplc/errors.hpp"
#include "mplc/mask_io.hpp"
#include "mplc/propagation.hpp"

using namespace mplc;

namespace {

constexpr double lambda = 637e-9;
constexpr double pi = std::numbers::pi;

// 1/e^2 half-width from the second moment of the x marginal.
double second_moment_size(const ComplexField& f) {
    const auto m = marginal_intensity_x(f);
    const auto& g = f.grid();
    double s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        s0 += m[i];
        s1 += m[i] * g.x(i);
        s2 += m[i] * g.x(i) * g.x(i);
    }
    const double mean = s1 / s0;
    return 2.0 * std::sqrt(s2 / s0 - mean * mean);
}

PhaseMask random_mask(const SamplingGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    PhaseMask m(g);
    for (auto& v : m.phase()) v = u(rng);
    return m;
}

PhaseMaskStack random_stack(const SamplingGrid& g, std::size_t planes, double dz) {
    auto s = PhaseMaskStack::zeros(g, planes, dz);
    for (std::size_t p = 0; p < planes; ++p) s.masks[p] = random_mask(g, 40 + p);
    return s;
}

const SamplingGrid grid = SamplingGrid::centered(256, 256, 20e-6);

// RMS sample difference relative to the RMS of b.
double relative_rms(const ComplexField& a, const ComplexField& b) {
    return rms_difference(a, b) / (norm(b) / std::sqrt(b.grid().size() * b.grid().cell_area()));
}

ComplexField test_beam() { return gaussian_beam(grid, {30e-6, -60e-6}, 161.5e-6, 0.0, 0.0, lambda).field; }

} // namespace

TEST(Propagation, GaussianExpansionFollowsClosedForm) {
    const double w0 = 161.5e-6;
    const auto f = gaussian_beam(grid, {0, 0}, w0, 0.0, 0.0, lambda).field;
    for (double z : {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double expected = gaussian_size(w0, lambda, z);
        EXPECT_NEAR(second_moment_size(propagate(f, z, lambda)) / expected, 1.0, 0.01) << "z = " << z;
    }
}

TEST(Propagation, GaussianSizeClosedForm) {
    const double z0 = rayleigh_range(161.5e-6, lambda);
    EXPECT_NEAR(z0, pi * 161.5e-6 * 161.5e-6 / lambda, 1e-15);
    EXPECT_NEAR(gaussian_size(161.5e-6, lambda, z0), 161.5e-6 * std::sqrt(2.0), 1e-15);
}

TEST(Propagation, PlaneWaveGainsPropagationPhase) {
    const auto g = SamplingGrid::centered(16, 16, 20e-6);
    ComplexField f(g);
    for (auto& v : f.values()) v = 1.0;
    const double z = 0.1 + 0.25 * lambda;
    const auto out = propagate(f, z, lambda, BandLimit::never);
    const cplx expected = std::polar(1.0, std::fmod(2 * pi * z / lambda, 2 * pi));
    for (const auto& v : out.values()) EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-9);
}

TEST(Propagation, ConservesNormWithoutBandLimit) {
    const auto f = test_beam();
    for (double z : {0.01, 0.1, 0.5, -0.2}) EXPECT_NEAR(norm(propagate(f, z, lambda)), norm(f), 1e-9) << z;
}

TEST(Propagation, BandLimitEngagesBeyondThreshold) {
    // n p^2 / lambda = 256 * (20 um)^2 / 637 nm = 0.1607 m
    EXPECT_FALSE(Propagator(grid, 0.1, lambda).band_limited());
    EXPECT_TRUE(Propagator(grid, 0.2, lambda).band_limited());
    EXPECT_TRUE(Propagator(grid, 0.05, lambda, BandLimit::always).band_limited());
    EXPECT_FALSE(Propagator(grid, 0.5, lambda, BandLimit::never).band_limited());
}

TEST(Propagation, ForwardThenBackwardIsIdentity) {
    const auto f = test_beam();
    for (double z : {0.01, 0.1, 0.16}) {
        const Propagator p(grid, z, lambda);
        ASSERT_FALSE(p.band_limited());
        EXPECT_LT(relative_rms(p.backward(p.forward(f)), f), 1e-9) << z;
    }
    EXPECT_LT(relative_rms(propagate(propagate(f, 0.5, lambda, BandLimit::never), -0.5, lambda, BandLimit::never), f),
              1e-9);
}

TEST(Propagation, BandLimitedRoundTripIsAProjection) {
    // Beyond the threshold the clipped spectrum is lost, so the round trip is
    // the identity only on the pass band: applying it twice changes nothing.
    const auto f = test_beam();
    const Propagator p(grid, 0.5, lambda);
    ASSERT_TRUE(p.band_limited());
    const auto once = p.backward(p.forward(f));
    EXPECT_LT(relative_rms(p.backward(p.forward(once)), once), 1e-9);
    EXPECT_LT(relative_rms(once, f), 1e-6);
}

TEST(Propagation, DistancesCompose) {
    const auto f = test_beam();
    const auto two = propagate(propagate(f, 0.04, lambda), 0.06, lambda);
    EXPECT_LT(relative_rms(two, propagate(f, 0.1, lambda)), 1e-9);
}

TEST(Propagation, RejectsBadArguments) {
    EXPECT_THROW(Propagator(grid, 0.1, 0.0), ParameterRange);
    EXPECT_THROW(Propagator(grid, 0.1, -1e-6), ParameterRange);
}

TEST(Mask, ApplyThenRemoveIsIdentity) {
    auto f = test_beam();
    const auto m = random_mask(grid, 1);
    auto g = apply_mask(f, m);
    remove_mask_in_place(g, m);
    EXPECT_LT(relative_rms(g, f), 1e-14);
    EXPECT_NEAR(norm(apply_mask(f, m)), norm(f), 1e-12);
}

TEST(Mask, WrappedIsEquivalentAndInRange) {
    const auto m = random_mask(grid, 2);
    const auto w = wrapped(m);
    for (double v : w.phase()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 2 * pi);
    }
    EXPECT_TRUE(equivalent_mod_2pi(m, w, 1e-12));
    PhaseMask z(grid);
    EXPECT_FALSE(equivalent_mod_2pi(m, z, 1e-3));
}

TEST(Mask, EquivalenceAcceptsValuesNearTheWrap) {
    const auto g = SamplingGrid::centered(2, 2, 1.0);
    const PhaseMask a(g, {0.0, 2 * pi - 1e-13, -pi, 1.0});
    const PhaseMask b(g, {2 * pi, 0.0, pi, 1.0 - 4 * pi});
    EXPECT_TRUE(equivalent_mod_2pi(a, b, 1e-12));
}

TEST(Mask, ShiftMovesSamplesWithWrapAround) {
    const auto g = SamplingGrid::centered(4, 3, 1.0);
    PhaseMask m(g);
    m(0, 0) = 1.0;
    m(3, 2) = 2.0;
    const auto s = shifted(m, 1, -1);
    EXPECT_EQ(s(1, 2), 1.0);
    EXPECT_EQ(s(0, 1), 2.0);
    const auto back = shifted(s, -1, 1);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.phase()[i], m.phase()[i]);
}

TEST(Cascade, ZeroMasksEqualFreeSpaceOverTotalLength) {
    const auto f = test_beam();
    const auto stack = PhaseMaskStack::zeros(grid, 5, 0.1);
    const auto out = mplc_forward(f, stack, lambda);
    EXPECT_LT(relative_rms(out, propagate(f, 0.5, lambda, BandLimit::never)), 1e-9);
}

TEST(Cascade, PartialThenRemainderEqualsFull) {
    const auto g = SamplingGrid::centered(64, 64, 20e-6);
    const auto f = gaussian_beam(g, {0, 0}, 100e-6, 0.0, 0.0, lambda).field;
    const auto stack = random_stack(g, 5, 0.1);
    const auto full = mplc_forward(f, stack, lambda);
    for (std::size_t p = 1; p <= 5; ++p) {
        auto h = mplc_forward_partial(f, stack, lambda, p, false);
        for (std::size_t q = p; q <= 5; ++q) {
            apply_mask_in_place(h, stack.masks[q - 1]);
            h = propagate(h, 0.1, lambda);
        }
        EXPECT_LT(rms_difference(h, full), 1e-12) << p;
    }
    const auto at1 = mplc_forward_partial(f, stack, lambda, 1, false);
    EXPECT_LT(rms_difference(at1, f), 1e-15);
    EXPECT_LT(rms_difference(mplc_forward_partial(f, stack, lambda, 1, true), apply_mask(f, stack.masks[0])), 1e-15);
    EXPECT_THROW(mplc_forward_partial(f, stack, lambda, 0, false), PlaneIndexError);
    EXPECT_THROW(mplc_forward_partial(f, stack, lambda, 6, false), PlaneIndexError);
}

TEST(Cascade, PreservesNormAndMatchesFreeFunction) {
    const auto g = SamplingGrid::centered(64, 64, 20e-6);
    const auto f = gaussian_beam(g, {0, 0}, 100e-6, 0.0, 0.0, lambda).field;
    // 0.03 m stays below the band-limit threshold of this grid (0.04 m).
    const auto stack = random_stack(g, 3, 0.03);
    const Cascade c(g, 0.03, lambda);
    const auto out = c.forward(f, stack);
    EXPECT_NEAR(norm(out), 1.0, 1e-9);
    EXPECT_LT(rms_difference(out, mplc_forward(f, stack, lambda)), 1e-15);
}

TEST(Cascade, StackValidation) {
    PhaseMaskStack empty;
    empty.plane_spacing = 0.1;
    EXPECT_THROW(empty.validate(), ParameterRange);
    auto s = PhaseMaskStack::zeros(grid, 2, 0.1);
    s.masks[1] = PhaseMask(SamplingGrid::centered(8, 8, 20e-6));
    EXPECT_THROW(s.validate(), GridMismatch);
}

TEST(MaskIo, RoundTripKeepsPhasesAndSpacing) {
    const auto g = SamplingGrid::centered(12, 10, 8e-6);
    const auto s = random_stack(g, 3, 0.07);
    std::stringstream ss;
    write_stack(ss, s);
    const auto back = read_stack(ss);
    ASSERT_EQ(back.planes(), 3u);
    EXPECT_EQ(back.grid(), g);
    EXPECT_EQ(back.plane_spacing, 0.07);
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.masks[p].phase()[i], s.masks[p].phase()[i]);
}

TEST(MaskIo, RejectsTruncatedStream) {
    const auto s = PhaseMaskStack::zeros(SamplingGrid::centered(4, 4, 1e-5), 2, 0.1);
    std::stringstream ss;
    write_stack(ss, s);
    std::string bytes = ss.str();
    bytes.resize(bytes.size() - 8);
    std::stringstream cut(bytes);
    EXPECT_THROW(read_stack(cut), FormatError);
}
