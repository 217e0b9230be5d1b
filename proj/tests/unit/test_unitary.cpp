#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mplc/beam_array.hpp"
#include "mplc/errors.hpp"
#include "mplc/unitary.hpp"

using namespace mplc;

namespace {

constexpr double pi = std::numbers::pi;
const SamplingGrid grid = SamplingGrid::centered(256, 256, 20e-6);

TransferMatrix diag_phase(double delta) {
    TransferMatrix d = TransferMatrix::Zero(2, 2);
    d(0, 0) = std::polar(1.0, -delta);
    d(1, 1) = std::polar(1.0, delta);
    return d;
}

} // namespace

TEST(U2, DocumentedEntries) {
    const auto id = u2(0.0, 0.0).matrix;
    EXPECT_LT((id - TransferMatrix::Identity(2, 2)).norm(), 1e-15);

    const auto swap = u2(pi / 2, 0.0).matrix;
    EXPECT_NEAR(std::abs(swap(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(swap(1, 0) - cplx(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(swap(0, 1) - cplx(0, 1)), 0.0, 1e-15);

    const auto bs = u2(pi / 4, pi / 2).matrix;
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(bs(0, 1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(bs(1, 0) + r), 0.0, 1e-15);
}

TEST(U2, UnitaryAcrossTheDomain) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.0, pi / 2), ph(-pi, pi);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(unitarity_defect(u2(th(rng), ph(rng)).matrix), 1e-14);
}

TEST(U2, DomainChecks) {
    EXPECT_NO_THROW(u2(pi / 2, -pi));
    EXPECT_NO_THROW(u2(6 * (pi / 12), 0.0));
    EXPECT_THROW(u2(-0.1, 0.0), ParameterRange);
    EXPECT_THROW(u2(pi / 2 + 1e-6, 0.0), ParameterRange);
    EXPECT_THROW(u2(0.0, pi), ParameterRange);
    EXPECT_THROW(u2(0.0, -pi - 1e-6), ParameterRange);
}

TEST(GateFidelity, IdentityAgainstBeamsplitterIsCosSquared) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(0.0, pi / 2);
    for (int i = 0; i < 50; ++i) {
        const double t = th(rng);
        EXPECT_NEAR(gate_fidelity_matrix(TransferMatrix::Identity(2, 2), u2(t, 0.0).matrix), std::cos(t) * std::cos(t),
                    1e-12);
    }
}

TEST(GateFidelity, IgnoresPerColumnPhases) {
    const auto u = u2(0.7, 1.1).matrix;
    TransferMatrix cols = TransferMatrix::Zero(2, 2);
    cols(0, 0) = std::polar(1.0, 0.3);
    cols(1, 1) = std::polar(1.0, -2.0);
    EXPECT_NEAR(gate_fidelity_matrix(u, u * cols), 1.0, 1e-14);
    EXPECT_LT(gate_fidelity_matrix(u, cols * u), 1.0 - 1e-3);
}

TEST(GateFidelity, LossyDesignScalesDown) {
    const auto u = u2(0.4, -0.5).matrix;
    EXPECT_NEAR(gate_fidelity_matrix(u, 0.9 * u), 0.81, 1e-14);
    EXPECT_THROW(gate_fidelity_matrix(u, TransferMatrix::Identity(3, 3)), DimensionMismatch);
}

TEST(GateFidelity, FieldFormMatchesMatrixForm) {
    const auto spec = BeamArraySpec::reference_input().demagnified(4.0);
    const auto basis = make_beam_array(spec, grid).beams;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> th(0.0, pi / 2), ph(-pi, pi);
    for (int i = 0; i < 5; ++i) {
        const auto ut = u2(th(rng), ph(rng)).matrix;
        const auto ud = u2(th(rng), ph(rng)).matrix;
        const double f = gate_fidelity_fields(target_states(basis, ut), target_states(basis, ud));
        EXPECT_NEAR(f, gate_fidelity_matrix(ut, ud), 1e-3);
    }
    EXPECT_THROW(gate_fidelity_fields({}, {}), DimensionMismatch);
}

TEST(CorrectingMask, MatrixIdentity) {
    for (double t : {0.0, pi / 12, pi / 4, 5 * pi / 12, pi / 2})
        for (double phi = -pi; phi < pi; phi += pi / 6) {
            const TransferMatrix corrected = diag_phase(0.5 * (phi - pi / 2)) * u2(t, pi / 2).matrix;
            EXPECT_NEAR(gate_fidelity_matrix(u2(t, phi).matrix, corrected), 1.0, 1e-12) << t << " " << phi;
        }
}

TEST(CorrectingMask, SplitsAtMidlineBetweenOutputBeams) {
    const auto spec = BeamArraySpec::reference_input().demagnified(4.0);
    const auto m = correcting_phase_mask(pi, grid, spec);
    const double delta = pi / 4;
    EXPECT_DOUBLE_EQ(m(10, 127), -delta);
    EXPECT_DOUBLE_EQ(m(10, 128), -delta);
    EXPECT_DOUBLE_EQ(m(10, 129), delta);
    const auto flat = correcting_phase_mask(pi / 2, grid, 0.0);
    for (double v : flat.phase()) EXPECT_EQ(v, 0.0);
}

TEST(CorrectingMask, FieldsReachEveryPhi) {
    const auto spec = BeamArraySpec::reference_input().demagnified(4.0);
    const auto basis = make_beam_array(spec, grid).beams;
    const double t = pi / 5;
    for (double phi : {-pi, -pi / 3, 0.0, pi / 2, 2.5}) {
        const auto mask = correcting_phase_mask(phi, grid, spec);
        auto outs = target_states(basis, u2(t, pi / 2).matrix);
        for (auto& f : outs) apply_mask_in_place(f, mask);
        EXPECT_NEAR(gate_fidelity_fields(target_states(basis, u2(t, phi).matrix), outs), 1.0, 1e-3) << phi;
    }
}

TEST(TransferMatrix, ExtractionIsRawOverlap) {
    const auto spec = BeamArraySpec::reference_input().demagnified(4.0);
    const auto basis = make_beam_array(spec, grid).beams;
    const auto u = u2(0.9, 0.4).matrix;
    auto outs = target_states(basis, u);
    const auto ex = extract_transfer_matrix(outs, basis);
    EXPECT_LT((ex - u).cwiseAbs().maxCoeff(), 1e-4);

    for (auto& f : outs) f *= 0.8;
    const auto lossy = extract_transfer_matrix(outs, basis);
    EXPECT_NEAR(unitarity_defect(lossy), 0.36, 1e-3);
    EXPECT_LT(unitarity_defect(nearest_unitary(lossy)), 1e-12);
}

TEST(TransferMatrix, TextRoundTrip) {
    const auto u = u2(0.123, -2.5).matrix;
    std::stringstream ss;
    write_transfer_matrix(ss, u);
    int lines = 0;
    for (std::string l; std::getline(ss, l);) ++lines;
    EXPECT_EQ(lines, 4);
    ss.clear();
    ss.seekg(0);
    EXPECT_EQ(read_transfer_matrix(ss, 2), u);
    std::stringstream cut("1 0 0 0");
    EXPECT_THROW(read_transfer_matrix(cut, 2), FormatError);
}
