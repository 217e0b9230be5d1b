#include "mplc/wfm.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "mplc/errors.hpp"
#include "mplc/unitary.hpp"

namespace mplc {

namespace {

double mean_arg(const ComplexField& a_conj_side, const ComplexField& b, const PhaseMask* mask) {
    // area-mean of arg(conj(a) * e^{i Phi} b)
    const auto va = a_conj_side.values();
    const auto vb = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        cplx z = std::conj(va[i]) * vb[i];
        if (mask) z *= std::polar(1.0, mask->phase()[i]);
        acc += z == cplx{} ? 0.0 : std::arg(z);
    }
    return acc / static_cast<double>(va.size());
}

} // namespace

void OptimizerConfig::validate() const {
    if (iterations < 1) throw ParameterRange("optimizer: iterations must be >= 1");
    if (stop_fidelity && !(*stop_fidelity > 0.0 && *stop_fidelity <= 1.0))
        throw ParameterRange("optimizer: stop_fidelity must lie in (0, 1]");
}

double phase_mismatch(const ComplexField& a, const ComplexField& b) {
    const cplx o = inner_product(a, b);
    return o == cplx{} ? 0.0 : std::arg(o);
}

double phase_mismatch_plain(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid(), b.grid(), "phase_mismatch_plain");
    return mean_arg(a, b, nullptr);
}

PhaseMask plane_update(const std::vector<ComplexField>& forward, const std::vector<ComplexField>& backward,
                       const PhaseMask* current, PhaseReference reference, UpdateMode mode) {
    if (forward.size() != backward.size() || forward.empty())
        throw DimensionMismatch("plane_update: need equal, non-empty field lists");
    const auto& grid = forward.front().grid();
    for (std::size_t m = 0; m < forward.size(); ++m) {
        require_same_grid(grid, forward[m].grid(), "plane_update");
        require_same_grid(grid, backward[m].grid(), "plane_update");
    }
    if (current) require_same_grid(grid, current->grid(), "plane_update");

    std::vector<cplx> weight(forward.size());
    for (std::size_t m = 0; m < forward.size(); ++m) {
        double gamma = 0.0;
        if (reference == PhaseReference::overlap) {
            const auto vf = forward[m].values();
            const auto vb = backward[m].values();
            cplx o{};
            for (std::size_t i = 0; i < vf.size(); ++i) {
                cplx z = std::conj(vb[i]) * vf[i];
                if (current) z *= std::polar(1.0, current->phase()[i]);
                o += z;
            }
            gamma = o == cplx{} ? 0.0 : std::arg(o);
        } else {
            gamma = mean_arg(backward[m], forward[m], current);
        }
        weight[m] = std::polar(1.0, -gamma);
    }

    const bool increment = mode == UpdateMode::increment && current != nullptr;
    PhaseMask out(grid);
    auto phase = out.phase();
    for (std::size_t i = 0; i < phase.size(); ++i) {
        cplx s{};
        for (std::size_t m = 0; m < forward.size(); ++m)
            s += forward[m].values()[i] * std::conj(backward[m].values()[i]) * weight[m];
        if (increment) {
            const double old = current->phase()[i];
            s *= std::polar(1.0, old);
            const double delta = s == cplx{} ? 0.0 : -std::arg(s);
            phase[i] = std::remainder(old + delta, 2.0 * std::numbers::pi);
        } else {
            phase[i] = s == cplx{} ? 0.0 : -std::arg(s);
        }
    }
    return out;
}

OptimizationResult wavefront_match(const std::vector<ComplexField>& inputs, const std::vector<ComplexField>& targets,
                                   const CascadeGeometry& geometry, const OptimizerConfig& config,
                                   const PhaseMaskStack* initial) {
    config.validate();
    if (inputs.size() != targets.size() || inputs.empty())
        throw DimensionMismatch("wavefront_match: inputs and targets need equal, non-empty lengths");
    if (geometry.planes < 1) throw ParameterRange("wavefront_match: need at least one plane");
    const auto& grid = inputs.front().grid();
    for (std::size_t m = 0; m < inputs.size(); ++m) {
        require_same_grid(grid, inputs[m].grid(), "wavefront_match");
        require_same_grid(grid, targets[m].grid(), "wavefront_match");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t M = inputs.size();
    const std::size_t P = geometry.planes;

    OptimizationResult result;
    if (initial) {
        initial->validate();
        require_same_grid(grid, initial->grid(), "wavefront_match");
        if (initial->planes() != P || initial->plane_spacing != geometry.plane_spacing)
            throw DimensionMismatch("wavefront_match: initial stack does not match geometry");
        result.stack = *initial;
    } else {
        result.stack = PhaseMaskStack::zeros(grid, P, geometry.plane_spacing);
    }
    auto& masks = result.stack.masks;

    std::vector<ComplexField> goal;
    goal.reserve(M);
    for (const auto& t : targets) goal.push_back(normalize(t));

    const Propagator hop(grid, geometry.plane_spacing, geometry.wavelength);

    // fields[p][m]: forward (before mask p) or backward (after mask p) fields.
    std::vector<std::vector<ComplexField>> cache(P, std::vector<ComplexField>(M, ComplexField(grid)));
    std::vector<ComplexField> work;

    for (std::size_t it = 0; it < config.iterations; ++it) {
        std::vector<ComplexField> outputs;
        if (config.plane_order == PlaneOrder::ascending) {
            // Backward fields with current masks, then a forward updating sweep.
            work = goal;
            for (std::size_t p = P; p-- > 0;) {
                for (std::size_t m = 0; m < M; ++m) {
                    hop.backward_in_place(work[m]);
                    cache[p][m] = work[m];
                }
                if (p > 0)
                    for (auto& w : work) remove_mask_in_place(w, masks[p]);
            }
            work = inputs;
            for (std::size_t p = 0; p < P; ++p) {
                masks[p] = plane_update(work, cache[p], &masks[p], config.phase_reference, config.update_mode);
                for (auto& w : work) {
                    apply_mask_in_place(w, masks[p]);
                    hop.forward_in_place(w);
                }
            }
            outputs = std::move(work);
        } else {
            work = inputs;
            for (std::size_t p = 0; p < P; ++p) {
                for (std::size_t m = 0; m < M; ++m) cache[p][m] = work[m];
                for (auto& w : work) {
                    apply_mask_in_place(w, masks[p]);
                    hop.forward_in_place(w);
                }
            }
            work = goal;
            for (std::size_t p = P; p-- > 0;) {
                for (auto& w : work) hop.backward_in_place(w);
                masks[p] = plane_update(cache[p], work, &masks[p], config.phase_reference, config.update_mode);
                for (auto& w : work) remove_mask_in_place(w, masks[p]);
            }
            outputs = inputs;
            for (auto& o : outputs)
                for (std::size_t p = 0; p < P; ++p) {
                    apply_mask_in_place(o, masks[p]);
                    hop.forward_in_place(o);
                }
        }
        const double f = gate_fidelity_fields(goal, outputs);
        result.history.push_back(f);
        if (config.stop_fidelity && f >= *config.stop_fidelity) break;
    }

    result.final_fidelity = result.history.back();
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

DesignProblem DesignProblem::reference() { return DesignProblem{}; }

std::vector<ComplexField> DesignProblem::inputs() const {
    BeamArraySpec s = input;
    s.wavelength = cascade.wavelength;
    return make_beam_array(s, grid).beams;
}

std::vector<ComplexField> DesignProblem::output_basis() const {
    BeamArraySpec s = output;
    s.wavelength = cascade.wavelength;
    return make_beam_array(s, grid).beams;
}

std::vector<ComplexField> DesignProblem::targets(const TransferMatrix& u) const {
    return target_states(output_basis(), u);
}

OptimizationResult design(const DesignProblem& problem, const TransferMatrix& target, const OptimizerConfig& config) {
    return wavefront_match(problem.inputs(), problem.targets(target), problem.cascade, config);
}

} // namespace mplc
