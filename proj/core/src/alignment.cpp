#include <cmath>
#include <cstdlib>

#include "mplc/alignment.hpp"
#include "mplc/errors.hpp"

namespace mplc {

namespace {

// 0, -1, +1, -2, +2, ... so that earlier candidates win ties.
std::vector<long> scan_order(long range) {
    std::vector<long> out{0};
    for (long d = 1; d <= range; ++d) {
        out.push_back(-d);
        out.push_back(d);
    }
    return out;
}

PhaseMaskStack stage_stack(const PhaseMaskStack& design, std::size_t k) {
    PhaseMaskStack s = PhaseMaskStack::zeros(design.grid(), design.planes(), design.plane_spacing);
    for (std::size_t p = 0; p < k; ++p) s.masks[p] = design.masks[p];
    return s;
}

} // namespace

std::vector<double> y_profile(const ComplexField& f) { return marginal_intensity_y(f); }

double intensity_fidelity(const std::vector<double>& designed, const std::vector<double>& measured, double dy) {
    if (designed.size() != measured.size())
        throw DimensionMismatch("intensity_fidelity: profiles differ in length");
    if (!(dy > 0.0)) throw ParameterRange("intensity_fidelity: dy must be positive");
    double nd = 0.0, ne = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < designed.size(); ++i) {
        if (designed[i] < 0.0 || measured[i] < 0.0)
            throw DegenerateProfile("intensity_fidelity: negative intensity");
        nd += designed[i] * designed[i];
        ne += measured[i] * measured[i];
        cross += designed[i] * measured[i];
    }
    if (!(nd > 0.0) || !(ne > 0.0)) throw DegenerateProfile("intensity_fidelity: zero profile");
    return cross * dy / (std::sqrt(nd * dy) * std::sqrt(ne * dy));
}

std::vector<std::vector<std::vector<double>>> stage_reference_profiles(const PhaseMaskStack& design,
                                                                       const std::vector<ComplexField>& inputs,
                                                                       double wavelength) {
    design.validate();
    const Cascade cascade(design.grid(), design.plane_spacing, wavelength);
    std::vector<std::vector<std::vector<double>>> out;
    for (std::size_t k = 1; k <= design.planes(); ++k) {
        const PhaseMaskStack s = stage_stack(design, k);
        auto& stage = out.emplace_back();
        for (const auto& f : cascade.forward(inputs, s)) stage.push_back(y_profile(f));
    }
    return out;
}

std::vector<PlaneOffset> refine_mask_centers(const PhaseMaskStack& displayed, const std::vector<ComplexField>& inputs,
                                             const std::vector<std::vector<std::vector<double>>>& reference,
                                             double wavelength, long search_range) {
    displayed.validate();
    if (search_range < 1) throw ParameterRange("refine_mask_centers: search range must be at least 1 sample");
    if (inputs.empty()) throw ParameterRange("refine_mask_centers: no inputs");
    const std::size_t planes = displayed.planes();
    if (reference.size() != planes) throw DimensionMismatch("refine_mask_centers: one reference stage per plane");
    for (const auto& stage : reference)
        if (stage.size() != inputs.size())
            throw DimensionMismatch("refine_mask_centers: one reference profile per input");

    const auto& g = displayed.grid();
    const Propagator hop(g, displayed.plane_spacing, wavelength);
    const auto order = scan_order(search_range);

    // Fields arriving at the current plane with corrected masks before it.
    std::vector<ComplexField> arriving = inputs;
    for (const auto& f : arriving) require_same_grid(f.grid(), g, "refine_mask_centers");

    std::vector<PlaneOffset> result;
    for (std::size_t k = 1; k <= planes; ++k) {
        const PhaseMask& mask = displayed.masks[k - 1];
        const auto& ref = reference[k - 1];

        auto score = [&](long dx, long dy) {
            const PhaseMask m = shifted(mask, dx, dy);
            double acc = 0.0;
            for (std::size_t i = 0; i < arriving.size(); ++i) {
                ComplexField f = apply_mask(arriving[i], m);
                for (std::size_t p = k; p <= planes; ++p) hop.forward_in_place(f);
                acc += intensity_fidelity(ref[i], y_profile(f));
            }
            return acc / static_cast<double>(arriving.size());
        };

        PlaneOffset off;
        off.fidelity_before = score(0, 0);
        double best = off.fidelity_before;
        for (int round = 0; round < 3; ++round) {
            const long prev_dx = off.dx, prev_dy = off.dy;
            for (bool along_y : {true, false}) {
                long pick = along_y ? off.dy : off.dx;
                double pick_score = best;
                bool have = false;
                for (long d : order) {
                    const double s = along_y ? score(off.dx, d) : score(d, off.dy);
                    if (!have || s > pick_score + 1e-12) {
                        have = true;
                        pick = d;
                        pick_score = s;
                    }
                }
                (along_y ? off.dy : off.dx) = pick;
                best = pick_score;
            }
            if (off.dx == prev_dx && off.dy == prev_dy) break;
        }
        off.fidelity_after = best;
        result.push_back(off);

        const PhaseMask fixed = shifted(mask, off.dx, off.dy);
        for (auto& f : arriving) {
            apply_mask_in_place(f, fixed);
            hop.forward_in_place(f);
        }
    }
    return result;
}

} // namespace mplc
