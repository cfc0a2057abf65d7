#include "qot/presets.hpp"

#include <stdexcept>

namespace qot {

Circuit build_eo_classical(double k_constant, double lambda_gain, Complex input_alpha) {
    Circuit c{VacuumBasis::with_signal("a_in", {"v1", "v2"}), input_alpha, {}, "a_out", {}, {}};
    c.steps.push_back(EoChanStep{k_constant, "a_in", "v1", "A_c"});
    c.steps.push_back(DisplaceStep{lambda_gain, "A_c", "v2", "a_out"});
    c.channel_label = "A_c";
    validate(c);
    return c;
}

Circuit build_ao_classical(double gain, Complex input_alpha) {
    if (!(gain > 1.0)) {
        throw std::invalid_argument("all-optical scheme needs gain > 1 (receiver transmission 1/G)");
    }
    Circuit c{VacuumBasis::with_signal("a_in", {"v1", "v2"}), input_alpha, {}, "a_out", {"e", "f"}, {}};
    c.steps.push_back(AmpStep{gain, "a_in", "v1", "a_c", "e"});
    c.steps.push_back(BsStep{1.0 / gain, "a_c", "v2", "a_out", "f"});
    c.channel_label = "a_c";
    validate(c);
    return c;
}

Circuit build_ao_quantum(double gain, double parametric_gain, bool composite_amplifier,
                         Complex input_alpha) {
    if (!(gain > 1.0)) {
        throw std::invalid_argument("all-optical scheme needs gain > 1 (receiver transmission 1/G)");
    }
    validate_parametric_gain(parametric_gain);
    Circuit c{VacuumBasis::with_signal("a_in", {"v1", "v2"}), input_alpha, {}, "a_out", {"e", "f"}, {}};
    c.steps.push_back(NopaStep{parametric_gain, "v1", "v2", "b1", "b2"});
    if (composite_amplifier) {
        c.steps.push_back(BsStep{0.5, "a_in", "b1", "d", "c"});
        c.steps.push_back(DpaStep{gain, PumpSign::plus, "c", "cp"});
        c.steps.push_back(DpaStep{gain, PumpSign::minus, "d", "dp"});
        c.steps.push_back(BsStep{0.5, "cp", "dp", "e", "a_c"});
    } else {
        c.steps.push_back(AmpStep{gain, "a_in", "b1", "a_c", "e"});
    }
    c.steps.push_back(BsStep{1.0 / gain, "a_c", "b2", "a_out", "f"});
    c.channel_label = "a_c";
    validate(c);
    return c;
}

CompositeAmplifier composite_amplifier(const BogoliubovMode& signal,
                                       const BogoliubovMode& noise_mode, double gain) {
    validate_gain(gain);
    auto [diff, sum] = beamsplitter(signal, noise_mode, 0.5);
    BogoliubovMode squeezed_sum = degenerate_pa(sum, gain, 0.0);
    BogoliubovMode squeezed_diff = degenerate_pa(diff, gain, pump_phase(PumpSign::minus));
    auto [waste, amplified] = beamsplitter(squeezed_sum, squeezed_diff, 0.5);
    return {std::move(sum),          std::move(diff),      std::move(squeezed_sum),
            std::move(squeezed_diff), std::move(amplified), std::move(waste)};
}

}  // namespace qot
