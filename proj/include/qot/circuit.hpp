#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qot/mode_algebra.hpp"

// Feed-forward optical circuits: a basis of environment inputs plus an
// ordered list of element applications over named modes. Circuits are plain
// values; evaluation is pure.

namespace qot {

enum class PumpSign { plus, minus };  // pump phase 0 or pi

inline double pump_phase(PumpSign sign) {
    return sign == PumpSign::plus ? 0.0 : 3.14159265358979323846;
}

struct BsStep {
    double transmission{};
    std::string in1, in2, out1, out2;
};

struct AmpStep {
    double gain{};
    std::string signal, internal, amplified, idler;
};

struct DpaStep {
    double gain{};
    PumpSign sign{PumpSign::plus};
    std::string in, out;
};

struct NopaStep {
    double gain{};
    std::string in1, in2, out1, out2;
};

struct EoChanStep {
    double k_constant{};
    std::string in, vac, out;
};

struct DisplaceStep {
    double lambda_gain{};
    std::string channel, vac, out;
};

using Step = std::variant<BsStep, AmpStep, DpaStep, NopaStep, EoChanStep, DisplaceStep>;

const char* step_keyword(const Step& step);
std::vector<std::string> step_operands(const Step& step);
std::vector<std::string> step_results(const Step& step);

struct Circuit {
    VacuumBasis basis;  // label 0 carries the input role
    Complex input_displacement{};
    std::vector<Step> steps;
    std::string output_label;
    std::vector<std::string> discarded;
    // classicality diagnostic target; when unset, run() falls back to the
    // last amplifier or classical-channel product
    std::optional<std::string> channel_label;

    const std::string& input_label() const { return basis.label(VacuumBasis::signal_index()); }
};

// Checks well-formedness: operands defined before use, results fresh, two-mode
// operands distinct, parameters in range, output defined. Throws
// std::invalid_argument naming the step on violation.
void validate(const Circuit& circuit);

struct RunResult {
    BogoliubovMode input;   // signal mode echo, displacement included
    BogoliubovMode output;
    std::vector<std::pair<std::string, BogoliubovMode>> discarded;
    // every named mode in definition order (basis inputs first)
    std::vector<std::pair<std::string, BogoliubovMode>> modes;
    // the mode whose classicality is diagnosed: the last amplifier or
    // classical-channel product, when one exists
    std::optional<std::string> channel_label;

    const BogoliubovMode* find(std::string_view label) const;
};

RunResult run(const Circuit& circuit);
RunResult run(const Circuit& circuit, Complex input_displacement);

}  // namespace qot
