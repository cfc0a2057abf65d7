#include "qot/circuit.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace qot {

namespace {

struct StepInfo {
    const char* keyword;
    std::vector<std::string> operands;
    std::vector<std::string> results;
};

StepInfo info(const Step& step) {
    return std::visit(
        [](const auto& s) -> StepInfo {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BsStep>) {
                return {"bs", {s.in1, s.in2}, {s.out1, s.out2}};
            } else if constexpr (std::is_same_v<T, AmpStep>) {
                return {"amp", {s.signal, s.internal}, {s.amplified, s.idler}};
            } else if constexpr (std::is_same_v<T, DpaStep>) {
                return {"dpa", {s.in}, {s.out}};
            } else if constexpr (std::is_same_v<T, NopaStep>) {
                return {"nopa", {s.in1, s.in2}, {s.out1, s.out2}};
            } else if constexpr (std::is_same_v<T, EoChanStep>) {
                return {"eochan", {s.in, s.vac}, {s.out}};
            } else {
                return {"displace", {s.channel, s.vac}, {s.out}};
            }
        },
        step);
}

[[noreturn]] void step_error(std::size_t index, const StepInfo& si, const std::string& what) {
    throw std::invalid_argument("step " + std::to_string(index + 1) + " (" + si.keyword +
                                "): " + what);
}

void check_params(const Step& step) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BsStep>) {
                validate_transmission(s.transmission);
            } else if constexpr (std::is_same_v<T, AmpStep>) {
                validate_gain(s.gain);
            } else if constexpr (std::is_same_v<T, DpaStep>) {
                validate_gain(s.gain);
            } else if constexpr (std::is_same_v<T, NopaStep>) {
                validate_parametric_gain(s.gain);
            } else if constexpr (std::is_same_v<T, EoChanStep>) {
                if (!(s.k_constant > 0.0)) {
                    throw std::invalid_argument("channel constant must be > 0");
                }
            } else {
                if (!(s.lambda_gain > 0.0)) {
                    throw std::invalid_argument("reconstruction gain must be > 0");
                }
            }
        },
        step);
}

}  // namespace

const char* step_keyword(const Step& step) { return info(step).keyword; }
std::vector<std::string> step_operands(const Step& step) { return info(step).operands; }
std::vector<std::string> step_results(const Step& step) { return info(step).results; }

void validate(const Circuit& circuit) {
    std::unordered_set<std::string> defined;
    for (std::size_t k = 0; k < circuit.basis.size(); ++k) {
        defined.insert(circuit.basis.label(k));
    }
    for (std::size_t i = 0; i < circuit.steps.size(); ++i) {
        const StepInfo si = info(circuit.steps[i]);
        for (const auto& name : si.operands) {
            if (!defined.count(name)) step_error(i, si, "unknown mode '" + name + "'");
        }
        if (si.operands.size() == 2 && si.operands[0] == si.operands[1]) {
            step_error(i, si, "operands must be distinct modes, got '" + si.operands[0] + "' twice");
        }
        for (const auto& name : si.results) {
            if (!defined.insert(name).second) {
                step_error(i, si, "mode '" + name + "' already defined");
            }
        }
        try {
            check_params(circuit.steps[i]);
        } catch (const std::invalid_argument& e) {
            step_error(i, si, e.what());
        }
    }
    if (circuit.output_label.empty()) {
        throw std::invalid_argument("circuit has no output mode");
    }
    if (!defined.count(circuit.output_label)) {
        throw std::invalid_argument("output mode '" + circuit.output_label + "' is not defined");
    }
    if (circuit.channel_label && !defined.count(*circuit.channel_label)) {
        throw std::invalid_argument("channel mode '" + *circuit.channel_label +
                                    "' is not defined");
    }
    for (const auto& name : circuit.discarded) {
        if (!defined.count(name)) {
            throw std::invalid_argument("discarded mode '" + name + "' is not defined");
        }
        if (name == circuit.output_label) {
            throw std::invalid_argument("output mode '" + name + "' cannot be discarded");
        }
    }
}

RunResult run(const Circuit& circuit) { return run(circuit, circuit.input_displacement); }

RunResult run(const Circuit& circuit, Complex input_displacement) {
    validate(circuit);

    std::vector<std::pair<std::string, BogoliubovMode>> modes;
    std::unordered_map<std::string, std::size_t> index;
    auto define = [&](const std::string& name, BogoliubovMode mode) {
        index.emplace(name, modes.size());
        modes.emplace_back(name, std::move(mode));
    };
    auto lookup = [&](const std::string& name) -> const BogoliubovMode& {
        return modes[index.at(name)].second;
    };

    define(circuit.input_label(), circuit.basis.signal_mode(input_displacement));
    for (std::size_t k = 1; k < circuit.basis.size(); ++k) {
        define(circuit.basis.label(k), circuit.basis.mode(k));
    }

    std::optional<std::string> channel_label = circuit.channel_label;
    const bool channel_pinned = channel_label.has_value();
    for (const auto& step : circuit.steps) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BsStep>) {
                    auto [o1, o2] = beamsplitter(lookup(s.in1), lookup(s.in2), s.transmission);
                    define(s.out1, std::move(o1));
                    define(s.out2, std::move(o2));
                } else if constexpr (std::is_same_v<T, AmpStep>) {
                    auto out = ideal_linear_amplifier(lookup(s.signal), lookup(s.internal), s.gain);
                    define(s.amplified, std::move(out.amplified));
                    define(s.idler, std::move(out.idler));
                    if (!channel_pinned) channel_label = s.amplified;
                } else if constexpr (std::is_same_v<T, DpaStep>) {
                    define(s.out, degenerate_pa(lookup(s.in), s.gain, pump_phase(s.sign)));
                } else if constexpr (std::is_same_v<T, NopaStep>) {
                    auto [o1, o2] = nondegenerate_pa(lookup(s.in1), lookup(s.in2), s.gain);
                    define(s.out1, std::move(o1));
                    define(s.out2, std::move(o2));
                } else if constexpr (std::is_same_v<T, EoChanStep>) {
                    define(s.out, eo_classical_channel(lookup(s.in), lookup(s.vac), s.k_constant));
                    if (!channel_pinned) channel_label = s.out;
                } else {
                    define(s.out,
                           displace_reconstruct(lookup(s.channel), lookup(s.vac), s.lambda_gain));
                }
            },
            step);
    }

    std::vector<std::pair<std::string, BogoliubovMode>> discarded;
    discarded.reserve(circuit.discarded.size());
    for (const auto& name : circuit.discarded) {
        discarded.emplace_back(name, lookup(name));
    }

    return RunResult{lookup(circuit.input_label()), lookup(circuit.output_label),
                     std::move(discarded), std::move(modes), std::move(channel_label)};
}

const BogoliubovMode* RunResult::find(std::string_view label) const {
    for (const auto& [name, mode] : modes) {
        if (name == label) return &mode;
    }
    return nullptr;
}

}  // namespace qot
