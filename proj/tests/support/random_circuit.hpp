#pragma once

#include <cmath>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "qot/circuit.hpp"

// Random feed-forward circuits for property tests. Every generated circuit
// consumes each mode at most once, so all non-channel modes stay physical and
// the commutator bookkeeping is exact.

namespace qot::testing {

struct RandomCircuitOptions {
    int max_steps = 20;
    int max_vacua = 6;
    bool allow_classical_pair = true;  // eochan feeding displace
};

struct RandomCircuit {
    Circuit circuit;
    std::vector<std::string> channel_modes;  // expected commutator norm 0
};

inline RandomCircuit make_random_circuit(std::mt19937& rng,
                                         const RandomCircuitOptions& opts = {}) {
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto pick = [&](std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };

    const int n_vac = int(pick(std::size_t(opts.max_vacua) + 1));
    std::vector<std::string> vacua;
    for (int i = 0; i < n_vac; ++i) vacua.push_back("v" + std::to_string(i));

    Complex alpha{};
    if (pick(2) == 0) alpha = Complex{uniform(-1.5, 1.5), uniform(-1.5, 1.5)};

    Circuit circuit{VacuumBasis::with_signal("in", vacua), alpha, {}, "", {}, {}};

    std::vector<std::string> physical{"in"};
    physical.insert(physical.end(), vacua.begin(), vacua.end());
    std::vector<std::string> channels;
    std::vector<std::string> channel_modes;
    // squared coefficient magnitude per mode, kept bounded so commutator
    // sums stay far from the double-precision cancellation floor
    std::unordered_map<std::string, double> scale{{"in", 1.0}};
    for (const auto& v : vacua) scale[v] = 1.0;
    constexpr double kScaleCap = 300.0;

    int next_id = 0;
    auto fresh = [&] { return "m" + std::to_string(next_id++); };
    auto take_physical = [&] {
        std::size_t i = pick(physical.size());
        std::string name = physical[i];
        physical.erase(physical.begin() + std::ptrdiff_t(i));
        return name;
    };

    // largest gain whose amplitude factor keeps the result under the cap
    auto gain_for = [&](double in_scale) {
        const double factor_cap = kScaleCap / std::max(1.0, in_scale);
        if (factor_cap <= 1.0) return 1.0;
        const double amax = std::sqrt(factor_cap);  // allowed sqrt(G)+sqrt(G-1)
        const double gmax = std::min(10.0, std::pow((amax + 1.0 / amax) / 2.0, 2.0));
        return pick(5) == 0 ? 1.0 : 1.0 + uniform(0.0, gmax - 1.0);
    };

    const int target = int(pick(std::size_t(opts.max_steps) + 1));
    for (int s = 0; s < target; ++s) {
        std::vector<int> feasible;
        if (physical.size() >= 2) feasible.insert(feasible.end(), {0, 1, 3});
        if (!physical.empty()) feasible.push_back(2);
        if (opts.allow_classical_pair && physical.size() >= 3 && channels.size() < 2) {
            feasible.push_back(4);
        }
        if (!channels.empty() && !physical.empty()) feasible.push_back(5);
        if (feasible.empty()) break;
        switch (feasible[pick(feasible.size())]) {
            case 0: {  // bs
                std::string a = take_physical(), b = take_physical();
                std::string o1 = fresh(), o2 = fresh();
                double eps = pick(6) == 0 ? 1.0 : uniform(0.05, 1.0);
                circuit.steps.push_back(BsStep{eps, a, b, o1, o2});
                scale[o1] = scale[o2] = scale[a] + scale[b];
                physical.push_back(o1);
                physical.push_back(o2);
                break;
            }
            case 1: {  // amp
                std::string a = take_physical(), b = take_physical();
                std::string o1 = fresh(), o2 = fresh();
                const double g = gain_for(scale[a] + scale[b]);
                circuit.steps.push_back(AmpStep{g, a, b, o1, o2});
                scale[o1] = scale[o2] = g * scale[a] + (g - 1.0) * scale[b] + 1.0;
                physical.push_back(o1);
                physical.push_back(o2);
                break;
            }
            case 2: {  // dpa
                std::string a = take_physical();
                std::string o = fresh();
                PumpSign sign = pick(2) == 0 ? PumpSign::plus : PumpSign::minus;
                const double g = gain_for(scale[a]);
                circuit.steps.push_back(DpaStep{g, sign, a, o});
                scale[o] = 4.0 * g * scale[a];
                physical.push_back(o);
                break;
            }
            case 3: {  // nopa
                std::string a = take_physical(), b = take_physical();
                std::string o1 = fresh(), o2 = fresh();
                const double g = gain_for(scale[a] + scale[b]);
                circuit.steps.push_back(NopaStep{g, a, b, o1, o2});
                scale[o1] = scale[o2] = g * scale[a] + (g - 1.0) * scale[b] + 1.0;
                physical.push_back(o1);
                physical.push_back(o2);
                break;
            }
            case 4: {  // eochan
                std::string a = take_physical(), b = take_physical();
                std::string o = fresh();
                const double k_hi =
                    std::max(0.25, std::min(3.0, std::sqrt(kScaleCap / (scale[a] + scale[b]))));
                const double k = uniform(0.2 * k_hi, k_hi);
                circuit.steps.push_back(EoChanStep{k, a, b, o});
                scale[o] = k * k * (scale[a] + scale[b]);
                channels.push_back(o);
                channel_modes.push_back(o);
                break;
            }
            default: {  // displace
                std::size_t i = pick(channels.size());
                std::string chan = channels[i];
                channels.erase(channels.begin() + std::ptrdiff_t(i));
                std::string vac = take_physical();
                std::string o = fresh();
                const double l_hi =
                    std::max(0.25, std::min(3.0, std::sqrt(kScaleCap / scale[chan])));
                const double l = uniform(0.2 * l_hi, l_hi);
                circuit.steps.push_back(DisplaceStep{l, chan, vac, o});
                scale[o] = l * l * scale[chan] + scale[vac];
                physical.push_back(o);
                break;
            }
        }
    }

    circuit.output_label = physical[pick(physical.size())];
    for (const auto& name : physical) {
        if (name != circuit.output_label && pick(2) == 0) {
            circuit.discarded.push_back(name);
        }
    }
    validate(circuit);
    return {std::move(circuit), std::move(channel_modes)};
}

inline bool steps_equal(const Step& a, const Step& b) {
    if (a.index() != b.index()) return false;
    if (const auto* s = std::get_if<BsStep>(&a)) {
        const auto& t = std::get<BsStep>(b);
        return s->transmission == t.transmission && s->in1 == t.in1 && s->in2 == t.in2 &&
               s->out1 == t.out1 && s->out2 == t.out2;
    }
    if (const auto* s = std::get_if<AmpStep>(&a)) {
        const auto& t = std::get<AmpStep>(b);
        return s->gain == t.gain && s->signal == t.signal && s->internal == t.internal &&
               s->amplified == t.amplified && s->idler == t.idler;
    }
    if (const auto* s = std::get_if<DpaStep>(&a)) {
        const auto& t = std::get<DpaStep>(b);
        return s->gain == t.gain && s->sign == t.sign && s->in == t.in && s->out == t.out;
    }
    if (const auto* s = std::get_if<NopaStep>(&a)) {
        const auto& t = std::get<NopaStep>(b);
        return s->gain == t.gain && s->in1 == t.in1 && s->in2 == t.in2 && s->out1 == t.out1 &&
               s->out2 == t.out2;
    }
    if (const auto* s = std::get_if<EoChanStep>(&a)) {
        const auto& t = std::get<EoChanStep>(b);
        return s->k_constant == t.k_constant && s->in == t.in && s->vac == t.vac && s->out == t.out;
    }
    const auto& s = std::get<DisplaceStep>(a);
    const auto& t = std::get<DisplaceStep>(b);
    return s.lambda_gain == t.lambda_gain && s.channel == t.channel && s.vac == t.vac &&
           s.out == t.out;
}

}  // namespace qot::testing
