#pragma once

#include <utility>

#include "qot/circuit.hpp"

// Scheme-quality figures for a teleporter run: added noise, coherent-state
// fidelity, signal-transfer coefficients and input-output conditional
// variance. The classical benchmarks sit at fidelity 1/2 and T+ + T- = 1.

namespace qot {

struct TeleportReport {
    double signal_gain{};
    double added_noise_plus{};
    double added_noise_minus{};
    double fidelity{};
    double transfer_plus{};
    double transfer_minus{};
    double conditional_variance_plus{};
    double conditional_variance_minus{};
    bool classical_channel_flag{};
    // the two quantum-boundary indicators, kept separate on purpose
    bool beats_classical_fidelity{};
    bool beats_classical_transfer{};
};

// n± = Var(X±)_out − gain² · Var(X±)_in.
std::pair<double, double> added_noise(const QuadratureStats& out, const QuadratureStats& in,
                                      double gain);

// Overlap of the Gaussian output state with the input coherent state. At
// unity gain F = 2/sqrt((1+V+)(1+V-)); away from unity gain the displaced
// means add the usual Gaussian penalty, evaluated with the input means.
double coherent_fidelity(double gain, double var_plus, double var_minus, Complex input_alpha);

// T± = gain² · Var(X±)_in / Var(X±)_out (output over input SNR for a
// vacuum-limited coherent input).
std::pair<double, double> transfer_coefficients(const QuadratureStats& in,
                                                const QuadratureStats& out, double gain);

// V± = Var(X±)_out · (1 − Cov²/(Var_in·Var_out)); the residual output noise
// given the input. Zero for a perfect channel.
std::pair<double, double> conditional_variance(const BogoliubovMode& in,
                                               const BogoliubovMode& out);

struct ReportOptions {
    // Var(X±) at or above this marks the channel as effectively classical
    // (default 20 dB above vacuum).
    double classical_threshold = 100.0;
};

TeleportReport make_report(const RunResult& result, Complex input_alpha,
                           const ReportOptions& options = {});

}  // namespace qot
