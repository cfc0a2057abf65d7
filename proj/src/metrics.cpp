#include "qot/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace qot {

std::pair<double, double> added_noise(const QuadratureStats& out, const QuadratureStats& in,
                                      double gain) {
    if (!(gain > 0.0)) {
        throw std::invalid_argument("added_noise: gain must be > 0");
    }
    const double g2 = gain * gain;
    return {out.var_plus - g2 * in.var_plus, out.var_minus - g2 * in.var_minus};
}

double coherent_fidelity(double gain, double var_plus, double var_minus, Complex input_alpha) {
    const double base = 2.0 / std::sqrt((1.0 + var_plus) * (1.0 + var_minus));
    const double dg = gain - 1.0;
    const double mean_plus = 2.0 * input_alpha.real();
    const double mean_minus = 2.0 * input_alpha.imag();
    const double penalty = dg * dg * mean_plus * mean_plus / (2.0 * (1.0 + var_plus)) +
                           dg * dg * mean_minus * mean_minus / (2.0 * (1.0 + var_minus));
    return base * std::exp(-penalty);
}

std::pair<double, double> transfer_coefficients(const QuadratureStats& in,
                                                const QuadratureStats& out, double gain) {
    const double g2 = gain * gain;
    return {g2 * in.var_plus / out.var_plus, g2 * in.var_minus / out.var_minus};
}

std::pair<double, double> conditional_variance(const BogoliubovMode& in,
                                               const BogoliubovMode& out) {
    const JointStats j = joint_stats(in, out);
    const double v_plus =
        j.var_plus_2 * (1.0 - j.cov_plus * j.cov_plus / (j.var_plus_1 * j.var_plus_2));
    const double v_minus =
        j.var_minus_2 * (1.0 - j.cov_minus * j.cov_minus / (j.var_minus_1 * j.var_minus_2));
    return {v_plus, v_minus};
}

TeleportReport make_report(const RunResult& result, Complex input_alpha,
                           const ReportOptions& options) {
    TeleportReport report;
    const QuadratureStats in = quadrature_stats(result.input);
    const QuadratureStats out = quadrature_stats(result.output);

    const std::size_t signal = VacuumBasis::signal_index();
    report.signal_gain = std::abs(result.output.coeff(signal).alpha);
    const double gain = report.signal_gain > 0.0 ? report.signal_gain : 1.0;

    auto [np, nm] = added_noise(out, in, gain);
    report.added_noise_plus = np;
    report.added_noise_minus = nm;
    report.fidelity = coherent_fidelity(gain, out.var_plus, out.var_minus, input_alpha);
    auto [tp, tm] = transfer_coefficients(in, out, gain);
    report.transfer_plus = tp;
    report.transfer_minus = tm;
    auto [vp, vm] = conditional_variance(result.input, result.output);
    report.conditional_variance_plus = vp;
    report.conditional_variance_minus = vm;

    if (result.channel_label) {
        const BogoliubovMode* channel = result.find(*result.channel_label);
        if (channel) {
            const QuadratureStats ch = quadrature_stats(*channel);
            report.classical_channel_flag = ch.var_plus >= options.classical_threshold &&
                                            ch.var_minus >= options.classical_threshold;
        }
    }
    report.beats_classical_fidelity = report.fidelity > 0.5;
    report.beats_classical_transfer = report.transfer_plus + report.transfer_minus > 1.0;
    return report;
}

}  // namespace qot
