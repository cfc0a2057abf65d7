#include "qot/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "qot/fock_oracle.hpp"
#include "qot/metrics.hpp"
#include "qot/presets.hpp"

namespace qot {

namespace {

struct SchemePoint {
    std::string scheme;
    Circuit circuit;
};

std::vector<SchemePoint> grid_circuits(double gain, double parametric_gain, Complex alpha,
                                       bool include_composite) {
    std::vector<SchemePoint> points;
    // K = sqrt(G), lambda = 1/K keeps the electro-optic scheme at unity gain
    // while still sweeping the channel constant.
    const double k = std::sqrt(gain);
    points.push_back({"eo-classical", build_eo_classical(k, 1.0 / k, alpha)});
    if (gain > 1.0) {
        points.push_back({"ao-classical", build_ao_classical(gain, alpha)});
        points.push_back({"ao-quantum", build_ao_quantum(gain, parametric_gain, false, alpha)});
        if (include_composite) {
            points.push_back(
                {"ao-quantum-composite", build_ao_quantum(gain, parametric_gain, true, alpha)});
        }
    }
    return points;
}

}  // namespace

void check_verify_boundary(const VerifyOptions& options, const VerifyLimits& limits) {
    for (double g : options.gains) {
        if (!(g >= 1.0 && g <= limits.max_gain)) {
            throw std::invalid_argument("verify grid refused: gain " + std::to_string(g) +
                                        " outside the trusted range [1, " +
                                        std::to_string(limits.max_gain) + "]");
        }
    }
    for (double h : options.parametric_gains) {
        if (!(h >= 1.0 && h <= limits.max_gain)) {
            throw std::invalid_argument("verify grid refused: parametric gain " +
                                        std::to_string(h) + " outside the trusted range [1, " +
                                        std::to_string(limits.max_gain) + "]");
        }
    }
    for (Complex a : options.displacements) {
        if (std::abs(a) > limits.max_displacement) {
            throw std::invalid_argument("verify grid refused: displacement magnitude " +
                                        std::to_string(std::abs(a)) + " above " +
                                        std::to_string(limits.max_displacement));
        }
    }
    if (options.cutoff < limits.min_cutoff || options.cutoff > limits.max_cutoff) {
        throw std::invalid_argument("verify grid refused: cutoff " +
                                    std::to_string(options.cutoff) + " outside [" +
                                    std::to_string(limits.min_cutoff) + ", " +
                                    std::to_string(limits.max_cutoff) + "]");
    }
}

std::vector<VerifyCheck> verify_grid(const VerifyOptions& options) {
    check_verify_boundary(options);

    std::vector<VerifyCheck> checks;
    auto record = [&](VerifyCheck check) { checks.push_back(std::move(check)); };

    for (double gain : options.gains) {
        for (double parametric_gain : options.parametric_gains) {
            for (Complex alpha : options.displacements) {
                for (auto& point : grid_circuits(gain, parametric_gain, alpha,
                                                 options.include_composite)) {
                    VerifyCheck proto;
                    proto.scheme = point.scheme;
                    proto.gain = gain;
                    proto.parametric_gain = parametric_gain;
                    proto.displacement = alpha;

                    RunResult algebra = run(point.circuit);
                    fock::CircuitFockRun oracle{fock::FockState(1, 2), {}, 0};
                    try {
                        oracle = fock::run_circuit(point.circuit, options.cutoff);
                    } catch (const std::invalid_argument& e) {
                        VerifyCheck c = proto;
                        c.quantity = "oracle run";
                        c.status = CheckStatus::refused;
                        c.note = e.what();
                        record(std::move(c));
                        continue;
                    }

                    const bool trusted = oracle.state.trusted();
                    auto compare = [&](const std::string& quantity, double algebra_value,
                                       double oracle_value) {
                        VerifyCheck c = proto;
                        c.quantity = quantity;
                        c.algebra_value = algebra_value;
                        c.oracle_value = oracle_value;
                        c.abs_error = std::abs(algebra_value - oracle_value);
                        c.status = !trusted                        ? CheckStatus::untrusted
                                   : c.abs_error <= options.tolerance ? CheckStatus::pass
                                                                      : CheckStatus::fail;
                        record(std::move(c));
                    };

                    for (const auto& [name, slot] : oracle.final_modes) {
                        const BogoliubovMode* mode = algebra.find(name);
                        if (!mode) continue;
                        const QuadratureStats a = quadrature_stats(*mode);
                        const fock::ModeMoments o = fock::measure(oracle.state, slot);
                        compare("mean_plus(" + name + ")", a.mean_plus, o.quad.mean_plus);
                        compare("mean_minus(" + name + ")", a.mean_minus, o.quad.mean_minus);
                        compare("var_plus(" + name + ")", a.var_plus, o.quad.var_plus);
                        compare("var_minus(" + name + ")", a.var_minus, o.quad.var_minus);
                    }

                    const QuadratureStats out = quadrature_stats(algebra.output);
                    const double gain_on_signal =
                        std::abs(algebra.output.coeff(VacuumBasis::signal_index()).alpha);
                    const double fidelity_algebra =
                        coherent_fidelity(gain_on_signal, out.var_plus, out.var_minus, alpha);
                    const double fidelity_oracle =
                        fock::overlap(oracle.state, alpha, oracle.output_slot);
                    compare("fidelity", fidelity_algebra, fidelity_oracle);
                }
            }
        }
    }
    return checks;
}

bool all_passed(const std::vector<VerifyCheck>& checks) {
    for (const auto& c : checks) {
        if (c.status != CheckStatus::pass) return false;
    }
    return true;
}

}  // namespace qot
