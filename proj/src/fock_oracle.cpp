#include "qot/fock_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace qot::fock {

namespace {

double l2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<double> sqrt_table(int cutoff) {
    std::vector<double> t(std::size_t(cutoff) + 2);
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = std::sqrt(double(n));
    return t;
}

// Elements are applied through their normal-ordered factorization
//     U = exp(c_r R) . D . exp(c_l L)
// with L strictly lowering and R strictly raising, so both series terminate
// on the truncated space and every kept matrix element of U is exact. The
// only truncation effect is that mass the exact operator sends past the
// cutoff is expelled; the state is renormalized and the loss is charged to
// the trust budget.
// psi <- exp(K) psi by scaled Taylor series, for anti-Hermitian K that
// conserves total photon number (the beamsplitter): blocks that fit inside
// the cutoff evolve exactly. Substep count starts from the measured action
// norm and doubles if partial sums start to blow up.
template <typename ApplyK>
void exponentiate(std::vector<Complex>& psi, ApplyK&& apply_k) {
    const std::size_t n = psi.size();
    std::vector<Complex> term(n), next(n);

    apply_k(psi.data(), next.data());
    const double base = l2(psi);
    if (base == 0.0) return;
    int substeps = std::max(1, int(std::ceil(l2(next) / base)));

    const std::vector<Complex> saved = psi;
    for (int attempt = 0; attempt < 16; ++attempt) {
        bool blowup = false;
        for (int s = 0; s < substeps && !blowup; ++s) {
            term = psi;
            const double start_norm = l2(psi);
            for (int m = 1; m <= 200; ++m) {
                apply_k(term.data(), next.data());
                const double scale = 1.0 / (double(substeps) * double(m));
                for (std::size_t i = 0; i < n; ++i) term[i] = next[i] * scale;
                for (std::size_t i = 0; i < n; ++i) psi[i] += term[i];
                const double tn = l2(term);
                if (tn > 1e4 * start_norm || m == 200) {
                    blowup = true;
                    break;
                }
                if (tn <= 1e-17 * start_norm) break;
            }
        }
        if (!blowup) return;
        substeps *= 2;
        psi = saved;
    }
    throw std::runtime_error("generator exponential failed to converge");
}

template <typename LowerApply, typename RaiseApply, typename Diagonal>
void apply_stages(FockState& state, Complex lower_coeff, LowerApply&& lower,
                  Complex raise_coeff, RaiseApply&& raise, Diagonal&& diagonal) {
    auto& amp = state.amplitudes();
    const std::size_t n = amp.size();
    std::vector<Complex> term(amp), next(n);

    auto series = [&](Complex coeff, auto&& op) {
        term = amp;
        for (int k = 1; k <= state.cutoff() + 1; ++k) {
            op(term.data(), next.data());
            const Complex scale = coeff / double(k);
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                term[i] = next[i] * scale;
                amp[i] += term[i];
                nrm += std::norm(term[i]);
            }
            if (nrm == 0.0) break;
        }
    };

    const double before = l2(amp);
    series(lower_coeff, lower);
    diagonal();
    series(raise_coeff, raise);
    const double after = l2(amp);

    if (after == 0.0) {
        state.flag_untrusted();
        return;
    }
    const double expelled =
        std::max(0.0, 1.0 - (after * after) / std::max(before * before, 1e-300));
    for (Complex& z : amp) z /= after;
    state.add_expelled(expelled);
}

void check_trust(FockState& state) {
    if (state.expelled_mass() >= state.tail_threshold()) state.flag_untrusted();
    if (state.max_tail_mass() >= state.tail_threshold()) state.flag_untrusted();
    if (std::abs(state.norm() - 1.0) > 1e-8) state.flag_untrusted();
}

void check_mode(const FockState& state, std::size_t mode, const char* op) {
    if (mode >= state.mode_count()) {
        throw std::invalid_argument(std::string(op) + ": mode index out of range");
    }
}

// truncated coherent amplitudes; tail = mass outside levels 0..cutoff-3
std::vector<Complex> coherent_vector(Complex alpha, int cutoff, double* tail = nullptr) {
    std::vector<Complex> c(static_cast<std::size_t>(cutoff));
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < cutoff; ++n) {
        c[std::size_t(n)] = c[std::size_t(n) - 1] * alpha / std::sqrt(double(n));
    }
    if (tail) {
        double head = 0.0;
        for (int n = 0; n + 3 <= cutoff; ++n) head += std::norm(c[std::size_t(n)]);
        *tail = 1.0 - head;
    }
    return c;
}

}  // namespace

FockState::FockState(std::size_t mode_count, int cutoff) : modes_(mode_count), cutoff_(cutoff) {
    if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
    if (mode_count == 0) throw std::invalid_argument("state needs at least one mode");
    std::size_t dim = 1;
    for (std::size_t m = 0; m < mode_count; ++m) {
        if (dim > (std::size_t(1) << 28) / std::size_t(cutoff)) {
            throw std::invalid_argument("state dimension too large");
        }
        dim *= std::size_t(cutoff);
    }
    amp_.assign(dim, Complex{});
    amp_[0] = 1.0;
}

std::size_t FockState::stride(std::size_t mode) const {
    std::size_t s = 1;
    for (std::size_t m = mode + 1; m < modes_; ++m) s *= std::size_t(cutoff_);
    return s;
}

double FockState::norm() const { return l2(amp_); }

double FockState::tail_mass(std::size_t mode) const {
    const std::size_t s = stride(mode);
    const std::size_t d = std::size_t(cutoff_);
    double mass = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const std::size_t level = (i / s) % d;
        if (level + 2 >= d) mass += std::norm(amp_[i]);
    }
    return mass;
}

double FockState::max_tail_mass() const {
    double worst = 0.0;
    for (std::size_t m = 0; m < modes_; ++m) worst = std::max(worst, tail_mass(m));
    return worst;
}

FockState prepare(const VacuumBasis& basis, Complex displacement, int cutoff,
                  double tail_threshold) {
    FockState state(basis.size(), cutoff);
    state.set_tail_threshold(tail_threshold);

    double tail = 0.0;
    std::vector<Complex> c = coherent_vector(displacement, cutoff, &tail);
    if (tail >= tail_threshold) {
        throw std::invalid_argument("cutoff " + std::to_string(cutoff) +
                                    " too small for displacement magnitude " +
                                    std::to_string(std::abs(displacement)));
    }

    auto& amp = state.amplitudes();
    std::fill(amp.begin(), amp.end(), Complex{});
    const std::size_t s = state.stride(VacuumBasis::signal_index());
    for (int n = 0; n < cutoff; ++n) amp[std::size_t(n) * s] = c[std::size_t(n)];
    const double norm = l2(amp);
    for (Complex& z : amp) z /= norm;
    return state;
}

void apply_beamsplitter(FockState& state, std::size_t m1, std::size_t m2, double transmission) {
    validate_transmission(transmission);
    check_mode(state, m1, "beamsplitter");
    check_mode(state, m2, "beamsplitter");
    if (m1 == m2) throw std::invalid_argument("beamsplitter: modes must be distinct");
    if (transmission == 1.0) return;

    // exp(phi (a1^dag a2 - a2^dag a1)) with cos(phi) = sqrt(eps),
    // sin(phi) = -sqrt(1-eps): out1 = sqrt(eps) in1 - sqrt(1-eps) in2.
    // Taylor exponentiation is block-exact here: the generator conserves
    // n1 + n2, so only blocks straddling the cutoff are truncated. A staged
    // normal-ordered form would not be: its intermediate factors leave the
    // box even when the result fits.
    const double phi = -std::acos(std::min(1.0, std::sqrt(transmission)));
    const std::size_t s1 = state.stride(m1);
    const std::size_t s2 = state.stride(m2);
    const std::size_t d = std::size_t(state.cutoff());
    const std::vector<double> rt = sqrt_table(state.cutoff());
    auto& amp = state.amplitudes();

    exponentiate(amp, [&](const Complex* x, Complex* y) {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const std::size_t n1 = (i / s1) % d;
            const std::size_t n2 = (i / s2) % d;
            Complex acc{};
            if (n1 >= 1 && n2 + 1 < d) acc += rt[n1] * rt[n2 + 1] * x[i - s1 + s2];
            if (n2 >= 1 && n1 + 1 < d) acc -= rt[n2] * rt[n1 + 1] * x[i + s1 - s2];
            y[i] = phi * acc;
        }
    });
    check_trust(state);
}

void apply_two_mode_squeezer(FockState& state, std::size_t m1, std::size_t m2, double gain) {
    validate_gain(gain);
    check_mode(state, m1, "two_mode_squeezer");
    check_mode(state, m2, "two_mode_squeezer");
    if (m1 == m2) throw std::invalid_argument("two_mode_squeezer: modes must be distinct");
    if (gain == 1.0) return;

    // exp(r (a1^dag a2^dag - a1 a2)) = exp(tau K+) sech(r)^{n1+n2+1} exp(-tau K-)
    // with tau = tanh(r), cosh(r) = sqrt(G): out1 = sqrt(G) in1 + sqrt(G-1) in2^dag.
    const double r = std::acosh(std::sqrt(gain));
    const double tau = std::tanh(r);
    const std::size_t s1 = state.stride(m1);
    const std::size_t s2 = state.stride(m2);
    const std::size_t d = std::size_t(state.cutoff());
    const std::vector<double> rt = sqrt_table(state.cutoff());
    auto& amp = state.amplitudes();

    auto lower_both = [&](const Complex* x, Complex* y) {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const std::size_t n1 = (i / s1) % d;
            const std::size_t n2 = (i / s2) % d;
            y[i] = n1 + 1 < d && n2 + 1 < d ? rt[n1 + 1] * rt[n2 + 1] * x[i + s1 + s2]
                                            : Complex{};
        }
    };
    auto raise_both = [&](const Complex* x, Complex* y) {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const std::size_t n1 = (i / s1) % d;
            const std::size_t n2 = (i / s2) % d;
            y[i] = n1 >= 1 && n2 >= 1 ? rt[n1] * rt[n2] * x[i - s1 - s2] : Complex{};
        }
    };
    const double log_sech = std::log(1.0 / std::cosh(r));
    auto diagonal = [&] {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double n1 = double((i / s1) % d);
            const double n2 = double((i / s2) % d);
            amp[i] *= std::exp((n1 + n2 + 1.0) * log_sech);
        }
    };

    apply_stages(state, Complex{-tau, 0.0}, lower_both, Complex{tau, 0.0}, raise_both, diagonal);
    check_trust(state);
}

void apply_single_mode_squeezer(FockState& state, std::size_t mode, double gain,
                                double pump_phase) {
    validate_gain(gain);
    check_mode(state, mode, "single_mode_squeezer");
    if (gain == 1.0) return;

    // exp((zeta a^dag^2 - conj(zeta) a^2)/2) with zeta = r e^{i theta}:
    //   exp(tau a^dag^2 / 2) sech(r)^{n+1/2} exp(-conj(tau) a^2 / 2),
    // tau = e^{i theta} tanh(r): out = sqrt(G) in + e^{i theta} sqrt(G-1) in^dag.
    const double r = std::acosh(std::sqrt(gain));
    const Complex tau = std::tanh(r) * std::exp(Complex{0.0, pump_phase});
    const std::size_t s = state.stride(mode);
    const std::size_t d = std::size_t(state.cutoff());
    const std::vector<double> rt = sqrt_table(state.cutoff());
    auto& amp = state.amplitudes();

    auto lower_two = [&](const Complex* x, Complex* y) {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const std::size_t n = (i / s) % d;
            y[i] = n + 2 < d ? rt[n + 1] * rt[n + 2] * x[i + 2 * s] : Complex{};
        }
    };
    auto raise_two = [&](const Complex* x, Complex* y) {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const std::size_t n = (i / s) % d;
            y[i] = n >= 2 ? rt[n] * rt[n - 1] * x[i - 2 * s] : Complex{};
        }
    };
    const double log_sech = std::log(1.0 / std::cosh(r));
    auto diagonal = [&] {
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double n = double((i / s) % d);
            amp[i] *= std::exp((n + 0.5) * log_sech);
        }
    };

    apply_stages(state, -0.5 * std::conj(tau), lower_two, 0.5 * tau, raise_two, diagonal);
    check_trust(state);
}

ModeMoments measure(const FockState& state, std::size_t mode) {
    check_mode(state, mode, "measure");
    const std::size_t s = state.stride(mode);
    const std::size_t d = std::size_t(state.cutoff());
    const std::vector<double> rt = sqrt_table(state.cutoff());
    const auto& amp = state.amplitudes();

    Complex a{}, a2{};
    double n1 = 0.0, n2 = 0.0, total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const std::size_t n = (i / s) % d;
        const double p = std::norm(amp[i]);
        total += p;
        n1 += double(n) * p;
        n2 += double(n) * double(n) * p;
        if (n >= 1) a += std::conj(amp[i - s]) * rt[n] * amp[i];
        if (n >= 2) a2 += std::conj(amp[i - 2 * s]) * rt[n] * rt[n - 1] * amp[i];
    }
    a /= total;
    a2 /= total;
    n1 /= total;
    n2 /= total;

    ModeMoments m;
    m.quad.mean_plus = 2.0 * a.real();
    m.quad.mean_minus = 2.0 * a.imag();
    m.quad.var_plus = 2.0 * a2.real() + 2.0 * n1 + 1.0 - m.quad.mean_plus * m.quad.mean_plus;
    m.quad.var_minus = -2.0 * a2.real() + 2.0 * n1 + 1.0 - m.quad.mean_minus * m.quad.mean_minus;
    m.mean_photon = n1;
    m.var_photon = n2 - n1 * n1;
    m.trusted = state.trusted();
    return m;
}

JointStats measure_joint(const FockState& state, std::size_t m1, std::size_t m2) {
    check_mode(state, m1, "measure_joint");
    check_mode(state, m2, "measure_joint");
    if (m1 == m2) throw std::invalid_argument("measure_joint: modes must be distinct");
    const std::size_t s1 = state.stride(m1);
    const std::size_t s2 = state.stride(m2);
    const std::size_t d = std::size_t(state.cutoff());
    const std::vector<double> rt = sqrt_table(state.cutoff());
    const auto& amp = state.amplitudes();

    Complex a1a2{}, a1dag_a2{};
    double total = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const std::size_t n1 = (i / s1) % d;
        const std::size_t n2 = (i / s2) % d;
        total += std::norm(amp[i]);
        if (n1 >= 1 && n2 >= 1) a1a2 += std::conj(amp[i - s1 - s2]) * rt[n1] * rt[n2] * amp[i];
        if (n1 + 1 < d && n2 >= 1) {
            a1dag_a2 += std::conj(amp[i + s1 - s2]) * rt[n1 + 1] * rt[n2] * amp[i];
        }
    }
    a1a2 /= total;
    a1dag_a2 /= total;

    const ModeMoments mm1 = measure(state, m1);
    const ModeMoments mm2 = measure(state, m2);

    JointStats j;
    j.var_plus_1 = mm1.quad.var_plus;
    j.var_minus_1 = mm1.quad.var_minus;
    j.var_plus_2 = mm2.quad.var_plus;
    j.var_minus_2 = mm2.quad.var_minus;
    const double xx_plus = 2.0 * a1a2.real() + 2.0 * a1dag_a2.real();
    const double xx_minus = -2.0 * a1a2.real() + 2.0 * a1dag_a2.real();
    j.cov_plus = xx_plus - mm1.quad.mean_plus * mm2.quad.mean_plus;
    j.cov_minus = xx_minus - mm1.quad.mean_minus * mm2.quad.mean_minus;
    return j;
}

double overlap(const FockState& state, Complex reference, std::size_t mode) {
    check_mode(state, mode, "overlap");
    const std::size_t s = state.stride(mode);
    const std::size_t d = std::size_t(state.cutoff());
    const auto& amp = state.amplitudes();

    std::vector<Complex> c = coherent_vector(reference, state.cutoff());
    double cn = 0.0;
    for (const Complex& z : c) cn += std::norm(z);
    for (Complex& z : c) z /= std::sqrt(cn);

    // <ref| rho |ref> over the reduced state of the chosen mode: accumulate
    // sum_rest |sum_n conj(c_n) psi(n, rest)|^2.
    const std::size_t block = s * d;
    double fid = 0.0, total = 0.0;
    for (std::size_t outer = 0; outer < amp.size(); outer += block) {
        for (std::size_t inner = 0; inner < s; ++inner) {
            Complex proj{};
            for (std::size_t n = 0; n < d; ++n) {
                const Complex z = amp[outer + inner + n * s];
                proj += std::conj(c[n]) * z;
                total += std::norm(z);
            }
            fid += std::norm(proj);
        }
    }
    return fid / total;
}

CircuitFockRun run_circuit(const Circuit& circuit, int cutoff, double tail_threshold) {
    validate(circuit);

    // slot semantics need linear mode use
    std::unordered_set<std::string> used;
    for (const auto& step : circuit.steps) {
        for (const auto& name : step_operands(step)) {
            if (!used.insert(name).second) {
                throw std::invalid_argument("oracle: mode '" + name +
                                            "' feeds more than one element");
            }
        }
    }

    FockState state = prepare(circuit.basis, circuit.input_displacement, cutoff, tail_threshold);

    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < circuit.basis.size(); ++k) slot[circuit.basis.label(k)] = k;

    struct PendingChannel {
        std::size_t in_slot, vac_slot;
        double k_constant;
    };
    std::unordered_map<std::string, PendingChannel> channels;

    for (const auto& step : circuit.steps) {
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, BsStep>) {
                    const std::size_t a = slot.at(st.in1), b = slot.at(st.in2);
                    apply_beamsplitter(state, a, b, st.transmission);
                    slot[st.out1] = a;
                    slot[st.out2] = b;
                } else if constexpr (std::is_same_v<T, AmpStep>) {
                    const std::size_t a = slot.at(st.signal), b = slot.at(st.internal);
                    apply_two_mode_squeezer(state, a, b, st.gain);
                    slot[st.amplified] = a;
                    slot[st.idler] = b;
                } else if constexpr (std::is_same_v<T, DpaStep>) {
                    const std::size_t a = slot.at(st.in);
                    apply_single_mode_squeezer(state, a, st.gain, pump_phase(st.sign));
                    slot[st.out] = a;
                } else if constexpr (std::is_same_v<T, NopaStep>) {
                    const std::size_t a = slot.at(st.in1), b = slot.at(st.in2);
                    apply_two_mode_squeezer(state, a, b, st.gain);
                    slot[st.out1] = a;
                    slot[st.out2] = b;
                } else if constexpr (std::is_same_v<T, EoChanStep>) {
                    channels[st.out] =
                        PendingChannel{slot.at(st.in), slot.at(st.vac), st.k_constant};
                } else {
                    auto it = channels.find(st.channel);
                    if (it == channels.end()) {
                        throw std::invalid_argument(
                            "oracle: displace input '" + st.channel +
                            "' is not a dual-homodyne channel; cannot realize it unitarily");
                    }
                    // lambda*K*(in + vac^dag) - w as a beamsplitter into the
                    // displacement vacuum followed by a two-mode squeezer on
                    // the homodyne vacuum
                    const double lk = st.lambda_gain * it->second.k_constant;
                    const double h0 = 1.0 + lk * lk;
                    const std::size_t w = slot.at(st.vac);
                    apply_beamsplitter(state, it->second.in_slot, w, lk * lk / h0);
                    apply_two_mode_squeezer(state, it->second.in_slot, it->second.vac_slot, h0);
                    slot[st.out] = it->second.in_slot;
                    channels.erase(it);
                }
            },
            step);
    }
    if (!channels.empty()) {
        throw std::invalid_argument(
            "oracle: dual-homodyne channel left unconsumed; cannot realize it unitarily");
    }

    CircuitFockRun run{std::move(state), {}, 0};
    std::unordered_set<std::string> dead;
    for (const auto& step : circuit.steps) {
        for (const auto& name : step_operands(step)) dead.insert(name);
    }
    for (std::size_t k = 0; k < circuit.basis.size(); ++k) {
        const std::string& name = circuit.basis.label(k);
        if (!dead.count(name)) run.final_modes.emplace_back(name, slot.at(name));
    }
    for (const auto& step : circuit.steps) {
        for (const auto& name : step_results(step)) {
            if (!dead.count(name) && slot.count(name)) {
                run.final_modes.emplace_back(name, slot.at(name));
            }
        }
    }
    run.output_slot = slot.at(circuit.output_label);
    return run;
}

}  // namespace qot::fock
