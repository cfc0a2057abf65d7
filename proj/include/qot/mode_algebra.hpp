#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Exact operator algebra for linear optical networks.
//
// Every field mode is expanded over a fixed, ordered set of independent
// environment inputs (one signal plus any number of vacua):
//
//     a = sum_k (alpha_k v_k + beta_k v_k^dag) + displacement
//
// Optical elements are linear maps on (alpha, beta, displacement), so circuit
// outputs are held in closed form and all moments follow from coefficient
// arithmetic. The underlying state is vacuum on every basis mode; a coherent
// input is represented by the displacement term of the signal operator.

namespace qot {

using Complex = std::complex<double>;

class VacuumBasis {
public:
    // Signal label takes index 0; vacuum labels follow in order.
    // Throws std::invalid_argument naming the offending label on duplicates.
    static VacuumBasis with_signal(const std::string& signal_label,
                                   const std::vector<std::string>& vacuum_labels);

    std::size_t size() const { return labels_->size(); }
    const std::string& label(std::size_t k) const { return (*labels_)[k]; }
    static constexpr std::size_t signal_index() { return 0; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    // Content equality: same labels in the same order.
    bool same_as(const VacuumBasis& other) const;

    class BogoliubovMode signal_mode(Complex displacement = {}) const;
    class BogoliubovMode mode(std::string_view label) const;
    class BogoliubovMode mode(std::size_t index) const;

private:
    explicit VacuumBasis(std::shared_ptr<const std::vector<std::string>> labels)
        : labels_(std::move(labels)) {}

    std::shared_ptr<const std::vector<std::string>> labels_;
};

struct CoeffPair {
    Complex alpha{0.0, 0.0};  // multiplies v_k
    Complex beta{0.0, 0.0};   // multiplies v_k^dag
};

class BogoliubovMode {
public:
    BogoliubovMode(VacuumBasis basis, Complex displacement, std::vector<CoeffPair> coeffs);

    const VacuumBasis& basis() const { return basis_; }
    Complex displacement() const { return displacement_; }
    CoeffPair coeff(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : CoeffPair{};
    }

    // Hermitian conjugate: alpha <-> conj(beta), displacement conjugated.
    BogoliubovMode conjugated() const;

    // sum_k (|alpha_k|^2 - |beta_k|^2); 1 for physical modes, 0 for the
    // formal classical-channel objects.
    double commutator_norm() const;
    bool is_physical(double tol = 1e-10) const;

    BogoliubovMode& operator+=(const BogoliubovMode& rhs);
    BogoliubovMode& operator-=(const BogoliubovMode& rhs);
    BogoliubovMode& operator*=(Complex scale);

    friend BogoliubovMode operator+(BogoliubovMode lhs, const BogoliubovMode& rhs) {
        lhs += rhs;
        return lhs;
    }
    friend BogoliubovMode operator-(BogoliubovMode lhs, const BogoliubovMode& rhs) {
        lhs -= rhs;
        return lhs;
    }
    friend BogoliubovMode operator*(Complex scale, BogoliubovMode m) {
        m *= scale;
        return m;
    }
    friend BogoliubovMode operator*(double scale, BogoliubovMode m) {
        m *= Complex{scale, 0.0};
        return m;
    }

private:
    VacuumBasis basis_;
    Complex displacement_{};
    std::vector<CoeffPair> coeffs_;
};

// Largest absolute difference over displacement and all coefficient entries.
double max_coeff_distance(const BogoliubovMode& a, const BogoliubovMode& b);

// ---------------------------------------------------------------------------
// Elements. All throw std::invalid_argument on parameter or basis violations.

// out1 = sqrt(e) in1 - sqrt(1-e) in2,  out2 = sqrt(1-e) in1 + sqrt(e) in2.
// At e = 1/2 the second port is the sum (in1+in2)/sqrt(2) and the first the
// difference (in1-in2)/sqrt(2).
std::pair<BogoliubovMode, BogoliubovMode> beamsplitter(const BogoliubovMode& in1,
                                                       const BogoliubovMode& in2,
                                                       double transmission);

struct AmplifierOutput {
    BogoliubovMode amplified;  // sqrt(G) signal + sqrt(G-1) internal^dag
    BogoliubovMode idler;      // sqrt(G) internal + sqrt(G-1) signal^dag
};

// Phase-insensitive linear amplifier of power gain G >= 1.
AmplifierOutput ideal_linear_amplifier(const BogoliubovMode& signal,
                                       const BogoliubovMode& internal,
                                       double gain);

// Degenerate parametric amplifier (single-mode squeezer):
// out = sqrt(G) in + e^{i pump_phase} sqrt(G-1) in^dag.
BogoliubovMode degenerate_pa(const BogoliubovMode& in, double gain, double pump_phase);

// Non-degenerate parametric amplifier (two-mode squeezer), the EPR source:
// out1 = sqrt(H) in1 + sqrt(H-1) in2^dag and symmetrically for out2.
std::pair<BogoliubovMode, BogoliubovMode> nondegenerate_pa(const BogoliubovMode& in1,
                                                           const BogoliubovMode& in2,
                                                           double parametric_gain);

// Dual-homodyne classical channel K (in + vac^dag). The result has commutator
// norm 0: it stands for a classical photocurrent, not a field mode.
BogoliubovMode eo_classical_channel(const BogoliubovMode& in,
                                    const BogoliubovMode& vac,
                                    double k_constant);

// Receiver-side reconstruction: out = lambda * channel - vac.
BogoliubovMode displace_reconstruct(const BogoliubovMode& channel,
                                    const BogoliubovMode& vac,
                                    double lambda_gain);

// ---------------------------------------------------------------------------
// Moments. Quadratures: X+ with mean 2 Re(displacement), X- with mean
// 2 Im(displacement); vacuum variance is normalized to 1.

struct QuadratureStats {
    double mean_plus{};
    double mean_minus{};
    double var_plus{};
    double var_minus{};
};

QuadratureStats quadrature_stats(const BogoliubovMode& mode);

struct JointStats {
    double cov_plus{};   // Cov(X+_1, X+_2)
    double cov_minus{};  // Cov(X-_1, X-_2)
    double var_plus_1{}, var_plus_2{};
    double var_minus_1{}, var_minus_2{};

    double difference_variance_plus() const { return var_plus_1 + var_plus_2 - 2.0 * cov_plus; }
    double sum_variance_minus() const { return var_minus_1 + var_minus_2 + 2.0 * cov_minus; }
};

JointStats joint_stats(const BogoliubovMode& m1, const BogoliubovMode& m2);

// [m1, m2^dag] = sum_k (alpha1_k conj(alpha2_k) - beta1_k conj(beta2_k)).
// Vanishes for canonically independent modes; equals commutator_norm for
// m1 == m2.
Complex cross_commutator(const BogoliubovMode& m1, const BogoliubovMode& m2);

// Two independent vacua sit exactly at this difference/sum variance level;
// entangled pairs drop below it.
inline constexpr double kSeparableLevel = 2.0;

struct EprCorrelations {
    double difference_variance_plus{};
    double sum_variance_minus{};
    double ratio_to_separable_plus{};
    double ratio_to_separable_minus{};
};

EprCorrelations epr_correlations(const BogoliubovMode& b1, const BogoliubovMode& b2);

// Shared range checks (also used by the circuit language).
void validate_transmission(double transmission);
void validate_gain(double gain);
void validate_parametric_gain(double parametric_gain);

}  // namespace qot
