#include "qot/mode_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace qot {

namespace {

void check_same_basis(const BogoliubovMode& a, const BogoliubovMode& b, const char* op) {
    if (!a.basis().same_as(b.basis())) {
        throw std::invalid_argument(std::string(op) + ": operands use different bases");
    }
}

}  // namespace

VacuumBasis VacuumBasis::with_signal(const std::string& signal_label,
                                     const std::vector<std::string>& vacuum_labels) {
    auto labels = std::make_shared<std::vector<std::string>>();
    labels->reserve(vacuum_labels.size() + 1);
    labels->push_back(signal_label);
    std::unordered_set<std::string_view> seen{signal_label};
    for (const auto& l : vacuum_labels) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument("duplicate mode label '" + l + "'");
        }
        labels->push_back(l);
    }
    return VacuumBasis(std::move(labels));
}

std::optional<std::size_t> VacuumBasis::index_of(std::string_view label) const {
    for (std::size_t k = 0; k < labels_->size(); ++k) {
        if ((*labels_)[k] == label) return k;
    }
    return std::nullopt;
}

bool VacuumBasis::same_as(const VacuumBasis& other) const {
    return labels_ == other.labels_ || *labels_ == *other.labels_;
}

BogoliubovMode VacuumBasis::signal_mode(Complex displacement) const {
    std::vector<CoeffPair> coeffs(size());
    coeffs[signal_index()].alpha = 1.0;
    return BogoliubovMode(*this, displacement, std::move(coeffs));
}

BogoliubovMode VacuumBasis::mode(std::size_t index) const {
    if (index >= size()) {
        throw std::invalid_argument("basis mode index out of range");
    }
    std::vector<CoeffPair> coeffs(size());
    coeffs[index].alpha = 1.0;
    return BogoliubovMode(*this, Complex{}, std::move(coeffs));
}

BogoliubovMode VacuumBasis::mode(std::string_view label) const {
    auto idx = index_of(label);
    if (!idx) {
        throw std::invalid_argument("unknown basis label '" + std::string(label) + "'");
    }
    return mode(*idx);
}

BogoliubovMode::BogoliubovMode(VacuumBasis basis, Complex displacement,
                               std::vector<CoeffPair> coeffs)
    : basis_(std::move(basis)), displacement_(displacement), coeffs_(std::move(coeffs)) {
    coeffs_.resize(basis_.size());
}

BogoliubovMode BogoliubovMode::conjugated() const {
    std::vector<CoeffPair> coeffs(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs[k].alpha = std::conj(coeffs_[k].beta);
        coeffs[k].beta = std::conj(coeffs_[k].alpha);
    }
    return BogoliubovMode(basis_, std::conj(displacement_), std::move(coeffs));
}

double BogoliubovMode::commutator_norm() const {
    double norm = 0.0;
    for (const auto& c : coeffs_) {
        norm += std::norm(c.alpha) - std::norm(c.beta);
    }
    return norm;
}

bool BogoliubovMode::is_physical(double tol) const {
    return std::abs(commutator_norm() - 1.0) <= tol;
}

BogoliubovMode& BogoliubovMode::operator+=(const BogoliubovMode& rhs) {
    check_same_basis(*this, rhs, "mode addition");
    displacement_ += rhs.displacement_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k].alpha += rhs.coeffs_[k].alpha;
        coeffs_[k].beta += rhs.coeffs_[k].beta;
    }
    return *this;
}

BogoliubovMode& BogoliubovMode::operator-=(const BogoliubovMode& rhs) {
    check_same_basis(*this, rhs, "mode subtraction");
    displacement_ -= rhs.displacement_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k].alpha -= rhs.coeffs_[k].alpha;
        coeffs_[k].beta -= rhs.coeffs_[k].beta;
    }
    return *this;
}

BogoliubovMode& BogoliubovMode::operator*=(Complex scale) {
    displacement_ *= scale;
    for (auto& c : coeffs_) {
        c.alpha *= scale;
        c.beta *= scale;
    }
    return *this;
}

double max_coeff_distance(const BogoliubovMode& a, const BogoliubovMode& b) {
    check_same_basis(a, b, "mode comparison");
    double d = std::abs(a.displacement() - b.displacement());
    for (std::size_t k = 0; k < a.basis().size(); ++k) {
        d = std::max(d, std::abs(a.coeff(k).alpha - b.coeff(k).alpha));
        d = std::max(d, std::abs(a.coeff(k).beta - b.coeff(k).beta));
    }
    return d;
}

void validate_transmission(double transmission) {
    if (!(transmission > 0.0) || !(transmission <= 1.0)) {
        throw std::invalid_argument("beamsplitter transmission must lie in (0, 1], got " +
                                    std::to_string(transmission));
    }
}

void validate_gain(double gain) {
    if (!(gain >= 1.0)) {
        throw std::invalid_argument("amplifier gain must be >= 1, got " + std::to_string(gain));
    }
}

void validate_parametric_gain(double parametric_gain) {
    if (!(parametric_gain >= 1.0)) {
        throw std::invalid_argument("parametric gain must be >= 1, got " +
                                    std::to_string(parametric_gain));
    }
}

std::pair<BogoliubovMode, BogoliubovMode> beamsplitter(const BogoliubovMode& in1,
                                                       const BogoliubovMode& in2,
                                                       double transmission) {
    validate_transmission(transmission);
    check_same_basis(in1, in2, "beamsplitter");
    const double t = std::sqrt(transmission);
    const double r = std::sqrt(1.0 - transmission);
    BogoliubovMode out1 = t * in1 - r * in2;
    BogoliubovMode out2 = r * in1 + t * in2;
    return {std::move(out1), std::move(out2)};
}

AmplifierOutput ideal_linear_amplifier(const BogoliubovMode& signal,
                                       const BogoliubovMode& internal,
                                       double gain) {
    validate_gain(gain);
    check_same_basis(signal, internal, "ideal_linear_amplifier");
    const double g = std::sqrt(gain);
    const double h = std::sqrt(gain - 1.0);
    return {g * signal + h * internal.conjugated(), g * internal + h * signal.conjugated()};
}

BogoliubovMode degenerate_pa(const BogoliubovMode& in, double gain, double pump_phase) {
    validate_gain(gain);
    const Complex phase = std::exp(Complex{0.0, pump_phase});
    return std::sqrt(gain) * in + (phase * std::sqrt(gain - 1.0)) * in.conjugated();
}

std::pair<BogoliubovMode, BogoliubovMode> nondegenerate_pa(const BogoliubovMode& in1,
                                                           const BogoliubovMode& in2,
                                                           double parametric_gain) {
    validate_parametric_gain(parametric_gain);
    check_same_basis(in1, in2, "nondegenerate_pa");
    const double g = std::sqrt(parametric_gain);
    const double h = std::sqrt(parametric_gain - 1.0);
    return {g * in1 + h * in2.conjugated(), g * in2 + h * in1.conjugated()};
}

BogoliubovMode eo_classical_channel(const BogoliubovMode& in, const BogoliubovMode& vac,
                                    double k_constant) {
    if (!(k_constant > 0.0)) {
        throw std::invalid_argument("channel constant must be > 0, got " +
                                    std::to_string(k_constant));
    }
    check_same_basis(in, vac, "eo_classical_channel");
    return k_constant * (in + vac.conjugated());
}

BogoliubovMode displace_reconstruct(const BogoliubovMode& channel, const BogoliubovMode& vac,
                                    double lambda_gain) {
    if (!(lambda_gain > 0.0)) {
        throw std::invalid_argument("reconstruction gain must be > 0, got " +
                                    std::to_string(lambda_gain));
    }
    check_same_basis(channel, vac, "displace_reconstruct");
    return lambda_gain * channel - vac;
}

QuadratureStats quadrature_stats(const BogoliubovMode& mode) {
    QuadratureStats s;
    s.mean_plus = 2.0 * mode.displacement().real();
    s.mean_minus = 2.0 * mode.displacement().imag();
    for (std::size_t k = 0; k < mode.basis().size(); ++k) {
        const CoeffPair c = mode.coeff(k);
        s.var_plus += std::norm(c.alpha + std::conj(c.beta));
        s.var_minus += std::norm(c.alpha - std::conj(c.beta));
    }
    return s;
}

JointStats joint_stats(const BogoliubovMode& m1, const BogoliubovMode& m2) {
    check_same_basis(m1, m2, "joint_stats");
    JointStats j;
    Complex cp{}, cm{};
    for (std::size_t k = 0; k < m1.basis().size(); ++k) {
        const CoeffPair a = m1.coeff(k);
        const CoeffPair b = m2.coeff(k);
        const Complex u_p = a.alpha + std::conj(a.beta);
        const Complex w_p = b.alpha + std::conj(b.beta);
        const Complex u_m = a.alpha - std::conj(a.beta);
        const Complex w_m = b.alpha - std::conj(b.beta);
        cp += u_p * std::conj(w_p);
        cm += u_m * std::conj(w_m);
        j.var_plus_1 += std::norm(u_p);
        j.var_plus_2 += std::norm(w_p);
        j.var_minus_1 += std::norm(u_m);
        j.var_minus_2 += std::norm(w_m);
    }
    // symmetrized covariance of the Hermitian quadratures
    j.cov_plus = cp.real();
    j.cov_minus = cm.real();
    return j;
}

Complex cross_commutator(const BogoliubovMode& m1, const BogoliubovMode& m2) {
    check_same_basis(m1, m2, "cross_commutator");
    Complex c{};
    for (std::size_t k = 0; k < m1.basis().size(); ++k) {
        c += m1.coeff(k).alpha * std::conj(m2.coeff(k).alpha) -
             m1.coeff(k).beta * std::conj(m2.coeff(k).beta);
    }
    return c;
}

EprCorrelations epr_correlations(const BogoliubovMode& b1, const BogoliubovMode& b2) {
    const JointStats j = joint_stats(b1, b2);
    EprCorrelations e;
    e.difference_variance_plus = j.difference_variance_plus();
    e.sum_variance_minus = j.sum_variance_minus();
    e.ratio_to_separable_plus = e.difference_variance_plus / kSeparableLevel;
    e.ratio_to_separable_minus = e.sum_variance_minus / kSeparableLevel;
    return e;
}

}  // namespace qot
