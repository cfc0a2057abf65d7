#pragma once

#include <string>
#include <vector>

#include "qot/circuit.hpp"

// Oracle-vs-algebra comparison grid. Every preset scheme is run both through
// the coefficient algebra and the truncated-Fock simulation; final mode
// means/variances and the output-state fidelity must agree within the
// tolerance. The oracle is only trusted at small gains, so grids outside the
// documented boundary are refused up front.

namespace qot {

struct VerifyLimits {
    double max_gain = 2.25;       // amplifier and parametric gain
    double max_displacement = 1.5;
    int min_cutoff = 4;
    int max_cutoff = 96;
};

struct VerifyOptions {
    std::vector<double> gains{1.0, 1.2, 2.0};
    std::vector<double> parametric_gains{1.0, 1.2, 2.0};
    std::vector<Complex> displacements{{0.0, 0.0}, {0.3, 0.0}, {1.0, 0.0}};
    int cutoff = 40;
    double tolerance = 1e-6;
    // the composite-amplifier variant needs a far larger cutoff than the
    // ideal-element schemes; off by default, opt in to stress it
    bool include_composite = false;
};

enum class CheckStatus { pass, fail, refused, untrusted };

struct VerifyCheck {
    std::string scheme;
    double gain{};
    double parametric_gain{};
    Complex displacement{};
    std::string quantity;  // e.g. "var_plus(a_out)" or "fidelity"
    double algebra_value{};
    double oracle_value{};
    double abs_error{};
    CheckStatus status{};
    std::string note;
};

// Throws std::invalid_argument if the requested grid exceeds the limits.
void check_verify_boundary(const VerifyOptions& options, const VerifyLimits& limits = {});

std::vector<VerifyCheck> verify_grid(const VerifyOptions& options = {});

bool all_passed(const std::vector<VerifyCheck>& checks);

}  // namespace qot
