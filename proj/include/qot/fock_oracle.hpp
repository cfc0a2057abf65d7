#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qot/circuit.hpp"

// Brute-force cross-check: the same circuits evolved as state vectors in a
// truncated number basis, with every element realized by exponentiating its
// quadratic generator. Gains map to squeezing via cosh(r) = sqrt(G). Nothing
// here reads the coefficient algebra's results; agreement between the two
// routes is the point.
//
// States stay trusted while the population of the top two levels of every
// mode remains below a tail threshold after each element. Results from an
// untrusted state carry the flag; they are never silently dropped.

namespace qot::fock {

inline constexpr double kDefaultTailThreshold = 1e-7;

class FockState {
public:
    FockState(std::size_t mode_count, int cutoff);  // all modes in vacuum

    std::size_t mode_count() const { return modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t stride(std::size_t mode) const;

    double norm() const;
    double tail_mass(std::size_t mode) const;  // top-two-level population
    double max_tail_mass() const;

    bool trusted() const { return trusted_; }
    void flag_untrusted() { trusted_ = false; }
    double tail_threshold() const { return tail_threshold_; }
    void set_tail_threshold(double t) { tail_threshold_ = t; }

    // cumulative mass expelled past the cutoff (state is renormalized after
    // each element); counts against the trust budget together with the tail
    double expelled_mass() const { return expelled_mass_; }
    void add_expelled(double mass) { expelled_mass_ += mass; }

    std::vector<Complex>& amplitudes() { return amp_; }
    const std::vector<Complex>& amplitudes() const { return amp_; }

private:
    std::size_t modes_;
    int cutoff_;
    double tail_threshold_ = kDefaultTailThreshold;
    double expelled_mass_ = 0.0;
    bool trusted_ = true;
    std::vector<Complex> amp_;
};

// Coherent state on the signal mode, vacuum elsewhere. Throws
// std::invalid_argument when the cutoff cannot hold the displacement (tail
// mass at or above the threshold).
FockState prepare(const VacuumBasis& basis, Complex displacement, int cutoff,
                  double tail_threshold = kDefaultTailThreshold);

void apply_beamsplitter(FockState& state, std::size_t m1, std::size_t m2, double transmission);
void apply_two_mode_squeezer(FockState& state, std::size_t m1, std::size_t m2, double gain);
void apply_single_mode_squeezer(FockState& state, std::size_t mode, double gain,
                                double pump_phase);

struct ModeMoments {
    QuadratureStats quad;
    double mean_photon{};
    double var_photon{};
    bool trusted{};
};

ModeMoments measure(const FockState& state, std::size_t mode);

// Covariances of the two modes' quadratures; same struct as the coefficient
// algebra so EPR sum/difference variances assemble identically.
JointStats measure_joint(const FockState& state, std::size_t m1, std::size_t m2);

// Fidelity of the reduced state of one mode with a reference coherent state
// (trace out the rest, then <ref|rho|ref>).
double overlap(const FockState& state, Complex reference, std::size_t mode);

struct CircuitFockRun {
    FockState state;
    // final live mode names and the tensor slot each ended on
    std::vector<std::pair<std::string, std::size_t>> final_modes;
    std::size_t output_slot{};
};

// Runs a circuit in the truncated basis. Modes live on tensor slots, so each
// mode name may feed only one element; the dual-homodyne channel pair
// (eochan feeding displace) is applied as its exact two-element unitary
// equivalent. Circuits outside that fragment are refused with
// std::invalid_argument.
CircuitFockRun run_circuit(const Circuit& circuit, int cutoff,
                           double tail_threshold = kDefaultTailThreshold);

}  // namespace qot::fock
