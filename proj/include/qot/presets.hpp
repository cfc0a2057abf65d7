#pragma once

#include "qot/circuit.hpp"

// The shipped teleporter constructions. Mode names follow the usual CV
// conventions: a_in signal, v1/v2 environment vacua, b1/b2 EPR pair, a_c the
// classical channel, e/f the discarded beams.

namespace qot {

// Electro-optic classical teleporter: dual homodyne into a photocurrent
// channel, then displacement of a fresh vacuum. Output is
// lambda*K*(a_in + v1^dag) - v2; unity signal gain at lambda*K = 1.
Circuit build_eo_classical(double k_constant, double lambda_gain, Complex input_alpha = {});

// All-optical classical teleporter: phase-insensitive amplifier of gain G
// followed by a receiver beamsplitter of transmission 1/G. Requires G > 1.
Circuit build_ao_classical(double gain, Complex input_alpha = {});

// All-optical quantum teleporter: the two vacua are replaced by an EPR pair
// of parametric gain H. With composite_amplifier the sender amplifier is
// realized from two opposite-phase degenerate PAs between 50:50 splitters,
// otherwise by the ideal element seeded with b1.
Circuit build_ao_quantum(double gain, double parametric_gain, bool composite_amplifier = false,
                         Complex input_alpha = {});

// Mode-level fragment of the composite amplifier: mixes the signal with a
// noise mode on a 50:50 splitter, squeezes the two ports with opposite pump
// phases, and recombines. `amplified` equals
// sqrt(G) signal + sqrt(G-1) noise^dag; `waste` is the beam a real device
// would dump.
struct CompositeAmplifier {
    BogoliubovMode mixed_sum;       // (signal + noise)/sqrt(2)
    BogoliubovMode mixed_diff;      // (signal - noise)/sqrt(2)
    BogoliubovMode squeezed_sum;    // pump phase 0
    BogoliubovMode squeezed_diff;   // pump phase pi
    BogoliubovMode amplified;
    BogoliubovMode waste;
};

CompositeAmplifier composite_amplifier(const BogoliubovMode& signal,
                                       const BogoliubovMode& noise_mode, double gain);

}  // namespace qot
