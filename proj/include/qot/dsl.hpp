#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qot/circuit.hpp"

// Plain-text circuit description language (.qot files, UTF-8, LF or CRLF).
// One statement per line, `#` starts a comment, blank lines are ignored:
//
//   input    NAME ["coherent" FLOAT FLOAT]    input mode, optional Re/Im displacement
//   vacuum   NAME...                          vacuum input modes
//   bs       EPS  IN1 IN2 -> OUT1 OUT2        transmission in (0,1]
//   amp      G    SIG INT -> AMP IDLER        phase-insensitive amplifier, G >= 1
//   dpa      G    +|-  IN -> OUT              degenerate PA, pump phase 0 or pi
//   nopa     H    IN1 IN2 -> OUT1 OUT2        two-mode squeezer, H >= 1
//   eochan   K    IN VAC -> CHAN              dual-homodyne classical channel, K > 0
//   displace L    CHAN VAC -> OUT             reconstruction gain L > 0
//   output   NAME                             exactly one per circuit
//   discard  NAME...                          beams dumped by the device
//
// The EPS slot of `bs` also accepts `matched:G`, which resolves to 1/G at
// parse time (the loss-matched receiver setting). Numbers are decimal
// literals with optional exponent; no expressions.

namespace qot {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string expected, std::string found);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    int line_;
    int column_;
    std::string expected_;
    std::string found_;
};

// Parses a full source into a validated circuit. Throws ParseError for both
// syntax and semantic violations (undefined/redefined modes, parameters out
// of range, zero or multiple outputs), always pointing into the source.
Circuit parse(std::string_view source);

// Canonical text form: input, vacuum declarations, steps in order, discards,
// output. Comments are not preserved; numbers are rendered with 17
// significant digits so a reparse reproduces every value bit for bit.
std::string format(const Circuit& circuit);

}  // namespace qot
