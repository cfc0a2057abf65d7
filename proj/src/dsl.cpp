#include "qot/dsl.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>
#include <vector>

namespace qot {

ParseError::ParseError(int line, int column, std::string expected, std::string found)
    : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": expected " + expected + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

struct Token {
    std::string text;
    int line;
    int column;
};

struct Line {
    int number;
    std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view source) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos < source.size()) {
        std::size_t eol = source.find('\n', pos);
        std::string_view raw = source.substr(
            pos, eol == std::string_view::npos ? source.size() - pos : eol - pos);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        ++number;
        if (std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
            std::size_t start = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') ++i;
            if (i > start) {
                line.tokens.push_back(
                    {std::string(raw.substr(start, i - start)), number, int(start) + 1});
            }
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    if (number == 0) number = 1;
    lines.push_back(Line{number, {}});  // sentinel carrying the end-of-source position
    return lines;
}

bool valid_name(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text[0])) return false;
    for (char c : text.substr(1)) {
        if (!alpha(c) && !digit(c)) return false;
    }
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view source) : lines_(tokenize(source)) {}

    Circuit parse_circuit() {
        for (std::size_t li = 0; li + 1 < lines_.size(); ++li) {
            line_ = &lines_[li];
            cursor_ = 0;
            statement();
            if (cursor_ < line_->tokens.size()) {
                fail(line_->tokens[cursor_], "end of line");
            }
        }
        const Line& eof = lines_.back();
        if (input_label_.empty()) {
            throw ParseError(eof.number, 1, "an input statement", "end of source");
        }
        if (output_label_.empty()) {
            throw ParseError(eof.number, 1, "an output statement", "end of source");
        }
        for (const auto& [name, token] : discards_) {
            if (name == output_label_) {
                fail(*token, "a non-output mode in discard");
            }
        }

        Circuit circuit{VacuumBasis::with_signal(input_label_, vacuum_labels_),
                        input_displacement_,
                        std::move(steps_),
                        output_label_,
                        {},
                        {}};
        circuit.discarded.reserve(discards_.size());
        for (const auto& [name, token] : discards_) circuit.discarded.push_back(name);
        validate(circuit);
        return circuit;
    }

private:
    [[noreturn]] void fail(const Token& at, std::string expected) const {
        throw ParseError(at.line, at.column, std::move(expected), "'" + at.text + "'");
    }

    [[noreturn]] void fail_eol(std::string expected) const {
        const Token& last = line_->tokens.back();
        throw ParseError(last.line, last.column + int(last.text.size()), std::move(expected),
                         "end of line");
    }

    bool at_end() const { return cursor_ >= line_->tokens.size(); }

    const Token& take(const char* expected) {
        if (at_end()) fail_eol(expected);
        return line_->tokens[cursor_++];
    }

    std::string name_token(const char* what) {
        const Token& t = take(what);
        if (!valid_name(t.text)) fail(t, what);
        return t.text;
    }

    double number_token(const char* what) {
        const Token& t = take(what);
        double value = 0.0;
        const char* begin = t.text.data();
        const char* end = begin + t.text.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end || !std::isfinite(value)) fail(t, what);
        return value;
    }

    std::string defined_operand() {
        const Token& t = take("a defined mode name");
        if (!valid_name(t.text)) fail(t, "a mode name");
        if (!defined_.count(t.text)) fail(t, "a defined mode name");
        return t.text;
    }

    std::string fresh_result() {
        const Token& t = take("a fresh mode name");
        if (!valid_name(t.text)) fail(t, "a mode name");
        if (!defined_.insert(t.text).second) fail(t, "a fresh mode name (already defined)");
        return t.text;
    }

    void arrow() {
        const Token& t = take("'->'");
        if (t.text != "->") fail(t, "'->'");
    }

    double ranged_number(const char* what, bool (*pred)(double)) {
        if (at_end()) fail_eol(what);
        const Token& t = line_->tokens[cursor_];
        double value = number_token(what);
        if (!pred(value)) fail(t, what);
        return value;
    }

    void statement() {
        const Token& head = take("a statement keyword");
        const std::string& kw = head.text;
        if (kw == "input") {
            if (!input_label_.empty()) fail(head, "a single input statement per circuit");
            const Token& t = take("the input mode name");
            if (!valid_name(t.text)) fail(t, "a mode name");
            if (!defined_.insert(t.text).second) fail(t, "a fresh mode name (already defined)");
            input_label_ = t.text;
            if (!at_end()) {
                const Token& c = take("'coherent'");
                if (c.text != "coherent") fail(c, "'coherent'");
                double re = number_token("a real displacement value");
                double im = number_token("an imaginary displacement value");
                input_displacement_ = Complex{re, im};
            }
        } else if (kw == "vacuum") {
            if (at_end()) fail_eol("at least one vacuum mode name");
            while (!at_end()) {
                const Token& t = take("a mode name");
                if (!valid_name(t.text)) fail(t, "a mode name");
                if (!defined_.insert(t.text).second) fail(t, "a fresh mode name (already defined)");
                vacuum_labels_.push_back(t.text);
            }
        } else if (kw == "bs") {
            double eps = transmission_token();
            std::string in1 = defined_operand();
            std::string in2 = distinct_operand(in1);
            arrow();
            std::string out1 = fresh_result();
            std::string out2 = fresh_result();
            steps_.push_back(BsStep{eps, in1, in2, out1, out2});
        } else if (kw == "amp") {
            double g = ranged_number("a gain >= 1", [](double v) { return v >= 1.0; });
            std::string sig = defined_operand();
            std::string internal = distinct_operand(sig);
            arrow();
            std::string amplified = fresh_result();
            std::string idler = fresh_result();
            steps_.push_back(AmpStep{g, sig, internal, amplified, idler});
        } else if (kw == "dpa") {
            double g = ranged_number("a gain >= 1", [](double v) { return v >= 1.0; });
            const Token& s = take("a pump sign '+' or '-'");
            if (s.text != "+" && s.text != "-") fail(s, "a pump sign '+' or '-'");
            PumpSign sign = s.text == "+" ? PumpSign::plus : PumpSign::minus;
            std::string in = defined_operand();
            arrow();
            std::string out = fresh_result();
            steps_.push_back(DpaStep{g, sign, in, out});
        } else if (kw == "nopa") {
            double h = ranged_number("a parametric gain >= 1", [](double v) { return v >= 1.0; });
            std::string in1 = defined_operand();
            std::string in2 = distinct_operand(in1);
            arrow();
            std::string out1 = fresh_result();
            std::string out2 = fresh_result();
            steps_.push_back(NopaStep{h, in1, in2, out1, out2});
        } else if (kw == "eochan") {
            double k = ranged_number("a channel constant > 0", [](double v) { return v > 0.0; });
            std::string in = defined_operand();
            std::string vac = distinct_operand(in);
            arrow();
            std::string out = fresh_result();
            steps_.push_back(EoChanStep{k, in, vac, out});
        } else if (kw == "displace") {
            double l = ranged_number("a reconstruction gain > 0", [](double v) { return v > 0.0; });
            std::string chan = defined_operand();
            std::string vac = distinct_operand(chan);
            arrow();
            std::string out = fresh_result();
            steps_.push_back(DisplaceStep{l, chan, vac, out});
        } else if (kw == "output") {
            if (!output_label_.empty()) fail(head, "a single output statement per circuit");
            output_label_ = defined_operand();
        } else if (kw == "discard") {
            if (at_end()) fail_eol("at least one mode name");
            while (!at_end()) {
                const Token& t = line_->tokens[cursor_];
                std::string name = defined_operand();
                for (const auto& [prev, tok] : discards_) {
                    if (prev == name) fail(t, "a mode not already discarded");
                }
                discards_.emplace_back(name, &t);
            }
        } else {
            fail(head, "a statement keyword (input, vacuum, bs, amp, dpa, nopa, eochan, "
                       "displace, output, discard)");
        }
    }

    std::string distinct_operand(const std::string& first) {
        if (at_end()) fail_eol("a defined mode name");
        const Token& t = line_->tokens[cursor_];
        std::string name = defined_operand();
        if (name == first) fail(t, "a mode distinct from '" + first + "'");
        return name;
    }

    // the eps slot: a float in (0, 1] or matched:G resolving to 1/G
    double transmission_token() {
        const Token& t = take("a transmission in (0, 1] or matched:G");
        constexpr std::string_view kMatched = "matched:";
        std::string_view text = t.text;
        if (text.substr(0, kMatched.size()) == kMatched) {
            std::string_view rest = text.substr(kMatched.size());
            double g = 0.0;
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), g);
            if (ec != std::errc{} || ptr != rest.data() + rest.size() || !std::isfinite(g)) {
                fail(t, "matched:G with a numeric gain");
            }
            if (!(g >= 1.0)) fail(t, "matched:G with gain >= 1");
            return 1.0 / g;
        }
        double eps = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), eps);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(eps)) {
            fail(t, "a transmission in (0, 1] or matched:G");
        }
        if (!(eps > 0.0 && eps <= 1.0)) fail(t, "a transmission in (0, 1]");
        return eps;
    }

    std::vector<Line> lines_;
    const Line* line_ = nullptr;
    std::size_t cursor_ = 0;

    std::string input_label_;
    Complex input_displacement_{};
    std::vector<std::string> vacuum_labels_;
    std::vector<Step> steps_;
    std::string output_label_;
    std::vector<std::pair<std::string, const Token*>> discards_;
    std::unordered_set<std::string> defined_;
};

std::string g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace

Circuit parse(std::string_view source) { return Parser(source).parse_circuit(); }

std::string format(const Circuit& circuit) {
    validate(circuit);
    std::string out = "input " + circuit.input_label();
    if (circuit.input_displacement != Complex{}) {
        out += " coherent " + g17(circuit.input_displacement.real()) + ' ' +
               g17(circuit.input_displacement.imag());
    }
    out += '\n';
    if (circuit.basis.size() > 1) {
        out += "vacuum";
        for (std::size_t k = 1; k < circuit.basis.size(); ++k) {
            out += ' ' + circuit.basis.label(k);
        }
        out += '\n';
    }
    for (const auto& step : circuit.steps) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BsStep>) {
                    out += "bs " + g17(s.transmission) + ' ' + s.in1 + ' ' + s.in2 + " -> " +
                           s.out1 + ' ' + s.out2;
                } else if constexpr (std::is_same_v<T, AmpStep>) {
                    out += "amp " + g17(s.gain) + ' ' + s.signal + ' ' + s.internal + " -> " +
                           s.amplified + ' ' + s.idler;
                } else if constexpr (std::is_same_v<T, DpaStep>) {
                    out += "dpa " + g17(s.gain) + (s.sign == PumpSign::plus ? " + " : " - ") +
                           s.in + " -> " + s.out;
                } else if constexpr (std::is_same_v<T, NopaStep>) {
                    out += "nopa " + g17(s.gain) + ' ' + s.in1 + ' ' + s.in2 + " -> " + s.out1 +
                           ' ' + s.out2;
                } else if constexpr (std::is_same_v<T, EoChanStep>) {
                    out += "eochan " + g17(s.k_constant) + ' ' + s.in + ' ' + s.vac + " -> " +
                           s.out;
                } else {
                    out += "displace " + g17(s.lambda_gain) + ' ' + s.channel + ' ' + s.vac +
                           " -> " + s.out;
                }
            },
            step);
        out += '\n';
    }
    if (!circuit.discarded.empty()) {
        out += "discard";
        for (const auto& name : circuit.discarded) out += ' ' + name;
        out += '\n';
    }
    out += "output " + circuit.output_label + '\n';
    return out;
}

}  // namespace qot
