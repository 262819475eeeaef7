#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "mmh/errors.hpp"
#include "mmh/navscript.hpp"

namespace mmh {

struct Step {
    enum class Kind : std::uint8_t { GoStraight, TurnStep, PassObjects, AtTurningPoint };
    Kind kind = Kind::GoStraight;
    double distance = 0.0;            // GoStraight
    TurnDirection direction = TurnDirection::Left;  // TurnStep
    std::string label;                // PassObjects
    int count = 0;                    // PassObjects
    int ordinal = 0;                  // AtTurningPoint
};

using StepList = std::vector<Step>;

// A sentence the controlled-English grammar cannot interpret; the signal to
// hand the instruction to the LLM backend.
struct NoMatch {
    std::string sentence;
};

struct InvalidSteps : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Lowercase, drop decorative punctuation, collapse whitespace, trim dangling
// connectives left over from sentence splitting.
inline std::string normalize_sentence(const std::string& raw) {
    std::string s;
    for (const char c : lower(raw)) {
        if (c == ',' || c == '!' || c == '?' || c == '"' || c == '(' || c == ')') continue;
        s += std::isspace(static_cast<unsigned char>(c)) ? ' ' : c;
    }
    std::vector<std::string> words;
    std::string w;
    for (const char c : s + " ") {
        if (c == ' ') {
            if (!w.empty()) words.push_back(w);
            w.clear();
        } else {
            w += c;
        }
    }
    while (!words.empty() && (words.front() == "and" || words.front() == "next" ||
                              words.front() == "finally"))
        words.erase(words.begin());
    while (!words.empty() && words.back() == "and") words.pop_back();
    std::string out;
    for (const auto& word : words) {
        if (!out.empty()) out += ' ';
        out += word;
    }
    return out;
}

// Splits on '.', ';' and the connective "then".
inline std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    const std::string lowered = lower(text);
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '.' || c == ';' || c == '\n') {
            parts.push_back(current);
            current.clear();
            ++i;
            continue;
        }
        const bool boundary_before =
            current.empty() || std::isspace(static_cast<unsigned char>(current.back()));
        if (boundary_before && lowered.compare(i, 4, "then") == 0 &&
            (i + 4 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 4])))) {
            parts.push_back(current);
            current.clear();
            i += 4;
            continue;
        }
        current += c;
        ++i;
    }
    parts.push_back(current);
    return parts;
}

inline std::optional<int> parse_count_word(const std::string& w) {
    static const std::vector<std::string> words{"one", "two",   "three", "four", "five",
                                                "six", "seven", "eight", "nine", "ten"};
    for (std::size_t i = 0; i < words.size(); ++i)
        if (w == words[i]) return static_cast<int>(i) + 1;
    if (!w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) {
            return std::isdigit(c);
        }))
        return std::stoi(w);
    return std::nullopt;
}

inline std::optional<int> parse_ordinal(const std::string& w) {
    static const std::vector<std::string> words{"first",   "second", "third", "fourth",
                                                "fifth",   "sixth",  "seventh", "eighth",
                                                "ninth"};
    for (std::size_t i = 0; i < words.size(); ++i)
        if (w == words[i]) return static_cast<int>(i) + 1;
    static const std::regex numeric(R"(^([1-9])(st|nd|rd|th)$)");
    std::smatch m;
    if (std::regex_match(w, m, numeric)) return std::stoi(m[1]);
    return std::nullopt;
}

inline std::optional<TurnDirection> parse_direction(const std::string& w) {
    if (w == "left") return TurnDirection::Left;
    if (w == "right") return TurnDirection::Right;
    if (w == "around") return TurnDirection::Around;
    return std::nullopt;
}

}  // namespace detail

// Ordered controlled-English rules over normalized sentences. The first
// unmatched non-empty sentence rejects the whole instruction.
inline Expected<StepList, NoMatch> parse_instruction_rules(const std::string& text) {
    static const std::regex go_straight(
        R"(^(?:go|walk|head) straight (?:for )?(\d+(?:\.\d+)?) ?(?:m|meters?|metres?)$)");
    static const std::regex turn_at_ordinal(
        R"(^turn (left|right) (?:at|after) the (\S+) (?:intersection|corner|turning point)$)");
    static const std::regex turn_after_passing(
        R"(^turn (left|right|around) after passing (?:the )?(\S+) (.+)$)");
    static const std::regex lone_turn(R"(^turn (left|right|around)$)");
    static const std::regex end_marker(
        R"(^(?:stop|you have arrived|that's the destination|thats the destination)$)");

    StepList steps;
    for (const std::string& raw : detail::split_sentences(text)) {
        const std::string sentence = detail::normalize_sentence(raw);
        if (sentence.empty()) continue;
        std::smatch m;
        if (std::regex_match(sentence, m, go_straight)) {
            Step s;
            s.kind = Step::Kind::GoStraight;
            s.distance = std::stod(m[1]);
            steps.push_back(s);
            continue;
        }
        if (std::regex_match(sentence, m, turn_at_ordinal)) {
            const auto ordinal = detail::parse_ordinal(m[2]);
            if (!ordinal) return NoMatch{sentence};
            Step at;
            at.kind = Step::Kind::AtTurningPoint;
            at.ordinal = *ordinal;
            steps.push_back(at);
            Step turn;
            turn.kind = Step::Kind::TurnStep;
            turn.direction = *detail::parse_direction(m[1]);
            steps.push_back(turn);
            continue;
        }
        if (std::regex_match(sentence, m, turn_after_passing)) {
            const auto count = detail::parse_count_word(m[2]);
            if (!count) return NoMatch{sentence};
            Step pass;
            pass.kind = Step::Kind::PassObjects;
            pass.count = *count;
            pass.label = m[3];
            steps.push_back(pass);
            Step turn;
            turn.kind = Step::Kind::TurnStep;
            turn.direction = *detail::parse_direction(m[1]);
            steps.push_back(turn);
            continue;
        }
        if (std::regex_match(sentence, m, lone_turn)) {
            Step turn;
            turn.kind = Step::Kind::TurnStep;
            turn.direction = *detail::parse_direction(m[1]);
            steps.push_back(turn);
            continue;
        }
        if (std::regex_match(sentence, m, end_marker)) break;
        return NoMatch{sentence};
    }
    if (steps.empty()) return NoMatch{detail::normalize_sentence(text)};
    return steps;
}

// Lowers a step list to NavScript text via the AST printer, so anything this
// emits is guaranteed to parse back.
inline std::string steps_to_navscript(const StepList& steps) {
    if (steps.empty()) throw InvalidSteps("step list is empty");
    navscript::NavProgram program;
    for (const Step& s : steps) {
        switch (s.kind) {
            case Step::Kind::GoStraight:
                if (s.distance < 0.0) throw InvalidSteps("negative distance");
                program.statements.push_back(navscript::Forward{s.distance});
                break;
            case Step::Kind::AtTurningPoint:
                if (s.ordinal < 1) throw InvalidSteps("ordinal must be >= 1");
                program.statements.push_back(navscript::ForwardUntilTurningPoint{s.ordinal});
                break;
            case Step::Kind::PassObjects:
                if (s.count < 1) throw InvalidSteps("count must be >= 1");
                if (s.label.empty()) throw InvalidSteps("object label is empty");
                program.statements.push_back(
                    navscript::ForwardUntilObject{s.label, s.count, 1.0});
                break;
            case Step::Kind::TurnStep: {
                // A turn with no motion before it defaults to the next zone.
                const bool preceded_by_motion =
                    !program.statements.empty() &&
                    !std::holds_alternative<navscript::Turn>(program.statements.back());
                if (!preceded_by_motion)
                    program.statements.push_back(navscript::ForwardUntilTurningPoint{1});
                program.statements.push_back(navscript::Turn{s.direction});
                break;
            }
        }
    }
    program.statements.push_back(navscript::Stop{});
    return navscript::pretty_print(program);
}

}  // namespace mmh
