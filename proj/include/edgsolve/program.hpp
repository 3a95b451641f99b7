#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgsolve/errors.hpp"

namespace edgsolve {

using AtomId = int;

// Bijective name<->id table. Ids are dense and assigned in interning order.
class AtomTable {
public:
    AtomId intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        AtomId id = static_cast<AtomId>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    bool contains(const std::string& name) const { return ids_.count(name) != 0; }

    AtomId id(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw Error("unknown atom '" + name + "'");
        return it->second;
    }

    const std::string& name(AtomId id) const { return names_.at(static_cast<size_t>(id)); }
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::map<std::string, AtomId> ids_;
};

// h :- pos, not neg.  Bodies are duplicate-free and sorted; pos and neg may
// overlap at parse time (such rules can never fire, the kernel pass drops them).
struct Rule {
    AtomId head = -1;
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;

    bool is_fact() const { return pos.empty() && neg.empty(); }

    // True when pos and neg share an atom.
    bool contrary() const {
        auto p = pos.begin();
        auto n = neg.begin();
        while (p != pos.end() && n != neg.end()) {
            if (*p == *n) return true;
            if (*p < *n) ++p; else ++n;
        }
        return false;
    }

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.pos == b.pos && a.neg == b.neg;
    }
};

namespace detail {

inline void sort_unique(std::vector<AtomId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline bool sorted_contains(const std::vector<AtomId>& v, AtomId a) {
    return std::binary_search(v.begin(), v.end(), a);
}

}  // namespace detail

// A ground normal logic program. Immutable after construction; rule order is
// source order and every downstream ordering is anchored to it.
class Program {
public:
    Program() = default;

    Program(AtomTable atoms, std::vector<Rule> rules)
        : atoms_(std::move(atoms)), rules_(std::move(rules)) {
        std::map<AtomId, int> seen;
        ordinals_.reserve(rules_.size());
        for (const Rule& r : rules_) ordinals_.push_back(seen[r.head]++);
        for (auto& [atom, count] : seen) head_counts_[atom] = count;
    }

    const AtomTable& atoms() const { return atoms_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& rule(int i) const { return rules_.at(static_cast<size_t>(i)); }
    int rule_count() const { return static_cast<int>(rules_.size()); }
    bool empty() const { return rules_.empty(); }

    const std::string& atom_name(AtomId id) const { return atoms_.name(id); }

    // Position of rule i among the rules sharing its head, in source order.
    int head_ordinal(int i) const { return ordinals_.at(static_cast<size_t>(i)); }

    int head_count(AtomId atom) const {
        auto it = head_counts_.find(atom);
        return it == head_counts_.end() ? 0 : it->second;
    }

    bool is_head(AtomId atom) const { return head_count(atom) > 0; }

    // Distinct head atoms, ascending by id.
    std::vector<AtomId> head_atoms() const {
        std::vector<AtomId> out;
        out.reserve(head_counts_.size());
        for (const auto& [atom, count] : head_counts_) out.push_back(atom);
        return out;
    }

    // Atoms occurring in some rule (head or body), ascending by id.
    std::vector<AtomId> occurring_atoms() const {
        std::vector<AtomId> out;
        for (const Rule& r : rules_) {
            out.push_back(r.head);
            out.insert(out.end(), r.pos.begin(), r.pos.end());
            out.insert(out.end(), r.neg.begin(), r.neg.end());
        }
        detail::sort_unique(out);
        return out;
    }

    // Structural equality up to atom ids: same rule sequence with the same
    // atom names. Programs printed and re-parsed compare equal.
    friend bool operator==(const Program& a, const Program& b) {
        if (a.rules_.size() != b.rules_.size()) return false;
        auto names = [](const Program& p, const std::vector<AtomId>& v) {
            std::vector<std::string> out;
            out.reserve(v.size());
            for (AtomId id : v) out.push_back(p.atom_name(id));
            std::sort(out.begin(), out.end());
            return out;
        };
        for (size_t i = 0; i < a.rules_.size(); ++i) {
            const Rule& x = a.rules_[i];
            const Rule& y = b.rules_[i];
            if (a.atom_name(x.head) != b.atom_name(y.head)) return false;
            if (names(a, x.pos) != names(b, y.pos)) return false;
            if (names(a, x.neg) != names(b, y.neg)) return false;
        }
        return true;
    }

private:
    AtomTable atoms_;
    std::vector<Rule> rules_;
    std::vector<int> ordinals_;
    std::map<AtomId, int> head_counts_;
};

// Two-valued interpretation: the atoms listed are true, everything else false.
struct Interpretation {
    std::vector<AtomId> atoms;  // sorted, unique

    Interpretation() = default;
    explicit Interpretation(std::vector<AtomId> a) : atoms(std::move(a)) { detail::sort_unique(atoms); }

    bool contains(AtomId a) const { return detail::sorted_contains(atoms, a); }
    size_t size() const { return atoms.size(); }
    bool empty() const { return atoms.empty(); }

    std::vector<std::string> names(const Program& p) const {
        std::vector<std::string> out;
        out.reserve(atoms.size());
        for (AtomId a : atoms) out.push_back(p.atom_name(a));
        std::sort(out.begin(), out.end());
        return out;
    }

    static Interpretation of(const Program& p, const std::vector<std::string>& names) {
        std::vector<AtomId> ids;
        ids.reserve(names.size());
        for (const std::string& n : names) ids.push_back(p.atoms().id(n));
        return Interpretation(std::move(ids));
    }

    friend bool operator==(const Interpretation& a, const Interpretation& b) { return a.atoms == b.atoms; }
    friend bool operator<(const Interpretation& a, const Interpretation& b) {
        if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
        return a.atoms < b.atoms;
    }
};

// ---------------------------------------------------------------------------
// Parsing.  Surface syntax:
//
//   rule  := atom [ ":-" literal { "," literal } ] "."
//   literal := [ "not" ] atom
//   atom  := [a-z][A-Za-z0-9_]*
//
// '%' starts a comment running to end of line. Whitespace is insignificant.
// ---------------------------------------------------------------------------

namespace detail {

enum class TokenKind { Atom, Not, Implies, Comma, Period, End };

struct Token {
    TokenKind kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {TokenKind::End, "", line, col};
        char c = text_[pos_];
        if (c == '.') { advance(); return {TokenKind::Period, ".", line, col}; }
        if (c == ',') { advance(); return {TokenKind::Comma, ",", line, col}; }
        if (c == ':') {
            advance();
            if (pos_ >= text_.size() || text_[pos_] != '-')
                throw SyntaxError(line, col, "expected ':-'");
            advance();
            return {TokenKind::Implies, ":-", line, col};
        }
        if (std::isupper(static_cast<unsigned char>(c)))
            throw SyntaxError(line, col, "uppercase-initial identifier '" + take_word() +
                                             "' (variables are not supported)");
        if (std::islower(static_cast<unsigned char>(c))) {
            std::string word = take_word();
            if (word == "not") return {TokenKind::Not, word, line, col};
            return {TokenKind::Atom, word, line, col};
        }
        throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string take_word() {
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                advance();
            } else {
                break;
            }
        }
        return out;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace detail

inline Program parse_program(std::string_view text) {
    detail::Lexer lexer(text);
    AtomTable atoms;
    std::vector<Rule> rules;
    detail::Token tok = lexer.next();
    while (tok.kind != detail::TokenKind::End) {
        if (tok.kind != detail::TokenKind::Atom) {
            if (tok.kind == detail::TokenKind::Implies)
                throw SyntaxError(tok.line, tok.column, "empty rule head");
            throw SyntaxError(tok.line, tok.column, "expected atom, got '" + tok.text + "'");
        }
        Rule rule;
        rule.head = atoms.intern(tok.text);
        tok = lexer.next();
        if (tok.kind == detail::TokenKind::Implies) {
            tok = lexer.next();
            if (tok.kind == detail::TokenKind::Period)
                throw SyntaxError(tok.line, tok.column, "empty body (write a fact as 'head.')");
            for (;;) {
                bool negated = false;
                if (tok.kind == detail::TokenKind::Not) {
                    negated = true;
                    tok = lexer.next();
                }
                if (tok.kind != detail::TokenKind::Atom)
                    throw SyntaxError(tok.line, tok.column,
                                      negated ? "expected atom after 'not'"
                                              : "expected body literal, got '" + tok.text + "'");
                AtomId atom = atoms.intern(tok.text);
                (negated ? rule.neg : rule.pos).push_back(atom);
                tok = lexer.next();
                if (tok.kind == detail::TokenKind::Comma) {
                    tok = lexer.next();
                    continue;
                }
                break;
            }
        }
        if (tok.kind != detail::TokenKind::Period)
            throw SyntaxError(tok.line, tok.column, "expected '.' at end of rule");
        detail::sort_unique(rule.pos);
        detail::sort_unique(rule.neg);
        rules.push_back(std::move(rule));
        tok = lexer.next();
    }
    return Program(std::move(atoms), std::move(rules));
}

inline std::string print_rule(const Program& p, const Rule& r) {
    std::ostringstream out;
    out << p.atom_name(r.head);
    if (!r.pos.empty() || !r.neg.empty()) {
        out << " :- ";
        std::vector<std::string> pos, neg;
        for (AtomId a : r.pos) pos.push_back(p.atom_name(a));
        for (AtomId a : r.neg) neg.push_back(p.atom_name(a));
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
        bool first = true;
        for (const std::string& n : pos) {
            if (!first) out << ", ";
            out << n;
            first = false;
        }
        for (const std::string& n : neg) {
            if (!first) out << ", ";
            out << "not " << n;
            first = false;
        }
    }
    out << ".";
    return out.str();
}

// One rule per line. parse_program(pretty_print(p)) == p.
inline std::string pretty_print(const Program& p) {
    std::ostringstream out;
    for (const Rule& r : p.rules()) out << print_rule(p, r) << "\n";
    return out.str();
}

}  // namespace edgsolve
