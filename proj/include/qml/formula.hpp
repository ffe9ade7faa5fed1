#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qml {

// Base error type for guard violations and malformed input.  Semantic
// results (a rule not applying, a model refuting a sequent) are returned
// as data, never thrown.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Immutable formula over the primitive connectives: atoms, conjunction,
// orthonegation and box.  Disjunction and diamond are surface syntax only
// and are desugared by the parser.  Nodes are shared, so copies are cheap
// and equal subterms may alias.
class formula {
public:
    enum class kind : std::uint8_t { atom, conj, neg, box };

    static formula atom(std::string name);
    static formula conj(formula lhs, formula rhs);
    static formula neg(formula operand);
    static formula box(formula operand);

    kind node_kind() const { return node_->k; }
    bool is(kind k) const { return node_->k == k; }

    const std::string& atom_name() const;  // requires atom
    formula lhs() const;                   // requires conj
    formula rhs() const;                   // requires conj
    formula operand() const;               // requires neg or box

    // Nesting depth: atoms are 0, every connective adds 1.
    int depth() const { return node_->depth; }
    std::size_t hash() const { return node_->hash; }

    bool operator==(const formula& other) const;
    std::strong_ordering operator<=>(const formula& other) const;

private:
    struct node {
        kind k;
        std::string name;                  // set for atoms only
        std::shared_ptr<const node> a, b;  // b is set for conj only
        int depth = 0;
        std::size_t hash = 0;
    };

    explicit formula(std::shared_ptr<const node> n) : node_(std::move(n)) {}

    static std::strong_ordering cmp(const node& x, const node& y);

    std::shared_ptr<const node> node_;
};

struct formula_hash {
    std::size_t operator()(const formula& f) const { return f.hash(); }
};

// A set of formulas kept sorted by the structural order and deduplicated.
// Sequents are built from these, so contraction and exchange are implicit.
class formula_set {
public:
    formula_set() = default;
    formula_set(std::initializer_list<formula> items);
    explicit formula_set(std::vector<formula> items);

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const formula& operator[](std::size_t i) const { return items_[i]; }

    bool contains(const formula& f) const;
    bool subset_of(const formula_set& other) const;

    formula_set with(const formula& f) const;
    formula_set without(const formula& f) const;
    formula_set united(const formula_set& other) const;

    bool operator==(const formula_set&) const = default;
    std::strong_ordering operator<=>(const formula_set&) const = default;

private:
    std::vector<formula> items_;
};

// Raised by parse() with the position of the offending token.  Token
// indices are 1-based; byte offsets point into the input string.
class parse_error : public error {
public:
    parse_error(const std::string& message, int token_index, std::size_t byte_offset);

    int token_index() const { return token_index_; }
    std::size_t byte_offset() const { return byte_offset_; }

private:
    int token_index_;
    std::size_t byte_offset_;
};

// Grammar, loosest binding first:  or > and > unary.
//   f  := g ('|' g)*          a | b   desugars to ~(~a & ~b)
//   g  := u ('&' u)*
//   u  := '~' u | '[]' u | '<>' u | atom | '(' f ')'
//   <>a desugars to ~[]~a.
// Unicode aliases accepted on input: ¬ ∧ ∨ □ ◇.  Atom names are
// [A-Za-z_][A-Za-z0-9_]* except the reserved words true, false, and,
// or, not, box, dia.
formula parse(std::string_view text);

// Canonical printer: ASCII connectives, minimal parentheses (only around
// conjunctions nested under another connective).  parse(print(f)) == f.
std::string print(const formula& f);

// All subformulas of f, including f itself.
formula_set subformulas(const formula& f);

// All atom names occurring in f, sorted.
std::vector<std::string> atom_names(const formula& f);
std::vector<std::string> atom_names(const formula_set& fs);

std::ostream& operator<<(std::ostream& os, const formula& f);
std::ostream& operator<<(std::ostream& os, const formula_set& fs);

}  // namespace qml
