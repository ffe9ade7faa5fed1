#include "qml/formula.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <set>
#include <utility>

namespace qml {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    // boost-style hash combine; good enough for structural hashing
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

formula formula::atom(std::string name) {
    auto n = std::make_shared<node>();
    n->k = kind::atom;
    n->name = std::move(name);
    n->depth = 0;
    n->hash = mix(1, std::hash<std::string>{}(n->name));
    return formula(std::move(n));
}

formula formula::conj(formula lhs, formula rhs) {
    auto n = std::make_shared<node>();
    n->k = kind::conj;
    n->a = std::move(lhs.node_);
    n->b = std::move(rhs.node_);
    n->depth = 1 + std::max(n->a->depth, n->b->depth);
    n->hash = mix(mix(2, n->a->hash), n->b->hash);
    return formula(std::move(n));
}

formula formula::neg(formula operand) {
    auto n = std::make_shared<node>();
    n->k = kind::neg;
    n->a = std::move(operand.node_);
    n->depth = 1 + n->a->depth;
    n->hash = mix(3, n->a->hash);
    return formula(std::move(n));
}

formula formula::box(formula operand) {
    auto n = std::make_shared<node>();
    n->k = kind::box;
    n->a = std::move(operand.node_);
    n->depth = 1 + n->a->depth;
    n->hash = mix(4, n->a->hash);
    return formula(std::move(n));
}

const std::string& formula::atom_name() const {
    if (node_->k != kind::atom) throw error("atom_name() called on a non-atom");
    return node_->name;
}

formula formula::lhs() const {
    if (node_->k != kind::conj) throw error("lhs() called on a non-conjunction");
    return formula(node_->a);
}

formula formula::rhs() const {
    if (node_->k != kind::conj) throw error("rhs() called on a non-conjunction");
    return formula(node_->b);
}

formula formula::operand() const {
    if (node_->k != kind::neg && node_->k != kind::box)
        throw error("operand() called on an atom or conjunction");
    return formula(node_->a);
}

std::strong_ordering formula::cmp(const node& x, const node& y) {
    if (&x == &y) return std::strong_ordering::equal;
    if (auto c = x.k <=> y.k; c != 0) return c;
    switch (x.k) {
        case kind::atom:
            return x.name <=> y.name;
        case kind::conj:
            if (auto c = cmp(*x.a, *y.a); c != 0) return c;
            return cmp(*x.b, *y.b);
        case kind::neg:
        case kind::box:
            return cmp(*x.a, *y.a);
    }
    return std::strong_ordering::equal;  // unreachable
}

bool formula::operator==(const formula& other) const {
    if (node_ == other.node_) return true;
    if (node_->hash != other.node_->hash) return false;
    return cmp(*node_, *other.node_) == 0;
}

std::strong_ordering formula::operator<=>(const formula& other) const {
    return cmp(*node_, *other.node_);
}

formula_set::formula_set(std::initializer_list<formula> items)
    : formula_set(std::vector<formula>(items)) {}

formula_set::formula_set(std::vector<formula> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool formula_set::contains(const formula& f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
}

bool formula_set::subset_of(const formula_set& other) const {
    return std::includes(other.items_.begin(), other.items_.end(),
                         items_.begin(), items_.end());
}

formula_set formula_set::with(const formula& f) const {
    if (contains(f)) return *this;
    formula_set r = *this;
    r.items_.insert(std::lower_bound(r.items_.begin(), r.items_.end(), f), f);
    return r;
}

formula_set formula_set::without(const formula& f) const {
    formula_set r = *this;
    auto it = std::lower_bound(r.items_.begin(), r.items_.end(), f);
    if (it != r.items_.end() && *it == f) r.items_.erase(it);
    return r;
}

formula_set formula_set::united(const formula_set& other) const {
    std::vector<formula> merged;
    merged.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(),
                   other.items_.begin(), other.items_.end(),
                   std::back_inserter(merged));
    formula_set r;
    r.items_ = std::move(merged);
    return r;
}

parse_error::parse_error(const std::string& message, int token_index, std::size_t byte_offset)
    : error("syntax error at token " + std::to_string(token_index) +
            " (byte " + std::to_string(byte_offset) + "): " + message),
      token_index_(token_index),
      byte_offset_(byte_offset) {}

namespace {

enum class tok : std::uint8_t { atom, tilde, amp, bar, box, dia, lparen, rparen, end };

struct token {
    tok k;
    std::string text;
    int index;           // 1-based position in the token stream
    std::size_t offset;  // byte offset in the input
};

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const std::set<std::string, std::less<>> k_reserved = {
    "true", "false", "and", "or", "not", "box", "dia"};

std::vector<token> tokenize(std::string_view text) {
    std::vector<token> out;
    std::size_t i = 0;
    int index = 1;
    auto push = [&](tok k, std::string t, std::size_t at) {
        out.push_back(token{k, std::move(t), index++, at});
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t at = i;
        if (c == '~') {
            push(tok::tilde, "~", at);
            ++i;
        } else if (c == '&') {
            push(tok::amp, "&", at);
            ++i;
        } else if (c == '|') {
            push(tok::bar, "|", at);
            ++i;
        } else if (c == '(') {
            push(tok::lparen, "(", at);
            ++i;
        } else if (c == ')') {
            push(tok::rparen, ")", at);
            ++i;
        } else if (c == '[') {
            if (i + 1 >= text.size() || text[i + 1] != ']')
                throw parse_error("expected ']' after '['", index, at);
            push(tok::box, "[]", at);
            i += 2;
        } else if (c == '<') {
            if (i + 1 >= text.size() || text[i + 1] != '>')
                throw parse_error("expected '>' after '<'", index, at);
            push(tok::dia, "<>", at);
            i += 2;
        } else if (text.substr(i).starts_with("¬")) {  // ¬
            push(tok::tilde, "~", at);
            i += 2;
        } else if (text.substr(i).starts_with("∧")) {  // ∧
            push(tok::amp, "&", at);
            i += 3;
        } else if (text.substr(i).starts_with("∨")) {  // ∨
            push(tok::bar, "|", at);
            i += 3;
        } else if (text.substr(i).starts_with("□")) {  // □
            push(tok::box, "[]", at);
            i += 3;
        } else if (text.substr(i).starts_with("◇")) {  // ◇
            push(tok::dia, "<>", at);
            i += 3;
        } else if (is_name_start(c)) {
            std::size_t j = i + 1;
            while (j < text.size() && is_name_char(text[j])) ++j;
            std::string name(text.substr(i, j - i));
            if (k_reserved.contains(name))
                throw parse_error("'" + name + "' is a reserved word, not an atom", index, at);
            push(tok::atom, std::move(name), at);
            i = j;
        } else {
            throw parse_error("unexpected character '" + std::string(1, c) + "'", index, at);
        }
    }
    out.push_back(token{tok::end, "", index, text.size()});
    return out;
}

class parser {
public:
    explicit parser(std::vector<token> ts) : ts_(std::move(ts)) {}

    formula run() {
        formula f = parse_or();
        if (peek().k != tok::end) fail("unexpected '" + peek().text + "' after the formula");
        return f;
    }

private:
    const token& peek() const { return ts_[pos_]; }
    token take() { return ts_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, peek().index, peek().offset);
    }

    formula parse_or() {
        formula lhs = parse_and();
        while (peek().k == tok::bar) {
            take();
            formula rhs = parse_and();
            lhs = formula::neg(formula::conj(formula::neg(lhs), formula::neg(rhs)));
        }
        return lhs;
    }

    formula parse_and() {
        formula lhs = parse_unary();
        while (peek().k == tok::amp) {
            take();
            lhs = formula::conj(lhs, parse_unary());
        }
        return lhs;
    }

    formula parse_unary() {
        switch (peek().k) {
            case tok::tilde:
                take();
                return formula::neg(parse_unary());
            case tok::box:
                take();
                return formula::box(parse_unary());
            case tok::dia:
                take();
                return formula::neg(formula::box(formula::neg(parse_unary())));
            case tok::atom:
                return formula::atom(take().text);
            case tok::lparen: {
                take();
                formula f = parse_or();
                if (peek().k != tok::rparen)
                    fail("expected ')', found " +
                         (peek().k == tok::end ? "end of input" : "'" + peek().text + "'"));
                take();
                return f;
            }
            case tok::end:
                fail("expected a formula, found end of input");
            default:
                fail("expected a formula, found '" + peek().text + "'");
        }
    }

    std::vector<token> ts_;
    std::size_t pos_ = 0;
};

void print_into(const formula& f, std::string& out) {
    auto wrapped = [&](const formula& g) {
        // Conjunction is the only binary node, so it is the only shape
        // that ever needs parentheses under a tighter-binding operator.
        if (g.is(formula::kind::conj)) {
            out += '(';
            print_into(g, out);
            out += ')';
        } else {
            print_into(g, out);
        }
    };
    switch (f.node_kind()) {
        case formula::kind::atom:
            out += f.atom_name();
            break;
        case formula::kind::neg:
            out += '~';
            wrapped(f.operand());
            break;
        case formula::kind::box:
            out += "[]";
            wrapped(f.operand());
            break;
        case formula::kind::conj:
            wrapped(f.lhs());
            out += " & ";
            wrapped(f.rhs());
            break;
    }
}

void collect_subformulas(const formula& f, std::vector<formula>& out) {
    out.push_back(f);
    switch (f.node_kind()) {
        case formula::kind::atom:
            break;
        case formula::kind::conj:
            collect_subformulas(f.lhs(), out);
            collect_subformulas(f.rhs(), out);
            break;
        case formula::kind::neg:
        case formula::kind::box:
            collect_subformulas(f.operand(), out);
            break;
    }
}

void collect_atoms(const formula& f, std::set<std::string>& out) {
    switch (f.node_kind()) {
        case formula::kind::atom:
            out.insert(f.atom_name());
            break;
        case formula::kind::conj:
            collect_atoms(f.lhs(), out);
            collect_atoms(f.rhs(), out);
            break;
        case formula::kind::neg:
        case formula::kind::box:
            collect_atoms(f.operand(), out);
            break;
    }
}

}  // namespace

formula parse(std::string_view text) {
    return parser(tokenize(text)).run();
}

std::string print(const formula& f) {
    std::string out;
    print_into(f, out);
    return out;
}

formula_set subformulas(const formula& f) {
    std::vector<formula> all;
    collect_subformulas(f, all);
    return formula_set(std::move(all));
}

std::vector<std::string> atom_names(const formula& f) {
    std::set<std::string> names;
    collect_atoms(f, names);
    return {names.begin(), names.end()};
}

std::vector<std::string> atom_names(const formula_set& fs) {
    std::set<std::string> names;
    for (const formula& f : fs) collect_atoms(f, names);
    return {names.begin(), names.end()};
}

std::ostream& operator<<(std::ostream& os, const formula& f) {
    return os << print(f);
}

std::ostream& operator<<(std::ostream& os, const formula_set& fs) {
    os << '{';
    bool first = true;
    for (const formula& f : fs) {
        if (!first) os << ", ";
        first = false;
        os << f;
    }
    return os << '}';
}

}  // namespace qml
