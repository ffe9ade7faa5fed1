#include "qml/calculus.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <sstream>

namespace qml {

namespace {

struct rule_info {
    rule r;
    std::string_view name;
    int arity;
    int params;
};

constexpr std::array<rule_info, k_rule_count> k_rules = {{
    {rule::ax, "AX", 0, 0},
    {rule::mem, "MEM", 0, 1},
    {rule::wkn, "WKN", 1, 0},
    {rule::cut, "CUT", 2, 1},
    {rule::conj_l1, "AND_L1", 1, 2},
    {rule::conj_l2, "AND_L2", 1, 2},
    {rule::conj_r, "AND_R", 2, 0},
    {rule::neg_l, "NEG_L", 1, 1},
    {rule::neg_r, "NEG_R", 1, 0},
    {rule::negneg_l, "NEGNEG_L", 1, 1},
    {rule::negneg_r, "NEGNEG_R", 1, 1},
    {rule::k, "K", 1, 0},
}};

const rule_info& info(rule r) {
    return k_rules[static_cast<std::size_t>(r)];
}

bool fail(std::string* reason, std::string msg) {
    if (reason) *reason = std::move(msg);
    return false;
}

formula_set negated(const formula_set& fs) {
    std::vector<formula> out;
    for (const formula& f : fs) out.push_back(formula::neg(f));
    return formula_set(std::move(out));
}

formula_set boxed(const formula_set& fs) {
    std::vector<formula> out;
    for (const formula& f : fs) out.push_back(formula::box(f));
    return formula_set(std::move(out));
}

}  // namespace

std::string_view rule_name(rule r) {
    return info(r).name;
}

std::optional<rule> rule_from_name(std::string_view name) {
    for (const rule_info& ri : k_rules)
        if (ri.name == name) return ri.r;
    return std::nullopt;
}

int rule_arity(rule r) {
    return info(r).arity;
}

int rule_param_count(rule r) {
    return info(r).params;
}

// Each case reconstructs the one conclusion the schema yields from the
// given premises and parameters, removing the principal formula from its
// context, and compares it with the stated conclusion.
bool check_rule(const sequent& c, const rule_instance& inst,
                std::span<const sequent> premises, std::string* reason) {
    const rule_info& ri = info(inst.r);
    if (static_cast<int>(premises.size()) != ri.arity)
        return fail(reason, std::string(ri.name) + " expects " + std::to_string(ri.arity) +
                                " premises, got " + std::to_string(premises.size()));
    if (static_cast<int>(inst.params.size()) != ri.params)
        return fail(reason, std::string(ri.name) + " expects " + std::to_string(ri.params) +
                                " parameters, got " + std::to_string(inst.params.size()));

    auto expect = [&](const sequent& built) {
        if (built == c) return true;
        return fail(reason, std::string(ri.name) + " would conclude " + print(built) +
                                ", not " + print(c));
    };

    switch (inst.r) {
        case rule::ax: {
            if (c.left.size() == 1 && c.right.size() == 1 && c.left[0] == c.right[0])
                return true;
            return fail(reason, "AX needs the same single formula on both sides");
        }
        case rule::mem: {
            const formula& a = inst.params[0];
            formula_set want{formula::box(a), formula::neg(formula::box(a))};
            if (c.right == want) return true;
            return fail(reason, "MEM needs the right side to be exactly " + print({{}, want}));
        }
        case rule::wkn: {
            const sequent& p = premises[0];
            if (p.left.subset_of(c.left) && p.right.subset_of(c.right)) return true;
            return fail(reason, "WKN conclusion must contain the premise on both sides");
        }
        case rule::cut: {
            const formula& a = inst.params[0];
            const sequent& p1 = premises[0];
            const sequent& p2 = premises[1];
            if (!p1.right.contains(a))
                return fail(reason, "CUT formula missing from the first premise's right side");
            if (!p2.left.contains(a))
                return fail(reason, "CUT formula missing from the second premise's left side");
            return expect({p1.left.united(p2.left.without(a)),
                           p1.right.without(a).united(p2.right)});
        }
        case rule::conj_l1: {
            const formula& a = inst.params[0];
            const formula& b = inst.params[1];
            const sequent& p = premises[0];
            if (!p.left.contains(a))
                return fail(reason, "AND_L1 needs its first parameter on the premise's left");
            return expect({p.left.without(a).with(formula::conj(a, b)), p.right});
        }
        case rule::conj_l2: {
            const formula& a = inst.params[0];
            const formula& b = inst.params[1];
            const sequent& p = premises[0];
            if (!p.left.contains(b))
                return fail(reason, "AND_L2 needs its second parameter on the premise's left");
            return expect({p.left.without(b).with(formula::conj(a, b)), p.right});
        }
        case rule::conj_r: {
            const sequent& p1 = premises[0];
            const sequent& p2 = premises[1];
            if (p1.left != c.left || p2.left != c.left)
                return fail(reason, "AND_R premises must share the conclusion's left side");
            // Premise-driven: some a in P1.right and b in P2.right must
            // leave the same context and rebuild the conclusion.
            for (const formula& a : p1.right) {
                formula_set rest = p1.right.without(a);
                for (const formula& b : p2.right) {
                    if (p2.right.without(b) != rest) continue;
                    if (c.right == rest.with(formula::conj(a, b))) return true;
                }
            }
            return fail(reason,
                        "AND_R found no conjunct pair in the premises matching the conclusion");
        }
        case rule::neg_l: {
            const formula& a = inst.params[0];
            const sequent& p = premises[0];
            if (!p.right.contains(a))
                return fail(reason, "NEG_L needs its parameter on the premise's right");
            return expect({p.left.with(formula::neg(a)), p.right.without(a)});
        }
        case rule::neg_r: {
            const sequent& p = premises[0];
            if (p.left.size() != 1)
                return fail(reason, "NEG_R needs a single formula on the premise's left");
            return expect({negated(p.right), {formula::neg(p.left[0])}});
        }
        case rule::negneg_l: {
            const formula& a = inst.params[0];
            const sequent& p = premises[0];
            if (!p.left.contains(a))
                return fail(reason, "NEGNEG_L needs its parameter on the premise's left");
            return expect({p.left.without(a).with(formula::neg(formula::neg(a))), p.right});
        }
        case rule::negneg_r: {
            const formula& a = inst.params[0];
            const sequent& p = premises[0];
            if (!p.right.contains(a))
                return fail(reason, "NEGNEG_R needs its parameter on the premise's right");
            return expect({p.left, p.right.without(a).with(formula::neg(formula::neg(a)))});
        }
        case rule::k: {
            const sequent& p = premises[0];
            if (p.right.size() != 1)
                return fail(reason, "K needs a single formula on the premise's right");
            return expect({boxed(p.left), {formula::box(p.right[0])}});
        }
    }
    return fail(reason, "unknown rule");
}

namespace {

bool check_node(const derivation& d, std::vector<int>& path, std::string& reason) {
    std::vector<sequent> premises;
    premises.reserve(d.premises.size());
    for (const derivation& p : d.premises) premises.push_back(p.conclusion);
    if (!check_rule(d.conclusion, d.inst, premises, &reason)) return true;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        if (check_node(d.premises[i], path, reason)) return true;
        path.pop_back();
    }
    return false;
}

}  // namespace

check_result check_derivation(const derivation& d) {
    check_result r;
    if (check_node(d, r.path, r.reason)) r.ok = false;
    if (r.ok) r.path.clear();
    return r;
}

derivation ax(const formula& a) {
    return {{{a}, {a}}, {rule::ax, {}}, {}};
}

derivation mem(const formula_set& gamma, const formula& a) {
    return {{gamma, {formula::box(a), formula::neg(formula::box(a))}}, {rule::mem, {a}}, {}};
}

derivation explosion(const derivation& of_alpha, const derivation& of_neg_alpha,
                     const formula& b) {
    const sequent& cp = of_alpha.conclusion;
    const sequent& cn = of_neg_alpha.conclusion;
    if (cp.left != cn.left)
        throw error("explosion premises must share their left side");
    // Find the pivot: a on one right side, ~a on the other, same context.
    std::optional<formula> pivot;
    for (const formula& a : cp.right) {
        formula na = formula::neg(a);
        if (cn.right.contains(na) && cp.right.without(a) == cn.right.without(na)) {
            pivot = a;
            break;
        }
    }
    if (!pivot)
        throw error("explosion premises must conclude a and ~a in the same context");
    formula a = *pivot;
    formula na = formula::neg(a);
    formula_set gamma = cp.left;
    formula_set delta = cp.right.without(a);

    derivation negated{{gamma.with(na), delta}, {rule::neg_l, {a}}, {of_alpha}};
    derivation cut{{gamma, delta}, {rule::cut, {na}}, {of_neg_alpha, negated}};
    return {{gamma, delta.with(b)}, {rule::wkn, {}}, {cut}};
}

sequent parse_sequent(std::string_view text) {
    std::size_t at = std::string_view::npos;
    std::size_t len = 0;
    if (auto p = text.find("|-"); p != std::string_view::npos) {
        at = p;
        len = 2;
    }
    if (auto p = text.find("⊢"); p != std::string_view::npos && p < at) {  // ⊢
        at = p;
        len = 3;
    }
    if (at == std::string_view::npos)
        throw error("a sequent needs a turnstile ('|-' or '⊢'): " + std::string(text));
    std::string_view lhs = text.substr(0, at);
    std::string_view rhs = text.substr(at + len);
    if (rhs.find("|-") != std::string_view::npos ||
        rhs.find("⊢") != std::string_view::npos)
        throw error("a sequent has exactly one turnstile: " + std::string(text));

    auto side = [](std::string_view s) {
        auto trim = [](std::string_view v) {
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front())))
                v.remove_prefix(1);
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
                v.remove_suffix(1);
            return v;
        };
        std::vector<formula> out;
        s = trim(s);
        if (s.empty()) return formula_set{};
        while (true) {
            std::size_t comma = s.find(',');
            std::string_view piece = trim(s.substr(0, comma));
            if (piece.empty()) throw error("empty formula in a sequent side");
            out.push_back(parse(piece));
            if (comma == std::string_view::npos) break;
            s = s.substr(comma + 1);
        }
        return formula_set(std::move(out));
    };
    return {side(lhs), side(rhs)};
}

std::string print(const sequent& s) {
    std::string out;
    bool first = true;
    for (const formula& f : s.left) {
        if (!first) out += ", ";
        first = false;
        out += print(f);
    }
    if (!s.left.empty()) out += ' ';
    out += "|-";
    first = true;
    for (const formula& f : s.right) {
        out += first ? " " : ", ";
        first = false;
        out += print(f);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const sequent& s) {
    return os << print(s);
}

namespace {

void print_tree_into(const derivation& d, int level, std::string& out) {
    out.append(static_cast<std::size_t>(level) * 2, ' ');
    out += print(d.conclusion);
    out += "  [";
    out += rule_name(d.inst.r);
    bool first = true;
    for (const formula& p : d.inst.params) {
        out += first ? " " : ", ";
        first = false;
        out += print(p);
    }
    out += "]\n";
    for (const derivation& p : d.premises) print_tree_into(p, level + 1, out);
}

}  // namespace

std::string print_tree(const derivation& d) {
    std::string out;
    print_tree_into(d, 0, out);
    return out;
}

}  // namespace qml
