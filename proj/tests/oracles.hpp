#pragma once

// Generate-and-filter reference enumeration: every raw (rq, rm, valuation)
// triple over n worlds is constructed and kept iff the public validator
// accepts it.  Knows nothing about components, closed sets or the
// canonical encoding, so it is an independent oracle for the structure
// stream.  Exponential three times over; usable only at toy sizes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qml/frame.hpp"

namespace qml::testing {

inline qml::relation relation_from_raw(int n, std::uint64_t raw) {
    qml::relation r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (raw >> (i * n + j) & 1) r.set(i, j);
    return r;
}

inline std::vector<qml::structure> naive_structures(int n,
                                                    const std::vector<std::string>& atoms) {
    std::vector<qml::structure> out;
    std::uint64_t rel_count = 1ull << (n * n);
    std::uint64_t subset_count = 1ull << n;

    for (std::uint64_t rq_raw = 0; rq_raw < rel_count; ++rq_raw) {
        qml::relation rq = relation_from_raw(n, rq_raw);
        if (!rq.reflexive() || !rq.symmetric()) continue;
        for (std::uint64_t rm_raw = 0; rm_raw < rel_count; ++rm_raw) {
            qml::relation rm = relation_from_raw(n, rm_raw);
            if (!qml::structure(rq, rm, {}).validate().empty()) continue;
            std::uint64_t val_count = 1;
            for (std::size_t a = 0; a < atoms.size(); ++a) val_count *= subset_count;
            for (std::uint64_t val = 0; val < val_count; ++val) {
                std::map<std::string, qml::world_set> valuation;
                std::uint64_t rest = val;
                for (const std::string& a : atoms) {
                    valuation.emplace(a, qml::world_set::from_bits(n, rest % subset_count));
                    rest /= subset_count;
                }
                qml::structure s(rq, rm, std::move(valuation));
                if (s.validate().empty()) out.push_back(std::move(s));
            }
        }
    }
    return out;
}

inline std::vector<qml::structure> naive_structures_upto(
    int max_n, const std::vector<std::string>& atoms) {
    std::vector<qml::structure> out;
    for (int n = 1; n <= max_n; ++n)
        for (qml::structure& s : naive_structures(n, atoms)) out.push_back(std::move(s));
    return out;
}

}  // namespace qml::testing
