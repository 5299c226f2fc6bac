#include "ctop/coding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ctop {

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << rat_num(q) << "/" << rat_den(q);
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Code(s), 1);
    Code num(s.substr(0, slash));
    Code den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(num, den);
}

namespace {

constexpr std::uint64_t kSmall = 1ull << 62;

std::uint64_t isqrt64(unsigned __int128 x) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (static_cast<unsigned __int128>(r) * r > x) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= x) ++r;
    return r;
}

}  // namespace

Code pair_code(const Code& a, const Code& b) {
    if (a < Code(1u << 30) && b < Code(1u << 30)) {
        std::uint64_t au = static_cast<std::uint64_t>(a), bu = static_cast<std::uint64_t>(b);
        std::uint64_t s = au + bu;
        return Code(s * (s + 1) / 2 + bu);
    }
    Code s = a + b;
    return s * (s + 1) / 2 + b;
}

std::pair<Code, Code> unpair_code(const Code& n) {
    if (n < Code(kSmall)) {
        std::uint64_t nu = static_cast<std::uint64_t>(n);
        unsigned __int128 v = static_cast<unsigned __int128>(nu) * 8 + 1;
        std::uint64_t s = (isqrt64(v) - 1) / 2;
        while (static_cast<unsigned __int128>(s) * (s + 1) / 2 > nu) --s;
        while (static_cast<unsigned __int128>(s + 1) * (s + 2) / 2 <= nu) ++s;
        std::uint64_t b = nu - static_cast<std::uint64_t>(
                                   static_cast<unsigned __int128>(s) * (s + 1) / 2);
        return {Code(s - b), Code(b)};
    }
    // Largest s with s(s+1)/2 <= n; isqrt gives it up to a +-1 correction.
    Code s = (boost::multiprecision::sqrt(Code(8 * n + 1)) - 1) / 2;
    while (s * (s + 1) / 2 > n) --s;
    while ((s + 1) * (s + 2) / 2 <= n) ++s;
    Code b = n - s * (s + 1) / 2;
    return {s - b, b};
}

std::uint64_t pair64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s * (s + 1) / 2 + b;
}

std::pair<std::uint64_t, std::uint64_t> unpair64(std::uint64_t n) {
    std::uint64_t s = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
    while (s * (s + 1) / 2 > n) --s;
    while ((s + 1) * (s + 2) / 2 <= n) ++s;
    std::uint64_t b = n - s * (s + 1) / 2;
    return {s - b, b};
}

Seq seq_decode(const Code& j) {
    auto [m, r] = unpair_code(j);
    Seq items;
    while (m > 0) {
        auto [head, rest] = unpair_code(r);
        items.push_back(head);
        r = rest;
        --m;
    }
    items.push_back(r);
    return items;
}

Code seq_encode(const Seq& items) {
    if (items.empty()) throw std::invalid_argument("seq_encode: empty sequence");
    Code r = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) r = pair_code(items[i], r);
    return pair_code(Code(items.size() - 1), r);
}

Code seq_length(const Code& j) { return unpair_code(j).first + 1; }

Code seq_item(const Code& j, std::uint64_t i) {
    auto [m, r] = unpair_code(j);
    for (std::uint64_t k = 0; k < i && m > 0; ++k) {
        r = unpair_code(r).second;
        --m;
    }
    if (m == 0) return r;
    return unpair_code(r).first;
}

FiniteSet finset_decode(const Code& j) {
    Seq items = seq_decode(j);
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

Code finset_encode(const FiniteSet& elements) {
    if (elements.empty()) throw std::invalid_argument("finset_encode: empty set");
    FiniteSet sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    // The least code listing a given set is the shortest sequence in descending
    // order: pair weights its second argument more, so large elements go first.
    // Minimality over all sequence codes is exercised in the test suite.
    Seq desc(sorted.rbegin(), sorted.rend());
    return seq_encode(desc);
}

Code finset_singleton(const Code& x) { return pair_code(Code(0), x); }

Code union_code(const Code& a, const Code& b) {
    FiniteSet ea = finset_decode(a);
    FiniteSet eb = finset_decode(b);
    FiniteSet all;
    all.reserve(ea.size() + eb.size());
    std::merge(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(all));
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return finset_encode(all);
}

Code fold_elements(const std::vector<Code>& elems) {
    return finset_encode(FiniteSet(elems.begin(), elems.end()));
}

Rat rat_enum(const Code& n) {
    auto [a, b] = unpair_code(n);
    return Rat(a + 1, b + 1);
}

Code rat_index(const Rat& positive) {
    if (positive <= 0) throw std::invalid_argument("rat_index: argument must be positive");
    return pair_code(rat_num(positive) - 1, rat_den(positive) - 1);
}

std::vector<Code> CfvFn::values(const Code& x) const {
    std::vector<Code> out;
    Code b = bound(x);
    for (Code y = 0; y <= b; ++y)
        if (membership(x, y)) out.push_back(y);
    return out;
}

CfvFn cfv_union(const CfvFn& phi, const CfvFn& psi) {
    return CfvFn{
        [phi, psi](const Code& x, const Code& y) {
            return phi.membership(x, y) || psi.membership(x, y);
        },
        [phi, psi](const Code& x) { return std::max(phi.bound(x), psi.bound(x)); }};
}

CfvFn cfv_product(const CfvFn& phi, const CfvFn& psi) {
    return CfvFn{
        [phi, psi](const Code& x, const Code& y) {
            auto [u, v] = unpair_code(y);
            return phi.membership(x, u) && psi.membership(x, v);
        },
        [phi, psi](const Code& x) {
            Code m = std::max(phi.bound(x), psi.bound(x));
            return pair_code(m, m);
        }};
}

CfvFn cfv_compose(const CfvFn& phi, const CfvFn& psi) {
    return CfvFn{
        [phi, psi](const Code& x, const Code& y) {
            Code b = phi.bound(x);
            for (Code z = 0; z <= b; ++z)
                if (phi.membership(x, z) && psi.membership(z, y)) return true;
            return false;
        },
        [phi, psi](const Code& x) {
            Code b = phi.bound(x);
            Code m = 0;
            for (Code z = 0; z <= b; ++z)
                if (phi.membership(x, z)) m = std::max(m, psi.bound(z));
            return m;
        }};
}

bool cfv_subset_ce(const CfvFn& phi, const CeMembership& in_t, const Code& x, Fuel fuel) {
    for (const Code& y : phi.values(x))
        if (!in_t(y, fuel)) return false;
    return true;
}

}  // namespace ctop
