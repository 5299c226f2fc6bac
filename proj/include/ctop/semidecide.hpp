#pragma once

#include "ctop/coding.hpp"
#include "ctop/numbers.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace ctop {

// Outcome of running a c.e. test with an explicit effort budget. Confirmed is
// monotone in fuel and carries the witness data that certified it.
struct SemiDecision {
    bool confirmed = false;
    std::vector<Code> witness;

    static SemiDecision yes() { return {true, {}}; }
    static SemiDecision yes(std::vector<Code> w) { return {true, std::move(w)}; }
    static SemiDecision no() { return {false, {}}; }
    explicit operator bool() const { return confirmed; }
};

// Fuel-monotone semi-decider on code pairs (the shape of C and D).
using Relation = std::function<SemiDecision(const Code&, const Code&, Fuel)>;

// A monotone enumerator: pure in the step index, at most one emission per
// step. Every true element of the enumerated set appears at some step.
template <typename T>
using Emitter = std::function<std::optional<T>(std::uint64_t)>;

template <typename T>
std::vector<T> collect(const Emitter<T>& em, std::uint64_t steps) {
    std::vector<T> out;
    for (std::uint64_t s = 0; s < steps; ++s)
        if (auto v = em(s)) out.push_back(*v);
    return out;
}

// Scans the first `steps` steps for an emission equal to `value`.
template <typename T>
bool stream_contains(const Emitter<T>& em, const T& value, std::uint64_t steps) {
    for (std::uint64_t s = 0; s < steps; ++s)
        if (auto v = em(s); v && *v == value) return true;
    return false;
}

// Step-memoizing wrapper; the wrapped emitter must be pure in the step.
template <typename T>
Emitter<T> memoized(Emitter<T> em) {
    struct State {
        Emitter<T> em;
        std::map<std::uint64_t, std::optional<T>> memo;
        std::mutex mu;
    };
    auto st = std::make_shared<State>();
    st->em = std::move(em);
    return [st](std::uint64_t s) -> std::optional<T> {
        {
            std::scoped_lock lock(st->mu);
            if (auto it = st->memo.find(s); it != st->memo.end()) return it->second;
        }
        auto v = st->em(s);
        std::scoped_lock lock(st->mu);
        st->memo[s] = v;
        return v;
    };
}

// Fair round-robin merge; an emission of part p at step t shows up in the
// merge no later than step n*t + p.
template <typename T>
Emitter<T> merge_emitters(std::vector<Emitter<T>> parts) {
    return [parts = std::move(parts)](std::uint64_t s) -> std::optional<T> {
        if (parts.empty()) return std::nullopt;
        std::uint64_t n = parts.size();
        return parts[s % n](s / n);
    };
}

// Memoizing view of an emitter. Consumers share the scanned prefix; the
// wrapped emitter is still pure, so this is an optimization only.
template <typename T>
class CachedStream {
  public:
    explicit CachedStream(Emitter<T> em) : state_(std::make_shared<State>(std::move(em))) {}

    // Emissions (not steps) seen within the first `steps` steps.
    std::vector<T> emissions(std::uint64_t steps) const {
        auto& st = *state_;
        std::scoped_lock lock(st.mu);
        scan_locked(st, steps);
        std::vector<T> out;
        for (const auto& [pos, v] : st.found)
            if (pos < steps) out.push_back(v);
        return out;
    }

    // The i-th emission if it occurs within `steps` steps.
    std::optional<T> emission(std::uint64_t index, std::uint64_t steps) const {
        auto& st = *state_;
        std::scoped_lock lock(st.mu);
        scan_locked(st, steps);
        if (index < st.found.size() && st.found[index].first < steps) return st.found[index].second;
        return std::nullopt;
    }

    bool contains(const T& value, std::uint64_t steps) const {
        auto& st = *state_;
        std::scoped_lock lock(st.mu);
        scan_locked(st, steps);
        for (const auto& [pos, v] : st.found) {
            if (pos >= steps) break;
            if (v == value) return true;
        }
        return false;
    }

    Emitter<T> as_emitter() const {
        auto st = state_;
        return [st](std::uint64_t s) -> std::optional<T> {
            std::scoped_lock lock(st->mu);
            scan_locked(*st, s + 1);
            for (const auto& [pos, v] : st->found) {
                if (pos > s) break;
                if (pos == s) return v;
            }
            return std::nullopt;
        };
    }

  private:
    struct State {
        explicit State(Emitter<T> e) : em(std::move(e)) {}
        Emitter<T> em;
        std::uint64_t scanned = 0;
        std::vector<std::pair<std::uint64_t, T>> found;  // (step, value), step ascending
        std::mutex mu;
    };

    static void scan_locked(State& st, std::uint64_t steps) {
        for (; st.scanned < steps; ++st.scanned)
            if (auto v = st.em(st.scanned)) st.found.emplace_back(st.scanned, *v);
    }

    std::shared_ptr<State> state_;
};

// Diagonal sweep over (candidate rank, sub-fuel) pairs: the canonical fair
// order for searches that combine an enumeration with a fuel-monotone test.
// `test(rank, f)` returns nullopt when the rank has no candidate yet.
template <typename R>
std::optional<R> diagonal_search(Fuel fuel,
                                 const std::function<std::optional<R>(std::uint64_t, Fuel)>& test) {
    for (std::uint64_t s = 0; s < fuel; ++s) {
        auto [rank, f] = unpair64(s);
        if (auto r = test(rank, f + 1)) return r;
    }
    return std::nullopt;
}

}  // namespace ctop
