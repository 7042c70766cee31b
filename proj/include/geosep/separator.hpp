#ifndef GEOSEP_SEPARATOR_HPP
#define GEOSEP_SEPARATOR_HPP

/**
 * Types shared by the ball and sphere pipelines, and the balancing iteration
 * that turns a c-balanced round procedure into a 2/3-balanced separator by
 * repeatedly cutting the largest remaining component.
 */

#include "constants.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "instance.hpp"
#include "verify.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geosep {

/// Which part of the algorithm put a vertex into the separator.
enum class Stage {
    RadialCut,    // ball pipeline: bodies crossing the random cut sphere
    HighDegree,   // X1
    Neighborhood, // X2 = N(S0)
    Nested,       // X2 produced by the nested-sphere lemma
    RandomSphere, // X3
    Packing,      // X4
    Trivial,      // budget >= n: the whole working set
};

[[nodiscard]] inline std::string_view to_string(Stage s) noexcept
{
    switch (s) {
    case Stage::RadialCut: return "radial_cut";
    case Stage::HighDegree: return "X1";
    case Stage::Neighborhood: return "X2";
    case Stage::Nested: return "X2_nested";
    case Stage::RandomSphere: return "X3";
    case Stage::Packing: return "X4";
    case Stage::Trivial: return "trivial";
    }
    return "?";
}

struct Provenance
{
    Vertex vertex = 0;
    Stage stage = Stage::RadialCut;
    int round = 0;
};

/// What one round hands back to the balancing loop.
struct RoundOutcome
{
    bool ok = false;
    std::string failure; // set when !ok
    VertexSet separator;
    std::vector<Stage> stages; // parallel to separator
    int attempts = 0;          // draws used, >= 1 on success
    bool trivial = false;
    /// Balance this round promises when it differs from the loop's c (never weaker).
    std::optional<double> balance;
    json trace = json::object();
};

struct SeparatorResult
{
    bool success = false;
    std::string failure_reason;
    std::string mode;
    VertexSet separator; // sorted
    std::vector<std::size_t> component_sizes; // sorted descending
    std::vector<std::int64_t> component_of;   // per vertex; -1 for separator vertices
    std::vector<Provenance> provenance;       // sorted by vertex
    int rounds = 0;
    int round_cap = 0;
    double balance_constant = 0.0; // per-round c
    std::uint64_t seed = 0;
    int retries = 0;                   // draws beyond the first, summed over rounds
    std::vector<int> attempts_per_round;
    double achieved_balance = 0.0; // largest component / n
    bool trivial = false;
    json trace = json::array();
};

using RoundFn = std::function<RoundOutcome(const VertexSet& working, int round)>;

/**
 * Balancing iteration. Starting from the largest component of G, calls `round`
 * on the current working set, re-verifies that its separator is c-balanced for
 * G[working], and recurses into the largest remaining piece until every
 * component has at most floor(2n/3) vertices (singletons always allowed).
 *
 * A round that reports success but fails the balance re-check is a bug and
 * raises InternalError naming the round; a round that reports failure (retry
 * budget exhausted) yields a failed result carrying the partial separator.
 */
[[nodiscard]] inline SeparatorResult balance_loop(const IntersectionGraph& g, const RoundFn& round, double c)
{
    SeparatorResult res;
    res.balance_constant = c;
    res.round_cap = balancing_round_cap(c);
    const std::size_t n = g.n();
    const std::size_t limit = balance_threshold(2.0 / 3.0, n);

    Mask removed(n, 0);
    auto largest_of = [](std::vector<VertexSet>& comps) -> VertexSet {
        std::size_t best = 0;
        for (std::size_t i = 1; i < comps.size(); ++i)
            if (comps[i].size() > comps[best].size())
                best = i;
        return comps.empty() ? VertexSet{} : std::move(comps[best]);
    };

    auto initial = components(g, {});
    VertexSet working = largest_of(initial);
    bool failed = false;
    while (std::max<std::size_t>(working.size(), 1) > std::max<std::size_t>(limit, 1)) {
        const int r = res.rounds + 1;
        if (r > res.round_cap)
            throw InternalError("balancing loop exceeded its round cap " + std::to_string(res.round_cap));
        RoundOutcome out = round(working, r);
        res.attempts_per_round.push_back(out.attempts);
        res.retries += std::max(0, out.attempts - 1);
        if (!out.trace.empty())
            res.trace.push_back(out.trace);
        if (!out.ok) {
            res.failure_reason = "round " + std::to_string(r) + ": " + out.failure;
            failed = true;
            break;
        }
        res.rounds = r;
        res.trivial = res.trivial || out.trivial;

        Mask active(n, 0);
        for (Vertex v : working)
            active[v] = 1;
        for (std::size_t i = 0; i < out.separator.size(); ++i) {
            const Vertex v = out.separator[i];
            if (v >= n || !active[v])
                throw InternalError("round " + std::to_string(r) + ": separator vertex " + std::to_string(v) +
                                    " outside the working set");
            active[v] = 0;
            if (!removed[v]) {
                removed[v] = 1;
                res.provenance.push_back({v, out.stages.at(i), r});
            }
        }
        auto pieces = components_in(g, active);
        VertexSet next = largest_of(pieces);
        const double promised = out.balance.value_or(c);
        if (promised > c)
            throw InternalError("round " + std::to_string(r) + " promised a balance weaker than the loop's");
        if (next.size() > std::max<std::size_t>(balance_threshold(promised, working.size()), 1))
            throw InternalError("round " + std::to_string(r) + " returned a separator that is not " +
                                std::to_string(promised) + "-balanced: largest piece " + std::to_string(next.size()) +
                                " of " + std::to_string(working.size()));
        working = std::move(next);
    }

    for (Vertex v = 0; v < n; ++v)
        if (removed[v])
            res.separator.push_back(v);
    std::sort(res.provenance.begin(), res.provenance.end(),
              [](const Provenance& a, const Provenance& b) { return a.vertex < b.vertex; });

    res.component_of.assign(n, -1);
    const auto comps = components(g, res.separator);
    std::size_t largest = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (Vertex v : comps[i])
            res.component_of[v] = static_cast<std::int64_t>(i);
        res.component_sizes.push_back(comps[i].size());
        largest = std::max(largest, comps[i].size());
    }
    std::sort(res.component_sizes.rbegin(), res.component_sizes.rend());
    res.achieved_balance = n == 0 ? 0.0 : static_cast<double>(largest) / static_cast<double>(n);
    res.success = !failed;
    if (res.success && largest > std::max<std::size_t>(limit, 1))
        throw InternalError("balancing loop finished with a component of " + std::to_string(largest) + " > " +
                            std::to_string(limit));
    return res;
}

// ---------------------------------------------------------------------------
// Serialization

[[nodiscard]] inline json bound_report_json(const BoundReport& b)
{
    auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
    json out = {{"n", b.n},
                {"m", b.m},
                {"d", b.d},
                {"achieved", b.achieved},
                {"degree_sum_bound", b.degree_sum_bound},
                {"ply_proxy_bound", b.ply_proxy_bound},
                {"edge_bound", b.edge_bound},
                {"ratio_degree_sum", opt(BoundReport::ratio(b.achieved, b.degree_sum_bound))},
                {"ratio_ply_proxy", opt(BoundReport::ratio(b.achieved, b.ply_proxy_bound))},
                {"ratio_edge", opt(BoundReport::ratio(b.achieved, b.edge_bound))},
                {"holder_chain_holds", b.holder_chain_holds()}};
    if (b.t) {
        out["t"] = *b.t;
        out["ktt_bound"] = *b.ktt_bound;
        out["ratio_ktt"] = opt(BoundReport::ratio(b.achieved, *b.ktt_bound));
    }
    return out;
}

/// Result document. `with_trace` adds the per-round diagnostics.
[[nodiscard]] inline json result_to_json(const SeparatorResult& r, const BoundReport& b, bool with_trace)
{
    json prov = json::array();
    for (const auto& p : r.provenance)
        prov.push_back({{"vertex", p.vertex}, {"stage", std::string(to_string(p.stage))}, {"round", p.round}});
    json out = {{"status", r.success ? "success" : "failure"},
                {"mode", r.mode},
                {"separator", r.separator},
                {"component_sizes", r.component_sizes},
                {"rounds", r.rounds},
                {"round_cap", r.round_cap},
                {"balance_constant", r.balance_constant},
                {"seed", r.seed},
                {"retries", r.retries},
                {"attempts_per_round", r.attempts_per_round},
                {"achieved_balance", r.achieved_balance},
                {"trivial", r.trivial},
                {"provenance", std::move(prov)},
                {"bounds", bound_report_json(b)}};
    if (!r.success)
        out["failure_reason"] = r.failure_reason;
    if (with_trace)
        out["trace"] = r.trace;
    return out;
}

} // namespace geosep

#endif // GEOSEP_SEPARATOR_HPP
