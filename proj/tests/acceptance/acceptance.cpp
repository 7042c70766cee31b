// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Criteria 2 and 6 are judged on the runs made for 1, 3 and 7.

#include <geosep/geosep.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace geosep;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int prec = 3)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(prec);
    s << x;
    return s.str();
}

VertexSet all_vertices(std::size_t n)
{
    VertexSet v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<Vertex>(i);
    return v;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---------------------------------------------------------------------------
// Shared bookkeeping for criteria 2 and 6

struct BudgetLedger
{
    std::size_t rounds_checked = 0;   // non-trivial sphere rounds
    std::size_t step34_rounds = 0;    // rounds that reached steps 3 and 4
    std::size_t packings_checked = 0; // pairs of packing balls re-checked geometrically
    std::size_t internal_errors = 0;
    std::vector<std::string> violations;
};

struct RoundCapLedger
{
    std::size_t runs = 0;
    int max_rounds = 0;
    std::map<std::string, std::pair<int, int>> by_mode; // mode -> (max rounds, cap)
    std::vector<std::string> violations;
};

BudgetLedger g_budget;
RoundCapLedger g_caps;

void note_rounds(const SeparatorResult& r, double c)
{
    ++g_caps.runs;
    const int cap = balancing_round_cap(c);
    g_caps.max_rounds = std::max(g_caps.max_rounds, r.rounds);
    auto& slot = g_caps.by_mode[r.mode + " c=" + fmt(c, 6)];
    slot.first = std::max(slot.first, r.rounds);
    slot.second = cap;
    if (r.round_cap != cap || r.rounds > cap)
        g_caps.violations.push_back(r.mode + " seed " + std::to_string(r.seed) + ": " + std::to_string(r.rounds) +
                                    " rounds, cap " + std::to_string(cap));
}

/// Re-checks the proof's per-round claims from a sphere result's trace.
void audit_sphere_trace(const Instance& inst, const SeparatorResult& r)
{
    const int d = inst.dimension();
    for (const auto& t : r.trace) {
        if (t.value("trivial", false))
            continue;
        ++g_budget.rounds_checked;
        const double q = t["Sigma"].get<double>() / 4.0;
        const double delta = t["Delta"].get<double>();
        auto bad = [&](const std::string& what) {
            g_budget.violations.push_back("seed " + std::to_string(r.seed) + " round " +
                                          std::to_string(t["round"].get<int>()) + ": " + what);
        };
        if (static_cast<double>(t["X1"].size()) > q)
            bad("|X1| > Sigma/4");
        if (delta > q)
            bad("Delta > Sigma/4");
        if (static_cast<double>(t["X2"].size()) > delta)
            bad("|X2| > Delta");
        if (!t.contains("X3"))
            continue; // early exit before step 3
        ++g_budget.step34_rounds;
        if (static_cast<double>(t["X3"].size()) > q)
            bad("|X3| > Sigma/4");
        // Recompute the volume inequality and pairwise disjointness from geometry.
        const auto& srand = t["S_rand"];
        const std::vector<double> center = srand["center"].get<std::vector<double>>();
        const double rho = srand["radius"].get<double>();
        const double R = t["B_in"]["R"].get<double>();
        const auto packing = t["packing"].get<std::vector<Vertex>>();
        double lhs = 0.0;
        for (Vertex v : packing) {
            const double D = std::sqrt(squared_distance(center, inst.center(v)));
            lhs += Constants::tau(d - 1) * std::pow(cap_radius_at(D, rho, inst.radius(v)), d - 1);
        }
        const double rhs = Constants::sigma(d) * std::pow(2.0 * R, d - 1);
        if (lhs > rhs * (1 + 1e-9))
            bad("packing volume " + fmt(lhs) + " > " + fmt(rhs));
        for (std::size_t i = 0; i < packing.size(); ++i)
            for (std::size_t j = i + 1; j < packing.size(); ++j) {
                ++g_budget.packings_checked;
                const double sum = inst.radius(packing[i]) + inst.radius(packing[j]);
                if (!(squared_distance(inst.center(packing[i]), inst.center(packing[j])) > sum * sum))
                    bad("packing balls overlap");
            }
    }
}

struct RunOutcome
{
    bool success = false;
    bool valid = false;
    std::size_t size = 0;
    double separate_seconds = 0.0;
};

/// One separation with validity re-checks; feeds the criterion 2/6 ledgers.
RunOutcome run_one(const Instance& inst, const IntersectionGraph& g, const std::string& algo, std::uint64_t seed,
                   int retry_budget = 16, AnchorMode mode = AnchorMode::Sampled)
{
    RunOutcome out;
    const int d = inst.dimension();
    SeparatorResult r;
    double c = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (algo == "ball") {
            BallParams p;
            p.mode = mode;
            p.retry_budget = retry_budget;
            r = separate_balls(inst, g, seed, p);
            c = ball_balance(mode, d);
        } else {
            auto p = SphereParams::practical(d);
            p.retry_budget = retry_budget;
            r = separate_spheres(inst, g, seed, p);
            c = p.balance();
        }
    } catch (const InternalError& e) {
        ++g_budget.internal_errors;
        g_budget.violations.push_back(std::string("internal error: ") + e.what());
        g_caps.violations.push_back(std::string("internal error: ") + e.what());
        return out;
    }
    out.separate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    note_rounds(r, c);
    if (algo == "sphere")
        audit_sphere_trace(inst, r);
    out.success = r.success;
    out.size = r.separator.size();
    if (r.success) {
        const auto audit = audit_separation(g, r.separator, r.component_of);
        out.valid = check_balanced(g, r.separator).balanced && audit.labels_consistent && audit.sizes_match &&
                    audit.cross_edges == 0 && audit.component_sizes == r.component_sizes;
    }
    return out;
}

// ---------------------------------------------------------------------------
// 1. Validity suite

Verdict criterion1()
{
    std::size_t runs = 0, successes = 0, invalid = 0;
    std::map<std::string, std::size_t> failures_by_config;
    for (int d : {2, 3})
        for (const char* algo : {"ball", "sphere"})
            for (std::size_t n : {50u, 200u, 1000u}) {
                const Kind kind = std::string(algo) == "ball" ? Kind::Ball : Kind::Sphere;
                const double box = std::pow(static_cast<double>(n), 1.0 / d);
                for (std::uint64_t s = 0; s < 200; ++s) {
                    const auto inst = gen_random(n, d, 0.5, 1.5, box, kind, 1000003 * n + 7919 * d + s);
                    const auto g = build_graph(inst);
                    const auto o = run_one(inst, g, algo, s);
                    ++runs;
                    if (o.success) {
                        ++successes;
                        invalid += o.valid ? 0 : 1;
                    } else {
                        ++failures_by_config[std::string(algo) + "/d" + std::to_string(d) + "/n" + std::to_string(n)];
                    }
                }
            }
    const double failure_rate = 1.0 - static_cast<double>(successes) / static_cast<double>(runs);
    std::string detail = std::to_string(runs) + " runs, " + std::to_string(successes) + " successes, " +
                         std::to_string(invalid) + " invalid, failure rate " + fmt(failure_rate, 4) + " (max 0.05)";
    for (const auto& [cfg, f] : failures_by_config)
        detail += "; " + cfg + " failed " + std::to_string(f);
    return {invalid == 0 && failure_rate <= 0.05, detail};
}

// ---------------------------------------------------------------------------
// 3. Scaling on unit grids

Verdict criterion3()
{
    const std::vector<std::size_t> ns{400, 2500, 10000};
    bool pass = true;
    std::string detail;
    for (const char* algo : {"ball", "sphere"}) {
        const Kind kind = std::string(algo) == "ball" ? Kind::Ball : Kind::Sphere;
        std::vector<std::pair<double, double>> points;
        std::vector<double> ratios;
        bool all_ok = true;
        for (std::size_t n : ns) {
            const auto k = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n))));
            const auto inst = gen_grid(n, 2 * k * (k - 1), 2, kind);
            const auto g = build_graph(inst);
            std::vector<double> sizes;
            for (std::uint64_t s = 0; s < 20; ++s) {
                const auto o = run_one(inst, g, algo, s);
                all_ok = all_ok && o.success && o.valid;
                sizes.push_back(static_cast<double>(o.size));
            }
            const double med = median(sizes);
            points.emplace_back(static_cast<double>(n), std::max(med, 1.0));
            ratios.push_back(med / std::sqrt(static_cast<double>(n)));
        }
        const double slope = scaling_fit(points);
        const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                              std::max(*std::min_element(ratios.begin(), ratios.end()), 1e-12);
        const bool ok = all_ok && slope >= 0.35 && slope <= 0.65 && spread <= 2.0;
        pass = pass && ok;
        detail += std::string(detail.empty() ? "" : "; ") + algo + ": medians";
        for (const auto& p : points)
            detail += " " + fmt(p.second, 1);
        detail += ", size/sqrt(n)";
        for (double r : ratios)
            detail += " " + fmt(r, 2);
        detail += ", slope " + fmt(slope) + " (want [0.35, 0.65]), ratio spread " + fmt(spread, 2) + " (max 2)";
        if (!all_ok)
            detail += ", some runs failed or were invalid";
    }
    return {pass, detail};
}

// ---------------------------------------------------------------------------
// 4. Tightness at toy scale

Verdict criterion4()
{
    const auto g3 = build_graph(gen_grid(9, 12, 2, Kind::Ball));
    const auto g4 = build_graph(gen_grid(16, 24, 2, Kind::Ball));
    const std::size_t m3 = brute_force_min_separator(g3).size;
    const std::size_t m4 = brute_force_min_separator(g4).size;
    bool pass = m3 >= 1 && m4 >= 2;

    std::size_t fixtures = 0, compared = 0, below = 0;
    auto check = [&](const Instance& inst, std::uint64_t seed) {
        const auto g = build_graph(inst);
        const std::size_t opt = brute_force_min_separator(g).size;
        ++fixtures;
        for (const char* algo : {"ball", "sphere"}) {
            if ((inst.kind() == Kind::Ball) != (std::string(algo) == "ball"))
                continue;
            std::vector<AnchorMode> modes{AnchorMode::Sampled};
            if (inst.kind() == Kind::Ball)
                modes.push_back(AnchorMode::Exact);
            for (auto mode : modes) {
                const auto o = run_one(inst, g, algo, seed, 16, mode);
                if (!o.success)
                    continue;
                ++compared;
                below += o.size < opt ? 1 : 0;
            }
        }
    };
    for (Kind kind : {Kind::Ball, Kind::Sphere}) {
        check(gen_grid(9, 12, 2, kind), 1);
        check(gen_grid(8, 12, 3, kind), 1);
        for (std::uint64_t s = 0; s < 60; ++s) {
            const std::size_t n = 4 + s % 9;
            const int d = 2 + static_cast<int>(s % 2);
            check(gen_random(n, d, 0.5, 1.5, 2.0, kind, 5000 + s), s);
        }
        check(gen_nested_bipartite(5, 2, 3), 3);
        check(gen_nested_chain(12, 2, 3), 3);
    }
    pass = pass && below == 0 && compared > 0;
    return {pass, "brute-force minimum k=3: " + std::to_string(m3) + " (want >= 1), k=4: " + std::to_string(m4) +
                      " (want >= 2); " + std::to_string(fixtures) + " fixtures with n <= 12, " +
                      std::to_string(compared) + " algorithm outputs compared, " + std::to_string(below) +
                      " below the oracle minimum"};
}

// ---------------------------------------------------------------------------
// 5. Nested-sphere lemma

Verdict criterion5()
{
    std::size_t ok = 0, total = 0, with_nonempty = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const int d = 2 + static_cast<int>(s % 2);
        const std::size_t L = 8 + s % 25;
        auto inst = gen_nested_chain(L, d, s);
        Rng rng(Rng(s).substream(1));
        const std::size_t planted = 1 + s % 5;
        const std::size_t mid = (L - 1) / 2;
        for (std::size_t i = 0; i < planted; ++i) {
            // Crossers of radius 0.3 on chain sphere `target` (radius target+1); gaps are 1 so they meet only it.
            const std::size_t target = i == 0 ? mid : rng.below(L);
            std::vector<double> dir(static_cast<std::size_t>(d));
            double norm = 0;
            for (auto& x : dir) {
                x = rng.normal();
                norm += x * x;
            }
            norm = std::sqrt(norm);
            const double rad = static_cast<double>(target + 1);
            for (auto& x : dir)
                x *= rad / norm;
            inst.add(dir, 0.3);
        }
        const auto g = build_graph(inst);
        const std::size_t sparam = L / 2;
        std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
        const auto cut = nested_separator(inst, g, origin, sparam);
        std::size_t delta = 0;
        for (Vertex v = 0; v < g.n(); ++v)
            delta = std::max(delta, g.degree(v));
        std::size_t largest = 0;
        for (const auto& comp : components(g, cut.separator))
            largest = std::max(largest, comp.size());
        ++total;
        with_nonempty += cut.separator.empty() ? 0 : 1;
        if (cut.separator.size() <= delta && largest <= inst.size() - sparam)
            ++ok;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                             " fixtures satisfy |X| <= Delta and components <= n - s (" +
                             std::to_string(with_nonempty) + " with a non-empty X)"};
}

// ---------------------------------------------------------------------------
// 6. Round caps (judged over every run above, plus exact-mode ball runs)

Verdict criterion6()
{
    for (int d : {2, 3})
        for (std::uint64_t s = 0; s < 30; ++s) {
            const std::size_t n = 1000;
            const auto inst = gen_random(n, d, 0.5, 1.5, std::pow(1000.0, 1.0 / d), Kind::Ball, 77 + s);
            (void)run_one(inst, build_graph(inst), "ball", s, 16, AnchorMode::Exact);
        }
    const int exact_cap_d2 = balancing_round_cap(ball_balance(AnchorMode::Exact, 2));
    std::string detail = std::to_string(g_caps.runs) + " runs, " + std::to_string(g_caps.violations.size()) +
                         " over the cap; d=2 exact-mode cap " + std::to_string(exact_cap_d2) + " (want 10)";
    for (const auto& [mode, v] : g_caps.by_mode)
        detail += "; " + mode + " max " + std::to_string(v.first) + "/" + std::to_string(v.second);
    if (!g_caps.violations.empty())
        detail += "; first: " + g_caps.violations.front();
    return {g_caps.violations.empty() && exact_cap_d2 == 10, detail};
}

// ---------------------------------------------------------------------------
// 7. Success probability with a single draw per round

// Random family for criterion 7: box side 1.2 sqrt(n) puts the disk graph above
// percolation, so the separator has real work to do.
constexpr double kDenseBoxFactor = 1.2;

Verdict criterion7()
{
    const std::size_t n = 10000;
    const double box = kDenseBoxFactor * std::sqrt(static_cast<double>(n));
    int ball_ok = 0, sphere_ok = 0, ball_invalid = 0, sphere_invalid = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const auto bi = gen_random(n, 2, 0.5, 1.5, box, Kind::Ball, 90000 + t);
        const auto bo = run_one(bi, build_graph(bi), "ball", t, 1);
        ball_ok += bo.success ? 1 : 0;
        ball_invalid += bo.success && !bo.valid ? 1 : 0;
        const auto si = gen_random(n, 2, 0.5, 1.5, box, Kind::Sphere, 90000 + t);
        const auto so = run_one(si, build_graph(si), "sphere", t, 1);
        sphere_ok += so.success ? 1 : 0;
        sphere_invalid += so.success && !so.valid ? 1 : 0;
    }
    const double fb = ball_ok / static_cast<double>(trials);
    const double fs = sphere_ok / static_cast<double>(trials);
    const bool pass = fb >= 0.5 && fs >= 0.3 && ball_invalid == 0 && sphere_invalid == 0;
    return {pass, "retry budget 1, n=10^4, d=2, box " + fmt(box, 0) + ": ball success " + fmt(fb, 2) +
                      " (want >= 0.5), sphere success " + fmt(fs, 2) +
                      " (want >= 0.3; the 1/2 claim is not certified under the practical constants)"};
}

// ---------------------------------------------------------------------------
// 8. Runtime growth

template <class F>
double median_seconds(int reps, F&& f)
{
    std::vector<double> t;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f(i);
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return median(t);
}

Verdict criterion8()
{
    // Ball: separation timed on its own; the instance and graph are built beforehand.
    std::vector<double> ball_t;
    for (std::size_t n : {10000u, 20000u, 40000u}) {
        const auto inst = gen_random(n, 2, 0.5, 1.5, kDenseBoxFactor * std::sqrt(static_cast<double>(n)), Kind::Ball, n);
        const auto g = build_graph(inst);
        ball_t.push_back(median_seconds(7, [&](int i) { (void)separate_balls(inst, g, 500 + i); }));
    }
    std::vector<double> sphere_t;
    for (std::size_t n : {1000u, 2000u, 4000u}) {
        const auto inst = gen_random(n, 2, 0.5, 1.5, kDenseBoxFactor * std::sqrt(static_cast<double>(n)), Kind::Sphere, n);
        const auto g = build_graph(inst);
        sphere_t.push_back(median_seconds(
            7, [&](int i) { (void)separate_spheres(inst, g, 500 + i, SphereParams::practical(2)); }));
    }
    auto ratios = [](const std::vector<double>& t) {
        return std::vector<double>{t[1] / t[0], t[2] / t[1]};
    };
    const auto rb = ratios(ball_t), rs = ratios(sphere_t);
    const double worst_b = std::max(rb[0], rb[1]), worst_s = std::max(rs[0], rs[1]);
    std::string detail = "ball sampled separate seconds";
    for (double t : ball_t)
        detail += " " + fmt(t, 4);
    detail += ", doubling ratios " + fmt(rb[0], 2) + " " + fmt(rb[1], 2) + " (max 2.6); sphere seconds";
    for (double t : sphere_t)
        detail += " " + fmt(t, 4);
    detail += ", doubling ratios " + fmt(rs[0], 2) + " " + fmt(rs[1], 2) + " (max 4.8)";
    return {worst_b <= 2.6 && worst_s <= 4.8, detail};
}

// ---------------------------------------------------------------------------
// 9. Geometry against Monte-Carlo oracles

std::vector<double> random_unit(Rng& rng, int d)
{
    std::vector<double> v(static_cast<std::size_t>(d));
    double n2 = 0;
    do {
        n2 = 0;
        for (auto& x : v) {
            x = rng.normal();
            n2 += x * x;
        }
    } while (n2 == 0);
    const double s = 1.0 / std::sqrt(n2);
    for (auto& x : v)
        x *= s;
    return v;
}

struct SideCounts
{
    int in1 = 0, out1 = 0; // points of S1 inside / outside the ball of S2
    int in2 = 0, out2 = 0; // and the other way round
};

SideCounts sample_sides(const Body& a, const Body& b, int samples, Rng& rng)
{
    const int d = a.center.dimension();
    auto count = [&](const Body& s, const Body& t, int& in, int& out) {
        for (int i = 0; i < samples; ++i) {
            const auto u = random_unit(rng, d);
            double d2 = 0;
            for (int j = 0; j < d; ++j) {
                const double x = s.center[static_cast<std::size_t>(j)] + s.radius * u[static_cast<std::size_t>(j)] -
                                 t.center[static_cast<std::size_t>(j)];
                d2 += x * x;
            }
            (d2 <= t.radius * t.radius ? in : out) += 1;
        }
    };
    SideCounts c;
    count(a, b, c.in1, c.out1);
    count(b, a, c.in2, c.out2);
    return c;
}

SphereRelation sampled_relation(const SideCounts& c)
{
    if ((c.in1 > 0 && c.out1 > 0) || (c.in2 > 0 && c.out2 > 0))
        return SphereRelation::Intersect;
    if (c.out1 == 0)
        return SphereRelation::FirstInsideSecond;
    return c.out2 == 0 ? SphereRelation::SecondInsideFirst : SphereRelation::Disjoint;
}

// Closed balls meet iff some point of one boundary lies in the other ball
// (crossing spheres, or the inner sphere of a nested pair).
bool sampled_balls_meet(const SideCounts& c) { return c.in1 > 0 || c.in2 > 0; }

/// Half the largest pairwise distance among sampled cut-sphere points inside the ball.
double sampled_cap_half_diameter(const std::vector<double>& ball_center, double ball_radius, double a, int keep,
                                 Rng& rng)
{
    const int d = static_cast<int>(ball_center.size());
    std::vector<std::vector<double>> pts;
    int tries = 0;
    while (static_cast<int>(pts.size()) < keep && tries < 50'000'000) {
        ++tries;
        auto u = random_unit(rng, d);
        for (auto& x : u)
            x *= a;
        if (squared_distance(u, ball_center) <= ball_radius * ball_radius)
            pts.push_back(std::move(u));
    }
    double best = 0;
    if (d == 2) {
        // Points on a circle: the farthest partner of each point is the one nearest the antipodal angle.
        std::vector<double> ang;
        for (const auto& p : pts)
            ang.push_back(std::atan2(p[1], p[0]));
        std::sort(ang.begin(), ang.end());
        for (double t : ang) {
            double target = t + std::numbers::pi;
            if (target > std::numbers::pi)
                target -= 2 * std::numbers::pi;
            auto it = std::lower_bound(ang.begin(), ang.end(), target);
            for (auto cand : {it, it == ang.begin() ? ang.end() - 1 : it - 1}) {
                if (cand == ang.end())
                    cand = ang.begin();
                best = std::max(best, 2 * a * std::abs(std::sin((t - *cand) / 2)));
            }
        }
    } else {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                best = std::max(best, squared_distance(pts[i], pts[j]));
        best = std::sqrt(best);
    }
    return best / 2;
}

Verdict criterion9()
{
    Rng rng(20240607);
    const int pairs = 100000;
    const double band = 1e-2; // tolerance band around tangency
    std::size_t rel_agree = 0, rel_outside_band = 0, ball_agree = 0, ball_outside_band = 0;
    for (int i = 0; i < pairs; ++i) {
        const int d = 2 + i % 2;
        std::vector<double> c1(static_cast<std::size_t>(d)), c2(static_cast<std::size_t>(d));
        for (auto& x : c1)
            x = rng.uniform(0, 4);
        for (auto& x : c2)
            x = rng.uniform(0, 4);
        const Body s1(Point(c1), rng.uniform(0.1, 2), Kind::Sphere);
        const Body s2(Point(c2), rng.uniform(0.1, 2), Kind::Sphere);
        const double D = dist(s1.center, s2.center);
        const bool near_tangent =
            std::abs(D - (s1.radius + s2.radius)) <= band || std::abs(D - std::abs(s1.radius - s2.radius)) <= band;

        const auto sides = sample_sides(s1, s2, 4000, rng);
        if (sampled_relation(sides) == spheres_relation(s1, s2))
            ++rel_agree;
        else if (!near_tangent)
            ++rel_outside_band;

        const Body b1(s1.center, s1.radius, Kind::Ball), b2(s2.center, s2.radius, Kind::Ball);
        const bool near_touch = std::abs(D - (s1.radius + s2.radius)) <= band;
        if (sampled_balls_meet(sides) == balls_intersect(b1, b2))
            ++ball_agree;
        else if (!near_touch)
            ++ball_outside_band;
    }
    const double rel_rate = rel_agree / static_cast<double>(pairs);
    const double ball_rate = ball_agree / static_cast<double>(pairs);

    const int cap_pairs = 1000;
    int cap_ok = 0;
    double worst = 0;
    for (int i = 0; i < cap_pairs; ++i) {
        const int d = 2 + i % 2;
        const double a = rng.uniform(0.5, 2);
        auto dir = random_unit(rng, d);
        double D = 0, b = 0;
        do {
            D = rng.uniform(0, 3);
            b = rng.uniform(0.2, 3);
        } while (D - b > a || a > D + b || (D + b) < 0.05 * a); // the ball must meet the cut sphere
        std::vector<double> center(static_cast<std::size_t>(d));
        for (std::size_t j = 0; j < center.size(); ++j)
            center[j] = D * dir[j];
        std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
        const double surrogate = cap_radius(origin, a, Body(Point(center), b, Kind::Sphere));
        const double oracle = sampled_cap_half_diameter(center, b, a, d == 2 ? 20000 : 1500, rng);
        const double rel = std::abs(surrogate - oracle) / std::max(surrogate, 1e-12);
        worst = std::max(worst, rel);
        cap_ok += rel <= 0.02 ? 1 : 0;
    }
    const bool pass = rel_rate >= 0.999 && ball_rate >= 0.999 && rel_outside_band == 0 && ball_outside_band == 0 &&
                      cap_ok == cap_pairs;
    return {pass, "spheres_relation agreement " + fmt(rel_rate, 5) + " (" + std::to_string(rel_outside_band) +
                      " disagreements outside the 1e-2 band), balls_intersect agreement " + fmt(ball_rate, 5) + " (" +
                      std::to_string(ball_outside_band) + " outside the band) over " + std::to_string(pairs) +
                      " pairs; cap_radius within 2% on " + std::to_string(cap_ok) + "/" + std::to_string(cap_pairs) +
                      " pairs, worst relative error " + fmt(worst, 4)};
}

Verdict criterion2()
{
    std::string detail = std::to_string(g_budget.rounds_checked) + " non-trivial sphere rounds checked (" +
                         std::to_string(g_budget.step34_rounds) + " through steps 3-4, " +
                         std::to_string(g_budget.packings_checked) + " packing pairs), " +
                         std::to_string(g_budget.violations.size()) + " violations, " +
                         std::to_string(g_budget.internal_errors) + " internal assertion failures";
    if (!g_budget.violations.empty())
        detail += "; first: " + g_budget.violations.front();
    return {g_budget.violations.empty() && g_budget.step34_rounds > 0, detail};
}

} // namespace

// Optional arguments pick criteria by number; 2 and 6 then see only the selected runs.
int main(int argc, char** argv)
{
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));
    std::map<int, Verdict> verdicts;
    auto timed = [&](int id, const std::function<Verdict()>& f) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            return;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            verdicts[id] = f();
        } catch (const std::exception& e) {
            verdicts[id] = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        verdicts[id].detail += " [" + fmt(s, 1) + " s]";
        std::cerr << "criterion " << id << " done in " << fmt(s, 1) << " s\n";
    };
    // 2 and 6 aggregate over the runs of 1, 3, 4 and 7, so they go last.
    timed(1, criterion1);
    timed(3, criterion3);
    timed(4, criterion4);
    timed(5, criterion5);
    timed(7, criterion7);
    timed(6, criterion6);
    timed(2, criterion2);
    timed(8, criterion8);
    timed(9, criterion9);

    bool all = true;
    for (const auto& [id, v] : verdicts) {
        std::cout << "CRITERION " << id << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << '\n';
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
