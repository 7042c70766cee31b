// geosep: generate instances, compute separators, re-verify results, benchmark.
//
// Exit codes: 0 ok, 1 separator failure (retry budget exhausted) or invalid
// result under `verify`, 2 usage/validation error, 3 internal-consistency error.

#include <geosep/geosep.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace geosep;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Options
{
    // generate
    bool grid = false;
    bool random = false;
    bool nested_chain = false;
    bool nested_bipartite = false;
    std::optional<int> d;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t a = 0;
    std::string kind = "ball";
    double r_min = 0.5;
    double r_max = 1.5;
    std::optional<double> box;
    bool with_graph = false;
    std::string edges_out;

    // separate / verify / bench / scaling
    std::string input;
    std::string result_path;
    std::string algo;
    std::string mode = "sampled";
    std::string constants = "practical";
    std::optional<std::uint64_t> seed;
    double epsilon = 0.0;
    bool trace = false;
    int retry_budget = 16;
    int trials = 5;
    std::vector<std::size_t> ns;
    std::string family = "grid";
    std::string out;
};

/// --seed, then GEOSEP_SEED, then entropy. The choice is echoed on stderr.
std::uint64_t resolve_seed(const Options& o)
{
    std::uint64_t seed = 0;
    const char* source = "--seed";
    if (o.seed) {
        seed = *o.seed;
    } else if (const char* env = std::getenv("GEOSEP_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            seed = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ValidationError(std::string("GEOSEP_SEED is not an unsigned integer: '") + env + "'");
        }
        source = "GEOSEP_SEED";
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        source = "entropy";
    }
    std::cerr << "seed " << seed << " (" << source << ")\n";
    return seed;
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw Error("write to '" + path + "' failed");
}

Instance load_input(const Options& o)
{
    const bool csv = o.input.size() >= 4 && o.input.compare(o.input.size() - 4, 4, ".csv") == 0;
    if (csv) {
        if (!o.d)
            throw ValidationError("CSV input needs --d (and --kind)");
        return load_csv(o.input, *o.d, kind_from_string(o.kind));
    }
    return load(o.input);
}

int cmd_generate(const Options& o)
{
    const int picked = int(o.grid) + int(o.random) + int(o.nested_chain) + int(o.nested_bipartite);
    if (picked != 1)
        throw ValidationError("choose exactly one of --grid, --random, --nested-chain, --nested-bipartite");
    if (!o.d)
        throw ValidationError("--d is required");
    const int d = *o.d;
    Instance inst(d, Kind::Ball);
    if (o.grid) {
        if (o.n == 0 || o.m == 0)
            throw ValidationError("--grid needs --n and --m");
        inst = gen_grid(o.n, o.m, d, kind_from_string(o.kind));
    } else if (o.random) {
        if (o.n == 0)
            throw ValidationError("--random needs --n");
        const double box = o.box.value_or(std::pow(static_cast<double>(o.n), 1.0 / d));
        inst = gen_random(o.n, d, o.r_min, o.r_max, box, kind_from_string(o.kind), resolve_seed(o));
    } else if (o.nested_chain) {
        if (o.n == 0)
            throw ValidationError("--nested-chain needs --n");
        inst = gen_nested_chain(o.n, d, resolve_seed(o));
    } else {
        if (o.a == 0)
            throw ValidationError("--nested-bipartite needs --a");
        inst = gen_nested_bipartite(o.a, d, resolve_seed(o));
    }
    write_output(o.out, to_json(inst).dump(1) + "\n");
    std::cerr << "n " << inst.size();
    if (o.with_graph || !o.edges_out.empty()) {
        const IntersectionGraph g = build_graph(inst);
        std::cerr << " m " << g.m();
        if (!o.edges_out.empty()) {
            std::ostringstream edges;
            write_edge_list(g, edges);
            write_output(o.edges_out, edges.str());
        }
    }
    std::cerr << '\n';
    return 0;
}

SeparatorResult run_separator(const Instance& inst, const IntersectionGraph& g, const Options& o, std::uint64_t seed)
{
    if (o.algo == "ball") {
        if (inst.kind() != Kind::Ball)
            throw ValidationError("--algo ball needs a ball instance, got " + std::string(to_string(inst.kind())) + "s");
        BallParams p;
        if (o.mode == "exact")
            p.mode = AnchorMode::Exact;
        else if (o.mode != "sampled")
            throw ValidationError("--mode must be exact or sampled");
        p.retry_budget = o.retry_budget;
        p.epsilon = o.epsilon;
        return separate_balls(inst, g, seed, p);
    }
    if (o.algo == "sphere") {
        if (inst.kind() != Kind::Sphere)
            throw ValidationError("--algo sphere needs a sphere instance, got " + std::string(to_string(inst.kind())) +
                                  "s");
        SphereParams p = SphereParams::preset_named(o.constants, inst.dimension());
        p.retry_budget = o.retry_budget;
        p.epsilon = o.epsilon;
        return separate_spheres(inst, g, seed, p);
    }
    throw ValidationError("--algo must be ball or sphere");
}

int cmd_separate(const Options& o)
{
    const Instance inst = load_input(o);
    const std::uint64_t seed = resolve_seed(o);
    BuildOptions bo;
    bo.epsilon = o.epsilon;
    const IntersectionGraph g = build_graph(inst, bo);
    const SeparatorResult r = run_separator(inst, g, o, seed);
    json doc = result_to_json(r, bounds(g, inst.dimension(), r.separator.size()), o.trace);
    write_output(o.out, doc.dump(1) + "\n");
    if (!r.success) {
        std::cerr << "separator failed: " << r.failure_reason << '\n';
        return kExitFailure;
    }
    std::cerr << "n " << g.n() << " m " << g.m() << " |X| " << r.separator.size() << " rounds " << r.rounds
              << " balance " << r.achieved_balance << '\n';
    return 0;
}

int cmd_verify(const Options& o)
{
    const Instance inst = load_input(o);
    BuildOptions bo;
    bo.epsilon = o.epsilon;
    const IntersectionGraph g = build_graph(inst, bo);
    json res;
    try {
        res = json::parse(read_file(o.result_path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed result JSON: ") + e.what());
    }
    if (!res.contains("separator") || !res["separator"].is_array())
        throw ParseError("result has no \"separator\" array");
    VertexSet sep;
    for (const auto& v : res["separator"]) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= g.n())
            throw ParseError("separator entry out of range: " + v.dump());
        sep.push_back(v.get<Vertex>());
    }
    const BalanceCheck bc = check_balanced(g, sep);
    const auto comps = components(g, sep);
    std::vector<std::int64_t> labels(g.n(), -1);
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (Vertex v : comps[i])
            labels[v] = static_cast<std::int64_t>(i);
    const SeparationAudit audit = audit_separation(g, sep, labels);
    bool sizes_agree = true;
    if (res.contains("component_sizes"))
        sizes_agree = res["component_sizes"].get<std::vector<std::size_t>>() == audit.component_sizes;
    // A single vertex cannot be split further; its empty separator is accepted.
    const bool balanced = bc.balanced || g.n() == 1;
    const bool valid = balanced && audit.labels_consistent && audit.sizes_match && sizes_agree;
    json report = {{"valid", valid},
                   {"balanced", balanced},
                   {"largest_component", bc.largest},
                   {"threshold", bc.threshold},
                   {"cross_edges", audit.cross_edges},
                   {"component_sizes_match", sizes_agree},
                   {"bounds", bound_report_json(bounds(g, inst.dimension(), sep.size()))}};
    write_output(o.out, report.dump(1) + "\n");
    return valid ? 0 : kExitFailure;
}

Instance family_instance(const Options& o, std::size_t n, int d, Kind kind, std::uint64_t seed)
{
    if (o.family == "grid")
        return gen_grid(n, 2 * n, d, kind);
    if (o.family == "random")
        return gen_random(n, d, o.r_min, o.r_max, o.box.value_or(std::pow(static_cast<double>(n), 1.0 / d)), kind,
                          seed);
    throw ValidationError("--family must be grid or random");
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

int cmd_bench(const Options& o)
{
    const int d = o.d.value_or(2);
    const Kind kind = o.algo == "sphere" ? Kind::Sphere : Kind::Ball;
    const std::uint64_t seed = o.ns.empty() ? 0 : resolve_seed(o);
    std::ostringstream csv;
    csv << "n,trials,median_build_seconds,median_separate_seconds,success_fraction,doubling_ratio\n";
    double prev = 0.0;
    std::size_t prev_n = 0;
    for (std::size_t n : o.ns) {
        std::vector<double> build_t;
        std::vector<double> sep_t;
        int ok = 0;
        for (int t = 0; t < o.trials; ++t) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
            const Instance inst = family_instance(o, n, d, kind, s);
            auto t0 = std::chrono::steady_clock::now();
            const IntersectionGraph g = build_graph(inst);
            auto t1 = std::chrono::steady_clock::now();
            const SeparatorResult r = run_separator(inst, g, o, s);
            auto t2 = std::chrono::steady_clock::now();
            build_t.push_back(std::chrono::duration<double>(t1 - t0).count());
            sep_t.push_back(std::chrono::duration<double>(t2 - t1).count());
            ok += r.success ? 1 : 0;
        }
        const double med = median(sep_t);
        csv << n << ',' << o.trials << ',' << median(build_t) << ',' << med << ','
            << static_cast<double>(ok) / o.trials << ',';
        if (prev_n != 0 && n == 2 * prev_n && prev > 0.0)
            csv << med / prev;
        csv << '\n';
        prev = med;
        prev_n = n;
    }
    write_output(o.out, csv.str());
    return 0;
}

int cmd_scaling(const Options& o)
{
    const int d = o.d.value_or(2);
    const Kind kind = o.algo == "sphere" ? Kind::Sphere : Kind::Ball;
    const std::uint64_t seed = resolve_seed(o);
    std::ostringstream csv;
    csv << "n,median_size,bound,ratio\n";
    std::vector<std::pair<double, double>> points;
    for (std::size_t n : o.ns) {
        std::vector<double> sizes;
        double bound = 0.0;
        for (int t = 0; t < o.trials; ++t) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
            const Instance inst = family_instance(o, n, d, kind, s);
            const IntersectionGraph g = build_graph(inst);
            const SeparatorResult r = run_separator(inst, g, o, s);
            if (!r.success)
                continue;
            sizes.push_back(static_cast<double>(r.separator.size()));
            bound = bounds(g, d, r.separator.size()).degree_sum_bound;
        }
        if (sizes.empty())
            throw ValidationError("scaling: every trial failed at n = " + std::to_string(n));
        const double med = median(sizes);
        csv << n << ',' << med << ',' << bound << ',' << (bound > 0.0 ? med / bound : 0.0) << '\n';
        points.emplace_back(static_cast<double>(n), std::max(med, 1.0));
    }
    write_output(o.out, csv.str());
    if (points.size() >= 3)
        std::cerr << "fitted exponent " << scaling_fit(points) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Balanced separators for intersection graphs of balls and spheres"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate", "Write an instance file");
    gen->add_flag("--grid", o.grid, "Grid family with about m edges");
    gen->add_flag("--random", o.random, "Uniform random centers and radii");
    gen->add_flag("--nested-chain", o.nested_chain, "n nested spheres, no edges");
    gen->add_flag("--nested-bipartite", o.nested_bipartite, "Two nested families, a^2 edges");
    gen->add_option("--d", o.d, "Dimension")->check(CLI::Range(kMinDimension, kMaxDimension));
    gen->add_option("--n", o.n, "Number of bodies");
    gen->add_option("--m", o.m, "Target edge count (grid)");
    gen->add_option("--a", o.a, "Family size (nested bipartite)");
    gen->add_option("--kind", o.kind, "ball or sphere")->check(CLI::IsMember({"ball", "sphere"}));
    gen->add_option("--r-min", o.r_min, "Smallest radius (random)");
    gen->add_option("--r-max", o.r_max, "Largest radius (random)");
    gen->add_option("--box", o.box, "Box side (random); default n^(1/d)");
    gen->add_option("--seed", o.seed, "RNG seed");
    gen->add_flag("--with-graph", o.with_graph, "Build the graph and report m");
    gen->add_option("--edges", o.edges_out, "Also write the edge list here");
    gen->add_option("--out", o.out, "Output path (default stdout)");

    auto* sep = app.add_subcommand("separate", "Compute a balanced separator");
    sep->add_option("input", o.input, "Instance file (.json, or .csv with --d/--kind)")->required();
    sep->add_option("--algo", o.algo, "ball or sphere")->required()->check(CLI::IsMember({"ball", "sphere"}));
    sep->add_option("--mode", o.mode, "Ball anchor mode: exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    sep->add_option("--constants", o.constants, "Sphere constants: practical or certified")
        ->check(CLI::IsMember({"practical", "certified"}));
    sep->add_option("--seed", o.seed, "RNG seed (fallback GEOSEP_SEED, then entropy)");
    sep->add_option("--epsilon", o.epsilon, "Tolerance band on squared-distance predicates")
        ->check(CLI::NonNegativeNumber);
    sep->add_flag("--trace", o.trace, "Include per-round diagnostics");
    sep->add_option("--retry-budget", o.retry_budget, "Draws per round")->check(CLI::PositiveNumber);
    sep->add_option("--d", o.d, "Dimension (CSV input)")->check(CLI::Range(kMinDimension, kMaxDimension));
    sep->add_option("--kind", o.kind, "Kind (CSV input)")->check(CLI::IsMember({"ball", "sphere"}));
    sep->add_option("--out", o.out, "Output path (default stdout)");

    auto* ver = app.add_subcommand("verify", "Re-check a result against its instance");
    ver->add_option("input", o.input, "Instance file")->required();
    ver->add_option("result", o.result_path, "Result file")->required();
    ver->add_option("--epsilon", o.epsilon, "Tolerance band used when building the graph")
        ->check(CLI::NonNegativeNumber);
    ver->add_option("--d", o.d, "Dimension (CSV input)")->check(CLI::Range(kMinDimension, kMaxDimension));
    ver->add_option("--kind", o.kind, "Kind (CSV input)")->check(CLI::IsMember({"ball", "sphere"}));
    ver->add_option("--out", o.out, "Output path (default stdout)");

    auto add_family_options = [&](CLI::App* sub) {
        sub->add_option("--algo", o.algo, "ball or sphere")->required()->check(CLI::IsMember({"ball", "sphere"}));
        sub->add_option("--mode", o.mode, "Ball anchor mode")->check(CLI::IsMember({"exact", "sampled"}));
        sub->add_option("--constants", o.constants, "Sphere constants")
            ->check(CLI::IsMember({"practical", "certified"}));
        sub->add_option("--family", o.family, "grid or random")->check(CLI::IsMember({"grid", "random"}));
        sub->add_option("--d", o.d, "Dimension")->check(CLI::Range(kMinDimension, kMaxDimension));
        sub->add_option("--n", o.ns, "Sizes (repeat or comma-separate)")->delimiter(',');
        sub->add_option("--trials", o.trials, "Trials per size; trial t uses seed + t")->check(CLI::PositiveNumber);
        sub->add_option("--retry-budget", o.retry_budget, "Draws per round")->check(CLI::PositiveNumber);
        sub->add_option("--r-min", o.r_min, "Smallest radius (random family)");
        sub->add_option("--r-max", o.r_max, "Largest radius (random family)");
        sub->add_option("--box", o.box, "Box side (random family)");
        sub->add_option("--seed", o.seed, "Base seed");
        sub->add_option("--out", o.out, "CSV output path (default stdout)");
    };
    auto* bench = app.add_subcommand("bench", "Median runtimes and success rate per size");
    add_family_options(bench);
    auto* scaling = app.add_subcommand("scaling", "Median separator size per size and fitted exponent");
    add_family_options(scaling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_generate(o);
        if (sep->parsed())
            return cmd_separate(o);
        if (ver->parsed())
            return cmd_verify(o);
        if (bench->parsed())
            return cmd_bench(o);
        return cmd_scaling(o);
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
