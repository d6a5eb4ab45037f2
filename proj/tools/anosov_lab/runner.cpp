#include "runner.hpp"

#include "anosov/csv.hpp"
#include "anosov/directions.hpp"
#include "anosov/ergodic.hpp"
#include "anosov/error.hpp"
#include "anosov/foliation.hpp"
#include "anosov/lyapunov.hpp"
#include "anosov/prehistory.hpp"
#include "anosov/random.hpp"
#include "anosov/smooth_endo.hpp"
#include "anosov/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#ifndef ANOSOV_LAB_VERSION
#define ANOSOV_LAB_VERSION "0.0.0"
#endif

namespace anosov::lab {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> table = {
        {"run", {"seed", "threads", "out"}},
        {"endomorphism", {"matrix"}},
        {"shear", {"axis", "driver", "amplitude", "frequency", "phase"}},
        {"newton", {"max_iterations", "residual_tolerance", "max_step"}},
        {"cones", {"unstable_halfangle", "stable_halfangle", "grid", "angular_samples"}},
        {"verify-anosov", {"c1_resolution"}},
        {"preimage-tree", {"point", "depth"}},
        {"dispersion", {"points", "samples", "depth", "mode", "cluster_tolerance", "threshold", "expect"}},
        {"dichotomy-scan",
         {"points", "samples", "depth", "cluster_tolerance", "threshold", "min_nonspecial_fraction",
          "max_nonspecial_fraction"}},
        {"angle-decay",
         {"points", "samples", "depth", "steps", "min_initial_angle", "probe", "max_final_angle", "monotone_after"}},
        {"lyapunov-census", {"points", "steps", "depth", "burn_in", "slack"}},
        {"quasi-iso",
         {"point", "arclength", "step", "depth", "separation_floor", "floors", "growth_steps", "pairs", "pair_min",
          "pair_max", "growth_c", "max_ratio", "angle_floor", "max_angle", "sandwich_eps", "sandwich_steps",
          "sandwich_alignment"}},
        {"ergodic-test", {"starts", "steps", "observables", "mode", "mean_tolerance", "std_threshold"}},
    };
    return table;
}

void validate(const Config& cfg)
{
    const auto& table = schema();
    for (const auto& section : cfg.sections()) {
        const auto it = table.find(section.name);
        if (it == table.end()) throw ConfigError("unknown section [" + section.name + "]", section.line);
        for (const auto& e : section.entries) {
            if (!it->second.count(e.key)) {
                throw ConfigError("unknown key '" + e.key + "' in [" + section.name + "]", e.line);
            }
        }
    }
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Context {
    const Config& cfg;
    std::string subcommand;
    std::uint64_t seed = 0;
    int threads = 0;
    fs::path out{};
    std::string config_hash{};
    ParameterLog params{};
    std::vector<std::pair<std::string, std::string>> csv_files{};  // name, body

    SectionReader reader(const std::string& name) { return SectionReader(cfg.section(name), name, params); }

    void add_csv(const std::string& name, const std::string& body) { csv_files.emplace_back(name, body); }

    std::vector<std::string> header_lines() const
    {
        std::vector<std::string> lines = {
            "tool anosov-lab " + tool_version(),
            "subcommand " + subcommand,
            "config_hash fnv1a64:" + config_hash,
            "seed " + std::to_string(seed),
        };
        for (const auto& [k, v] : params.entries()) lines.push_back("param " + k + " = " + v);
        return lines;
    }
};

TorusPoint random_point(std::uint64_t seed, int n)
{
    Rng rng(seed);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform01(rng);
    return TorusPoint(v);
}

std::string vec_text(const Vec& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v(i));
    return out;
}

json vec_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

int checked_int(long long v, long long lo, const std::string& what, int line)
{
    if (v < lo || v > 1000000000LL) {
        throw ConfigError("'" + what + "' must be an integer in [" + std::to_string(lo) + ", 1e9]", line);
    }
    return static_cast<int>(v);
}

double checked_positive(double v, const std::string& what, int line)
{
    if (!(v > 0.0)) throw ConfigError("'" + what + "' must be positive", line);
    return v;
}

SmoothEndo build_map(Context& ctx)
{
    const ConfigSection* es = ctx.cfg.section("endomorphism");
    if (!es) throw ConfigError("missing required section [endomorphism]", 0);
    SectionReader r = ctx.reader("endomorphism");
    const auto rows = r.integer_rows("matrix");
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n < 2 || n > kMaxDim) {
        throw ConfigError("'matrix' must be square of size 2.." + std::to_string(kMaxDim), r.line_of("matrix"));
    }
    IntMat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
            throw ConfigError("'matrix' must be square", r.line_of("matrix"));
        }
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    LinearEndo a;
    try {
        a = analyze(m);
    } catch (const Error& e) {
        throw ConfigError(std::string("'matrix': ") + e.what(), r.line_of("matrix"));
    }

    std::vector<ShearMap> shears;
    const auto sections = ctx.cfg.all("shear");
    for (std::size_t i = 0; i < sections.size(); ++i) {
        SectionReader s(sections[i], "shear" + std::to_string(i), ctx.params);
        ShearMap sh;
        sh.axis = static_cast<int>(s.integer("axis", 0));
        sh.driver = static_cast<int>(s.integer("driver", 1));
        sh.amplitude = s.real("amplitude", 0.0);
        sh.frequency = static_cast<int>(s.integer("frequency", 1));
        sh.phase = s.real("phase", 0.0);
        shears.push_back(sh);
    }
    SectionReader nr = ctx.reader("newton");
    NewtonOptions newton;
    newton.max_iterations = static_cast<int>(nr.integer("max_iterations", newton.max_iterations));
    newton.residual_tolerance = nr.real("residual_tolerance", newton.residual_tolerance);
    newton.max_step = nr.real("max_step", newton.max_step);
    try {
        return SmoothEndo(std::move(a), std::move(shears), newton);
    } catch (const Error& e) {
        throw ConfigError(e.what(), sections.empty() ? es->line : sections.front()->line);
    }
}

ConeConfig read_cones(Context& ctx)
{
    SectionReader r = ctx.reader("cones");
    ConeConfig c;
    c.unstable_halfangle = checked_positive(r.real("unstable_halfangle", c.unstable_halfangle), "unstable_halfangle",
                                            r.line_of("unstable_halfangle"));
    c.stable_halfangle =
        checked_positive(r.real("stable_halfangle", c.stable_halfangle), "stable_halfangle", r.line_of("stable_halfangle"));
    c.grid_resolution = checked_int(r.integer("grid", c.grid_resolution), 1, "grid", r.line_of("grid"));
    c.angular_samples =
        checked_int(r.integer("angular_samples", c.angular_samples), 0, "angular_samples", r.line_of("angular_samples"));
    c.threads = ctx.threads;
    return c;
}

json certificate_json(const HyperbolicityCertificate& c)
{
    json j;
    j["verified"] = c.verified;
    j["cone_halfangle_u"] = c.cone_halfangle_u;
    j["cone_halfangle_s"] = c.cone_halfangle_s;
    j["lambda_min_u"] = c.expansion_bound;
    j["lambda_max_s"] = c.contraction_bound;
    j["constant_c"] = c.constant_c;
    j["grid_resolution"] = c.grid_resolution;
    j["samples_checked"] = c.samples_checked;
    if (c.has_witness) j["witness"] = vec_json(c.witness.coords());
    if (!c.failure.empty()) j["failure"] = c.failure;
    return j;
}

json linear_json(const LinearEndo& a)
{
    json j;
    std::vector<std::vector<long long>> rows;
    for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) {
        std::vector<long long> row;
        for (Eigen::Index k = 0; k < a.matrix.cols(); ++k) row.push_back(a.matrix(i, k));
        rows.push_back(row);
    }
    j["matrix"] = rows;
    j["determinant"] = a.determinant;
    j["degree"] = a.degree;
    std::vector<double> moduli;
    for (const auto& z : a.unstable_spectrum) moduli.push_back(std::abs(z));
    for (const auto& z : a.stable_spectrum) moduli.push_back(std::abs(z));
    j["eigenvalue_moduli"] = moduli;
    j["lambda_u"] = a.lambda_u;
    j["e_u"] = vec_json(a.e_u);
    j["warnings"] = a.warnings;
    return j;
}

void require_hyperbolic(Context& ctx, const SmoothEndo& f, json& results)
{
    const HyperbolicityCertificate cert = verify_cones(f, read_cones(ctx));
    results["hyperbolicity"] = certificate_json(cert);
    if (!cert.verified) {
        throw NotHyperbolic("cone verification failed (" + cert.failure +
                            "); this experiment requires a certified Anosov endomorphism");
    }
}

// --- subcommands -----------------------------------------------------------

void verify_anosov(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("verify-anosov");
    const int c1_res = checked_int(r.integer("c1_resolution", 64), 1, "c1_resolution", r.line_of("c1_resolution"));
    const HyperbolicityCertificate cert = verify_cones(f, read_cones(ctx));
    results["linear_model"] = linear_json(f.base());
    results["certificate"] = certificate_json(cert);
    results["c1_distance_to_linear"] = c1_distance_to_linear(f, c1_res, ctx.threads);
    outcome.verdict = cert.verified ? Verdict::pass : Verdict::fail;
    std::ostringstream d;
    d << (cert.verified ? "cones verified" : "cones not verified: " + cert.failure) << "; lambda_min^u = "
      << format_double(cert.expansion_bound) << ", lambda_max^s = " << format_double(cert.contraction_bound);
    outcome.detail = d.str();
}

void preimage_tree(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("preimage-tree");
    TorusPoint x;
    if (auto p = r.optional_reals("point")) {
        if (static_cast<int>(p->size()) != f.dim()) throw ConfigError("'point' has the wrong dimension", r.line_of("point"));
        x = TorusPoint(Vec(Eigen::Map<const Eigen::VectorXd>(p->data(), f.dim())));
    } else {
        x = random_point(derive_seed(ctx.seed, 0), f.dim());
        ctx.params.record("preimage-tree.point", vec_text(x.coords()));
    }
    const int depth = checked_int(r.integer("depth", 12), 0, "depth", r.line_of("depth"));
    const auto histories = all_prehistories(f, x, depth);
    double residual = 0.0;
    for (const auto& p : histories) residual = std::max(residual, orbit_residual(f, p));
    std::ostringstream csv;
    write_prehistory_csv(csv, histories);
    ctx.add_csv("prehistories.csv", csv.str());
    results["point"] = vec_json(x.coords());
    results["prehistory_count"] = histories.size();
    results["max_orbit_residual"] = residual;
    outcome.detail = std::to_string(histories.size()) + " pre-histories of depth " + std::to_string(depth);
}

struct PointCensus {
    TorusPoint point;
    DirectionCensus census;
};

void census_scan(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome, bool full_dump)
{
    const std::string name = ctx.subcommand;
    SectionReader r = ctx.reader(name);
    const int points = checked_int(r.integer("points", full_dump ? 50 : 100), 1, "points", r.line_of("points"));
    const int samples = checked_int(r.integer("samples", 200), 1, "samples", r.line_of("samples"));
    const std::string mode = full_dump ? r.choice("mode", "sampled", {"sampled", "exhaustive"}) : "sampled";
    const int depth =
        checked_int(r.integer("depth", mode == "exhaustive" ? 12 : 40), 1, "depth", r.line_of("depth"));
    const double tol = r.real("cluster_tolerance", kDefaultClusterTolerance);
    const double threshold = r.real("threshold", kDefaultDispersionThreshold);
    std::string expect = "none";
    std::optional<double> min_fraction, max_fraction;
    if (full_dump) {
        expect = r.choice("expect", "none", {"none", "special", "nonspecial"});
    } else {
        if (r.has("min_nonspecial_fraction")) min_fraction = r.real("min_nonspecial_fraction", 0.0);
        if (r.has("max_nonspecial_fraction")) max_fraction = r.real("max_nonspecial_fraction", 1.0);
    }

    std::vector<PointCensus> scans;
    scans.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const std::uint64_t point_seed = derive_seed(ctx.seed, static_cast<std::uint64_t>(i));
        const TorusPoint x = random_point(point_seed, f.dim());
        const CensusMode cm = mode == "exhaustive" ? CensusMode::exhaustive(depth)
                                                   : CensusMode::sampled(samples, depth, derive_seed(point_seed, 1));
        scans.push_back({x, census(f, x, cm, tol, ctx.threads)});
    }

    int nonspecial = 0;
    std::vector<double> dispersions;
    std::ostringstream table;
    CsvWriter t(table);
    t.field("point");
    for (int j = 0; j < f.dim(); ++j) t.field("x_" + std::to_string(j));
    t.field("dispersion").field("cluster_count").field("separated_count").field("nonspecial").end_row();
    std::ostringstream dirs;
    CsvWriter d(dirs);
    d.field("point").field("word");
    for (int j = 0; j < f.dim(); ++j) d.field("d_" + std::to_string(j));
    d.field("cluster").end_row();
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const auto& c = scans[i].census;
        const bool ns = c.dispersion > threshold;
        nonspecial += ns ? 1 : 0;
        dispersions.push_back(c.dispersion);
        t.field(static_cast<long long>(i));
        for (int j = 0; j < f.dim(); ++j) t.field(scans[i].point[j]);
        t.field(c.dispersion).field(c.cluster_count).field(c.separated_count).field(ns).end_row();
        if (full_dump) {
            for (const auto& e : c.entries) {
                d.field(static_cast<long long>(i)).field(e.word);
                for (int j = 0; j < f.dim(); ++j) d.field(e.direction[j]);
                d.field(e.cluster).end_row();
            }
        }
    }
    ctx.add_csv(full_dump ? "points.csv" : "scan.csv", table.str());
    if (full_dump) ctx.add_csv("directions.csv", dirs.str());

    const double fraction = static_cast<double>(nonspecial) / points;
    const Summary s = summarize(dispersions);
    results["points"] = points;
    results["nonspecial_points"] = nonspecial;
    results["nonspecial_fraction"] = fraction;
    results["dispersion_threshold"] = threshold;
    results["cluster_tolerance"] = tol;
    results["dispersion"] = {{"min", s.min}, {"median", s.median}, {"max", s.max}};
    const std::string label = nonspecial == 0
                                  ? "special (at sampled resolution)"
                                  : "non-special at " + std::to_string(nonspecial) + " of " + std::to_string(points) +
                                        " sampled points";
    results["classification"] = label;
    outcome.detail = label;

    if (expect == "special") outcome.verdict = nonspecial == 0 ? Verdict::pass : Verdict::fail;
    if (expect == "nonspecial") outcome.verdict = nonspecial > 0 ? Verdict::pass : Verdict::fail;
    if (min_fraction || max_fraction) {
        const bool ok = (!min_fraction || fraction >= *min_fraction) && (!max_fraction || fraction <= *max_fraction);
        outcome.verdict = ok ? Verdict::pass : Verdict::fail;
        outcome.detail += "; non-special fraction " + format_double(fraction);
    }
}

void angle_decay_run(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("angle-decay");
    const int points = checked_int(r.integer("points", 10), 1, "points", r.line_of("points"));
    const int samples = checked_int(r.integer("samples", 20), 1, "samples", r.line_of("samples"));
    const int depth = checked_int(r.integer("depth", 40), 1, "depth", r.line_of("depth"));
    const int steps = checked_int(r.integer("steps", 15), 1, "steps", r.line_of("steps"));
    const double min_initial = r.real("min_initial_angle", 1e-3);
    const auto probe = r.optional_reals("probe");
    if (probe && static_cast<int>(probe->size()) != f.dim()) {
        throw ConfigError("'probe' has the wrong dimension", r.line_of("probe"));
    }
    const double max_final = r.real("max_final_angle", 1e-8);
    const int monotone_after = checked_int(r.integer("monotone_after", 3), 0, "monotone_after", r.line_of("monotone_after"));

    std::ostringstream out;
    CsvWriter csv(out);
    csv.field("point").field("pair").field("first").field("second").field("step").field("angle").end_row();
    long long pairs = 0, failures = 0;
    double worst_final = 0.0;
    std::vector<double> last_ratios;
    for (int i = 0; i < points; ++i) {
        const std::uint64_t point_seed = derive_seed(ctx.seed, static_cast<std::uint64_t>(i));
        const TorusPoint x = random_point(point_seed, f.dim());
        const DirectionCensus c =
            census(f, x, CensusMode::sampled(samples, depth, derive_seed(point_seed, 1)), kDefaultClusterTolerance,
                   ctx.threads);
        std::vector<std::tuple<std::string, std::string, Direction, Direction>> todo;
        for (std::size_t a = 0; a < c.entries.size(); ++a) {
            for (std::size_t b = a + 1; b < c.entries.size(); ++b) {
                if (angle(c.entries[a].direction, c.entries[b].direction) >= min_initial) {
                    todo.emplace_back(c.entries[a].word, c.entries[b].word, c.entries[a].direction,
                                      c.entries[b].direction);
                }
            }
        }
        if (probe) {
            const Direction pd(Vec(Eigen::Map<const Eigen::VectorXd>(probe->data(), f.dim())));
            todo.emplace_back(c.entries.front().word, "probe", c.entries.front().direction, pd);
        }
        for (const auto& [wa, wb, da, db] : todo) {
            const auto angles = angle_decay(f, x, da, db, steps);
            bool ok = angles.back() < max_final;
            for (int j = monotone_after + 1; j <= steps; ++j) ok = ok && angles[j] <= angles[j - 1];
            failures += ok ? 0 : 1;
            worst_final = std::max(worst_final, angles.back());
            if (angles[steps - 1] > 0.0) last_ratios.push_back(angles[steps] / angles[steps - 1]);
            for (int j = 0; j <= steps; ++j) {
                csv.field(i).field(pairs).field(wa).field(wb).field(j).field(angles[static_cast<std::size_t>(j)]).end_row();
            }
            ++pairs;
        }
    }
    ctx.add_csv("decay.csv", out.str());
    const LinearEndo& a = f.base();
    double mu_s = 0.0;
    for (const auto& z : a.stable_spectrum) mu_s = std::max(mu_s, std::abs(z));
    results["pairs"] = pairs;
    results["failing_pairs"] = failures;
    results["worst_final_angle"] = worst_final;
    results["linear_rate"] = mu_s / std::exp(a.lambda_u);
    if (!last_ratios.empty()) results["median_final_ratio"] = percentile(last_ratios, 0.5);
    if (pairs == 0) {
        outcome.detail = "no pairs of distinct directions above the initial-angle floor";
        return;
    }
    outcome.verdict = failures == 0 ? Verdict::pass : Verdict::fail;
    outcome.detail = std::to_string(pairs - failures) + " of " + std::to_string(pairs) + " pairs decay below " +
                     format_double(max_final) + " by step " + std::to_string(steps);
}

void lyapunov_census_run(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("lyapunov-census");
    ExponentCensusConfig cfg;
    cfg.points = checked_int(r.integer("points", cfg.points), 1, "points", r.line_of("points"));
    cfg.steps = checked_int(r.integer("steps", cfg.steps), 1, "steps", r.line_of("steps"));
    cfg.depth = checked_int(r.integer("depth", cfg.depth), 10, "depth", r.line_of("depth"));
    cfg.burn_in = checked_int(r.integer("burn_in", cfg.burn_in), 0, "burn_in", r.line_of("burn_in"));
    cfg.slack = r.real("slack", cfg.slack);
    cfg.seed = ctx.seed;
    cfg.threads = ctx.threads;
    const ExponentCensus c = exponent_census(f, cfg);
    std::ostringstream csv;
    write_exponent_csv(csv, c);
    ctx.add_csv("exponents.csv", csv.str());
    const Summary& s = c.summary;
    results["lambda_u_linear"] = c.lambda_u_linear;
    results["slack"] = cfg.slack;
    results["summary"] = {{"count", s.count}, {"min", s.min},   {"p01", s.p01},       {"p05", s.p05},
                          {"median", s.median}, {"mean", s.mean}, {"stddev", s.stddev}, {"p95", s.p95},
                          {"p99", s.p99},       {"max", s.max}};
    results["exceed_fraction"] = c.exceed_fraction;
    results["mean_margin_in_standard_errors"] = c.margin_in_standard_errors;
    const bool ok = s.p99 <= c.lambda_u_linear + cfg.slack;
    outcome.verdict = ok ? Verdict::pass : Verdict::fail;
    outcome.detail = "p99 = " + format_double(s.p99) + (ok ? " <= " : " > ") + "lambda_u(A) + slack = " +
                     format_double(c.lambda_u_linear + cfg.slack);
}

void quasi_iso_run(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("quasi-iso");
    CoverPoint p;
    if (auto pt = r.optional_reals("point")) {
        if (static_cast<int>(pt->size()) != f.dim()) throw ConfigError("'point' has the wrong dimension", r.line_of("point"));
        p = CoverPoint(Vec(Eigen::Map<const Eigen::VectorXd>(pt->data(), f.dim())));
    } else {
        p = CoverPoint(random_point(derive_seed(ctx.seed, 0), f.dim()).coords());
        ctx.params.record("quasi-iso.point", vec_text(p.coords));
    }
    const double arclength = checked_positive(r.real("arclength", 50.0), "arclength", r.line_of("arclength"));
    const double step = checked_positive(r.real("step", kDefaultLeafStep), "step", r.line_of("step"));
    const int depth = checked_int(r.integer("depth", kDefaultLeafDepth), 1, "depth", r.line_of("depth"));
    const double floor = r.real("separation_floor", kDefaultSeparationFloor);
    std::vector<double> floors = r.reals("floors", {5.0, 10.0, 20.0, 40.0});
    const int k = checked_int(r.integer("growth_steps", 5), 0, "growth_steps", r.line_of("growth_steps"));
    const int pair_count = checked_int(r.integer("pairs", 200), 1, "pairs", r.line_of("pairs"));
    const double pair_min = r.real("pair_min", 10.0);
    const double pair_max = r.real("pair_max", 50.0);
    const double growth_c = r.real("growth_c", 1.2);
    const double ratio_limit = r.real("max_ratio", 1.1);
    const double angle_floor = r.real("angle_floor", 20.0);
    const double angle_limit = r.real("max_angle", 0.05);
    const double sandwich_eps = r.real("sandwich_eps", 0.05);
    const int sandwich_steps = checked_int(r.integer("sandwich_steps", 5), 0, "sandwich_steps", r.line_of("sandwich_steps"));
    const double alignment = r.real("sandwich_alignment", 0.3);
    if (pair_min < floor) throw ConfigError("'pair_min' must not be below 'separation_floor'", r.line_of("pair_min"));
    if (std::find(floors.begin(), floors.end(), angle_floor) == floors.end()) floors.push_back(angle_floor);
    std::sort(floors.begin(), floors.end());

    LeafOptions lo;
    lo.depth = depth;
    const LeafSegment seg = trace_leaf(f, p, arclength, step, lo);
    std::ostringstream leaf_csv;
    write_leaf_csv(leaf_csv, seg);
    ctx.add_csv("leaf.csv", leaf_csv.str());

    const QuasiIsometryFit qi = quasi_isometry_fit(seg, floor);
    json by_floor = json::array();
    for (double fl : floors) {
        if (fl < 1.0) continue;
        by_floor.push_back({{"floor", fl}, {"max_ratio", quasi_isometry_fit(seg, fl).max_ratio}});
    }
    results["quasi_isometry"] = {{"q_fit", qi.q_fit},           {"b_fit", qi.b_fit},
                                 {"max_ratio", qi.max_ratio},   {"separation_floor", floor},
                                 {"pairs", qi.pairs},           {"max_ratio_by_floor", by_floor}};

    const AsymptoticDirectionReport asym = asymptotic_direction_check(seg, f.base().e_u, floors);
    std::ostringstream asym_csv;
    CsvWriter ac(asym_csv);
    ac.field("floor").field("max_angle").field("pairs").end_row();
    double angle_at_floor = 0.0;
    json asym_rows = json::array();
    for (const auto& row : asym.rows) {
        ac.field(row.floor).field(row.max_angle).field(row.pairs).end_row();
        asym_rows.push_back({{"floor", row.floor}, {"max_angle", row.max_angle}});
        if (row.floor == angle_floor) angle_at_floor = row.max_angle;
    }
    ctx.add_csv("asymptotic.csv", asym_csv.str());
    results["asymptotic_direction"] = {{"rows", asym_rows}, {"fitted_c", asym.fitted_c}};

    const auto pairs = leaf_pairs(seg, pair_min, pair_max, pair_count, derive_seed(ctx.seed, 1));
    const GrowthRatioReport growth = growth_ratio_check(f, pairs, k, floor);
    std::ostringstream growth_csv;
    CsvWriter gc(growth_csv);
    gc.field("pair").field("separation").field("ratio").field("aligned").field("sandwich_holds").end_row();
    long long aligned = 0, held = 0, out_of_band = 0;
    double min_margin = INFINITY;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [x, y] = pairs[i];
        const double ratio = growth.ratios[i];
        if (ratio < 1.0 / growth_c || ratio > growth_c) ++out_of_band;
        const SandwichResult sw = linear_sandwich_check(f.base(), x, y, sandwich_steps, sandwich_eps, alignment);
        if (sw.aligned) {
            ++aligned;
            held += sw.holds ? 1 : 0;
            min_margin = std::min({min_margin, sw.lower_margin, sw.upper_margin});
        }
        gc.field(static_cast<long long>(i)).field((y.coords - x.coords).norm()).field(ratio).field(sw.aligned)
            .field(sw.holds).end_row();
    }
    ctx.add_csv("growth.csv", growth_csv.str());
    const auto [rmin, rmax] = std::minmax_element(growth.ratios.begin(), growth.ratios.end());
    results["growth_ratio"] = {{"steps", k},       {"pairs", pairs.size()},         {"min", *rmin},
                               {"max", *rmax},     {"max_deviation", growth.max_deviation},
                               {"bound_c", growth_c}, {"out_of_band", out_of_band}};
    results["linear_sandwich"] = {{"eps", sandwich_eps},
                                  {"steps", sandwich_steps},
                                  {"aligned_pairs", aligned},
                                  {"holding_pairs", held},
                                  {"min_margin", aligned ? json(min_margin) : json(nullptr)}};

    std::vector<std::string> failed;
    if (qi.max_ratio > ratio_limit) failed.push_back("max_ratio " + format_double(qi.max_ratio));
    if (out_of_band > 0) failed.push_back(std::to_string(out_of_band) + " growth ratios outside [1/C, C]");
    if (!(angle_at_floor < angle_limit)) failed.push_back("chord angle " + format_double(angle_at_floor));
    if (aligned == 0 || held < aligned) failed.push_back("linear sandwich");
    outcome.verdict = failed.empty() ? Verdict::pass : Verdict::fail;
    if (failed.empty()) {
        outcome.detail = "Q_fit = " + format_double(qi.q_fit) + ", max_ratio = " + format_double(qi.max_ratio) +
                         ", growth ratios in [" + format_double(*rmin) + ", " + format_double(*rmax) + "]";
    } else {
        for (const auto& s : failed) outcome.detail += (outcome.detail.empty() ? "failed: " : "; ") + s;
    }
}

std::vector<Observable> parse_observables(const std::string& text, int dim, int line)
{
    std::vector<Observable> out;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ';');) {
        std::istringstream is(item);
        std::string kind;
        if (!(is >> kind)) throw ConfigError("'observables': empty entry", line);
        std::vector<double> nums;
        for (std::string t; is >> t;) {
            try {
                std::size_t used = 0;
                nums.push_back(std::stod(t, &used));
                if (used != t.size()) throw std::invalid_argument(t);
            } catch (const std::exception&) {
                throw ConfigError("'observables': bad number '" + t + "'", line);
            }
        }
        if (kind == "const") {
            if (nums.size() != 1) throw ConfigError("'observables': const takes one value", line);
            out.push_back(Observable::constant(nums[0]));
            continue;
        }
        if (kind != "cos" && kind != "sin") throw ConfigError("'observables': unknown kind '" + kind + "'", line);
        if (static_cast<int>(nums.size()) != dim) {
            throw ConfigError("'observables': " + kind + " needs " + std::to_string(dim) + " integer frequencies", line);
        }
        IntVec k(dim);
        for (int i = 0; i < dim; ++i) {
            if (nums[static_cast<std::size_t>(i)] != std::round(nums[static_cast<std::size_t>(i)])) {
                throw ConfigError("'observables': frequencies must be integers", line);
            }
            k(i) = static_cast<long long>(nums[static_cast<std::size_t>(i)]);
        }
        if (k.isZero()) throw ConfigError("'observables': frequency vector must be nonzero", line);
        out.push_back(kind == "cos" ? Observable::cosine(k) : Observable::sine(k));
    }
    if (out.empty()) throw ConfigError("'observables': no observables given", line);
    return out;
}

std::string default_observables(int dim)
{
    auto unit = [dim](std::initializer_list<int> ones) {
        std::string s;
        for (int i = 0; i < dim; ++i) {
            const bool on = std::find(ones.begin(), ones.end(), i) != ones.end();
            s += std::string(i ? " " : "") + (on ? "1" : "0");
        }
        return s;
    };
    return "cos " + unit({0}) + "; sin " + unit({1}) + "; cos " + unit({0, 1});
}

void ergodic_run(Context& ctx, const SmoothEndo& f, json& results, RunOutcome& outcome)
{
    SectionReader r = ctx.reader("ergodic-test");
    ErgodicityConfig cfg;
    cfg.starts = checked_int(r.integer("starts", cfg.starts), 1, "starts", r.line_of("starts"));
    cfg.steps = checked_int(r.integer("steps", cfg.steps), 1, "steps", r.line_of("steps"));
    const std::string obs_text = r.text("observables", default_observables(f.dim()));
    const auto observables = parse_observables(obs_text, f.dim(), r.line_of("observables"));
    cfg.mode = r.choice("mode", "backward_walk", {"backward_walk", "forward"}) == "forward" ? OrbitMode::forward
                                                                                          : OrbitMode::backward_walk;
    cfg.mean_tolerance = r.real("mean_tolerance", cfg.mean_tolerance);
    cfg.std_threshold = r.real("std_threshold", cfg.std_threshold);
    cfg.seed = ctx.seed;
    cfg.threads = ctx.threads;
    const ErgodicityReport rep = ergodicity_test(f, observables, cfg);
    std::ostringstream csv;
    write_ergodicity_csv(csv, rep);
    ctx.add_csv("averages.csv", csv.str());
    json obs = json::array();
    for (const auto& o : rep.observables) {
        obs.push_back({{"observable", o.name},
                       {"exact_mean", o.exact_mean},
                       {"sample_mean", o.sample_mean},
                       {"sample_std", o.sample_std},
                       {"mean_ok", o.mean_ok},
                       {"std_ok", o.std_ok},
                       {"pass", o.pass}});
    }
    results["conservativity_defect"] = rep.conservativity_defect;
    results["observables"] = obs;
    outcome.verdict = rep.pass ? Verdict::pass : Verdict::fail;
    int passed = 0;
    for (const auto& o : rep.observables) passed += o.pass ? 1 : 0;
    outcome.detail = std::to_string(passed) + " of " + std::to_string(rep.observables.size()) +
                     " observables equidistribute within tolerance";
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << text;
    if (!os) throw Error("cannot write " + path.string());
}

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "none";
    }
}

}  // namespace

std::string tool_version() { return ANOSOV_LAB_VERSION; }

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = {"verify-anosov",  "preimage-tree",   "dispersion", "dichotomy-scan",
                                                   "angle-decay",    "lyapunov-census", "quasi-iso",  "ergodic-test"};
    return names;
}

int exit_code(const RunOutcome& outcome) noexcept { return outcome.verdict == Verdict::fail ? 1 : 0; }

RunOutcome run(const RunRequest& request, std::ostream& log)
{
    std::ifstream in(request.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + request.config_path.string(), 0);
    std::ostringstream text;
    text << in.rdbuf();
    return run_text(request, text.str(), log);
}

RunOutcome run_text(const RunRequest& request, const std::string& config_text, std::ostream& log)
{
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), request.subcommand) == names.end()) {
        throw ConfigError("unknown subcommand '" + request.subcommand + "'", 0);
    }
    const Config cfg = Config::parse(config_text);
    validate(cfg);

    Context ctx{cfg, request.subcommand};
    ctx.config_hash = hex64(fnv1a64(config_text));
    {
        // Thread count and output location never influence results, so
        // they stay out of the parameter record.
        ParameterLog scratch;
        SectionReader run_section(cfg.section("run"), "run", scratch);
        ctx.threads = request.threads ? *request.threads
                                      : checked_int(run_section.integer("threads", 0), 0, "threads",
                                                    run_section.line_of("threads"));
        ctx.out = request.out ? *request.out : fs::path(run_section.text("out", "anosov-lab-out/" + request.subcommand));
    }
    SectionReader run_section = ctx.reader("run");
    if (run_section.has("seed")) {
        const long long s = run_section.integer("seed", 0);
        if (s < 0) throw ConfigError("'seed' must be non-negative", run_section.line_of("seed"));
        ctx.seed = static_cast<std::uint64_t>(s);
    }
    if (request.seed) ctx.seed = *request.seed;
    ctx.params.record("run.seed", std::to_string(ctx.seed));

    const SmoothEndo f = build_map(ctx);
    json results;
    RunOutcome outcome;
    outcome.out_dir = ctx.out;
    const std::string& sub = request.subcommand;
    if (sub == "verify-anosov") {
        verify_anosov(ctx, f, results, outcome);
    } else {
        require_hyperbolic(ctx, f, results);
        if (sub == "preimage-tree") preimage_tree(ctx, f, results, outcome);
        if (sub == "dispersion") census_scan(ctx, f, results, outcome, true);
        if (sub == "dichotomy-scan") census_scan(ctx, f, results, outcome, false);
        if (sub == "angle-decay") angle_decay_run(ctx, f, results, outcome);
        if (sub == "lyapunov-census") lyapunov_census_run(ctx, f, results, outcome);
        if (sub == "quasi-iso") quasi_iso_run(ctx, f, results, outcome);
        if (sub == "ergodic-test") ergodic_run(ctx, f, results, outcome);
    }

    json summary;
    summary["tool"] = "anosov-lab";
    summary["version"] = tool_version();
    summary["subcommand"] = sub;
    summary["config_hash"] = "fnv1a64:" + ctx.config_hash;
    summary["seed"] = ctx.seed;
    json params = json::object();
    for (const auto& [k, v] : ctx.params.entries()) params[k] = v;
    summary["parameters"] = params;
    summary["results"] = results;
    summary["verdict"] = verdict_name(outcome.verdict);
    summary["verdict_detail"] = outcome.detail;
    std::vector<std::string> files = {"config.txt", "summary.json"};
    for (const auto& [name, body] : ctx.csv_files) files.push_back(name);
    summary["files"] = files;

    fs::create_directories(ctx.out);
    write_text(ctx.out / "config.txt", config_text);
    write_text(ctx.out / "summary.json", summary.dump(2) + "\n");
    const auto header = ctx.header_lines();
    for (const auto& [name, body] : ctx.csv_files) {
        std::ostringstream os;
        CsvWriter w(os);
        for (const auto& line : header) w.comment(line);
        write_text(ctx.out / name, os.str() + body);
    }
    log << sub << ": " << verdict_name(outcome.verdict) << (outcome.detail.empty() ? "" : " (" + outcome.detail + ")")
        << "\n"
        << "outputs written to " << ctx.out.string() << "\n";
    return outcome;
}

}  // namespace anosov::lab
