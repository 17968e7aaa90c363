// qsep: construct measurement families, generate test states, evaluate the
// separability criteria, and sweep parametric state families.
//
// Exit codes: 0 success, 1 usage or failed validation, 2 parameter range /
// construction infeasibility, 3 I/O failure, 4 schema violation,
// 5 dimension mismatch.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "qsep/io.hpp"

namespace {

using namespace qsep;

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag) {
    if (seed_opt->count() > 0) return flag;
    if (const char* env = std::getenv("QSEP_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> dims;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            throw ParameterRange("cannot parse dimension '" + tok + "'");
        }
        if (pos != tok.size() || v < 1)
            throw ParameterRange("cannot parse dimension '" + tok + "'");
        dims.push_back(v);
    }
    if (dims.empty()) throw ParameterRange("empty dims list");
    return dims;
}

std::string dims_text(const std::vector<std::size_t>& dims) {
    std::ostringstream out;
    for (std::size_t i = 0; i < dims.size(); ++i)
        out << (i ? "," : "") << dims[i];
    return out.str();
}

// largest kappa / a the recipe supports at this dimension
double default_kappa(std::size_t d) {
    try {
        build_mums(d, 1.0);
        return 1.0;
    } catch (const ConstructionError& e) {
        return e.max_feasible;
    }
}

double default_a(std::size_t d) {
    const double cap = 1.0 / (static_cast<double>(d) * d);
    try {
        build_gsic(d, cap);
        return cap;
    } catch (const ConstructionError& e) {
        return e.max_feasible;
    }
}

struct LoadedFamilies {
    std::vector<MUMFamily> mums;
    std::vector<MUBFamily> mubs;
    std::vector<GSICPOVM> gsics;
};

LoadedFamilies load_families(const std::vector<std::string>& paths,
                             io::FileKind expected, io::Report& report) {
    LoadedFamilies out;
    for (const auto& path : paths) {
        const std::string text = io::read_file(path);
        report.inputs.push_back({path, io::digest(text)});
        const io::FileKind kind = io::peek_kind(text);
        if (kind != expected) {
            std::ostringstream msg;
            msg << path << ": expected a " << io::to_string(expected)
                << " document, found " << io::to_string(kind);
            throw SchemaError(msg.str());
        }
        switch (kind) {
            case io::FileKind::mum_family:
                out.mums.push_back(io::mum_from_json(text));
                break;
            case io::FileKind::mub_family:
                out.mubs.push_back(io::mub_from_json(text));
                break;
            case io::FileKind::gsic_povm:
                out.gsics.push_back(io::gsic_from_json(text));
                break;
            case io::FileKind::state:
                throw SchemaError(path + ": state document given as family");
        }
    }
    return out;
}

DensityMatrix load_state(const std::string& path, io::Report& report) {
    const std::string text = io::read_file(path);
    report.inputs.push_back({path, io::digest(text)});
    if (io::peek_kind(text) != io::FileKind::state)
        throw SchemaError(path + ": not a state document");
    return io::state_from_json(text);
}

void emit_report(const io::Report& report, const std::string& out_path) {
    const std::string text = io::report_to_json(report);
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file_atomic(out_path, text);
}

void print_result_line(const std::string& theorem, double lhs, double bound,
                       bool violated) {
    std::cout << theorem << ": lhs " << lhs << (violated ? " > " : " <= ")
              << "bound " << bound
              << (violated ? "  [VIOLATED: entanglement certified]"
                           : "  [not violated]")
              << "\n";
}

// ---------------------------------------------------------------------
// construct

int cmd_construct(const std::string& kind, std::size_t dim, double kappa,
                  bool kappa_set, double a, bool a_set,
                  const std::string& out) {
    std::string text;
    if (kind == "mub") {
        text = io::family_to_json(build_mubs(dim));
    } else if (kind == "mum") {
        const double k = kappa_set ? kappa : default_kappa(dim);
        text = io::family_to_json(build_mums(dim, k));
    } else if (kind == "gsic") {
        const double val = a_set ? a : default_a(dim);
        text = io::family_to_json(build_gsic(dim, val));
    } else {
        throw ParameterRange("unknown family kind: " + kind);
    }
    io::write_file_atomic(out, text);
    std::cout << "wrote " << kind << " family (dim " << dim << ") to " << out
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------
// validate

int cmd_validate(const std::string& path) {
    const std::string text = io::read_file(path);
    const io::FileKind kind = io::peek_kind(text);

    ValidationReport report;
    switch (kind) {
        case io::FileKind::state: {
            // loader applies the state invariants
            io::state_from_json(text);
            std::cout << "state: trace and positivity checks pass\n";
            return 0;
        }
        case io::FileKind::mum_family:
            report = validate_family(io::mum_from_json(text, false));
            break;
        case io::FileKind::mub_family:
            report = validate_family(io::mub_from_json(text, false));
            break;
        case io::FileKind::gsic_povm:
            report = validate_family(io::gsic_from_json(text, false));
            break;
    }
    for (const auto& e : report.entries)
        std::cout << (e.pass ? "  ok   " : "  FAIL ") << e.relation
                  << "  (residual " << e.max_residual << ", tolerance "
                  << e.tolerance << ")\n";
    std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? 0 : 1;
}

// ---------------------------------------------------------------------
// generate

int cmd_generate(const std::string& family, const std::string& dims,
                 double noise, std::size_t terms, std::uint64_t seed,
                 const std::string& out) {
    StateSpec spec;
    spec.family = state_family_from_string(family);
    spec.dims = parse_dims(dims);
    spec.noise = noise;
    spec.term_count = terms;
    spec.seed = seed;
    const DensityMatrix rho = generate(spec);
    io::write_file_atomic(out, io::state_to_json(rho, &spec));
    std::cout << "wrote " << family << " state on (" << dims_text(spec.dims)
              << ") to " << out << "\n";
    return 0;
}

// ---------------------------------------------------------------------
// evaluate & compare

struct EvalInputs {
    DensityMatrix rho;
    LoadedFamilies families;
};

int cmd_evaluate(const std::string& criterion, const std::string& state_path,
                 const std::vector<std::string>& family_paths,
                 const std::string& mode_name, const std::string& strategy_name,
                 std::uint64_t seed, bool timing, const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    io::Report report;
    report.seed = seed;

    const bool bipartite_criterion =
        criterion == "t1" || criterion == "t2" || criterion == "t2-mub" ||
        criterion == "t2-gsic" || criterion == "t3" || criterion == "sr";
    const bool multi_criterion = criterion == "t4" || criterion == "t4-mub" ||
                                 criterion == "t4-gsic";
    if (!bipartite_criterion && !multi_criterion)
        throw ParameterRange("unknown criterion: " + criterion);

    if (bipartite_criterion && family_paths.size() != 2)
        throw ParameterRange("bipartite criteria need exactly two families");
    if (multi_criterion && family_paths.size() < 2)
        throw ParameterRange("multipartite criteria need at least two families");

    const DensityMatrix rho = load_state(state_path, report);
    const Mode mode = mode_from_string(mode_name);
    const Strategy strategy = strategy_from_string(strategy_name);

    if (criterion == "t1" || criterion == "t2" || criterion == "t3" ||
        criterion == "sr") {
        const auto fams =
            load_families(family_paths, io::FileKind::mum_family, report);
        CriterionResult result;
        if (criterion == "t1")
            result = evaluate_th1(rho, fams.mums[0], fams.mums[1], mode);
        else if (criterion == "t2")
            result = evaluate_th2(rho, fams.mums[0], fams.mums[1], mode);
        else if (criterion == "t3")
            result = evaluate_th3(rho, fams.mums[0], fams.mums[1], mode);
        else
            result = evaluate_sr(rho, fams.mums[0], fams.mums[1], mode);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.bipartite.push_back(std::move(result));
        report.modes.push_back(to_string(mode));
    } else if (criterion == "t2-mub") {
        const auto fams =
            load_families(family_paths, io::FileKind::mub_family, report);
        auto result = evaluate_mub(rho, fams.mubs[0], fams.mubs[1], mode);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.bipartite.push_back(std::move(result));
        report.modes.push_back(to_string(mode));
    } else if (criterion == "t2-gsic") {
        const auto fams =
            load_families(family_paths, io::FileKind::gsic_povm, report);
        auto result = evaluate_gsic(rho, fams.gsics[0], fams.gsics[1], mode);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.bipartite.push_back(std::move(result));
        report.modes.push_back(to_string(mode));
    } else if (criterion == "t4") {
        const auto fams =
            load_families(family_paths, io::FileKind::mum_family, report);
        auto result = evaluate_th4(rho, fams.mums, strategy);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.multipartite.push_back(std::move(result));
    } else if (criterion == "t4-mub") {
        const auto fams =
            load_families(family_paths, io::FileKind::mub_family, report);
        auto result = evaluate_th4_mub(rho, fams.mubs, strategy);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.multipartite.push_back(std::move(result));
    } else {
        const auto fams =
            load_families(family_paths, io::FileKind::gsic_povm, report);
        auto result = evaluate_th4_gsic(rho, fams.gsics, strategy);
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.multipartite.push_back(std::move(result));
    }

    if (timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        report.timing_ms =
            std::chrono::duration<double, std::milli>(elapsed).count();
    }
    emit_report(report, out);
    return 0;
}

int cmd_compare(const std::string& state_path,
                const std::vector<std::string>& family_paths,
                const std::string& mode_name, std::uint64_t seed, bool timing,
                const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    io::Report report;
    report.seed = seed;
    if (family_paths.size() != 2)
        throw ParameterRange("compare needs exactly two MUM families");

    const DensityMatrix rho = load_state(state_path, report);
    const Mode mode = mode_from_string(mode_name);
    const auto fams =
        load_families(family_paths, io::FileKind::mum_family, report);

    for (auto result : {evaluate_th1(rho, fams.mums[0], fams.mums[1], mode),
                        evaluate_th2(rho, fams.mums[0], fams.mums[1], mode),
                        evaluate_sr(rho, fams.mums[0], fams.mums[1], mode)}) {
        print_result_line(result.theorem, result.lhs, result.bound,
                          result.violated);
        report.bipartite.push_back(std::move(result));
        report.modes.push_back(to_string(mode));
    }

    if (timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        report.timing_ms =
            std::chrono::duration<double, std::milli>(elapsed).count();
    }
    emit_report(report, out);
    return 0;
}

// ---------------------------------------------------------------------
// sweep

struct SweepPoint {
    double param = 0.0;
    std::vector<double> lhs;
    std::vector<double> bound;
    std::vector<bool> violated;
    bool ppt = true;
    double ppt_eig = 0.0;
};

struct SweepContext {
    StateSpec spec;
    std::vector<std::string> criteria;
    std::vector<MUMFamily> mums;    // [A, B] when needed
    std::vector<MUBFamily> mubs;
    std::vector<GSICPOVM> gsics;
    Mode mode = Mode::exact;
};

SweepPoint sweep_point(const SweepContext& ctx, double param) {
    StateSpec spec = ctx.spec;
    spec.noise = param;
    const DensityMatrix rho = generate(spec);

    SweepPoint point;
    point.param = param;
    for (const auto& criterion : ctx.criteria) {
        CriterionResult result;
        if (criterion == "t1")
            result = evaluate_th1(rho, ctx.mums[0], ctx.mums[1], ctx.mode);
        else if (criterion == "t2")
            result = evaluate_th2(rho, ctx.mums[0], ctx.mums[1], ctx.mode);
        else if (criterion == "t3")
            result = evaluate_th3(rho, ctx.mums[0], ctx.mums[1], ctx.mode);
        else if (criterion == "sr")
            result = evaluate_sr(rho, ctx.mums[0], ctx.mums[1], ctx.mode);
        else if (criterion == "t2-mub")
            result = evaluate_mub(rho, ctx.mubs[0], ctx.mubs[1], ctx.mode);
        else if (criterion == "t2-gsic")
            result = evaluate_gsic(rho, ctx.gsics[0], ctx.gsics[1], ctx.mode);
        else
            throw ParameterRange("sweep does not support criterion " +
                                 criterion);
        point.lhs.push_back(result.lhs);
        point.bound.push_back(result.bound);
        point.violated.push_back(result.violated);
    }
    const auto verdict = ppt_check(rho, {0});
    point.ppt = verdict.ppt;
    point.ppt_eig = verdict.min_eigenvalue;
    return point;
}

// refine a verdict flip inside [lo, hi] by bisection on the same evaluator
double refine_threshold(const SweepContext& ctx, std::size_t criterion_idx,
                        double lo, double hi, bool use_ppt) {
    for (int iter = 0; iter < 40 && hi - lo > 1e-9; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const SweepPoint p = sweep_point(ctx, mid);
        const bool fired = use_ppt ? !p.ppt : p.violated[criterion_idx];
        (fired ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

int cmd_sweep(const std::string& family, const std::string& dims_text_in,
              double from, double to, double step,
              const std::string& criteria_csv, double kappa_a, bool ka_set,
              double kappa_b, bool kb_set, double a_a, bool aa_set, double a_b,
              bool ab_set, const std::string& mode_name, std::uint64_t seed,
              const std::string& out) {
    SweepContext ctx;
    ctx.spec.family = state_family_from_string(family);
    ctx.spec.dims = parse_dims(dims_text_in);
    ctx.spec.seed = seed;
    ctx.mode = mode_from_string(mode_name);
    if (ctx.spec.dims.size() != 2)
        throw ParameterRange("sweep supports bipartite state families");

    std::stringstream ss(criteria_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ctx.criteria.push_back(tok);
    if (ctx.criteria.empty()) throw ParameterRange("no criteria given");

    if (step <= 0.0) throw ParameterRange("step must be positive");
    if (to < from) throw ParameterRange("empty parameter grid");

    const std::size_t d = ctx.spec.dims[0];
    const std::size_t dp = ctx.spec.dims[1];
    bool need_mum = false, need_mub = false, need_gsic = false;
    for (const auto& c : ctx.criteria) {
        need_mum = need_mum || c == "t1" || c == "t2" || c == "t3" || c == "sr";
        need_mub = need_mub || c == "t2-mub";
        need_gsic = need_gsic || c == "t2-gsic";
    }
    if (need_mum) {
        ctx.mums.push_back(build_mums(d, ka_set ? kappa_a : default_kappa(d)));
        ctx.mums.push_back(build_mums(dp, kb_set ? kappa_b : default_kappa(dp)));
    }
    if (need_mub) {
        ctx.mubs.push_back(build_mubs(d));
        ctx.mubs.push_back(build_mubs(dp));
    }
    if (need_gsic) {
        ctx.gsics.push_back(build_gsic(d, aa_set ? a_a : default_a(d)));
        ctx.gsics.push_back(build_gsic(dp, ab_set ? a_b : default_a(dp)));
    }

    std::vector<double> grid;
    for (double p = from; p <= to + 0.5 * step; p += step)
        grid.push_back(std::min(p, to));
    if (!grid.empty() && grid.size() >= 2 &&
        grid[grid.size() - 1] == grid[grid.size() - 2])
        grid.pop_back();

    // grid points are independent pure evaluations; fan out, then emit in
    // order so the file is deterministic
    std::vector<SweepPoint> points(grid.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> cursor{0};
    for (std::size_t w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = cursor.fetch_add(1); i < grid.size();
                 i = cursor.fetch_add(1))
                points[i] = sweep_point(ctx, grid[i]);
        }));
    for (auto& f : futures) f.get();

    std::ostringstream csv;
    csv << "param";
    for (const auto& c : ctx.criteria)
        csv << "," << c << "_lhs," << c << "_bound," << c << "_violated";
    csv << ",ppt,ppt_min_eig\n";
    for (const auto& p : points) {
        csv << p.param;
        for (std::size_t c = 0; c < ctx.criteria.size(); ++c)
            csv << "," << p.lhs[c] << "," << p.bound[c] << ","
                << (p.violated[c] ? 1 : 0);
        csv << "," << (p.ppt ? "PPT" : "NPT") << "," << p.ppt_eig << "\n";
    }

    // detection thresholds by sign-change bracketing plus bisection
    for (std::size_t c = 0; c < ctx.criteria.size(); ++c) {
        bool found = false;
        for (std::size_t i = 0; i + 1 < points.size() && !found; ++i)
            if (points[i].violated[c] != points[i + 1].violated[c]) {
                const double lo = points[i].violated[c] ? points[i + 1].param
                                                        : points[i].param;
                const double hi = points[i].violated[c] ? points[i].param
                                                        : points[i + 1].param;
                const double threshold = refine_threshold(
                    ctx, c, std::min(lo, hi), std::max(lo, hi), false);
                csv << "# threshold," << ctx.criteria[c] << "," << threshold
                    << "\n";
                found = true;
            }
        if (!found) csv << "# threshold," << ctx.criteria[c] << ",none\n";
    }
    bool ppt_found = false;
    for (std::size_t i = 0; i + 1 < points.size() && !ppt_found; ++i)
        if (points[i].ppt != points[i + 1].ppt) {
            const double threshold =
                refine_threshold(ctx, 0, points[i].param, points[i + 1].param,
                                 true);
            csv << "# threshold,ppt," << threshold << "\n";
            ppt_found = true;
        }
    if (!ppt_found) csv << "# threshold,ppt,none\n";

    io::write_file_atomic(out, csv.str());
    std::cout << "wrote " << points.size() << " grid rows to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement-based separability criteria toolkit"};
    app.set_version_flag("--version", std::string("qsep ") + kToolVersion);
    app.require_subcommand(1);

    // construct
    auto* construct =
        app.add_subcommand("construct", "Build a measurement family file");
    std::string c_kind;
    std::size_t c_dim = 2;
    double c_kappa = 0.0, c_a = 0.0;
    std::string c_out;
    construct->add_option("kind", c_kind, "mub | mum | gsic")->required();
    construct->add_option("--dim", c_dim, "subsystem dimension")->required();
    auto* c_kappa_opt =
        construct->add_option("--kappa", c_kappa, "MUM efficiency parameter");
    auto* c_a_opt =
        construct->add_option("--a", c_a, "GSIC efficiency parameter");
    construct->add_option("--out", c_out, "output path")->required();

    // validate
    auto* validate =
        app.add_subcommand("validate", "Re-check a family or state file");
    std::string v_path;
    validate->add_option("path", v_path, "document to validate")->required();

    // generate
    auto* generate_cmd =
        app.add_subcommand("generate", "Generate a parametric test state");
    std::string g_family, g_dims, g_out;
    double g_noise = 0.0;
    std::size_t g_terms = 0;
    std::uint64_t g_seed = 0;
    generate_cmd
        ->add_option("--family", g_family,
                     "pure-random | product | separable-mixture | isotropic "
                     "| embedded | ghz")
        ->required();
    generate_cmd->add_option("--dims", g_dims, "comma-separated dims, e.g. 2,3")
        ->required();
    generate_cmd->add_option("--p", g_noise, "noise weight p in [0,1]");
    generate_cmd->add_option("--terms", g_terms,
                             "separable-mixture term count (0 = total dim)");
    auto* g_seed_opt = generate_cmd->add_option("--seed", g_seed, "RNG seed");
    generate_cmd->add_option("--out", g_out, "output path")->required();

    // evaluate
    auto* evaluate =
        app.add_subcommand("evaluate", "Run one criterion on a state");
    std::string e_criterion, e_state, e_mode = "exact",
                e_strategy = "greedy", e_out;
    std::vector<std::string> e_families;
    std::uint64_t e_seed = 0;
    bool e_timing = false;
    evaluate
        ->add_option("--criterion", e_criterion,
                     "t1 | t2 | t2-mub | t2-gsic | t3 | sr | t4 | t4-mub | "
                     "t4-gsic")
        ->required();
    evaluate->add_option("--state", e_state, "state file")->required();
    evaluate->add_option("--families", e_families, "family files in party order")
        ->required()
        ->expected(-1);
    evaluate->add_option("--mode", e_mode, "exact | greedy (bipartite)");
    evaluate->add_option("--strategy", e_strategy,
                         "canonical | greedy | exhaustive (multipartite)");
    auto* e_seed_opt = evaluate->add_option("--seed", e_seed, "RNG seed");
    evaluate->add_flag("--timing", e_timing, "include timing_ms in the report");
    evaluate->add_option("--out", e_out, "report path (default: stdout)");

    // compare
    auto* compare = app.add_subcommand(
        "compare", "Evaluate T1, T2 and the prior bound side by side");
    std::string cp_state, cp_mode = "exact", cp_out;
    std::vector<std::string> cp_families;
    std::uint64_t cp_seed = 0;
    bool cp_timing = false;
    compare->add_option("--state", cp_state, "state file")->required();
    compare->add_option("--families", cp_families, "two MUM family files")
        ->required()
        ->expected(-1);
    compare->add_option("--mode", cp_mode, "exact | greedy");
    auto* cp_seed_opt = compare->add_option("--seed", cp_seed, "RNG seed");
    compare->add_flag("--timing", cp_timing, "include timing_ms in the report");
    compare->add_option("--out", cp_out, "report path (default: stdout)");

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "Evaluate criteria across a state-family parameter grid");
    std::string s_family = "isotropic", s_dims, s_criteria, s_mode = "exact",
                s_out;
    double s_from = 0.0, s_to = 1.0, s_step = 0.01;
    double s_kappa_a = 0.0, s_kappa_b = 0.0, s_a_a = 0.0, s_a_b = 0.0;
    std::uint64_t s_seed = 0;
    sweep->add_option("--state-family", s_family, "isotropic | embedded");
    sweep->add_option("--dims", s_dims, "comma-separated dims")->required();
    sweep->add_option("--from", s_from, "grid start");
    sweep->add_option("--to", s_to, "grid end");
    sweep->add_option("--step", s_step, "grid step");
    sweep
        ->add_option("--criteria", s_criteria,
                     "comma list of t1,t2,t3,sr,t2-mub,t2-gsic")
        ->required();
    auto* s_ka = sweep->add_option("--kappa-a", s_kappa_a, "A-side MUM kappa");
    auto* s_kb = sweep->add_option("--kappa-b", s_kappa_b, "B-side MUM kappa");
    auto* s_aa = sweep->add_option("--a-a", s_a_a, "A-side GSIC a");
    auto* s_ab = sweep->add_option("--a-b", s_a_b, "B-side GSIC a");
    sweep->add_option("--mode", s_mode, "exact | greedy");
    auto* s_seed_opt = sweep->add_option("--seed", s_seed, "RNG seed");
    sweep->add_option("--out", s_out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (construct->parsed())
            return cmd_construct(c_kind, c_dim, c_kappa,
                                 c_kappa_opt->count() > 0, c_a,
                                 c_a_opt->count() > 0, c_out);
        if (validate->parsed()) return cmd_validate(v_path);
        if (generate_cmd->parsed())
            return cmd_generate(g_family, g_dims, g_noise, g_terms,
                                resolve_seed(g_seed_opt, g_seed), g_out);
        if (evaluate->parsed())
            return cmd_evaluate(e_criterion, e_state, e_families, e_mode,
                                e_strategy, resolve_seed(e_seed_opt, e_seed),
                                e_timing, e_out);
        if (compare->parsed())
            return cmd_compare(cp_state, cp_families, cp_mode,
                               resolve_seed(cp_seed_opt, cp_seed), cp_timing,
                               cp_out);
        if (sweep->parsed())
            return cmd_sweep(s_family, s_dims, s_from, s_to, s_step,
                             s_criteria, s_kappa_a, s_ka->count() > 0,
                             s_kappa_b, s_kb->count() > 0, s_a_a,
                             s_aa->count() > 0, s_a_b, s_ab->count() > 0,
                             s_mode, resolve_seed(s_seed_opt, s_seed), s_out);
    } catch (const ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParameterRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
