// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned in code next to the check it gates.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "qsep/bipartite.hpp"
#include "qsep/index_bounds.hpp"
#include "qsep/io.hpp"
#include "qsep/multipartite.hpp"
#include "qsep/states.hpp"

using namespace qsep;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << idx << " ("
              << name << ")";
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double max_feasible_kappa(std::size_t d) {
    try {
        build_mums(d, 1.0);
        return 1.0;
    } catch (const ConstructionError& e) {
        return e.max_feasible;
    }
}

double feasible_kappa(std::size_t d, double fraction) {
    return 1.0 / d + (max_feasible_kappa(d) - 1.0 / d) * fraction;
}

double max_feasible_a(std::size_t d) {
    const double cap = 1.0 / (static_cast<double>(d) * d);
    try {
        build_gsic(d, cap);
        return cap;
    } catch (const ConstructionError& e) {
        return e.max_feasible;
    }
}

double feasible_a(std::size_t d, double fraction) {
    const double lo = 1.0 / (static_cast<double>(d) * d * d);
    return lo + (max_feasible_a(d) - lo) * fraction;
}

DensityMatrix separable_state(const std::vector<std::size_t>& dims,
                              std::uint64_t seed) {
    StateSpec spec;
    spec.family = StateFamily::separable_mixture;
    spec.dims = dims;
    spec.seed = seed;
    return generate(spec);
}

DensityMatrix isotropic(std::size_t d, double p) {
    StateSpec spec;
    spec.family = StateFamily::isotropic;
    spec.dims = {d, d};
    spec.noise = p;
    return generate(spec);
}

DensityMatrix maximally_mixed(std::vector<std::size_t> dims) {
    const std::size_t n = std::accumulate(dims.begin(), dims.end(),
                                          std::size_t{1}, std::multiplies<>());
    ComplexMatrix m = ComplexMatrix::identity(n);
    m *= cplx(1.0 / n);
    return DensityMatrix(std::move(dims), HermitianOperator(std::move(m)));
}

DensityMatrix bell_state() {
    StateSpec spec;
    spec.family = StateFamily::isotropic;
    spec.dims = {2, 2};
    spec.noise = 1.0;
    return generate(spec);
}

// ---------------------------------------------------------------------
// 1. measurement-family validation across dimensions and parameters

bool criterion1(std::string& detail) {
    std::ostringstream out;
    double worst_mub = 0.0, worst_mum = 0.0, worst_gsic = 0.0;
    for (std::size_t d : {2, 3, 5}) {
        const auto rep = validate_family(build_mubs(d));
        if (!rep.pass) {
            detail = "MUB validation failed at d=" + std::to_string(d);
            return false;
        }
        for (const auto& e : rep.entries)
            worst_mub = std::max(worst_mub, e.max_residual);
    }
    if (worst_mub >= 1e-10) {
        detail = "MUB residual " + std::to_string(worst_mub) + " >= 1e-10";
        return false;
    }

    for (std::size_t d = 2; d <= 6; ++d) {
        for (int i = 1; i <= 5; ++i) {
            const double kappa = feasible_kappa(d, i / 6.0);
            const auto rep = validate_family(build_mums(d, kappa));
            if (!rep.pass) {
                detail = "MUM validation failed at d=" + std::to_string(d);
                return false;
            }
            for (const auto& e : rep.entries)
                worst_mum = std::max(worst_mum, e.max_residual);

            const double a = feasible_a(d, i / 6.0);
            const auto grep = validate_family(build_gsic(d, a));
            if (!grep.pass) {
                detail = "GSIC validation failed at d=" + std::to_string(d);
                return false;
            }
            for (const auto& e : grep.entries)
                worst_gsic = std::max(worst_gsic, e.max_residual);
        }
    }
    if (worst_mum >= 1e-9 || worst_gsic >= 1e-9) {
        detail = "family residual above 1e-9";
        return false;
    }
    out << "max residuals: mub " << worst_mub << ", mum " << worst_mum
        << ", gsic " << worst_gsic;
    detail = out.str();
    return true;
}

// ---------------------------------------------------------------------
// 2. single-party index-sum inequality and GSIC identity

bool criterion2(std::string& detail) {
    Rng rng(20240001);
    std::size_t violations = 0;
    double worst_gap = 0.0;
    for (std::size_t d : {2, 3, 4, 5}) {
        const double kappa = feasible_kappa(d, 0.5);
        const auto mums = build_mums(d, kappa);
        const double a = feasible_a(d, 0.5);
        const auto gsic = build_gsic(d, a);
        for (int rep = 0; rep < 1000; ++rep) {
            const auto rho = random_density({d}, rng);
            const double lhs = mum_index_sum(mums, rho);
            const double bound =
                mum_index_bound(mums.count(), d, kappa, purity(rho));
            if (lhs > bound + 1e-9) ++violations;

            const double gap = std::abs(gsic_index_sum(gsic, rho) -
                                        gsic_index_value(a, d, purity(rho)));
            worst_gap = std::max(worst_gap, gap);
        }
    }
    std::ostringstream out;
    out << violations << " bound violations; worst GSIC identity gap "
        << worst_gap;
    detail = out.str();
    return violations == 0 && worst_gap <= 1e-9;
}

// ---------------------------------------------------------------------
// 3. exact assignment vs brute force

bool criterion3(std::string& detail) {
    std::mt19937_64 rng(20240003);
    for (int rep = 0; rep < 200; ++rep) {
        MatchingProblem problem;
        std::uniform_int_distribution<std::size_t> nA(1, 4), cap(1, 2);
        problem.n_left = nA(rng);
        problem.capacity = cap(rng);
        std::uniform_int_distribution<std::size_t> nB(
            problem.n_left * problem.capacity, 8);
        problem.n_right = nB(rng);
        problem.weights.resize(problem.n_left * problem.n_right);
        std::uniform_int_distribution<int> w(-9, 9);
        for (auto& x : problem.weights) x = w(rng);

        const auto exact = solve_exact(problem);
        double best = -1e300;
        for (const auto& m : enumerate_matchings(problem))
            best = std::max(best, m.value);
        if (exact.value != best) {  // integer weights: exact comparison
            std::ostringstream out;
            out << "instance " << rep << ": exact " << exact.value
                << " != enumerated " << best;
            detail = out.str();
            return false;
        }
    }
    detail = "200/200 instances match enumeration exactly";
    return true;
}

// ---------------------------------------------------------------------
// 4. soundness: separable mixtures never violate any criterion

struct TupleFamilies {
    std::vector<std::size_t> dims;
    std::vector<MUMFamily> mums;
    std::vector<MUBFamily> mubs;    // empty when a dim is non-prime
    std::vector<GSICPOVM> gsics;
};

TupleFamilies families_for(const std::vector<std::size_t>& dims) {
    TupleFamilies tf;
    tf.dims = dims;
    bool all_prime = true;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::size_t d = dims[i];
        tf.mums.push_back(build_mums(d, feasible_kappa(d, 0.5 + 0.05 * i)));
        tf.gsics.push_back(build_gsic(d, feasible_a(d, 0.5 + 0.05 * i)));
        all_prime = all_prime && is_prime(d);
    }
    if (all_prime)
        for (std::size_t d : dims) tf.mubs.push_back(build_mubs(d));
    return tf;
}

bool criterion4(std::string& detail) {
    const std::vector<std::vector<std::size_t>> tuples{
        {2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 5}, {2, 2, 2}, {2, 2, 3}};
    const int trials = 1000;
    std::size_t evaluations = 0, violations = 0;
    for (const auto& dims : tuples) {
        const TupleFamilies tf = families_for(dims);
        const bool bipartite = dims.size() == 2;
        for (int rep = 0; rep < trials; ++rep) {
            const auto rho =
                separable_state(dims, 40000 + rep);
            if (bipartite) {
                const auto t1 = evaluate_th1(rho, tf.mums[0], tf.mums[1]);
                const auto t2 = evaluate_th2(rho, tf.mums[0], tf.mums[1]);
                const auto t3 = evaluate_th3(rho, tf.mums[0], tf.mums[1]);
                const auto tg = evaluate_gsic(rho, tf.gsics[0], tf.gsics[1]);
                evaluations += 4;
                violations += t1.violated + t2.violated + t3.violated +
                              tg.violated;
                if (!tf.mubs.empty()) {
                    const auto tm = evaluate_mub(rho, tf.mubs[0], tf.mubs[1]);
                    ++evaluations;
                    violations += tm.violated;
                }
            }
            const auto t4 = evaluate_th4(rho, tf.mums, Strategy::greedy);
            const auto t4g =
                evaluate_th4_gsic(rho, tf.gsics, Strategy::greedy);
            evaluations += 2;
            violations += t4.violated + t4g.violated;
            if (!tf.mubs.empty()) {
                const auto t4m =
                    evaluate_th4_mub(rho, tf.mubs, Strategy::greedy);
                ++evaluations;
                violations += t4m.violated;
            }
        }
    }
    std::ostringstream out;
    out << violations << " violated verdicts in " << evaluations
        << " evaluations over " << trials << " states x " << tuples.size()
        << " tuples (MUB criteria skipped where a dimension is not prime)";
    detail = out.str();
    return violations == 0;
}

// ---------------------------------------------------------------------
// 5. isotropic d=3 detection threshold at p* = 1/4

bool criterion5(std::string& detail) {
    const auto mub = build_mubs(3);
    auto violated_at = [&](double p) {
        return evaluate_mub(isotropic(3, p), mub, mub).violated;
    };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        (violated_at(mid) ? hi : lo) = mid;
    }
    const double threshold = 0.5 * (lo + hi);

    // closed-form oracle: J(p) = p(d+1) + (1-p)(d+1)/d crosses 2 at 1/4
    const double expected = 0.25;
    const double j_probe = evaluate_mub(isotropic(3, 0.6), mub, mub).lhs;
    const double j_oracle = 0.6 * 4.0 + 0.4 * 4.0 / 3.0;

    double ppt_lo = 0.0, ppt_hi = 1.0;
    while (ppt_hi - ppt_lo > 1e-5) {
        const double mid = 0.5 * (ppt_lo + ppt_hi);
        (ppt_check(isotropic(3, mid), {0}).ppt ? ppt_lo : ppt_hi) = mid;
    }
    const double ppt_threshold = 0.5 * (ppt_lo + ppt_hi);

    std::ostringstream out;
    out << "criterion flips at " << threshold << ", PPT at " << ppt_threshold
        << " (expected 0.25)";
    detail = out.str();
    return std::abs(threshold - expected) <= 1e-4 &&
           std::abs(ppt_threshold - expected) <= 1e-4 &&
           std::abs(j_probe - j_oracle) <= 1e-9;
}

// ---------------------------------------------------------------------
// 6. bound arithmetic pins and ordering

bool criterion6(std::string& detail) {
    CriterionParams p;
    p.d = 2;
    p.d_prime = 4;
    p.M = 3;
    p.M_prime = 5;
    p.s = 2;
    p.t = 1;
    p.kappa1 = 1.0;
    p.kappa2 = 1.0;
    const double th1 = th1_bound(p);
    const double th2 = th2_bound(p);

    CriterionParams pe = p;
    pe.M_prime = 3;
    pe.t = 1;
    const double sr = sr_bound(pe);

    if (std::abs(th1 - 3.0) > 1e-6 || std::abs(th2 - 2.828427) > 1e-6 ||
        std::abs(sr - 3.5) > 1e-6) {
        std::ostringstream out;
        out << "pins off: th1 " << th1 << ", th2 " << th2 << ", sr " << sr;
        detail = out.str();
        return false;
    }

    std::mt19937_64 rng(20240006);
    std::uniform_int_distribution<std::size_t> dd(2, 6), mm(1, 7);
    std::uniform_real_distribution<double> frac(0.05, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        CriterionParams q;
        q.d = dd(rng);
        q.d_prime = q.d + rng() % (2 * q.d);
        q.M = mm(rng);
        q.M_prime = q.M;
        q.s = q.d_prime / q.d;
        q.t = 1;
        q.kappa1 = 1.0 / q.d + frac(rng) * (1.0 - 1.0 / q.d);
        q.kappa2 = 1.0 / q.d_prime + frac(rng) * (1.0 - 1.0 / q.d_prime);
        const double b2 = th2_bound(q), b1 = th1_bound(q), bs = sr_bound(q);
        const bool ordered = b2 <= b1 + 1e-12 && b1 <= bs + 1e-12;
        const bool strict = q.s < 2 || b1 < bs - 1e-12;
        if (!ordered || !strict) {
            detail = "ordering failed on a random tuple";
            return false;
        }
    }
    std::ostringstream out;
    out << "th1 " << std::setprecision(7) << th1 << ", th2 " << th2 << ", sr "
        << sr << "; ordering held on 100 tuples";
    detail = out.str();
    return true;
}

// ---------------------------------------------------------------------
// 7. per-selection dominance: T3 satisfied implies T1 satisfied

bool criterion7(std::string& detail) {
    Rng rng(20240007);
    std::mt19937_64 shuffler(20240007);
    std::size_t premise_fired = 0;
    for (const auto& dims : {std::vector<std::size_t>{2, 2},
                             std::vector<std::size_t>{2, 3}}) {
        const auto fam_a = build_mums(dims[0], feasible_kappa(dims[0], 0.7));
        const auto fam_b = build_mums(dims[1], feasible_kappa(dims[1], 0.6));
        const auto p = mum_params(fam_a, fam_b);
        for (int rep = 0; rep < 1000; ++rep) {
            const auto rho = random_density(dims, rng);
            Selection sel = canonical_selection(p.M, p.t, p.d, p.s);
            if (rep % 2 == 1) {
                // random admissible selection
                std::vector<std::size_t> meas(p.M_prime);
                std::iota(meas.begin(), meas.end(), 0);
                std::shuffle(meas.begin(), meas.end(), shuffler);
                std::size_t next = 0;
                for (std::size_t b = 0; b < p.M; ++b)
                    for (std::size_t q = 0; q < p.t; ++q)
                        sel.measurement_pairing.assigned[b][q] = meas[next++];
                std::vector<std::size_t> outs(p.d_prime);
                std::iota(outs.begin(), outs.end(), 0);
                for (auto& per_b : sel.outcome_pairing)
                    for (auto& matching : per_b) {
                        std::shuffle(outs.begin(), outs.end(), shuffler);
                        std::size_t at = 0;
                        for (auto& set : matching.assigned)
                            for (auto& o : set) o = outs[at++];
                    }
            }
            const auto t3 = evaluate_th3(rho, fam_a, fam_b, Mode::exact, &sel);
            if (t3.violated) continue;
            ++premise_fired;
            const double j_sel = selection_value(
                rho.mat(), rho.dims(), fam_a.povms, fam_b.povms, sel, false);
            if (j_sel > th1_bound(p) + tols().violation) {
                detail = "found T3-satisfied, T1-violated selection";
                return false;
            }
        }
    }
    std::ostringstream out;
    out << "no counterexample; T3 held on " << premise_fired
        << "/2000 selections";
    detail = out.str();
    return true;
}

// ---------------------------------------------------------------------
// 8. maximally entangled detection pins

bool criterion8(std::string& detail) {
    const auto mub = build_mubs(2);
    const auto detected = evaluate_mub(bell_state(), mub, mub);
    const auto mixed = evaluate_mub(maximally_mixed({2, 2}), mub, mub);
    std::ostringstream out;
    out << "Bell J " << std::setprecision(12) << detected.lhs << ", mixed J "
        << mixed.lhs;
    detail = out.str();
    return std::abs(detected.lhs - 3.0) <= 1e-9 && detected.violated &&
           std::abs(mixed.lhs - 1.5) <= 1e-12 && !mixed.violated;
}

// ---------------------------------------------------------------------
// 9. strategy ordering and greedy-vs-exhaustive rate on (2,2,2)

bool criterion9(std::string& detail) {
    const auto mub = build_mubs(2);
    const std::vector<MUBFamily> fams{mub, mub, mub};
    Rng rng(20240009);
    const int instances = 50;
    int reached = 0;
    for (int rep = 0; rep < instances; ++rep) {
        const auto rho = random_density({2, 2, 2}, rng);
        const double canonical =
            evaluate_th4_mub(rho, fams, Strategy::canonical).lhs;
        const double greedy = evaluate_th4_mub(rho, fams, Strategy::greedy).lhs;
        const double exhaustive =
            evaluate_th4_mub(rho, fams, Strategy::exhaustive).lhs;
        if (canonical > greedy + 1e-12 || greedy > exhaustive + 1e-12) {
            detail = "strategy ordering violated";
            return false;
        }
        if (greedy >= exhaustive - 1e-9) ++reached;
    }
    // measured once on this seeded instance set: 82%; pinned as the
    // regression floor (the rate is reported, ordering is the hard check)
    const double pinned_rate = 0.80;
    const double rate = static_cast<double>(reached) / instances;
    std::ostringstream out;
    out << "ordering held on " << instances << " instances; greedy reached "
        << "the exhaustive value on " << 100.0 * rate
        << "% (measured pin >= " << 100.0 * pinned_rate << "%)";
    detail = out.str();
    return rate >= pinned_rate;
}

// ---------------------------------------------------------------------
// 10. byte-identical reports through the CLI

struct Cmd {
    int code = -1;
};

Cmd run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(QSEP_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool criterion10(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "qsep_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path log = dir / "log.txt";
    auto at = [&](const char* name) { return (dir / name).string(); };

    if (run_cli("construct mub --dim 2 --out " + at("mub2.json"), log).code !=
        0) {
        detail = "construct failed";
        return false;
    }
    if (run_cli("generate --family separable-mixture --dims 2,2 --seed 31 "
                "--out " +
                    at("state.json"),
                log)
            .code != 0) {
        detail = "generate failed";
        return false;
    }
    const std::string eval = "evaluate --criterion t2-mub --state " +
                             at("state.json") + " --families " +
                             at("mub2.json") + " " + at("mub2.json") +
                             " --seed 42 --out ";
    if (run_cli(eval + at("r1.json"), log).code != 0 ||
        run_cli(eval + at("r2.json"), log).code != 0) {
        detail = "evaluate failed";
        return false;
    }
    if (slurp(dir / "r1.json") != slurp(dir / "r2.json")) {
        detail = "evaluate reports differ between reruns";
        return false;
    }

    const std::string sweep =
        "sweep --state-family isotropic --dims 2,2 --from 0 --to 0.6 --step "
        "0.1 --criteria t2-mub --seed 7 --out ";
    if (run_cli(sweep + at("s1.csv"), log).code != 0 ||
        run_cli(sweep + at("s2.csv"), log).code != 0) {
        detail = "sweep failed";
        return false;
    }
    if (slurp(dir / "s1.csv") != slurp(dir / "s2.csv")) {
        detail = "sweep outputs differ between reruns";
        return false;
    }

    const std::string regen = "generate --family separable-mixture --dims "
                              "2,2 --seed 31 --out ";
    if (run_cli(regen + at("state2.json"), log).code != 0 ||
        slurp(dir / "state.json") != slurp(dir / "state2.json")) {
        detail = "generated states differ between reruns";
        return false;
    }
    detail = "evaluate, sweep and generate outputs are byte-identical";
    return true;
}

template <typename Fn>
void run_criterion(int idx, const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ostringstream with_time;
    with_time << detail << " [" << std::fixed << std::setprecision(1) << secs
              << "s]";
    report(idx, name, pass, with_time.str());
}

}  // namespace

int main() {
    run_criterion(1, "measurement-family validation", criterion1);
    run_criterion(2, "index-sum inequality and GSIC identity", criterion2);
    run_criterion(3, "assignment exactness", criterion3);
    run_criterion(4, "separable soundness across all criteria", criterion4);
    run_criterion(5, "isotropic detection threshold", criterion5);
    run_criterion(6, "bound arithmetic pins and ordering", criterion6);
    run_criterion(7, "T3-to-T1 dominance per selection", criterion7);
    run_criterion(8, "maximally entangled detection", criterion8);
    run_criterion(9, "strategy ordering and greedy rate", criterion9);
    run_criterion(10, "reproducible CLI reports", criterion10);

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) +
                                        " CRITERIA FAILED")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
