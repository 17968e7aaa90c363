#include "qsep/multipartite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsep {

namespace {

constexpr unsigned long long kExhaustiveGuard = 1'000'000;
constexpr unsigned long long kSaturated =
    std::numeric_limits<unsigned long long>::max() / 4;

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

// P(n, k), saturating
unsigned long long arrangements(std::size_t n, std::size_t k) {
    unsigned long long out = 1;
    for (std::size_t i = 0; i < k; ++i) out = sat_mul(out, n - i);
    return out;
}

// lexicographic unranking of a k-permutation of {0..n-1}
std::vector<std::size_t> unrank_arrangement(std::size_t n, std::size_t k,
                                            unsigned long long rank) {
    std::vector<std::size_t> avail(n);
    for (std::size_t i = 0; i < n; ++i) avail[i] = i;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t pos = 0; pos < k; ++pos) {
        const unsigned long long block = arrangements(n - 1 - pos, k - 1 - pos);
        const std::size_t idx = static_cast<std::size_t>(rank / block);
        rank %= block;
        out.push_back(avail[idx]);
        avail.erase(avail.begin() + static_cast<long>(idx));
    }
    return out;
}

void check_party_count(std::size_t m) {
    if (m < 2)
        throw ParameterRange(
            "multipartite criteria need at least two parties");
}

void check_state(const DensityMatrix& rho,
                 const std::vector<std::size_t>& dims, const char* what) {
    if (rho.dims() != dims) {
        std::ostringstream msg;
        msg << what << ": state dims do not match the family dims";
        throw DimensionMismatch(msg.str());
    }
}

// Everything the strategies need, with the three theorem variants
// normalized to per-party POVM lists and slot counts.
struct Engine {
    std::vector<std::vector<POVM>> parties;
    MultipartiteParams p;
};

void validate_selection(const Engine& e, const MultiSelection& sel) {
    const auto& p = e.p;
    if (sel.parties.size() != p.m)
        throw DimensionMismatch("selection: wrong party count");
    for (std::size_t k = 0; k < p.m; ++k) {
        const auto& ps = sel.parties[k];
        if (ps.meas.size() != p.M || ps.outs.size() != p.M)
            throw DimensionMismatch("selection: wrong slot count");
        for (std::size_t j = 0; j < p.M; ++j) {
            if (ps.meas[j].size() != p.t[k] || ps.outs[j].size() != p.t[k])
                throw DimensionMismatch("selection: wrong per-slot width");
            for (std::size_t q = 0; q < p.t[k]; ++q) {
                if (ps.meas[j][q] >= e.parties[k].size())
                    throw DimensionMismatch("selection: measurement index");
                if (ps.outs[j][q].assigned.size() != p.outcome_slots)
                    throw DimensionMismatch("selection: outcome slot count");
            }
        }
    }
}

// A_k^{(j,i)} = sum_{q,p} selected element of party k
ComplexMatrix party_operator(const Engine& e, const PartySelection& ps,
                             std::size_t k, std::size_t j, std::size_t i) {
    const std::size_t dk = e.p.dims[k];
    ComplexMatrix op(dk, dk);
    for (std::size_t q = 0; q < e.p.t[k]; ++q) {
        const auto& povm = e.parties[k][ps.meas[j][q]];
        for (std::size_t o : ps.outs[j][q].assigned[i])
            op += povm.elements[o].mat();
    }
    return op;
}

double eval_selection(const Engine& e, const ComplexMatrix& rho_mat,
                      const MultiSelection& sel) {
    const auto& p = e.p;
    double total = 0.0;
    std::vector<std::size_t> dims;
    for (std::size_t j = 0; j < p.M; ++j)
        for (std::size_t i = 0; i < p.outcome_slots; ++i) {
            ComplexMatrix x = rho_mat;
            dims = p.dims;
            for (std::size_t k = p.m; k-- > 1;) {
                x = contract_last(x, dims,
                                  party_operator(e, sel.parties[k], k, j, i));
                dims.pop_back();
            }
            total += trace_pair(party_operator(e, sel.parties[0], 0, j, i), x);
        }
    return total;
}

// marginal operand seen by party k at term (j, i): all other parties
// contracted with their selected operators
ComplexMatrix party_environment(const Engine& e, const ComplexMatrix& rho_mat,
                                const MultiSelection& sel, std::size_t k,
                                std::size_t j, std::size_t i) {
    const auto& p = e.p;
    ComplexMatrix x = rho_mat;
    std::vector<std::size_t> dims = p.dims;
    for (std::size_t kk = p.m; kk-- > k + 1;) {
        x = contract_last(x, dims, party_operator(e, sel.parties[kk], kk, j, i));
        dims.pop_back();
    }
    for (std::size_t kk = 0; kk < k; ++kk) {
        std::vector<std::size_t> cur(dims.begin() + static_cast<long>(kk),
                                     dims.end());
        x = contract_first(x, cur, party_operator(e, sel.parties[kk], kk, j, i));
    }
    return x;
}

// Exact resolve of one party holding the others fixed. The objective is
// linear in this party's summed operators and the constraints decompose
// exactly as in the bipartite case: an outcome matching per candidate
// (slot, measurement) pair feeding one measurement-slot matching.
double resolve_party(const Engine& e, const ComplexMatrix& rho_mat,
                     MultiSelection& sel, std::size_t k) {
    const auto& p = e.p;
    const std::size_t slots = p.M * p.t[k];
    const std::size_t m_k = e.parties[k].size();

    std::vector<ComplexMatrix> env;
    env.reserve(p.M * p.outcome_slots);
    for (std::size_t j = 0; j < p.M; ++j)
        for (std::size_t i = 0; i < p.outcome_slots; ++i)
            env.push_back(party_environment(e, rho_mat, sel, k, j, i));

    // inner matchings per (j, mu); identical for every q at fixed j
    std::vector<std::vector<Matching>> inner(p.M, std::vector<Matching>(m_k));
    MatchingProblem outer;
    outer.n_left = slots;
    outer.n_right = m_k;
    outer.capacity = 1;
    outer.weights.resize(slots * m_k);
    for (std::size_t j = 0; j < p.M; ++j)
        for (std::size_t mu = 0; mu < m_k; ++mu) {
            MatchingProblem problem;
            problem.n_left = p.outcome_slots;
            problem.n_right = p.outcomes[k];
            problem.capacity = p.s[k];
            problem.weights.resize(problem.n_left * problem.n_right);
            for (std::size_t i = 0; i < p.outcome_slots; ++i)
                for (std::size_t o = 0; o < p.outcomes[k]; ++o)
                    problem.weights[i * p.outcomes[k] + o] = trace_pair(
                        e.parties[k][mu].elements[o].mat(),
                        env[j * p.outcome_slots + i]);
            inner[j][mu] = solve_exact(problem);
            for (std::size_t q = 0; q < p.t[k]; ++q)
                outer.weights[(j * p.t[k] + q) * m_k + mu] =
                    inner[j][mu].value;
        }

    const Matching chosen = solve_exact(outer);
    PartySelection ps;
    ps.meas.assign(p.M, std::vector<std::size_t>(p.t[k]));
    ps.outs.assign(p.M, std::vector<Matching>(p.t[k]));
    for (std::size_t j = 0; j < p.M; ++j)
        for (std::size_t q = 0; q < p.t[k]; ++q) {
            const std::size_t mu = chosen.assigned[j * p.t[k] + q].front();
            ps.meas[j][q] = mu;
            ps.outs[j][q] = inner[j][mu];
        }
    sel.parties[k] = std::move(ps);
    return chosen.value;
}

double greedy_ascent(const Engine& e, const ComplexMatrix& rho_mat,
                     MultiSelection& sel) {
    double best = eval_selection(e, rho_mat, sel);
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool improved = false;
        for (std::size_t k = 0; k < e.p.m; ++k) {
            MultiSelection candidate = sel;
            const double value = resolve_party(e, rho_mat, candidate, k);
            if (value > best + 1e-12) {
                sel = std::move(candidate);
                best = value;
                improved = true;
            }
        }
        if (!improved) break;
    }
    return best;
}

// candidate count for one party's selections
unsigned long long party_candidates(const MultipartiteParams& p,
                                    std::size_t m_k, std::size_t k) {
    const std::size_t slots = p.M * p.t[k];
    const unsigned long long meas = arrangements(m_k, slots);
    const unsigned long long outs =
        arrangements(p.outcomes[k], p.outcome_slots * p.s[k]);
    unsigned long long total = meas;
    for (std::size_t u = 0; u < slots; ++u) total = sat_mul(total, outs);
    return total;
}

PartySelection decode_party(const MultipartiteParams& p, std::size_t m_k,
                            std::size_t k, unsigned long long rank) {
    const std::size_t slots = p.M * p.t[k];
    const std::size_t picks = p.outcome_slots * p.s[k];
    const unsigned long long outs_count = arrangements(p.outcomes[k], picks);

    unsigned long long outs_block = 1;
    for (std::size_t u = 0; u < slots; ++u)
        outs_block = sat_mul(outs_block, outs_count);

    const unsigned long long meas_rank = rank / outs_block;
    unsigned long long rest = rank % outs_block;
    const auto meas_flat = unrank_arrangement(m_k, slots, meas_rank);

    PartySelection ps;
    ps.meas.assign(p.M, std::vector<std::size_t>(p.t[k]));
    ps.outs.assign(p.M, std::vector<Matching>(p.t[k]));
    for (std::size_t u = 0; u < slots; ++u) {
        unsigned long long remaining_block = 1;
        for (std::size_t v = u + 1; v < slots; ++v)
            remaining_block = sat_mul(remaining_block, outs_count);
        const unsigned long long o_rank = rest / remaining_block;
        rest %= remaining_block;

        const std::size_t j = u / p.t[k];
        const std::size_t q = u % p.t[k];
        ps.meas[j][q] = meas_flat[u];
        const auto flat = unrank_arrangement(p.outcomes[k], picks, o_rank);
        Matching matching;
        matching.assigned.resize(p.outcome_slots);
        for (std::size_t i = 0; i < p.outcome_slots; ++i)
            for (std::size_t pp = 0; pp < p.s[k]; ++pp)
                matching.assigned[i].push_back(flat[i * p.s[k] + pp]);
        ps.outs[j][q] = std::move(matching);
    }
    return ps;
}

// depth-first search over parties from last to first, carrying the
// per-term partial contractions so inner levels stay cheap
struct ExhaustiveState {
    const Engine* e;
    const MultipartiteParams* p;
    std::vector<unsigned long long> counts;
    MultiSelection current;
    MultiSelection best_sel;
    double best = -std::numeric_limits<double>::infinity();
};

void exhaustive_recurse(ExhaustiveState& st, std::size_t k,
                        const std::vector<ComplexMatrix>& partial,
                        const std::vector<std::size_t>& dims) {
    const auto& p = *st.p;
    const std::size_t terms = p.M * p.outcome_slots;
    for (unsigned long long rank = 0; rank < st.counts[k]; ++rank) {
        st.current.parties[k] =
            decode_party(p, st.e->parties[k].size(), k, rank);
        if (k == 0) {
            double total = 0.0;
            for (std::size_t j = 0; j < p.M; ++j)
                for (std::size_t i = 0; i < p.outcome_slots; ++i)
                    total += trace_pair(
                        party_operator(*st.e, st.current.parties[0], 0, j, i),
                        partial[j * p.outcome_slots + i]);
            if (total > st.best) {
                st.best = total;
                st.best_sel = st.current;
            }
            continue;
        }
        std::vector<ComplexMatrix> next(terms);
        for (std::size_t j = 0; j < p.M; ++j)
            for (std::size_t i = 0; i < p.outcome_slots; ++i) {
                const std::size_t idx = j * p.outcome_slots + i;
                next[idx] = contract_last(
                    partial[idx], dims,
                    party_operator(*st.e, st.current.parties[k], k, j, i));
            }
        std::vector<std::size_t> next_dims(dims.begin(), dims.end() - 1);
        exhaustive_recurse(st, k - 1, next, next_dims);
    }
}

double exhaustive_search(const Engine& e, const ComplexMatrix& rho_mat,
                         MultiSelection& sel) {
    const auto& p = e.p;
    ExhaustiveState st;
    st.e = &e;
    st.p = &p;
    unsigned long long total = 1;
    for (std::size_t k = 0; k < p.m; ++k) {
        st.counts.push_back(party_candidates(p, e.parties[k].size(), k));
        total = sat_mul(total, st.counts.back());
    }
    if (total > kExhaustiveGuard) {
        std::ostringstream msg;
        msg << "exhaustive strategy: selection count "
            << (total >= kSaturated ? std::string("overflows")
                                    : std::to_string(total))
            << " exceeds the guard of " << kExhaustiveGuard;
        throw ParameterRange(msg.str());
    }

    st.current.parties.resize(p.m);
    const std::size_t terms = p.M * p.outcome_slots;
    std::vector<ComplexMatrix> partial(terms, rho_mat);
    exhaustive_recurse(st, p.m - 1, partial, p.dims);
    sel = std::move(st.best_sel);
    return st.best;
}

double th4_bound_mean(const MultipartiteParams& p) {
    double prod = 1.0;
    for (std::size_t k = 0; k < p.m; ++k)
        prod *= static_cast<double>(p.s[k] * p.t[k]);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.m; ++k)
        sum += prod / static_cast<double>(p.s[k] * p.t[k]) *
               ((p.counts[k] - 1.0) / p.dims[k] + p.efficiency[k]);
    return sum / static_cast<double>(p.m);
}

// min over party pairs of prod * sqrt(f_a/div_a) * sqrt(f_b/div_b)
double pairwise_bound(const MultipartiteParams& p,
                      const std::vector<double>& factors,
                      const std::vector<double>& divisors) {
    double prod = 1.0;
    for (double g : divisors) prod *= g;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < p.m; ++a)
        for (std::size_t b = a + 1; b < p.m; ++b)
            best = std::min(best, prod * std::sqrt(factors[a] / divisors[a]) *
                                      std::sqrt(factors[b] / divisors[b]));
    return best;
}

void set_verdict(MultiCriterionResult& result) {
    result.violated = result.lhs - result.bound > tols().violation;
    result.marginal =
        std::abs(result.lhs - result.bound) <= tols().marginal_band;
}

MultiCriterionResult run_strategy(const Engine& e, const DensityMatrix& rho,
                                  Strategy strategy) {
    MultiCriterionResult result;
    result.params = e.p;
    result.strategy = strategy;
    result.selection = canonical_multi_selection(e.p);
    validate_selection(e, result.selection);
    switch (strategy) {
        case Strategy::canonical:
            result.lhs = eval_selection(e, rho.mat(), result.selection);
            break;
        case Strategy::greedy:
            result.lhs = greedy_ascent(e, rho.mat(), result.selection);
            break;
        case Strategy::exhaustive:
            result.lhs = exhaustive_search(e, rho.mat(), result.selection);
            break;
    }
    return result;
}

}  // namespace

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::canonical: return "canonical";
        case Strategy::greedy: return "greedy";
        case Strategy::exhaustive: return "exhaustive";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "canonical") return Strategy::canonical;
    if (name == "greedy") return Strategy::greedy;
    if (name == "exhaustive") return Strategy::exhaustive;
    throw ParameterRange("unknown strategy: " + name);
}

MultipartiteParams th4_params(const std::vector<MUMFamily>& families) {
    check_party_count(families.size());
    MultipartiteParams p;
    p.kind = CriterionParams::Kind::mum;
    p.m = families.size();
    for (const auto& fam : families) {
        p.dims.push_back(fam.dim);
        p.counts.push_back(fam.count());
        p.efficiency.push_back(fam.kappa);
    }
    p.d = *std::min_element(p.dims.begin(), p.dims.end());
    p.M = *std::min_element(p.counts.begin(), p.counts.end());
    p.outcome_slots = p.d;
    for (std::size_t k = 0; k < p.m; ++k) {
        p.outcomes.push_back(p.dims[k]);
        p.s.push_back(p.dims[k] / p.d);
        p.r1.push_back(p.dims[k] % p.d);
        p.t.push_back(p.counts[k] / p.M);
        p.r2.push_back(p.counts[k] % p.M);
    }
    return p;
}

MultipartiteParams th4_mub_params(const std::vector<MUBFamily>& families) {
    check_party_count(families.size());
    MultipartiteParams p;
    p.kind = CriterionParams::Kind::mub;
    p.m = families.size();
    for (const auto& fam : families) {
        p.dims.push_back(fam.dim);
        p.counts.push_back(fam.count());
        p.efficiency.push_back(1.0);
    }
    p.d = *std::min_element(p.dims.begin(), p.dims.end());
    p.M = *std::min_element(p.counts.begin(), p.counts.end());
    p.outcome_slots = p.d;
    for (std::size_t k = 0; k < p.m; ++k) {
        p.outcomes.push_back(p.dims[k]);
        p.s.push_back(p.dims[k] / p.d);
        p.r1.push_back(p.dims[k] % p.d);
        p.t.push_back(p.counts[k] / p.M);
        p.r2.push_back(p.counts[k] % p.M);
    }
    return p;
}

MultipartiteParams th4_gsic_params(const std::vector<GSICPOVM>& povms) {
    check_party_count(povms.size());
    MultipartiteParams p;
    p.kind = CriterionParams::Kind::gsic;
    p.m = povms.size();
    for (const auto& povm : povms) {
        p.dims.push_back(povm.dim);
        p.counts.push_back(1);
        p.efficiency.push_back(povm.a);
    }
    p.d = *std::min_element(p.dims.begin(), p.dims.end());
    p.M = 1;
    p.outcome_slots = p.d * p.d;
    for (std::size_t k = 0; k < p.m; ++k) {
        p.outcomes.push_back(p.dims[k] * p.dims[k]);
        // squared-dimension divisor relation, d = min_k d_k
        p.s.push_back((p.dims[k] * p.dims[k]) / (p.d * p.d));
        p.r1.push_back((p.dims[k] * p.dims[k]) % (p.d * p.d));
        p.t.push_back(1);
        p.r2.push_back(0);
    }
    return p;
}

MultiSelection canonical_multi_selection(const MultipartiteParams& p) {
    MultiSelection sel;
    sel.parties.resize(p.m);
    for (std::size_t k = 0; k < p.m; ++k) {
        PartySelection ps;
        ps.meas.assign(p.M, std::vector<std::size_t>(p.t[k]));
        ps.outs.assign(p.M, std::vector<Matching>(p.t[k]));
        Matching outcomes;
        outcomes.assigned.resize(p.outcome_slots);
        for (std::size_t i = 0; i < p.outcome_slots; ++i)
            for (std::size_t pp = 0; pp < p.s[k]; ++pp)
                outcomes.assigned[i].push_back(i * p.s[k] + pp);
        for (std::size_t j = 0; j < p.M; ++j)
            for (std::size_t q = 0; q < p.t[k]; ++q) {
                ps.meas[j][q] = j * p.t[k] + q;
                ps.outs[j][q] = outcomes;
            }
        sel.parties[k] = std::move(ps);
    }
    return sel;
}

double multi_selection_value(const DensityMatrix& rho,
                             const std::vector<std::vector<POVM>>& parties,
                             const MultipartiteParams& params,
                             const MultiSelection& sel) {
    check_state(rho, params.dims, "multi_selection_value");
    Engine e{parties, params};
    validate_selection(e, sel);
    return eval_selection(e, rho.mat(), sel);
}

MultiCriterionResult evaluate_th4(const DensityMatrix& rho,
                                  const std::vector<MUMFamily>& families,
                                  Strategy strategy) {
    const auto p = th4_params(families);
    check_state(rho, p.dims, "evaluate_th4");
    Engine e;
    e.p = p;
    for (const auto& fam : families) e.parties.push_back(fam.povms);

    MultiCriterionResult result = run_strategy(e, rho, strategy);
    result.theorem = "T4";
    result.bound1 = th4_bound_mean(p);
    std::vector<double> factors, divisors;
    for (std::size_t k = 0; k < p.m; ++k) {
        factors.push_back((p.counts[k] - 1.0) / p.dims[k] + p.efficiency[k]);
        divisors.push_back(static_cast<double>(p.s[k] * p.t[k]));
    }
    result.bound2 = pairwise_bound(p, factors, divisors);
    result.bound = std::min(result.bound1, result.bound2);
    set_verdict(result);
    return result;
}

MultiCriterionResult evaluate_th4_mub(const DensityMatrix& rho,
                                      const std::vector<MUBFamily>& families,
                                      Strategy strategy) {
    const auto p = th4_mub_params(families);
    check_state(rho, p.dims, "evaluate_th4_mub");
    Engine e;
    e.p = p;
    for (const auto& fam : families) e.parties.push_back(povms_from_mub(fam));

    MultiCriterionResult result = run_strategy(e, rho, strategy);
    result.theorem = "T4-MUB";
    std::vector<double> factors, divisors;
    for (std::size_t k = 0; k < p.m; ++k) {
        factors.push_back(1.0 + (p.counts[k] - 1.0) / p.dims[k]);
        divisors.push_back(static_cast<double>(p.s[k] * p.t[k]));
    }
    result.bound2 = pairwise_bound(p, factors, divisors);
    result.bound1 = result.bound2;
    result.bound = result.bound2;
    set_verdict(result);
    return result;
}

MultiCriterionResult evaluate_th4_gsic(const DensityMatrix& rho,
                                       const std::vector<GSICPOVM>& povms,
                                       Strategy strategy) {
    const auto p = th4_gsic_params(povms);
    check_state(rho, p.dims, "evaluate_th4_gsic");
    Engine e;
    e.p = p;
    for (const auto& povm : povms)
        e.parties.push_back({POVM{povm.dim, povm.elements}});

    MultiCriterionResult result = run_strategy(e, rho, strategy);
    result.theorem = "T4-GSIC";
    std::vector<double> factors, divisors;
    for (std::size_t k = 0; k < p.m; ++k) {
        const double dk = static_cast<double>(p.dims[k]);
        factors.push_back((p.efficiency[k] * dk * dk + 1.0) /
                          (dk * (dk + 1.0)));
        divisors.push_back(static_cast<double>(p.s[k]));
    }
    result.bound2 = pairwise_bound(p, factors, divisors);
    result.bound1 = result.bound2;
    result.bound = result.bound2;
    set_verdict(result);
    result.notes.push_back(
        "divisor relations read as d_k^2 = s_k d^2 + r_k with d = min_k d_k");
    return result;
}

}  // namespace qsep
