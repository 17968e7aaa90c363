#include "qsep/measurements.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace qsep {

namespace {

constexpr double kSpreadTolerance = 1e-8;

// smallest eigenvalue across a set of would-be POVM elements
double family_min_eigenvalue(const std::vector<ComplexMatrix>& elements) {
    double lo = 0.0;
    bool first = true;
    for (const auto& m : elements) {
        const double e = min_eigenvalue(HermitianOperator(m));
        lo = first ? e : std::min(lo, e);
        first = false;
    }
    return lo;
}

std::vector<ComplexMatrix> mum_elements_at(const OperatorBasis& basis,
                                           std::size_t d, double kappa) {
    const double root = std::sqrt(static_cast<double>(d));
    const double t = std::sqrt((kappa - 1.0 / d) /
                               ((d - 1) * (1.0 + root) * (1.0 + root)));
    std::vector<ComplexMatrix> out;
    out.reserve((d + 1) * d);
    for (std::size_t b = 0; b <= d; ++b) {
        ComplexMatrix block_sum(d, d);
        for (std::size_t n = 0; n + 1 < d; ++n)
            block_sum += basis.ops[b * (d - 1) + n];
        for (std::size_t n = 0; n < d; ++n) {
            ComplexMatrix f = block_sum;
            if (n + 1 < d) {
                ComplexMatrix scaled = basis.ops[b * (d - 1) + n];
                scaled *= cplx(d + root);
                f -= scaled;
            } else {
                f *= cplx(root + 1.0);
            }
            f *= cplx(t);
            ComplexMatrix p = ComplexMatrix::identity(d);
            p *= cplx(1.0 / d);
            p += f;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<ComplexMatrix> gsic_elements_at(const OperatorBasis& basis,
                                            std::size_t d, double a) {
    const std::size_t n_ops = d * d;
    const double t = std::sqrt((a - 1.0 / (d * d * d)) /
                               ((d + 1.0) * (d + 1.0) * (n_ops - 1)));
    ComplexMatrix f_sum(d, d);
    for (const auto& f : basis.ops) f_sum += f;

    std::vector<ComplexMatrix> out;
    out.reserve(n_ops);
    for (std::size_t alpha = 0; alpha < n_ops; ++alpha) {
        ComplexMatrix g = f_sum;
        if (alpha + 1 < n_ops) {
            ComplexMatrix scaled = basis.ops[alpha];
            scaled *= cplx(static_cast<double>(d) * (d + 1.0));
            g -= scaled;
        } else {
            g *= cplx(d + 1.0);
        }
        g *= cplx(t);
        ComplexMatrix p = ComplexMatrix::identity(d);
        p *= cplx(1.0 / static_cast<double>(d * d));
        p += g;
        out.push_back(std::move(p));
    }
    return out;
}

// Largest parameter in (lo, hi] whose construction stays PSD, to the
// bisection tolerance. `make` maps a parameter to candidate elements.
double max_feasible_parameter(
    double lo, double hi,
    const std::function<std::vector<ComplexMatrix>(double)>& make) {
    double good = lo;
    double bad = hi;
    while (bad - good > tols().bisection) {
        const double mid = 0.5 * (good + bad);
        if (family_min_eigenvalue(make(mid)) >= -tols().psd_slack)
            good = mid;
        else
            bad = mid;
    }
    return good;
}

void check_all_psd(
    const std::vector<ComplexMatrix>& elements, const char* what, double lo,
    double requested,
    const std::function<std::vector<ComplexMatrix>(double)>& make) {
    if (family_min_eigenvalue(elements) >= -tols().psd_slack) return;
    const double feasible = max_feasible_parameter(lo, requested, make);
    std::ostringstream msg;
    msg << what << ": requested parameter " << requested
        << " yields non-PSD operators; maximum feasible is about " << feasible;
    throw ConstructionError(msg.str(), feasible);
}

template <typename Family>
void require_pass(const Family& family, const char* what) {
    const ValidationReport report = validate_family(family);
    if (report.pass) return;
    std::ostringstream msg;
    msg << what << ": constructed family failed validation:";
    for (const auto& e : report.entries)
        if (!e.pass)
            msg << " [" << e.relation << " residual " << e.max_residual << "]";
    throw Error(msg.str());
}

}  // namespace

bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

OperatorBasis gell_mann_basis(std::size_t d) {
    if (d < 2) throw ParameterRange("gell_mann_basis: d must be >= 2");
    OperatorBasis basis;
    basis.dim = d;
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m(j, k) = inv_rt2;
            m(k, j) = inv_rt2;
            basis.ops.push_back(std::move(m));
        }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
            ComplexMatrix m(d, d);
            m(j, k) = cplx(0.0, -inv_rt2);
            m(k, j) = cplx(0.0, inv_rt2);
            basis.ops.push_back(std::move(m));
        }
    for (std::size_t l = 1; l < d; ++l) {
        ComplexMatrix m(d, d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (std::size_t j = 0; j < l; ++j) m(j, j) = norm;
        m(l, l) = -norm * static_cast<double>(l);
        basis.ops.push_back(std::move(m));
    }
    return basis;
}

MUBFamily build_mubs(std::size_t d) {
    if (!is_prime(d)) {
        std::ostringstream msg;
        msg << "build_mubs: unsupported dimension " << d
            << " (prime dimensions only)";
        throw ParameterRange(msg.str());
    }

    MUBFamily family;
    family.dim = d;

    auto computational = [&] {
        std::vector<std::vector<cplx>> basis(d, std::vector<cplx>(d));
        for (std::size_t i = 0; i < d; ++i) basis[i][i] = 1.0;
        return basis;
    };

    if (d == 2) {
        const double s = 1.0 / std::sqrt(2.0);
        family.bases = {computational(),
                        {{s, s}, {s, -s}},
                        {{s, cplx(0, s)}, {s, cplx(0, -s)}}};
    } else {
        family.bases.push_back(computational());
        const double inv_rt = 1.0 / std::sqrt(static_cast<double>(d));
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<std::vector<cplx>> basis(d, std::vector<cplx>(d));
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t m = 0; m < d; ++m) {
                    const std::size_t phase = (k * m * m + j * m) % d;
                    basis[j][m] =
                        std::polar(inv_rt, 2.0 * std::numbers::pi * phase / d);
                }
            family.bases.push_back(std::move(basis));
        }
    }

    require_pass(family, "build_mubs");
    return family;
}

MUMFamily build_mums(std::size_t d, double kappa) {
    if (d < 2) throw ParameterRange("build_mums: d must be >= 2");
    if (!(kappa > 1.0 / d) || kappa > 1.0) {
        std::ostringstream msg;
        msg << "build_mums: kappa " << kappa << " outside (1/" << d << ", 1]";
        throw ParameterRange(msg.str());
    }

    const OperatorBasis basis = gell_mann_basis(d);
    auto make = [&](double k) { return mum_elements_at(basis, d, k); };
    auto elements = make(kappa);
    check_all_psd(elements, "build_mums", 1.0 / d, kappa, make);

    MUMFamily family;
    family.dim = d;
    family.kappa = kappa;
    for (std::size_t b = 0; b <= d; ++b) {
        POVM povm;
        povm.dim = d;
        for (std::size_t n = 0; n < d; ++n)
            povm.elements.emplace_back(std::move(elements[b * d + n]));
        family.povms.push_back(std::move(povm));
    }

    require_pass(family, "build_mums");
    return family;
}

GSICPOVM build_gsic(std::size_t d, double a) {
    if (d < 2) throw ParameterRange("build_gsic: d must be >= 2");
    const double lo = 1.0 / (static_cast<double>(d) * d * d);
    const double hi = 1.0 / (static_cast<double>(d) * d);
    if (!(a > lo) || a > hi) {
        std::ostringstream msg;
        msg << "build_gsic: a " << a << " outside (1/d^3, 1/d^2] = (" << lo
            << ", " << hi << "]";
        throw ParameterRange(msg.str());
    }

    const OperatorBasis basis = gell_mann_basis(d);
    auto make = [&](double p) { return gsic_elements_at(basis, d, p); };
    auto elements = make(a);
    check_all_psd(elements, "build_gsic", lo, a, make);

    GSICPOVM povm;
    povm.dim = d;
    povm.a = a;
    for (auto& m : elements) povm.elements.emplace_back(std::move(m));

    require_pass(povm, "build_gsic");
    return povm;
}

void ValidationReport::add(std::string relation, double residual,
                           double tolerance) {
    const bool ok = residual <= tolerance;
    entries.push_back({std::move(relation), residual, tolerance, ok});
    pass = pass && ok;
}

ValidationReport validate_family(const MUMFamily& family) {
    ValidationReport report;
    const std::size_t d = family.dim;
    const std::size_t m_count = family.count();
    const auto& tol = tols();

    if (d < 2 || m_count == 0) {
        report.add("structure: d >= 2 and at least one POVM", 1.0, 0.0);
        return report;
    }
    double shape = 0.0;
    for (const auto& povm : family.povms)
        if (povm.dim != d || povm.elements.size() != d) shape = 1.0;
    report.add("structure: each POVM has d elements of dimension d", shape,
               0.0);
    if (shape > 0.0) return report;

    const bool kappa_in_range = family.kappa > 1.0 / d && family.kappa <= 1.0;
    report.add("kappa in (1/d, 1]", kappa_in_range ? 0.0 : 1.0, 0.0);

    double completeness = 0.0, psd = 0.0, unit_trace = 0.0;
    for (const auto& povm : family.povms) {
        ComplexMatrix sum(d, d);
        for (const auto& p : povm.elements) {
            sum += p.mat();
            psd = std::max(psd, -min_eigenvalue(p));
            unit_trace =
                std::max(unit_trace, std::abs(p.mat().trace().real() - 1.0));
        }
        sum -= ComplexMatrix::identity(d);
        completeness = std::max(completeness, sum.max_abs());
    }
    report.add("completeness: sum of elements = I", completeness,
               tol.hermiticity);
    report.add("positivity: min eigenvalue >= 0", psd, tol.psd_slack);
    report.add("unit trace: Tr(P) = 1", unit_trace, tol.trace_slack);

    const double offdiag_target = (1.0 - family.kappa) / (d - 1);
    double same_residual = 0.0, cross_residual = 0.0;
    for (std::size_t b = 0; b < m_count; ++b)
        for (std::size_t bp = b; bp < m_count; ++bp)
            for (std::size_t n = 0; n < d; ++n)
                for (std::size_t np = (b == bp ? n : 0); np < d; ++np) {
                    const double val = hs_inner(family.povms[b].elements[n],
                                                family.povms[bp].elements[np]);
                    if (b == bp) {
                        const double target =
                            (n == np) ? family.kappa : offdiag_target;
                        same_residual =
                            std::max(same_residual, std::abs(val - target));
                    } else {
                        cross_residual =
                            std::max(cross_residual, std::abs(val - 1.0 / d));
                    }
                }
    report.add("intra-POVM traces: Tr(P_n P_n') matches kappa profile",
               same_residual, tol.relation);
    report.add("cross-POVM traces: Tr(P_n P_n') = 1/d", cross_residual,
               tol.relation);
    return report;
}

ValidationReport validate_family(const MUBFamily& family) {
    ValidationReport report;
    const std::size_t d = family.dim;
    const auto& tol = tols();

    double shape = 0.0;
    for (const auto& basis : family.bases) {
        if (basis.size() != d) shape = 1.0;
        for (const auto& v : basis)
            if (v.size() != d) shape = 1.0;
    }
    report.add("structure: square bases of dimension d", shape, 0.0);
    if (shape > 0.0) return report;

    auto overlap = [](const std::vector<cplx>& u, const std::vector<cplx>& v) {
        cplx s = 0.0;
        for (std::size_t m = 0; m < u.size(); ++m) s += std::conj(u[m]) * v[m];
        return s;
    };

    double ortho = 0.0, unbiased = 0.0;
    for (std::size_t k = 0; k < family.count(); ++k)
        for (std::size_t l = k; l < family.count(); ++l)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = (k == l ? i : 0); j < d; ++j) {
                    const cplx s =
                        overlap(family.bases[k][i], family.bases[l][j]);
                    if (k == l) {
                        const double target = (i == j) ? 1.0 : 0.0;
                        ortho = std::max(ortho, std::abs(std::abs(s) - target));
                    } else {
                        unbiased = std::max(unbiased,
                                            std::abs(std::norm(s) - 1.0 / d));
                    }
                }
    report.add("orthonormality within each basis", ortho, tol.hermiticity);
    report.add("unbiasedness: |<sigma|tau>|^2 = 1/d across bases", unbiased,
               tol.relation);
    return report;
}

ValidationReport validate_family(const GSICPOVM& povm) {
    ValidationReport report;
    const std::size_t d = povm.dim;
    const auto& tol = tols();

    const bool shape_ok = d >= 2 && povm.elements.size() == d * d;
    report.add("structure: d^2 elements", shape_ok ? 0.0 : 1.0, 0.0);
    if (!shape_ok) return report;

    const double lo = 1.0 / (static_cast<double>(d) * d * d);
    const bool a_in_range =
        povm.a > lo && povm.a <= 1.0 / static_cast<double>(d * d) + 1e-15;
    report.add("a in (1/d^3, 1/d^2]", a_in_range ? 0.0 : 1.0, 0.0);

    ComplexMatrix sum(d, d);
    double psd = 0.0, trace_residual = 0.0;
    for (const auto& p : povm.elements) {
        sum += p.mat();
        psd = std::max(psd, -min_eigenvalue(p));
        trace_residual = std::max(trace_residual,
                                  std::abs(p.mat().trace().real() - 1.0 / d));
    }
    sum -= ComplexMatrix::identity(d);
    report.add("completeness: sum of elements = I", sum.max_abs(),
               tol.hermiticity);
    report.add("positivity: min eigenvalue >= 0", psd, tol.psd_slack);
    report.add("trace: Tr(P) = 1/d", trace_residual, tol.relation);

    const double offdiag_target =
        (1.0 - d * povm.a) / (static_cast<double>(d) * (d * d - 1));
    double diag_residual = 0.0, offdiag_residual = 0.0;
    for (std::size_t n = 0; n < povm.elements.size(); ++n)
        for (std::size_t m = n; m < povm.elements.size(); ++m) {
            const double val = hs_inner(povm.elements[n], povm.elements[m]);
            if (n == m)
                diag_residual =
                    std::max(diag_residual, std::abs(val - povm.a));
            else
                offdiag_residual =
                    std::max(offdiag_residual, std::abs(val - offdiag_target));
        }
    report.add("purity: Tr(P^2) = a", diag_residual, tol.relation);
    report.add("pairwise: Tr(P_n P_m) = (1-da)/(d(d^2-1))", offdiag_residual,
               tol.relation);
    return report;
}

namespace {

double mean_with_spread(const std::vector<double>& values, const char* what) {
    double lo = values.front(), hi = values.front(), sum = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    if (hi - lo > kSpreadTolerance) {
        std::ostringstream msg;
        msg << what << ": Tr(P^2) spread " << (hi - lo)
            << " exceeds tolerance (inconsistent family)";
        throw Error(msg.str());
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace

double measured_kappa(const MUMFamily& family) {
    if (family.povms.empty()) throw Error("measured_kappa: empty family");
    std::vector<double> values;
    for (const auto& povm : family.povms)
        for (const auto& p : povm.elements) values.push_back(hs_inner(p, p));
    return mean_with_spread(values, "measured_kappa");
}

double measured_a(const GSICPOVM& povm) {
    if (povm.elements.empty()) throw Error("measured_a: empty POVM");
    std::vector<double> values;
    for (const auto& p : povm.elements) values.push_back(hs_inner(p, p));
    return mean_with_spread(values, "measured_a");
}

std::vector<POVM> povms_from_mub(const MUBFamily& family) {
    std::vector<POVM> out;
    out.reserve(family.count());
    for (const auto& basis : family.bases) {
        POVM povm;
        povm.dim = family.dim;
        for (const auto& v : basis) {
            ComplexMatrix proj(family.dim, family.dim);
            for (std::size_t i = 0; i < family.dim; ++i)
                for (std::size_t j = 0; j < family.dim; ++j)
                    proj(i, j) = v[i] * std::conj(v[j]);
            povm.elements.emplace_back(std::move(proj));
        }
        out.push_back(std::move(povm));
    }
    return out;
}

}  // namespace qsep
