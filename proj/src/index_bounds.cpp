#include "qsep/index_bounds.hpp"

#include <sstream>

namespace qsep {

namespace {

void require_ordered(std::size_t d, std::size_t d_prime, std::size_t m,
                     std::size_t m_prime) {
    if (d > d_prime || m > m_prime) {
        std::ostringstream msg;
        msg << "criterion params: require d <= d' and M <= M', got d=" << d
            << " d'=" << d_prime << " M=" << m << " M'=" << m_prime;
        throw DimensionMismatch(msg.str());
    }
}

}  // namespace

CriterionParams mum_params(const MUMFamily& fam_a, const MUMFamily& fam_b) {
    require_ordered(fam_a.dim, fam_b.dim, fam_a.count(), fam_b.count());
    CriterionParams p;
    p.kind = CriterionParams::Kind::mum;
    p.d = fam_a.dim;
    p.d_prime = fam_b.dim;
    p.M = fam_a.count();
    p.M_prime = fam_b.count();
    p.s = p.d_prime / p.d;
    p.r1 = p.d_prime % p.d;
    p.t = p.M_prime / p.M;
    p.r2 = p.M_prime % p.M;
    p.kappa1 = fam_a.kappa;
    p.kappa2 = fam_b.kappa;
    return p;
}

CriterionParams mub_params(const MUBFamily& fam_a, const MUBFamily& fam_b) {
    require_ordered(fam_a.dim, fam_b.dim, fam_a.count(), fam_b.count());
    CriterionParams p;
    p.kind = CriterionParams::Kind::mub;
    p.d = fam_a.dim;
    p.d_prime = fam_b.dim;
    p.M = fam_a.count();
    p.M_prime = fam_b.count();
    p.s = p.d_prime / p.d;
    p.r1 = p.d_prime % p.d;
    p.t = p.M_prime / p.M;
    p.r2 = p.M_prime % p.M;
    p.kappa1 = 1.0;
    p.kappa2 = 1.0;
    return p;
}

CriterionParams gsic_params(const GSICPOVM& povm_a, const GSICPOVM& povm_b) {
    require_ordered(povm_a.dim, povm_b.dim, 1, 1);
    CriterionParams p;
    p.kind = CriterionParams::Kind::gsic;
    p.d = povm_a.dim;
    p.d_prime = povm_b.dim;
    p.M = 1;
    p.M_prime = 1;
    p.t = 1;
    p.r2 = 0;
    // the outcome-count divisor relation runs over squared dimensions
    p.s = (p.d_prime * p.d_prime) / (p.d * p.d);
    p.r1 = (p.d_prime * p.d_prime) % (p.d * p.d);
    p.a1 = povm_a.a;
    p.a2 = povm_b.a;
    return p;
}

double povm_index_sum(const std::vector<POVM>& povms,
                      const DensityMatrix& rho) {
    double sum = 0.0;
    for (const auto& povm : povms) {
        if (povm.dim != rho.total_dim())
            throw DimensionMismatch("povm_index_sum: dimension mismatch");
        for (const auto& p : povm.elements) {
            const double prob = hs_inner(p, rho.op());
            sum += prob * prob;
        }
    }
    return sum;
}

double mum_index_sum(const MUMFamily& family, const DensityMatrix& rho) {
    if (family.dim != rho.total_dim())
        throw DimensionMismatch("mum_index_sum: dimension mismatch");
    return povm_index_sum(family.povms, rho);
}

double mum_index_bound(std::size_t M, std::size_t d, double kappa,
                       double purity) {
    if (d < 2) throw ParameterRange("mum_index_bound: d must be >= 2");
    if (!(kappa > 1.0 / d) || kappa > 1.0)
        throw ParameterRange("mum_index_bound: kappa outside (1/d, 1]");
    if (purity < 1.0 / d - tols().psd_slack || purity > 1.0 + tols().psd_slack)
        throw ParameterRange("mum_index_bound: purity outside [1/d, 1]");
    return (M - 1.0) / d + (1.0 - kappa + (kappa * d - 1.0) * purity) / (d - 1.0);
}

double mub_index_bound(std::size_t M, std::size_t d) {
    if (M < 1) throw ParameterRange("mub_index_bound: M must be >= 1");
    return 1.0 + (M - 1.0) / d;
}

double gsic_index_sum(const GSICPOVM& povm, const DensityMatrix& rho) {
    if (povm.dim != rho.total_dim())
        throw DimensionMismatch("gsic_index_sum: dimension mismatch");
    double sum = 0.0;
    for (const auto& p : povm.elements) {
        const double prob = hs_inner(p, rho.op());
        sum += prob * prob;
    }
    return sum;
}

double gsic_index_value(double a, std::size_t d, double purity) {
    const double dd = static_cast<double>(d);
    return ((a * dd * dd * dd - 1.0) * purity + dd * (1.0 - a * dd)) /
           (dd * (dd * dd - 1.0));
}

}  // namespace qsep
