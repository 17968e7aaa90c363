#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsep/index_bounds.hpp"
#include "test_support.hpp"

using namespace qsep;
using test::make_rng;

namespace {

DensityMatrix maximally_mixed(std::size_t d) {
    ComplexMatrix m = ComplexMatrix::identity(d);
    m *= cplx(1.0 / d);
    return DensityMatrix({d}, HermitianOperator(std::move(m)));
}

double feasible_kappa(std::size_t d, double fraction) {
    double hi = 1.0;
    try {
        build_mums(d, 1.0);
    } catch (const ConstructionError& e) {
        hi = e.max_feasible;
    }
    return 1.0 / d + (hi - 1.0 / d) * fraction;
}

}  // namespace

TEST_CASE("mum_index_sum of the maximally mixed state is M/d") {
    for (std::size_t d : {2, 3}) {
        const auto fam = build_mums(d, feasible_kappa(d, 0.6));
        CHECK(mum_index_sum(fam, maximally_mixed(d)) ==
              doctest::Approx((d + 1.0) / d).epsilon(1e-12));
    }
}

TEST_CASE("basis state measured in its own complete MUB family sums to 2") {
    MUMFamily fam;
    fam.dim = 2;
    fam.kappa = 1.0;
    fam.povms = povms_from_mub(build_mubs(2));
    ComplexMatrix zero(2, 2);
    zero(0, 0) = 1.0;
    const DensityMatrix rho({2}, HermitianOperator(std::move(zero)));
    const double sum = mum_index_sum(fam, rho);
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));  // 1 + 1/2 + 1/2
}

TEST_CASE("index sum bounded by mum_index_bound on random states") {
    auto rng = make_rng(202);
    for (std::size_t d : {2, 3, 4, 5}) {
        const double kappa = feasible_kappa(d, 0.5);
        const auto fam = build_mums(d, kappa);
        for (int rep = 0; rep < 200; ++rep) {
            const auto rho = test::random_density({d}, rng);
            const double lhs = mum_index_sum(fam, rho);
            const double bound =
                mum_index_bound(fam.count(), d, kappa, purity(rho));
            CHECK(lhs <= bound + 1e-10);
        }
    }
}

TEST_CASE("mum_index_bound pins") {
    // complete projective family at purity 1 reaches the MUB value
    CHECK(mum_index_bound(3, 2, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(mum_index_bound(3, 2, 0.7, 0.8) ==
          doctest::Approx(1.62).epsilon(1e-12));
    CHECK_THROWS_AS(mum_index_bound(3, 2, 0.5, 1.0), ParameterRange);
    CHECK_THROWS_AS(mum_index_bound(3, 2, 0.7, 1.5), ParameterRange);
}

TEST_CASE("mub_index_bound pins") {
    CHECK(mub_index_bound(1, 5) == doctest::Approx(1.0));
    CHECK(mub_index_bound(4, 3) == doctest::Approx(2.0));  // M = d+1
    CHECK(mub_index_bound(3, 2) == doctest::Approx(2.0));
    CHECK_THROWS_AS(mub_index_bound(0, 2), ParameterRange);
}

TEST_CASE("MUM bound specializes to the MUB bound at kappa=1, purity=1") {
    for (std::size_t d : {2, 3, 4, 7}) {
        for (std::size_t M : {1u, 2u, 5u}) {
            CHECK(std::abs(mum_index_bound(M, d, 1.0, 1.0) -
                           mub_index_bound(M, d)) <= 1e-12);
        }
    }
}

TEST_CASE("mum_index_bound increases with purity when kappa d > 1") {
    for (std::size_t d : {2, 3, 5}) {
        const double kappa = 0.9;
        double prev = -1.0;
        for (int i = 0; i <= 10; ++i) {
            const double p = 1.0 / d + (1.0 - 1.0 / d) * i / 10.0;
            const double b = mum_index_bound(d + 1, d, kappa, p);
            CHECK(b >= prev);
            prev = b;
        }
    }
}

TEST_CASE("GSIC index sum is an identity, both routes agree") {
    auto rng = make_rng(203);

    // maximally mixed pin: both routes equal 1/d^2
    for (std::size_t d : {2, 3}) {
        const double a = 1.5 / (static_cast<double>(d) * d * d);
        const auto povm = build_gsic(d, a);
        const auto mixed = maximally_mixed(d);
        CHECK(gsic_index_sum(povm, mixed) ==
              doctest::Approx(1.0 / (d * d)).epsilon(1e-12));
        CHECK(gsic_index_value(a, d, purity(mixed)) ==
              doctest::Approx(1.0 / (d * d)).epsilon(1e-12));
    }

    // pure states
    const auto sic = build_gsic(2, 0.25);
    for (int rep = 0; rep < 20; ++rep) {
        const auto v = test::random_unit_vector(2, rng);
        const DensityMatrix rho({2}, HermitianOperator(test::outer(v)));
        CHECK(std::abs(gsic_index_sum(sic, rho) -
                       gsic_index_value(0.25, 2, purity(rho))) <= 1e-10);
    }

    // random mixed states across dimensions
    for (std::size_t d : {2, 3, 4}) {
        const double a = 1.4 / (static_cast<double>(d) * d * d);
        const auto povm = build_gsic(d, a);
        for (int rep = 0; rep < 100; ++rep) {
            const auto rho = test::random_density({d}, rng);
            CHECK(std::abs(gsic_index_sum(povm, rho) -
                           gsic_index_value(a, d, purity(rho))) <= 1e-10);
        }
    }
}

TEST_CASE("criterion params divisor bookkeeping") {
    const auto fam2 = build_mums(2, 0.8);
    const auto fam5 = build_mums(5, feasible_kappa(5, 0.5));
    const auto p = mum_params(fam2, fam5);
    CHECK(p.d == 2);
    CHECK(p.d_prime == 5);
    CHECK(p.s == 2);
    CHECK(p.r1 == 1);
    CHECK(p.M == 3);
    CHECK(p.M_prime == 6);
    CHECK(p.t == 2);
    CHECK(p.r2 == 0);
    CHECK_THROWS_AS(mum_params(fam5, fam2), DimensionMismatch);

    const auto g2 = build_gsic(2, 0.2);
    const auto g3 = build_gsic(3, 0.05);
    const auto gp = gsic_params(g2, g3);
    CHECK(gp.s == 2);  // floor(9/4)
    CHECK(gp.r1 == 1);
}

TEST_CASE("index sums reject dimension mismatches") {
    const auto fam = build_mums(2, 0.8);
    CHECK_THROWS_AS(mum_index_sum(fam, maximally_mixed(3)),
                    DimensionMismatch);
    const auto povm = build_gsic(2, 0.2);
    CHECK_THROWS_AS(gsic_index_sum(povm, maximally_mixed(3)),
                    DimensionMismatch);
}
