#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsep/states.hpp"
#include "test_support.hpp"

using namespace qsep;

namespace {

StateSpec spec_of(StateFamily family, std::vector<std::size_t> dims,
                  double noise = 0.0, std::uint64_t seed = 7) {
    StateSpec s;
    s.family = family;
    s.dims = std::move(dims);
    s.noise = noise;
    s.seed = seed;
    return s;
}

double bisect_ppt_flip(std::size_t d) {
    double lo = 0.0, hi = 1.0;  // PPT at lo, NPT at hi
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        const auto rho = generate(spec_of(StateFamily::isotropic, {d, d}, mid));
        if (ppt_check(rho, {0}).ppt)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("separable mixtures satisfy state invariants and PPT on every cut") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (const auto& dims : {std::vector<std::size_t>{2, 3},
                                 std::vector<std::size_t>{2, 2, 2},
                                 std::vector<std::size_t>{3, 2, 2}}) {
            const auto rho =
                generate(spec_of(StateFamily::separable_mixture, dims, 0, seed));
            CHECK(std::abs(rho.mat().trace().real() - 1.0) <= 1e-12);
            for (std::size_t k = 0; k < dims.size(); ++k) {
                const auto verdict = ppt_check(rho, {k});
                CHECK(verdict.ppt);
            }
        }
    }
}

TEST_CASE("isotropic endpoints") {
    const auto mixed = generate(spec_of(StateFamily::isotropic, {2, 2}, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(mixed.mat()(i, j) - (i == j ? cplx(0.25) : cplx(0))) <=
                  1e-15);

    const auto pure = generate(spec_of(StateFamily::isotropic, {3, 3}, 1.0));
    CHECK(purity(pure) == doctest::Approx(1.0).epsilon(1e-12));
    const auto marg = partial_trace(pure, {0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(marg.mat()(i, j) -
                           (i == j ? cplx(1.0 / 3) : cplx(0))) <= 1e-12);
}

TEST_CASE("generator determinism: identical spec gives identical bits") {
    const auto spec =
        spec_of(StateFamily::separable_mixture, {2, 3}, 0.0, 424242);
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.mat() == b.mat());

    auto other = spec;
    other.seed = 424243;
    CHECK_FALSE(generate(other).mat() == a.mat());
}

TEST_CASE("ppt_check flips at p = 1/(d+1) for isotropic states") {
    for (std::size_t d : {2, 3}) {
        const double flip = bisect_ppt_flip(d);
        CHECK(flip == doctest::Approx(1.0 / (d + 1)).epsilon(1e-5));
    }
}

TEST_CASE("ppt_check on the Bell state reports eigenvalue -1/2") {
    const auto verdict = ppt_check(test::bell_state(2), {0});
    CHECK_FALSE(verdict.ppt);
    CHECK(verdict.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("isotropic purity agrees with elementwise computation") {
    for (double p : {0.1, 0.5, 0.9}) {
        const auto rho = generate(spec_of(StateFamily::isotropic, {3, 3}, p));
        double oracle = 0.0;
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j)
                oracle += std::norm(rho.mat()(i, j));
        CHECK(purity(rho) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("embedded family places the entangled block on the first levels") {
    const auto rho = generate(spec_of(StateFamily::embedded, {2, 4}, 1.0));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rho.mat()(0 * 4 + 0, 1 * 4 + 1) - cplx(0.5)) <= 1e-15);
    CHECK_FALSE(ppt_check(rho, {0}).ppt);

    const auto noisy = generate(spec_of(StateFamily::embedded, {2, 4}, 0.0));
    CHECK(ppt_check(noisy, {0}).ppt);
}

TEST_CASE("ghz state structure") {
    StateSpec s = spec_of(StateFamily::ghz, {2, 2, 2});
    const auto rho = generate(s);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rho.mat()(0, 0) - cplx(0.5)) <= 1e-15);
    CHECK(std::abs(rho.mat()(0, 7) - cplx(0.5)) <= 1e-15);
    const auto marg = partial_trace(rho, {0});
    CHECK(std::abs(marg.mat()(0, 0) - cplx(0.5)) <= 1e-12);
    CHECK(std::abs(marg.mat()(0, 1)) <= 1e-12);
}

TEST_CASE("product states reduce to their factors") {
    const auto rho = generate(spec_of(StateFamily::product, {2, 3}, 0, 99));
    CHECK(ppt_check(rho, {0}).ppt);
    // marginal of a product state has the purity of the factor alone
    const auto back = partial_trace(rho, {0});
    CHECK(back.total_dim() == 2);
    CHECK(std::abs(back.mat().trace().real() - 1.0) <= 1e-12);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(generate(spec_of(StateFamily::isotropic, {2, 3}, 0.5)),
                    ParameterRange);
    CHECK_THROWS_AS(generate(spec_of(StateFamily::isotropic, {2, 2}, 1.5)),
                    ParameterRange);
    CHECK_THROWS_AS(generate(spec_of(StateFamily::ghz, {2, 3})),
                    ParameterRange);
    CHECK_THROWS_AS(generate(spec_of(StateFamily::embedded, {4, 2}, 0.5)),
                    ParameterRange);
    CHECK_THROWS_AS(generate(spec_of(StateFamily::pure_random, {1})),
                    ParameterRange);
}

TEST_CASE("state family names round-trip") {
    for (auto family :
         {StateFamily::pure_random, StateFamily::product,
          StateFamily::separable_mixture, StateFamily::isotropic,
          StateFamily::embedded, StateFamily::ghz})
        CHECK(state_family_from_string(to_string(family)) == family);
    CHECK_THROWS_AS(state_family_from_string("werner"), ParameterRange);
}
