#include "qsep/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qsep {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>());
}

void check_dims(const StateSpec& spec, std::size_t min_parties) {
    if (spec.dims.size() < min_parties)
        throw ParameterRange("generate: too few subsystems for this family");
    for (std::size_t d : spec.dims)
        if (d < 2) throw ParameterRange("generate: subsystem dims must be >= 2");
}

ComplexMatrix outer(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

DensityMatrix as_state(std::vector<std::size_t> dims, ComplexMatrix m) {
    return DensityMatrix(std::move(dims), HermitianOperator(std::move(m)));
}

}  // namespace

cplx Rng::gaussian() {
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

std::vector<cplx> random_unit_vector(std::size_t n, Rng& rng) {
    std::vector<cplx> v(n);
    double norm2 = 0.0;
    for (auto& z : v) {
        z = rng.gaussian();
        norm2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
    return v;
}

DensityMatrix random_density(const std::vector<std::size_t>& dims, Rng& rng) {
    const std::size_t n = product(dims);
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.gaussian();
    ComplexMatrix rho(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            cplx sum = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                sum += g(i, k) * std::conj(g(j, k));
            rho(i, j) = sum;
            rho(j, i) = std::conj(sum);
        }
    const double tr = rho.trace().real();
    rho *= cplx(1.0 / tr);
    return as_state(dims, std::move(rho));
}

const char* to_string(StateFamily family) {
    switch (family) {
        case StateFamily::pure_random: return "pure-random";
        case StateFamily::product: return "product";
        case StateFamily::separable_mixture: return "separable-mixture";
        case StateFamily::isotropic: return "isotropic";
        case StateFamily::embedded: return "embedded";
        case StateFamily::ghz: return "ghz";
    }
    return "unknown";
}

StateFamily state_family_from_string(const std::string& name) {
    if (name == "pure-random") return StateFamily::pure_random;
    if (name == "product") return StateFamily::product;
    if (name == "separable-mixture") return StateFamily::separable_mixture;
    if (name == "isotropic") return StateFamily::isotropic;
    if (name == "embedded") return StateFamily::embedded;
    if (name == "ghz") return StateFamily::ghz;
    throw ParameterRange("unknown state family: " + name);
}

DensityMatrix generate(const StateSpec& spec) {
    Rng rng(spec.seed);
    switch (spec.family) {
        case StateFamily::pure_random: {
            check_dims(spec, 1);
            return as_state(spec.dims,
                            outer(random_unit_vector(product(spec.dims), rng)));
        }

        case StateFamily::product: {
            check_dims(spec, 1);
            ComplexMatrix m = random_density({spec.dims[0]}, rng).mat();
            for (std::size_t k = 1; k < spec.dims.size(); ++k)
                m = tensor_product(m,
                                   random_density({spec.dims[k]}, rng).mat());
            return as_state(spec.dims, std::move(m));
        }

        case StateFamily::separable_mixture: {
            check_dims(spec, 2);
            const std::size_t terms =
                spec.term_count > 0 ? spec.term_count : product(spec.dims);
            std::vector<double> weights(terms);
            double total = 0.0;
            for (auto& w : weights) {
                w = -std::log(std::max(rng.uniform01(), 1e-300));
                total += w;
            }
            const std::size_t n = product(spec.dims);
            ComplexMatrix m(n, n);
            for (std::size_t term = 0; term < terms; ++term) {
                ComplexMatrix part =
                    outer(random_unit_vector(spec.dims[0], rng));
                for (std::size_t k = 1; k < spec.dims.size(); ++k)
                    part = tensor_product(
                        part, outer(random_unit_vector(spec.dims[k], rng)));
                part *= cplx(weights[term] / total);
                m += part;
            }
            return as_state(spec.dims, std::move(m));
        }

        case StateFamily::isotropic: {
            check_dims(spec, 2);
            if (spec.dims.size() != 2 || spec.dims[0] != spec.dims[1])
                throw ParameterRange("isotropic: dims must be {d, d}");
            if (spec.noise < 0.0 || spec.noise > 1.0)
                throw ParameterRange("isotropic: p must lie in [0, 1]");
            const std::size_t d = spec.dims[0];
            ComplexMatrix m(d * d, d * d);
            for (std::size_t i = 0; i < d * d; ++i)
                m(i, i) = (1.0 - spec.noise) / static_cast<double>(d * d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m(i * d + i, j * d + j) +=
                        spec.noise / static_cast<double>(d);
            return as_state(spec.dims, std::move(m));
        }

        case StateFamily::embedded: {
            check_dims(spec, 2);
            if (spec.dims.size() != 2 || spec.dims[0] > spec.dims[1])
                throw ParameterRange("embedded: dims must be {d, d'} with d <= d'");
            if (spec.noise < 0.0 || spec.noise > 1.0)
                throw ParameterRange("embedded: p must lie in [0, 1]");
            const std::size_t d = spec.dims[0];
            const std::size_t dp = spec.dims[1];
            ComplexMatrix m(d * dp, d * dp);
            for (std::size_t i = 0; i < d * dp; ++i)
                m(i, i) = (1.0 - spec.noise) / static_cast<double>(d * dp);
            // maximally entangled support on the first d levels of side B
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m(i * dp + i, j * dp + j) +=
                        spec.noise / static_cast<double>(d);
            return as_state(spec.dims, std::move(m));
        }

        case StateFamily::ghz: {
            check_dims(spec, 2);
            const std::size_t d = spec.dims[0];
            for (std::size_t dk : spec.dims)
                if (dk != d)
                    throw ParameterRange("ghz: all subsystem dims must agree");
            const std::size_t n = product(spec.dims);
            std::size_t stride = 0;  // flat index step between |ii...i> kets
            {
                std::size_t acc = 1;
                for (std::size_t k = spec.dims.size(); k-- > 0;) {
                    stride += acc;
                    acc *= d;
                }
            }
            ComplexMatrix m(n, n);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m(i * stride, j * stride) = 1.0 / static_cast<double>(d);
            return as_state(spec.dims, std::move(m));
        }
    }
    throw ParameterRange("generate: unknown family");
}

PptVerdict ppt_check(const DensityMatrix& rho,
                     const std::vector<std::size_t>& cut_side_a) {
    std::vector<std::size_t> side_b;
    for (std::size_t k = 0; k < rho.parties(); ++k)
        if (std::find(cut_side_a.begin(), cut_side_a.end(), k) ==
            cut_side_a.end())
            side_b.push_back(k);
    const double lambda = min_eigenvalue(partial_transpose(rho, side_b));
    return {lambda >= -tols().psd_slack, lambda};
}

}  // namespace qsep
