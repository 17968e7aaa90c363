#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsep/linalg.hpp"

// Parametric test-state generators and the PPT oracle that supplies
// independent ground truth for the criteria. Generation is deterministic:
// the same spec (including seed) reproduces the same matrix bit for bit.

namespace qsep {

/// PRNG identity recorded in reports alongside the seed.
inline constexpr const char* kRngName = "mt19937_64/box-muller-v1";

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform01() {
        return static_cast<double>(state_() >> 11) * 0x1.0p-53;
    }

    /// Standard complex Gaussian via Box-Muller on explicit uniforms, so
    /// the stream is fully determined by the engine.
    cplx gaussian();

    std::uint64_t raw() { return state_(); }

private:
    std::mt19937_64 state_;
};

std::vector<cplx> random_unit_vector(std::size_t n, Rng& rng);

/// Ginibre-ensemble mixed state.
DensityMatrix random_density(const std::vector<std::size_t>& dims, Rng& rng);

enum class StateFamily {
    pure_random,
    product,
    separable_mixture,
    isotropic,
    embedded,
    ghz,
};

const char* to_string(StateFamily family);
StateFamily state_family_from_string(const std::string& name);

struct StateSpec {
    StateFamily family = StateFamily::pure_random;
    std::vector<std::size_t> dims;
    double noise = 0.0;           // p for isotropic / embedded
    std::size_t term_count = 0;   // separable mixture terms; 0 = total dim
    std::uint64_t seed = 0;
};

/// isotropic(d, p) = p |Phi+><Phi+| + (1-p) I/d^2 (dims must be {d, d});
/// embedded(d, d', p) puts the maximally entangled support on the first d
/// basis vectors of the larger side; separable mixtures are convex
/// combinations of random pure product states, separable by construction.
DensityMatrix generate(const StateSpec& spec);

struct PptVerdict {
    bool ppt = true;
    double min_eigenvalue = 0.0;  // witnessing eigenvalue when NPT
};

/// Partial transpose across the cut whose A side is `cut_side_a`; a
/// negative eigenvalue certifies entanglement across that cut.
PptVerdict ppt_check(const DensityMatrix& rho,
                     const std::vector<std::size_t>& cut_side_a);

}  // namespace qsep
