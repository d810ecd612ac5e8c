// Sparse vertex-value profiles and initial-value laws. The same Profile type
// carries opinions (eta) and SAD water levels (xi); the value type is a
// template parameter so the duality checks can run in exact rationals.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "avgproc/graph.hpp"
#include "avgproc/rng.hpp"

namespace avgproc {

template <typename T>
struct Profile {
    std::unordered_map<VertexId, T> values;
    T default_value{};

    T at(VertexId v) const {
        auto it = values.find(v);
        return it == values.end() ? default_value : it->second;
    }
    void set(VertexId v, T value) { values[v] = std::move(value); }

    // Sum over explicit support only.
    T support_sum() const {
        T s{};
        for (const auto& [v, x] : values) s += x;
        return s;
    }

    static Profile delta(VertexId v) {
        Profile p;
        p.set(v, T(1));
        return p;
    }
};

struct LawError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// I.i.d. initial-value laws with analytically known first and second moments,
// plus the (non-i.i.d.) point mass Delta used for contribution studies.
// Sampling is deterministic per (seed, vertex).
struct InitialLaw {
    enum class Kind { Dirac, Bernoulli, Uniform, Gaussian, Pareto, Delta };
    Kind kind = Kind::Dirac;
    double p1 = 0.0;  // Dirac: c; Bernoulli: p; Uniform: a; Gaussian: mean;
                      // Pareto: alpha
    double p2 = 0.0;  // Uniform: b; Gaussian: variance; Pareto: scale
    VertexId vertex = 0;  // Delta only
    std::uint64_t seed = 0;

    static InitialLaw dirac(double c, std::uint64_t seed = 0);
    static InitialLaw bernoulli(double p, std::uint64_t seed = 0);
    static InitialLaw uniform(double a, double b, std::uint64_t seed = 0);
    static InitialLaw gaussian(double mean, double variance, std::uint64_t seed = 0);
    static InitialLaw pareto(double alpha, double scale, std::uint64_t seed = 0);
    static InitialLaw delta(VertexId v);
    static InitialLaw parse(const std::string& spec, std::uint64_t seed = 0);
    std::string to_string() const;

    bool is_iid() const { return kind != Kind::Delta; }
    double m1() const;
    double m2() const;

    double sample(VertexId v) const;

    InitialLaw with_seed(std::uint64_t s) const {
        InitialLaw law = *this;
        law.seed = s;
        return law;
    }
};

// Explicit profile over the vertices of a finite graph.
Profile<double> sample_profile(const Graph& g, const InitialLaw& law);

}  // namespace avgproc
