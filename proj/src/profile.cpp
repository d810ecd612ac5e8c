#include "avgproc/profile.hpp"

#include <cmath>
#include <sstream>

namespace avgproc {

namespace {
constexpr std::uint64_t kInitStreamTag = 0x1417a15eedULL;
}

InitialLaw InitialLaw::dirac(double c, std::uint64_t seed) {
    InitialLaw law;
    law.kind = Kind::Dirac;
    law.p1 = c;
    law.seed = seed;
    return law;
}

InitialLaw InitialLaw::bernoulli(double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw LawError("bernoulli p must lie in [0,1]");
    InitialLaw law;
    law.kind = Kind::Bernoulli;
    law.p1 = p;
    law.seed = seed;
    return law;
}

InitialLaw InitialLaw::uniform(double a, double b, std::uint64_t seed) {
    if (!(a < b)) throw LawError("uniform law requires a < b");
    InitialLaw law;
    law.kind = Kind::Uniform;
    law.p1 = a;
    law.p2 = b;
    law.seed = seed;
    return law;
}

InitialLaw InitialLaw::gaussian(double mean, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) throw LawError("gaussian variance must be nonnegative");
    InitialLaw law;
    law.kind = Kind::Gaussian;
    law.p1 = mean;
    law.p2 = variance;
    law.seed = seed;
    return law;
}

InitialLaw InitialLaw::pareto(double alpha, double scale, std::uint64_t seed) {
    // alpha > 2 keeps the second moment finite.
    if (!(alpha > 2.0)) throw LawError("pareto alpha must exceed 2");
    if (!(scale > 0.0)) throw LawError("pareto scale must be positive");
    InitialLaw law;
    law.kind = Kind::Pareto;
    law.p1 = alpha;
    law.p2 = scale;
    law.seed = seed;
    return law;
}

InitialLaw InitialLaw::delta(VertexId v) {
    InitialLaw law;
    law.kind = Kind::Delta;
    law.vertex = v;
    return law;
}

InitialLaw InitialLaw::parse(const std::string& spec, std::uint64_t seed) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    std::vector<double> args;
    {
        std::istringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
    }
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw LawError("law '" + kind + "' takes " + std::to_string(n) + " parameter(s)");
    };
    if (kind == "dirac") { need(1); return dirac(args[0], seed); }
    if (kind == "bernoulli") { need(1); return bernoulli(args[0], seed); }
    if (kind == "uniform") { need(2); return uniform(args[0], args[1], seed); }
    if (kind == "gaussian") { need(2); return gaussian(args[0], args[1], seed); }
    if (kind == "pareto") { need(2); return pareto(args[0], args[1], seed); }
    if (kind == "delta") { need(1); return delta(static_cast<VertexId>(args[0])); }
    throw LawError("unknown law '" + spec + "'");
}

std::string InitialLaw::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Dirac: out << "dirac:" << p1; break;
        case Kind::Bernoulli: out << "bernoulli:" << p1; break;
        case Kind::Uniform: out << "uniform:" << p1 << "," << p2; break;
        case Kind::Gaussian: out << "gaussian:" << p1 << "," << p2; break;
        case Kind::Pareto: out << "pareto:" << p1 << "," << p2; break;
        case Kind::Delta: out << "delta:" << vertex; break;
    }
    return out.str();
}

double InitialLaw::m1() const {
    switch (kind) {
        case Kind::Dirac: return p1;
        case Kind::Bernoulli: return p1;
        case Kind::Uniform: return 0.5 * (p1 + p2);
        case Kind::Gaussian: return p1;
        case Kind::Pareto: return p1 * p2 / (p1 - 1.0);
        case Kind::Delta: throw LawError("delta law has no i.i.d. moments");
    }
    throw LawError("unreachable");
}

double InitialLaw::m2() const {
    switch (kind) {
        case Kind::Dirac: return p1 * p1;
        case Kind::Bernoulli: return p1;  // indicator squared
        case Kind::Uniform: return (p1 * p1 + p1 * p2 + p2 * p2) / 3.0;
        case Kind::Gaussian: return p2 + p1 * p1;
        case Kind::Pareto: return p1 * p2 * p2 / (p1 - 2.0);
        case Kind::Delta: throw LawError("delta law has no i.i.d. moments");
    }
    throw LawError("unreachable");
}

double InitialLaw::sample(VertexId v) const {
    if (kind == Kind::Delta) return v == vertex ? 1.0 : 0.0;
    if (kind == Kind::Dirac) return p1;
    Rng rng(mix3(seed, vertex_key(v), kInitStreamTag));
    switch (kind) {
        case Kind::Bernoulli:
            return rng.next_unit_half_open() < p1 ? 1.0 : 0.0;
        case Kind::Uniform:
            return p1 + (p2 - p1) * rng.next_unit_half_open();
        case Kind::Gaussian:
            return rng.next_gaussian(p1, std::sqrt(p2));
        case Kind::Pareto:
            return p2 * std::pow(rng.next_unit(), -1.0 / p1);
        default:
            throw LawError("unreachable");
    }
}

Profile<double> sample_profile(const Graph& g, const InitialLaw& law) {
    Profile<double> p;
    for (VertexId v : g.vertices()) p.set(v, law.sample(v));
    return p;
}

}  // namespace avgproc
