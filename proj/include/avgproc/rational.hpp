// Exact arithmetic mode for the duality checks: every double is a dyadic
// rational, so the conversion to cpp_rational is exact and the pairwise
// mixing fold commutes with it bit for bit.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "avgproc/profile.hpp"

namespace avgproc {

using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(double x) { return Rational(x); }

template <typename T>
Profile<Rational> to_rational_profile(const Profile<T>& p) {
    Profile<Rational> out;
    out.default_value = Rational(p.default_value);
    for (const auto& [v, x] : p.values) out.set(v, Rational(x));
    return out;
}

}  // namespace avgproc
