#pragma once

// Named one-variable functions F for the certifier.

#include <cmath>
#include <functional>
#include <string>

#include "certifier.hpp"
#include "volume.hpp"

namespace boundcoh {

/// F(z) = vol3(inf, 0, 1, z): the volume cocycle in cross-ratio coordinates.
inline ScalarFunction vol3_slice(Field field = Field::complex)
{
    return {field, [](cplx z) { return ideal_tetrahedron_volume(z); }, Alternation::declared, "vol3"};
}

/// F(x) = 1 / (1 - x): continuous on the punctured line, with a doubling
/// defect that blows up at 1.
inline ScalarFunction pole_at_one(Field field = Field::real)
{
    return {field, [](cplx z) { return (1.0 / (1.0 - z)).real(); }, Alternation::unknown, "pole"};
}

inline ScalarFunction constant_function(double c, Field field = Field::real)
{
    return {field, [c](cplx) { return c; }, Alternation::unknown, "constant"};
}

/// Signed sum of g over the six anharmonic images x, 1/x, 1-x, 1/(1-x),
/// (x-1)/x, x/(x-1). The result satisfies F(x) = -F(1/x) = -F(1-x), the
/// relations of a function induced by an alternating 4-point cochain.
inline ScalarFunction anharmonic_sum(std::function<double(cplx)> g, std::string name, Field field = Field::real)
{
    return {field,
            [g](cplx x) {
                return g(x) - g(1.0 / x) - g(1.0 - x) + g(1.0 / (1.0 - x)) + g((x - 1.0) / x) - g(x / (x - 1.0));
            },
            Alternation::declared, std::move(name)};
}

/// Bounded alternating test function built from g(x) = (Re x + 0.3) / (1 + |x|^2),
/// which extends continuously to the point at infinity.
inline ScalarFunction anharmonic_rational(Field field = Field::real)
{
    return anharmonic_sum([](cplx x) { return (x.real() + 0.3) / (1.0 + std::norm(x)); }, "anharmonic", field);
}

/// Looks up a function by name: vol3, anharmonic, pole.
inline ScalarFunction named_function(const std::string& name, Field field)
{
    if (name == "vol3") return vol3_slice(field);
    if (name == "anharmonic") return anharmonic_rational(field);
    if (name == "pole") return pole_at_one(field);
    throw InvalidArgument("unknown function '" + name + "' (expected vol3, anharmonic or pole)");
}

} // namespace boundcoh
