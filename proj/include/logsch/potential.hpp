#pragma once

// Confining potentials V(x) with inf V >= V0 > 0 and V -> +inf at infinity.

#include <memory>
#include <string>
#include <variant>

#include "logsch/grid.hpp"

namespace logsch {

class Potential {
public:
    struct Harmonic { double a; };            // a |x|^2
    struct Quartic { double c; };             // c |x|^4
    struct Shifted {                          // base + shift
        std::shared_ptr<const Potential> base;
        double shift;
    };
    struct Tabulated {                        // values read from a field file
        std::string path;
        std::shared_ptr<const Field> values;
    };

    static Potential harmonic(double a);
    static Potential quartic(double c);
    static Potential shifted(Potential base, double shift);
    /// Loads the field file eagerly; its grid must match the grid it is later
    /// evaluated on.
    static Potential tabulated(const std::string& path);
    static Potential tabulated(Field values, std::string label = "<memory>");

    /// Grid values of V (no positivity requirement).
    Field evaluate(const Grid& g) const;

    /// Round-trips through parse_potential: "harmonic:2", "shifted:harmonic:2:+1", ...
    std::string describe() const;

private:
    using Kind = std::variant<Harmonic, Quartic, Shifted, Tabulated>;
    explicit Potential(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

/// Parses "harmonic:<a>", "quartic:<c>", "shifted:<base...>:<shift>",
/// "tabulated:<path>". Throws std::invalid_argument.
Potential parse_potential(const std::string& text);

/// A potential evaluated and validated on one grid.
struct PotentialField {
    Field values;
    double v0;  // grid minimum, > 0
};

/// Returns the grid minimum of V; throws std::domain_error if it is not
/// strictly positive. Wrapping in Potential::shifted restores positivity.
double validate_potential(const Grid& g, const Potential& v);

/// Evaluates and validates in one step.
PotentialField bind_potential(const Grid& g, const Potential& v);

}  // namespace logsch
