#include "logsch/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "logsch/field_io.hpp"
#include "logsch/numfmt.hpp"

namespace logsch {

namespace {

double parse_positive(const std::string& s, const char* what) {
    const double v = parse_double(s);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("potential ") + what + " coefficient must be positive, got '" + s + "'");
    }
    return v;
}

}  // namespace

Potential Potential::harmonic(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("harmonic coefficient must be positive");
    return Potential(Harmonic{a});
}

Potential Potential::quartic(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("quartic coefficient must be positive");
    return Potential(Quartic{c});
}

Potential Potential::shifted(Potential base, double shift) {
    if (!std::isfinite(shift)) throw std::invalid_argument("potential shift must be finite");
    return Potential(Shifted{std::make_shared<const Potential>(std::move(base)), shift});
}

Potential Potential::tabulated(const std::string& path) {
    auto [grid, values] = read_field(path);
    (void)grid;
    return tabulated(std::move(values), path);
}

Potential Potential::tabulated(Field values, std::string label) {
    if (!values.all_finite()) throw std::invalid_argument("tabulated potential contains non-finite values");
    return Potential(Tabulated{std::move(label), std::make_shared<const Field>(std::move(values))});
}

Field Potential::evaluate(const Grid& g) const {
    return std::visit(
        [&g](const auto& k) -> Field {
            using K = std::decay_t<decltype(k)>;
            Field out(g);
            if constexpr (std::is_same_v<K, Harmonic>) {
                for (std::size_t i = 0; i < g.size(); ++i) out[i] = k.a * g.radius_sq(i);
            } else if constexpr (std::is_same_v<K, Quartic>) {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double r2 = g.radius_sq(i);
                    out[i] = k.c * r2 * r2;
                }
            } else if constexpr (std::is_same_v<K, Shifted>) {
                out = k.base->evaluate(g);
                for (std::size_t i = 0; i < g.size(); ++i) out[i] += k.shift;
            } else {
                if (!(k.values->grid() == g)) {
                    throw std::invalid_argument("tabulated potential '" + k.path + "' was stored on a different grid");
                }
                out = *k.values;
            }
            return out;
        },
        kind_);
}

std::string Potential::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Harmonic>) {
                return "harmonic:" + format_double(k.a);
            } else if constexpr (std::is_same_v<K, Quartic>) {
                return "quartic:" + format_double(k.c);
            } else if constexpr (std::is_same_v<K, Shifted>) {
                return "shifted:" + k.base->describe() + ":" + (k.shift >= 0 ? "+" : "") + format_double(k.shift);
            } else {
                return "tabulated:" + k.path;
            }
        },
        kind_);
}

Potential parse_potential(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("potential must look like kind:value, got '" + text + "'");
    }
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "harmonic") return Potential::harmonic(parse_positive(rest, "harmonic"));
    if (kind == "quartic") return Potential::quartic(parse_positive(rest, "quartic"));
    if (kind == "tabulated") {
        if (rest.empty()) throw std::invalid_argument("tabulated potential needs a path");
        return Potential::tabulated(rest);
    }
    if (kind == "shifted") {
        const auto last = rest.rfind(':');
        if (last == std::string::npos) throw std::invalid_argument("shifted potential needs base and shift");
        std::string shift = rest.substr(last + 1);
        if (!shift.empty() && shift.front() == '+') shift.erase(0, 1);
        return Potential::shifted(parse_potential(rest.substr(0, last)), parse_double(shift));
    }
    throw std::invalid_argument("unknown potential kind '" + kind + "'");
}

double validate_potential(const Grid& g, const Potential& v) {
    return bind_potential(g, v).v0;
}

PotentialField bind_potential(const Grid& g, const Potential& v) {
    Field values = v.evaluate(g);
    if (!values.all_finite()) throw std::domain_error("potential is not finite on the grid");
    const double v0 = *std::min_element(values.values().begin(), values.values().end());
    if (!(v0 > 0.0)) {
        throw std::domain_error("potential minimum on the grid is " + format_double(v0) +
                                "; need inf V > 0 (wrap it in shifted:...)");
    }
    return {std::move(values), v0};
}

}  // namespace logsch
