#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace qadv {

enum class StencilFamily { Central, OneSidedUpwind, OneSidedDownwind };

/// Finite-difference scheme descriptor. Central supports order 2 and 4,
/// the one-sided families order 2.
struct StencilSpec {
    StencilFamily family = StencilFamily::Central;
    int order = 2;
};

inline bool stencil_supported(const StencilSpec& s) {
    if (s.family == StencilFamily::Central) return s.order == 2 || s.order == 4;
    return s.order == 2;
}

using StencilCoeffs = std::vector<std::pair<int, double>>;  // (offset, coefficient)

namespace detail {
inline StencilCoeffs backward2() { return {{-2, 0.5}, {-1, -2.0}, {0, 1.5}}; }
inline StencilCoeffs forward2() { return {{0, -1.5}, {1, 2.0}, {2, -0.5}}; }
}  // namespace detail

/// First-derivative coefficients for unit spacing, offsets ascending.
/// direction_sign is the sign of the local velocity component: +1 places a
/// one-sided upwind stencil on the backward side, -1 on the forward side.
/// The downwind family mirrors that choice. Central stencils take sign 0.
inline StencilCoeffs derivative_coeffs(const StencilSpec& spec, int direction_sign) {
    if (!stencil_supported(spec))
        throw std::invalid_argument("derivative_coeffs: unsupported (family, order)");
    switch (spec.family) {
        case StencilFamily::Central:
            if (direction_sign != 0)
                throw std::invalid_argument("derivative_coeffs: central stencil takes sign 0");
            if (spec.order == 2) return {{-1, -0.5}, {1, 0.5}};
            return {{-2, 1.0 / 12.0}, {-1, -8.0 / 12.0}, {1, 8.0 / 12.0}, {2, -1.0 / 12.0}};
        case StencilFamily::OneSidedUpwind:
            if (direction_sign == 1) return detail::backward2();
            if (direction_sign == -1) return detail::forward2();
            throw std::invalid_argument("derivative_coeffs: one-sided stencil needs sign +1/-1");
        case StencilFamily::OneSidedDownwind:
            if (direction_sign == 1) return detail::forward2();
            if (direction_sign == -1) return detail::backward2();
            throw std::invalid_argument("derivative_coeffs: one-sided stencil needs sign +1/-1");
    }
    throw std::invalid_argument("derivative_coeffs: unknown family");
}

}  // namespace qadv
