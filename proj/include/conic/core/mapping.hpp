#pragma once

// A smooth strictly monotone mapping F between the latent line and a bounded
// image interval, together with its derivative f, score psi = -f'/f and
// inverse. Mappings are always stored in increasing orientation; a mapping
// built from a decreasing user-facing function carries flipped = true and the
// latent coordinate is the negated original one.

#include <functional>

#include "conic/common.hpp"

namespace conic::core {

struct Mapping {
    std::function<double(double)> F;        // increasing, latent -> image
    std::function<double(double)> f;        // F' > 0 on the interior
    std::function<double(double)> psi;      // score -f'/f
    std::function<double(double)> inverse;  // image -> latent
    Interval domain{-kInf, kInf};           // latent coordinates
    Interval image{0.0, 1.0};
    bool flipped = false;  // true when built from a decreasing original F

    double to_latent(double x_original) const { return flipped ? -x_original : x_original; }
    double from_latent(double u) const { return flipped ? -u : u; }
    // Evaluate in the orientation the mapping was defined with.
    double value_original(double x_original) const { return F(to_latent(x_original)); }
};

}  // namespace conic::core
