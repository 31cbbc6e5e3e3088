#include "lexseq/penalty.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

PenaltyProfile PenaltyProfile::normalized_quadratic() {
    return PenaltyProfile(2.0, std::numbers::pi * std::numbers::pi / 6.0);
}

PenaltyProfile::PenaltyProfile(double exponent, double scale)
    : exponent_(exponent), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(exponent))
        throw std::invalid_argument("penalty profile needs finite exponent and positive scale");
}

double PenaltyProfile::weight(int depth) const {
    if (depth == 1) return scale_;  // pow(1, e) == 1, keep the fast path exact
    return scale_ * std::pow(static_cast<double>(depth), exponent_);
}

std::string PenaltyProfile::tag() const {
    return "pow:" + format_double(exponent_) + ":" + format_double(scale_);
}

PenaltyProfile PenaltyProfile::parse(const std::string& tag) {
    const std::size_t c1 = tag.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : tag.find(':', c1 + 1);
    if (tag.substr(0, c1) != "pow" || c2 == std::string::npos)
        throw Error("unknown penalty profile: " + tag);
    double exponent = 0.0;
    double scale = 0.0;
    if (!parse_double(tag.substr(c1 + 1, c2 - c1 - 1), exponent) ||
        !parse_double(tag.substr(c2 + 1), scale))
        throw Error("malformed penalty profile: " + tag);
    return PenaltyProfile(exponent, scale);
}

}  // namespace lexseq
