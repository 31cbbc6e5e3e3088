#pragma once

#include <string>

namespace lexseq {

/// Depth weights p_d for the weighted norm on context trees. The family is
/// p_d = scale * d^exponent with d >= 1 (the root sits at depth 1).
///
/// The default quadratic() profile makes deep nodes expensive (p_d = d^2,
/// i.e. dual weights a_d = d^-2). literal_inverse() keeps the decreasing
/// orientation (p_d = d^-2) for comparison runs.
class PenaltyProfile {
public:
    /// p_d = d^2 (default).
    static PenaltyProfile quadratic() { return PenaltyProfile(2.0, 1.0); }

    /// p_d = (pi^2/6) d^2, so the dual weights a_d sum to exactly 1.
    static PenaltyProfile normalized_quadratic();

    /// p_d = d^-2: deep nodes become cheaper instead of dearer.
    static PenaltyProfile literal_inverse() { return PenaltyProfile(-2.0, 1.0); }

    static PenaltyProfile power(double exponent, double scale = 1.0) {
        return PenaltyProfile(exponent, scale);
    }

    /// Weight of depth d >= 1.
    double weight(int depth) const;

    double exponent() const { return exponent_; }
    double scale() const { return scale_; }

    /// Stable identifier of the form "pow:<exponent>:<scale>".
    std::string tag() const;

    /// Parses a tag produced by tag(); throws lexseq::Error on bad input.
    static PenaltyProfile parse(const std::string& tag);

    bool operator==(const PenaltyProfile& other) const = default;

private:
    PenaltyProfile(double exponent, double scale);

    double exponent_;
    double scale_;
};

}  // namespace lexseq
