#pragma once

#include "ehpc/types.hpp"

namespace ehpc {

/// Concave per-slot utility with value and subgradient evaluation.
class Utility {
public:
    virtual ~Utility() = default;
    virtual double value(const PowerVector& p, const SystemState& s) const = 0;
    virtual std::vector<double> gradient(const PowerVector& p, const SystemState& s) const = 0;
    /// Writes the gradient into `out` (sized n) without allocating. Hot path
    /// for sample-average loops.
    virtual void gradient_into(const PowerVector& p, const SystemState& s,
                               std::vector<double>& out) const {
        out = gradient(p, s);
    }
};

/// U(p; omega) = sum_i ln(1 + p_i s_i), natural log.
/// Gradient component i is s_i / (1 + p_i s_i), bounded by s_i.
class LogUtility final : public Utility {
public:
    double value(const PowerVector& p, const SystemState& s) const override;
    std::vector<double> gradient(const PowerVector& p, const SystemState& s) const override;
    void gradient_into(const PowerVector& p, const SystemState& s,
                       std::vector<double>& out) const override;
};

}  // namespace ehpc
