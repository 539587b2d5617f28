#include "ehpc/projection.hpp"

#include <algorithm>
#include <cmath>

namespace ehpc {

PowerVector project_capped_simplex(const std::vector<double>& point, double p_max) {
    if (point.empty()) throw std::invalid_argument("project_capped_simplex: empty input");
    if (!(p_max > 0.0)) throw std::invalid_argument("project_capped_simplex: p_max must be positive");
    for (double v : point)
        if (!std::isfinite(v))
            throw std::invalid_argument("project_capped_simplex: non-finite component");

    PowerVector y(point.size());
    double s = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        y[i] = std::max(point[i], 0.0);
        s += y[i];
    }
    if (s <= p_max) return y;

    // Sum constraint active: project the clipped point onto {p >= 0, sum = p_max}.
    // Clipping first is safe because coordinates that are negative pre-clip end
    // at zero either way once the threshold is positive.
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double prefix = 0.0;
    double lambda = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        double cand = (prefix - p_max) / static_cast<double>(k + 1);
        if (sorted[k] - cand > 0.0)
            lambda = cand;
        else
            break;
    }
    for (double& v : y) v = std::max(v - lambda, 0.0);
    return y;
}

PowerVector project_nonpositive_shift(const PowerVector& p_prev,
                                      const std::vector<double>& b) {
    if (p_prev.size() != b.size())
        throw std::invalid_argument("project_nonpositive_shift: size mismatch");
    for (double bi : b) {
        if (!std::isfinite(bi))
            throw std::invalid_argument("project_nonpositive_shift: non-finite shift");
        if (bi > 0.0)
            throw std::invalid_argument("project_nonpositive_shift: shift component > 0");
    }
    PowerVector y(p_prev.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::max(p_prev[i] + b[i], 0.0);
    return y;
}

double projection_kkt_residual(const std::vector<double>& x, const PowerVector& y,
                               double p_max) {
    double s = 0.0;
    double lambda = 0.0;
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += y[i];
        res = std::max(res, -y[i]);                    // nonnegativity
        lambda = std::max(lambda, x[i] - y[i]);        // multiplier of the sum constraint
    }
    lambda = std::max(lambda, 0.0);
    res = std::max(res, s - p_max);                    // sum feasibility
    if (lambda > 1e-12) res = std::max(res, std::fabs(s - p_max));  // slackness
    for (std::size_t i = 0; i < y.size(); ++i)
        res = std::max(res, std::fabs(y[i] - std::max(x[i] - lambda, 0.0)));
    return res;
}

}  // namespace ehpc
