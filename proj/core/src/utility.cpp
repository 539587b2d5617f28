#include "ehpc/utility.hpp"

#include <cmath>

namespace ehpc {

double LogUtility::value(const PowerVector& p, const SystemState& s) const {
    double u = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) u += std::log1p(p[i] * s.channel[i]);
    return u;
}

std::vector<double> LogUtility::gradient(const PowerVector& p, const SystemState& s) const {
    std::vector<double> g(p.size());
    gradient_into(p, s, g);
    return g;
}

void LogUtility::gradient_into(const PowerVector& p, const SystemState& s,
                               std::vector<double>& g) const {
    for (std::size_t i = 0; i < p.size(); ++i)
        g[i] = s.channel[i] / (1.0 + p[i] * s.channel[i]);
}

}  // namespace ehpc
