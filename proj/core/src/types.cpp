#include "ehpc/types.hpp"

#include <algorithm>
#include <numeric>

namespace ehpc {

double sum(const PowerVector& p) {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

double l2_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

ProblemParams derive_params(int n, double p_max, double e_max,
                            const std::vector<double>& channel_support_max) {
    if (n < 1 || p_max <= 0.0 || e_max <= 0.0)
        throw std::invalid_argument("derive_params: n, p_max, e_max must be positive");
    if (static_cast<int>(channel_support_max.size()) != n)
        throw std::invalid_argument("derive_params: channel_support_max must have length n");
    for (double s : channel_support_max)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("derive_params: channel supports must be positive and finite");

    ProblemParams pp;
    pp.n = n;
    pp.p_max = p_max;
    pp.e_max = e_max;
    // For sum-log utility the gradient component is s_i/(1 + p_i s_i) <= s_i,
    // tight at p_i = 0, so the channel support maximum is the tight D_i.
    pp.d_per_coord = channel_support_max;
    double ss = 0.0;
    for (double d : pp.d_per_coord) ss += d * d;
    pp.d_norm = std::sqrt(ss);
    pp.d_max = *std::max_element(pp.d_per_coord.begin(), pp.d_per_coord.end());
    double m = std::max(e_max, p_max);
    pp.b_const = m * m;
    return pp;
}

AlgorithmParams derive_algorithm_params(const ProblemParams& pp, double v, int t0) {
    if (!(v > 0.0)) throw std::invalid_argument("derive_algorithm_params: V must be positive");
    if (t0 < 1) throw std::invalid_argument("derive_algorithm_params: t0 must be >= 1");
    AlgorithmParams ap;
    ap.v_param = v;
    ap.q_lower = std::ceil(v) * (pp.d_max + 2.0 * pp.p_max + pp.e_max);
    ap.recommended_capacity = ap.q_lower + pp.p_max;
    ap.delay_t0 = t0;
    return ap;
}

}  // namespace ehpc
