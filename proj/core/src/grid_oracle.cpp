#include "ehpc/grid_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehpc {

PowerVector grid_argmax(const std::function<double(const PowerVector&)>& objective,
                        int n, double cap, double resolution) {
    if (n < 1 || n > 3) throw std::invalid_argument("grid_argmax: n must be in {1,2,3}");
    if (!(resolution > 0.0)) throw std::invalid_argument("grid_argmax: bad resolution");

    const auto steps = static_cast<long>(std::floor(cap / resolution + 1e-9));
    PowerVector best(static_cast<std::size_t>(n), 0.0);
    double best_val = -std::numeric_limits<double>::infinity();
    PowerVector p(static_cast<std::size_t>(n), 0.0);

    auto consider = [&] {
        double v = objective(p);
        if (v > best_val) {
            best_val = v;
            best = p;
        }
    };
    for (long i = 0; i <= steps; ++i) {
        p[0] = static_cast<double>(i) * resolution;
        if (n == 1) { consider(); continue; }
        for (long j = 0; i + j <= steps; ++j) {
            p[1] = static_cast<double>(j) * resolution;
            if (n == 2) { consider(); continue; }
            for (long k = 0; i + j + k <= steps; ++k) {
                p[2] = static_cast<double>(k) * resolution;
                consider();
            }
        }
    }
    return best;
}

PowerVector qp_oracle(const std::vector<double>& point, double p_max, double resolution) {
    auto neg_sq_dist = [&point](const PowerVector& p) {
        double d = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double diff = p[i] - point[i];
            d += diff * diff;
        }
        return -d;
    };
    return grid_argmax(neg_sq_dist, static_cast<int>(point.size()), p_max, resolution);
}

}  // namespace ehpc
