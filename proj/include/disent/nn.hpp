#ifndef DISENT_NN_HPP
#define DISENT_NN_HPP

#include <cmath>
#include <span>

#include "disent/errors.hpp"
#include "disent/matrix.hpp"

namespace disent {

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline void relu_inplace(std::span<double> v) {
    for (double& x : v)
        if (x < 0.0) x = 0.0;
}

// dpre = dpost where the forward activation was positive, else 0.
// `activated` is the post-ReLU value, so the kink at exactly 0 gates off.
inline void relu_backward_inplace(std::span<const double> activated, std::span<double> grad) {
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (activated[i] <= 0.0) grad[i] = 0.0;
}

// Stable elementwise binary cross-entropy on logits:
//   bce(l, t) = max(l, 0) - l*t + log1p(exp(-|l|))
// summed over elements. If grad is nonempty it receives sigmoid(l) - t.
// Finite for any finite logit; targets must lie in [0, 1].
inline double bce_with_logits(std::span<const double> logits, std::span<const double> targets,
                              std::span<double> grad = {}) {
    if (logits.size() != targets.size()) {
        throw DimError("bce_with_logits: length mismatch " + std::to_string(logits.size()) +
                       " vs " + std::to_string(targets.size()));
    }
    if (!grad.empty() && grad.size() != logits.size()) {
        throw DimError("bce_with_logits: grad length mismatch " + std::to_string(grad.size()) +
                       " vs " + std::to_string(logits.size()));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double l = logits[i], t = targets[i];
        loss += (l > 0.0 ? l : 0.0) - l * t + std::log1p(std::exp(-std::abs(l)));
        if (!grad.empty()) grad[i] = sigmoid(l) - t;
    }
    return loss;
}

}  // namespace disent

#endif
