#ifndef DISENT_GRADCHECK_HPP
#define DISENT_GRADCHECK_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "disent/errors.hpp"
#include "disent/rng.hpp"

namespace disent {

struct GradReport {
    double max_relative_error = 0.0;
    std::size_t worst_parameter_index = 0;
    double analytic_value = 0.0;  // analytic gradient at the worst index
    double numeric_value = 0.0;   // central difference at the worst index
    std::size_t checked = 0;
    bool passed = false;
};

// Compares `analytic` against central differences of `loss_fn` over the
// parameter vector. loss_fn must be a pure function of params. When
// max_checks > 0 and smaller than the parameter count, a random subset of
// coordinates is probed (rng required). Relative error uses a 1e-8 floor:
//   |a - n| / max(|a|, |n|, 1e-8).
inline GradReport grad_check(const std::function<double(std::span<const double>)>& loss_fn,
                             std::span<double> params, std::span<const double> analytic,
                             double h, double tol, RngState* rng = nullptr,
                             std::size_t max_checks = 0) {
    if (params.size() != analytic.size()) {
        throw DimError("grad_check: params/analytic length mismatch " +
                       std::to_string(params.size()) + " vs " + std::to_string(analytic.size()));
    }
    std::vector<std::size_t> idx;
    if (max_checks > 0 && max_checks < params.size() && rng != nullptr) {
        idx.reserve(max_checks);
        for (std::size_t i = 0; i < max_checks; ++i)
            idx.push_back(static_cast<std::size_t>(rng->next_below(params.size())));
    } else {
        idx.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) idx[i] = i;
    }

    GradReport rep;
    for (std::size_t i : idx) {
        const double saved = params[i];
        params[i] = saved + h;
        const double fp = loss_fn(params);
        params[i] = saved - h;
        const double fm = loss_fn(params);
        params[i] = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("grad_check: non-finite loss at parameter " + std::to_string(i));
        }
        const double numeric = (fp - fm) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
        const double rel = std::abs(analytic[i] - numeric) / denom;
        if (rel >= rep.max_relative_error) {
            rep.max_relative_error = rel;
            rep.worst_parameter_index = i;
            rep.analytic_value = analytic[i];
            rep.numeric_value = numeric;
        }
        ++rep.checked;
    }
    rep.passed = rep.max_relative_error < tol;
    return rep;
}

}  // namespace disent

#endif
