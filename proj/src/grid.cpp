#include "fracsys/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracsys/errors.hpp"

namespace fracsys {

StepGrid::StepGrid(double step, double offset, std::size_t horizon)
    : h(step), a(offset), N(horizon) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("StepGrid: h must be positive and finite");
    if (!std::isfinite(a)) throw DomainError("StepGrid: offset must be finite");
}

FracOrderPair::FracOrderPair(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0,1], got " + std::to_string(alpha));
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw DomainError("beta must lie in (0,1], got " + std::to_string(beta));
    }
}

SampledSequence::SampledSequence(StepGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::length_error("SampledSequence: expected " + std::to_string(grid_.size()) +
                                " samples, got " + std::to_string(values_.size()));
    }
}

}  // namespace fracsys
