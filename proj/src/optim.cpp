#include "mulcanon/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace mulcanon {

Optimizer::Optimizer(OptimizerKind kind, std::size_t n, double lr)
    : kind_(kind), lr_(lr) {
    if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (kind_ == OptimizerKind::Adam) {
        m_.assign(n, 0.0);
        v_.assign(n, 0.0);
    }
}

void Optimizer::step(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != grads.size())
        throw std::invalid_argument("optimizer: gradient size mismatch");
    if (kind_ == OptimizerKind::Sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grads[i];
        return;
    }
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, t_);
    double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        double m_hat = m_[i] / bc1;
        double v_hat = v_[i] / bc2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
}

double grad_check(const std::function<double(const std::vector<double>&)>& f,
                  const std::vector<double>& point,
                  const std::vector<double>& analytic_grad, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("grad_check: epsilon must be positive");
    if (point.size() != analytic_grad.size())
        throw std::invalid_argument("grad_check: gradient size mismatch");
    double max_rel = 0.0;
    std::vector<double> x = point;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double orig = x[i];
        x[i] = orig + epsilon;
        double fp = f(x);
        x[i] = orig - epsilon;
        double fm = f(x);
        x[i] = orig;
        double numeric = (fp - fm) / (2.0 * epsilon);
        double denom = std::max({std::fabs(numeric), std::fabs(analytic_grad[i]), 1e-4});
        double rel = std::fabs(numeric - analytic_grad[i]) / denom;
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace mulcanon
