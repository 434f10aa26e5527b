#pragma once

#include <functional>
#include <vector>

namespace mulcanon {

enum class OptimizerKind { Sgd, Adam };

/// First-order optimizer over a flat parameter vector.
class Optimizer {
public:
    Optimizer(OptimizerKind kind, std::size_t n, double lr);

    void set_learning_rate(double lr) { lr_ = lr; }
    void step(std::vector<double>& params, const std::vector<double>& grads);

private:
    OptimizerKind kind_;
    double lr_;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    std::vector<double> m_, v_;
};

/// Central finite differences against an analytic gradient; returns the max
/// relative error over all coordinates.
double grad_check(const std::function<double(const std::vector<double>&)>& f,
                  const std::vector<double>& point,
                  const std::vector<double>& analytic_grad, double epsilon);

}  // namespace mulcanon
