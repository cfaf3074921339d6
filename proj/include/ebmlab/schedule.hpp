#pragma once

#include <cmath>
#include <stdexcept>

namespace ebmlab {

/// Learning-rate schedule u(t) = (1 + c t)^{-beta} with beta in (0,1), c > 0.
/// All evaluations are closed-form and O(1).
class Schedule {
  public:
    Schedule(double beta, double c) : beta_(beta), c_(c) {
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("Schedule: beta must lie in (0,1)");
        if (!(c > 0.0)) throw std::invalid_argument("Schedule: c must be positive");
    }

    double beta() const { return beta_; }
    double c() const { return c_; }
    /// gamma = (1 - beta) / beta, the exponent in |u'(t)| = c*beta*u(t)^{2+gamma}.
    double gamma() const { return (1.0 - beta_) / beta_; }

    /// u(t) = (1 + c t)^{-beta}, strictly decreasing, u(0) = 1.
    double rate(double t) const {
        if (t < 0.0) throw std::invalid_argument("Schedule::rate: t must be >= 0");
        return std::pow(1.0 + c_ * t, -beta_);
    }

    /// U(a,b) = integral of u over [a,b]
    ///        = ((1+c b)^{1-beta} - (1+c a)^{1-beta}) / (c (1-beta)).
    double rate_integral(double a, double b) const {
        if (a < 0.0 || a > b)
            throw std::invalid_argument("Schedule::rate_integral: need 0 <= a <= b");
        double p = 1.0 - beta_;
        return (std::pow(1.0 + c_ * b, p) - std::pow(1.0 + c_ * a, p)) / (c_ * p);
    }

    /// u'(t) = -c*beta*(1 + c t)^{-(1+beta)}.
    double rate_derivative(double t) const {
        if (t < 0.0) throw std::invalid_argument("Schedule::rate_derivative: t must be >= 0");
        return -c_ * beta_ * std::pow(1.0 + c_ * t, -(1.0 + beta_));
    }

  private:
    double beta_;
    double c_;
};

}  // namespace ebmlab
