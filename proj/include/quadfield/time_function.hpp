#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace quadfield {

/// Immutable real function of time with a known first derivative. Copies
/// share the underlying model.
class TimeFunction {
 public:
  class Model {
   public:
    virtual ~Model() = default;
    virtual double value(double t) const = 0;
    virtual double derivative(double t) const = 0;
    virtual std::string describe() const = 0;
    virtual bool is_zero() const { return false; }
  };

  /// The zero function.
  TimeFunction();
  explicit TimeFunction(std::shared_ptr<const Model> model) : model_(std::move(model)) {}

  static TimeFunction constant(double value);
  /// amplitude * exp(rate * t)
  static TimeFunction exponential(double amplitude, double rate);
  /// offset + amplitude * sin(omega * t + phase)
  static TimeFunction sinusoid(double offset, double amplitude, double omega, double phase = 0.0);
  /// Natural cubic spline through the samples; derivative of the spline.
  static TimeFunction table(std::vector<double> t, std::vector<double> values);
  static TimeFunction custom(std::string description, std::function<double(double)> value,
                             std::function<double(double)> derivative);

  double operator()(double t) const { return model_->value(t); }
  double derivative(double t) const { return model_->derivative(t); }
  bool is_zero() const { return model_->is_zero(); }
  std::string describe() const { return model_->describe(); }

 private:
  std::shared_ptr<const Model> model_;
};

}  // namespace quadfield
