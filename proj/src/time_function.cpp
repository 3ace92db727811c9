#include "quadfield/time_function.hpp"

#include <cmath>
#include <sstream>

#include "quadfield/spline.hpp"

namespace quadfield {
namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

class Constant final : public TimeFunction::Model {
 public:
  explicit Constant(double v) : v_(v) {}
  double value(double) const override { return v_; }
  double derivative(double) const override { return 0.0; }
  std::string describe() const override { return "constant(" + format_number(v_) + ")"; }
  bool is_zero() const override { return v_ == 0.0; }

 private:
  double v_;
};

class Exponential final : public TimeFunction::Model {
 public:
  Exponential(double amplitude, double rate) : amp_(amplitude), rate_(rate) {}
  double value(double t) const override { return amp_ * std::exp(rate_ * t); }
  double derivative(double t) const override { return amp_ * rate_ * std::exp(rate_ * t); }
  std::string describe() const override {
    return "exponential(" + format_number(amp_) + ", " + format_number(rate_) + ")";
  }
  bool is_zero() const override { return amp_ == 0.0; }

 private:
  double amp_, rate_;
};

class Sinusoid final : public TimeFunction::Model {
 public:
  Sinusoid(double offset, double amplitude, double omega, double phase)
      : offset_(offset), amp_(amplitude), omega_(omega), phase_(phase) {}
  double value(double t) const override { return offset_ + amp_ * std::sin(omega_ * t + phase_); }
  double derivative(double t) const override {
    return amp_ * omega_ * std::cos(omega_ * t + phase_);
  }
  std::string describe() const override {
    return "sinusoid(" + format_number(offset_) + ", " + format_number(amp_) + ", " +
           format_number(omega_) + ", " + format_number(phase_) + ")";
  }
  bool is_zero() const override { return offset_ == 0.0 && amp_ == 0.0; }

 private:
  double offset_, amp_, omega_, phase_;
};

class Table final : public TimeFunction::Model {
 public:
  Table(std::vector<double> t, std::vector<double> v) : spline_(std::move(t), std::move(v)) {}
  double value(double t) const override { return spline_(t); }
  double derivative(double t) const override { return spline_.derivative(t); }
  std::string describe() const override {
    return "table(" + std::to_string(spline_.knots().size()) + " samples)";
  }

 private:
  CubicSpline spline_;
};

class Custom final : public TimeFunction::Model {
 public:
  Custom(std::string description, std::function<double(double)> value,
         std::function<double(double)> derivative)
      : description_(std::move(description)), value_(std::move(value)), derivative_(std::move(derivative)) {}
  double value(double t) const override { return value_(t); }
  double derivative(double t) const override { return derivative_(t); }
  std::string describe() const override { return description_; }

 private:
  std::string description_;
  std::function<double(double)> value_, derivative_;
};

}  // namespace

TimeFunction::TimeFunction() : model_(std::make_shared<Constant>(0.0)) {}

TimeFunction TimeFunction::constant(double value) {
  return TimeFunction(std::make_shared<Constant>(value));
}

TimeFunction TimeFunction::exponential(double amplitude, double rate) {
  return TimeFunction(std::make_shared<Exponential>(amplitude, rate));
}

TimeFunction TimeFunction::sinusoid(double offset, double amplitude, double omega, double phase) {
  return TimeFunction(std::make_shared<Sinusoid>(offset, amplitude, omega, phase));
}

TimeFunction TimeFunction::table(std::vector<double> t, std::vector<double> values) {
  return TimeFunction(std::make_shared<Table>(std::move(t), std::move(values)));
}

TimeFunction TimeFunction::custom(std::string description, std::function<double(double)> value,
                                  std::function<double(double)> derivative) {
  return TimeFunction(
      std::make_shared<Custom>(std::move(description), std::move(value), std::move(derivative)));
}

}  // namespace quadfield
