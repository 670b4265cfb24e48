#pragma once

#include <string>
#include <variant>
#include <vector>

namespace rispaces {

// Nonnegative step function on (0,1]: value values[i] on (breaks[i], breaks[i+1]].
class StepFunction {
 public:
  StepFunction(std::vector<double> breaks, std::vector<double> values);

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double lo(std::size_t i) const { return breaks_[i]; }
  double hi(std::size_t i) const { return breaks_[i + 1]; }
  double width(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }
  bool is_zero() const;

  // Index of the half-open panel (x_{i-1}, x_i] holding t.
  std::size_t panel_of(double t) const;

 protected:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// A step function whose values are nonincreasing; stands in for f_*.
class StepRearrangement : public StepFunction {
 public:
  StepRearrangement(std::vector<double> breaks, std::vector<double> values);
  static StepRearrangement constant(double c);
  static StepRearrangement zero() { return constant(0.0); }
};

struct Sample {
  double value;
  double weight;
};

struct PowerLog {
  double gamma;
  double delta;
};
struct Char {
  double a;
};
struct ExplicitSteps {
  std::vector<double> breaks;
  std::vector<double> values;
};
struct Samples {
  std::vector<Sample> samples;
};
using FunctionModel = std::variant<PowerLog, Char, ExplicitSteps, Samples>;

StepRearrangement rearrange_from_samples(const std::vector<Sample>& samples);
StepRearrangement discretize_model(const FunctionModel& model, double u_max, int panels);
double power_integral(const StepFunction& f, double p, double a, double b);
double evaluate_at(const StepFunction& f, double t);

// Model value at a point; used for discretization and by tests as ground truth.
double model_value(const FunctionModel& model, double t);
std::string model_label(const FunctionModel& model);

// Exact prefix integrals F(x) = int_0^x f^p, O(log n) per query.
class PowerPrefix {
 public:
  PowerPrefix(const StepFunction& f, double p);
  double at(double x) const;
  double between(double a, double b) const { return at(b) - at(a); }
  double total() const { return cum_.back(); }
  double at_break(std::size_t i) const { return cum_[i]; }

 private:
  std::vector<double> breaks_;
  std::vector<double> vp_;
  std::vector<double> cum_;
};

// Small constructive helpers used across modules.
StepRearrangement scaled(const StepRearrangement& f, double lambda);
StepRearrangement merge_equal(const StepRearrangement& f);
StepRearrangement restricted_below(const StepRearrangement& f, double x);  // f * chi_(0,x)
double product_integral(const StepFunction& f, const StepFunction& g);     // int_0^1 f g

// Function specs as JSON: power_log | char | steps | samples (CSV value,weight).
FunctionModel model_from_json(const std::string& text, const std::string& base_dir = ".");
std::vector<Sample> read_samples_csv(const std::string& path);

}  // namespace rispaces
