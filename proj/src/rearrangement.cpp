#include "rispaces/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json_keys.hpp"
#include "nlohmann/json.hpp"
#include "rispaces/error.hpp"

namespace rispaces {

namespace {

void check_structure(const std::vector<double>& breaks, const std::vector<double>& values) {
  if (values.empty()) fail(ErrorKind::BadModel, "step function needs at least one panel");
  if (breaks.size() != values.size() + 1)
    fail(ErrorKind::BadModel, "breaks must have one more entry than values");
  for (double b : breaks)
    if (!std::isfinite(b)) fail(ErrorKind::NonFiniteInput, "non-finite breakpoint");
  if (breaks.front() != 0.0 || breaks.back() != 1.0)
    fail(ErrorKind::BadModel, "breaks must start at 0 and end at 1");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1])) fail(ErrorKind::BadModel, "breaks must be strictly increasing");
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteInput, "non-finite step value");
    if (v < 0.0) fail(ErrorKind::BadModel, "step values must be nonnegative");
  }
}

// t^{-gamma} (1 - log t)^{-delta} written in u = 1 - log t so tiny t never underflows.
double power_log_u(double gamma, double delta, double u) {
  return std::exp(gamma * (u - 1.0)) * std::pow(u, -delta);
}

void check_model(const FunctionModel& model) {
  if (const auto* m = std::get_if<PowerLog>(&model)) {
    if (!std::isfinite(m->gamma) || !std::isfinite(m->delta))
      fail(ErrorKind::BadModel, "power_log parameters must be finite");
    if (m->gamma < 0.0 || m->gamma >= 1.0) fail(ErrorKind::BadModel, "power_log needs 0 <= gamma < 1");
  } else if (const auto* c = std::get_if<Char>(&model)) {
    if (!(c->a > 0.0 && c->a <= 1.0)) fail(ErrorKind::BadModel, "char needs 0 < a <= 1");
  }
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  check_structure(breaks_, values_);
}

bool StepFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::size_t StepFunction::panel_of(double t) const {
  if (!(t > 0.0 && t <= 1.0)) fail(ErrorKind::BadPoint, "point outside (0,1]");
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), t);
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

StepRearrangement::StepRearrangement(std::vector<double> breaks, std::vector<double> values)
    : StepFunction(std::move(breaks), std::move(values)) {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] > values_[i - 1]) fail(ErrorKind::NotMonotone, "rearrangement values must be nonincreasing");
}

StepRearrangement StepRearrangement::constant(double c) { return StepRearrangement({0.0, 1.0}, {std::fabs(c)}); }

StepRearrangement rearrange_from_samples(const std::vector<Sample>& samples) {
  if (samples.empty()) fail(ErrorKind::BadWeights, "no samples");
  double total = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.value) || !std::isfinite(s.weight)) fail(ErrorKind::NonFiniteInput, "non-finite sample");
    if (!(s.weight > 0.0)) fail(ErrorKind::BadWeights, "sample weights must be positive");
    total += s.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) fail(ErrorKind::BadWeights, "sample weights must sum to 1");

  std::vector<Sample> sorted(samples);
  for (auto& s : sorted) s.value = std::fabs(s.value);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Sample& a, const Sample& b) { return a.value > b.value; });

  std::vector<double> breaks{0.0};
  std::vector<double> values;
  double cum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i].weight;
    double x = (i + 1 == sorted.size()) ? 1.0 : std::min(cum, 1.0);
    if (x <= breaks.back()) continue;  // weight lost below rounding; drop the empty panel
    breaks.push_back(x);
    values.push_back(sorted[i].value);
  }
  if (breaks.back() != 1.0) {
    breaks.back() = 1.0;
  }
  return StepRearrangement(std::move(breaks), std::move(values));
}

double model_value(const FunctionModel& model, double t) {
  if (!(t > 0.0 && t <= 1.0)) fail(ErrorKind::BadPoint, "point outside (0,1]");
  check_model(model);
  if (const auto* m = std::get_if<PowerLog>(&model)) return power_log_u(m->gamma, m->delta, 1.0 - std::log(t));
  if (const auto* c = std::get_if<Char>(&model)) return t < c->a ? 1.0 : 0.0;
  if (const auto* e = std::get_if<ExplicitSteps>(&model))
    return evaluate_at(StepFunction(e->breaks, e->values), t);
  return evaluate_at(rearrange_from_samples(std::get<Samples>(model).samples), t);
}

std::string model_label(const FunctionModel& model) {
  char buf[128];
  if (const auto* m = std::get_if<PowerLog>(&model)) {
    std::snprintf(buf, sizeof buf, "power_log(gamma=%.6g,delta=%.6g)", m->gamma, m->delta);
  } else if (const auto* c = std::get_if<Char>(&model)) {
    std::snprintf(buf, sizeof buf, "char(a=%.6g)", c->a);
  } else if (const auto* e = std::get_if<ExplicitSteps>(&model)) {
    std::snprintf(buf, sizeof buf, "steps(n=%zu)", e->values.size());
  } else {
    std::snprintf(buf, sizeof buf, "samples(n=%zu)", std::get<Samples>(model).samples.size());
  }
  return buf;
}

StepRearrangement discretize_model(const FunctionModel& model, double u_max, int panels) {
  if (!(u_max > 1.0) || !std::isfinite(u_max)) fail(ErrorKind::BadModel, "u_max must exceed 1");
  if (panels < 2) fail(ErrorKind::BadModel, "need at least 2 panels");
  check_model(model);

  if (const auto* c = std::get_if<Char>(&model)) {
    if (c->a == 1.0) return StepRearrangement::constant(1.0);
    return StepRearrangement({0.0, c->a, 1.0}, {1.0, 0.0});
  }
  if (const auto* e = std::get_if<ExplicitSteps>(&model)) {
    StepFunction f(e->breaks, e->values);
    std::vector<Sample> s;
    for (std::size_t i = 0; i < f.size(); ++i) s.push_back({f.values()[i], f.width(i)});
    // Telescoping widths can miss 1 by an ulp or two; renormalize.
    double total = 0.0;
    for (const auto& x : s) total += x.weight;
    for (auto& x : s) x.weight /= total;
    return merge_equal(rearrange_from_samples(s));
  }
  if (const auto* s = std::get_if<Samples>(&model)) return merge_equal(rearrange_from_samples(s->samples));

  const auto& m = std::get<PowerLog>(model);
  const double h = (u_max - 1.0) / panels;
  std::vector<double> breaks(panels + 2);
  std::vector<double> values(panels + 1);
  breaks[0] = 0.0;
  // ascending breaks: 0, t_panels, ..., t_1, t_0 = 1 with t_j = e^{1-u_j}
  for (int j = panels; j >= 0; --j) breaks[panels - j + 1] = std::exp(-h * j);
  breaks.back() = 1.0;
  values[0] = power_log_u(m.gamma, m.delta, u_max + 0.5 * h);
  for (int j = panels; j >= 1; --j) {
    double umid = 1.0 + h * (j - 0.5);  // geometric midpoint of (t_j, t_{j-1}]
    values[panels - j + 1] = power_log_u(m.gamma, m.delta, umid);
  }
  for (int i = static_cast<int>(values.size()) - 2; i >= 0; --i) values[i] = std::max(values[i], values[i + 1]);
  return merge_equal(StepRearrangement(std::move(breaks), std::move(values)));
}

double power_integral(const StepFunction& f, double p, double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a <= b)) fail(ErrorKind::BadInterval, "need 0 <= a <= b <= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double lo = std::max(a, f.lo(i));
    double hi = std::min(b, f.hi(i));
    if (hi > lo && f.values()[i] > 0.0) sum += std::pow(f.values()[i], p) * (hi - lo);
  }
  return sum;
}

double evaluate_at(const StepFunction& f, double t) { return f.values()[f.panel_of(t)]; }

PowerPrefix::PowerPrefix(const StepFunction& f, double p) : breaks_(f.breaks()) {
  vp_.resize(f.size());
  cum_.assign(f.size() + 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    vp_[i] = f.values()[i] > 0.0 ? std::pow(f.values()[i], p) : 0.0;
    cum_[i + 1] = cum_[i] + vp_[i] * f.width(i);
  }
}

double PowerPrefix::at(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return cum_.back();
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return cum_[i] + vp_[i] * (x - breaks_[i]);
}

StepRearrangement scaled(const StepRearrangement& f, double lambda) {
  std::vector<double> v(f.values());
  for (auto& x : v) x *= std::fabs(lambda);
  return StepRearrangement(f.breaks(), std::move(v));
}

StepRearrangement merge_equal(const StepRearrangement& f) {
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!values.empty() && values.back() == f.values()[i]) {
      breaks.back() = f.hi(i);
    } else {
      values.push_back(f.values()[i]);
      breaks.push_back(f.hi(i));
    }
  }
  return StepRearrangement(std::move(breaks), std::move(values));
}

StepRearrangement restricted_below(const StepRearrangement& f, double x) {
  if (x >= 1.0) return f;
  if (x <= 0.0) return StepRearrangement::zero();
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (std::size_t i = 0; i < f.size() && f.lo(i) < x; ++i) {
    breaks.push_back(std::min(f.hi(i), x));
    values.push_back(f.values()[i]);
  }
  breaks.push_back(1.0);
  values.push_back(0.0);
  return merge_equal(StepRearrangement(std::move(breaks), std::move(values)));
}

double product_integral(const StepFunction& f, const StepFunction& g) {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  double x = 0.0;
  while (i < f.size() && j < g.size()) {
    double next = std::min(f.hi(i), g.hi(j));
    sum += f.values()[i] * g.values()[j] * (next - x);
    x = next;
    if (f.hi(i) == next) ++i;
    if (g.hi(j) == next) ++j;
  }
  return sum;
}

std::vector<Sample> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadConfig, "cannot open samples file " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::BadConfig, "empty samples file");
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == '\r' || c == ' '; }), line.end());
  if (line != "value,weight") fail(ErrorKind::BadConfig, "samples CSV header must be value,weight");
  std::vector<Sample> out;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      fail(ErrorKind::BadConfig, "malformed samples row: " + line);
    try {
      out.push_back({std::stod(a), std::stod(b)});
    } catch (const std::exception&) {
      fail(ErrorKind::BadConfig, "malformed samples row: " + line);
    }
  }
  return out;
}

FunctionModel model_from_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::BadConfig, std::string("function spec is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    FunctionModel model;
    if (kind == "power_log") {
      detail::allow_keys(j, {"kind", "gamma", "delta"}, "function");
      model = PowerLog{j.at("gamma").get<double>(), j.at("delta").get<double>()};
    } else if (kind == "char") {
      detail::allow_keys(j, {"kind", "a"}, "function");
      model = Char{j.at("a").get<double>()};
    } else if (kind == "constant") {
      detail::allow_keys(j, {"kind", "value"}, "function");
      model = ExplicitSteps{{0.0, 1.0}, {std::fabs(j.at("value").get<double>())}};
    } else if (kind == "steps") {
      detail::allow_keys(j, {"kind", "breaks", "values"}, "function");
      model = ExplicitSteps{j.at("breaks").get<std::vector<double>>(), j.at("values").get<std::vector<double>>()};
    } else if (kind == "samples") {
      detail::allow_keys(j, {"kind", "path"}, "function");
      std::string path = j.at("path").get<std::string>();
      if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
      model = Samples{read_samples_csv(path)};
    } else {
      fail(ErrorKind::BadConfig, "unknown function kind: " + kind);
    }
    check_model(model);
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::BadConfig, std::string("function spec: ") + e.what());
  }
}

}  // namespace rispaces
