#pragma once

// Hypothesized null models F0 and the probability integral transform.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gof/error.hpp"
#include "gof/normal.hpp"

namespace gof {

struct UniformModel {
  double a = 0.0;
  double b = 1.0;
};

struct NormalModel {
  double mu = 0.0;
  double sigma = 1.0;
};

struct ExponentialModel {
  double lambda = 1.0;
};

struct Knot {
  double x;
  double f;
};

// Continuous CDF given by linear interpolation between knots. F is 0 left of
// the first knot and 1 right of the last one.
struct PiecewiseLinearModel {
  std::vector<Knot> knots;
};

// Sorted values in [0,1]: the data after the probability integral transform.
class UnitSample {
 public:
  UnitSample() = default;

  static UnitSample from_sorted(std::vector<double> values) {
    if (values.empty()) throw InputError("UnitSample: sample must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double u = values[i];
      if (!(u >= 0.0 && u <= 1.0)) {
        throw InputError("UnitSample: values must lie in [0,1]");
      }
      if (i > 0 && values[i - 1] > u) {
        throw InputError("UnitSample: values must be sorted ascending");
      }
    }
    UnitSample s;
    s.values_ = std::move(values);
    return s;
  }

  static UnitSample from_unsorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return from_sorted(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  // 1-based order statistic u_{i:n}.
  double order_stat(std::size_t i) const { return values_[i - 1]; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const UnitSample&, const UnitSample&) = default;

 private:
  std::vector<double> values_;
};

class HypothesisModel {
 public:
  using Family =
      std::variant<UniformModel, NormalModel, ExponentialModel, PiecewiseLinearModel>;

  static HypothesisModel uniform(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
      throw ParameterError("uniform model requires finite a < b");
    }
    return HypothesisModel(UniformModel{a, b});
  }

  static HypothesisModel normal(double mu, double sigma) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
      throw ParameterError("normal model requires finite mu and sigma > 0");
    }
    return HypothesisModel(NormalModel{mu, sigma});
  }

  static HypothesisModel exponential(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
      throw ParameterError("exponential model requires lambda > 0");
    }
    return HypothesisModel(ExponentialModel{lambda});
  }

  static HypothesisModel piecewise_linear(std::vector<Knot> knots) {
    if (knots.size() < 2) {
      throw ParameterError("piecewise-linear model needs at least two knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!std::isfinite(knots[i].x) || !std::isfinite(knots[i].f)) {
        throw ParameterError("piecewise-linear knots must be finite");
      }
      if (i > 0 && !(knots[i].x > knots[i - 1].x)) {
        throw ParameterError("piecewise-linear knots must be strictly increasing in x");
      }
      if (i > 0 && knots[i].f < knots[i - 1].f) {
        throw ParameterError("piecewise-linear F values must be nondecreasing");
      }
    }
    if (knots.front().f != 0.0 || knots.back().f != 1.0) {
      throw ParameterError("piecewise-linear F values must run from 0 to 1");
    }
    return HypothesisModel(PiecewiseLinearModel{std::move(knots)});
  }

  const Family& family() const { return family_; }

  // Closed support [lo, hi]; infinite ends for unbounded families.
  std::pair<double, double> support() const {
    static constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [](const auto& m) -> std::pair<double, double> {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, UniformModel>) {
            return {m.a, m.b};
          } else if constexpr (std::is_same_v<M, NormalModel>) {
            return {-inf, inf};
          } else if constexpr (std::is_same_v<M, ExponentialModel>) {
            return {0.0, inf};
          } else {
            return {m.knots.front().x, m.knots.back().x};
          }
        },
        family_);
  }

 private:
  explicit HypothesisModel(Family f) : family_(std::move(f)) {}
  Family family_;
};

inline double eval_cdf(const HypothesisModel& model, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, UniformModel>) {
          if (x <= m.a) return 0.0;
          if (x >= m.b) return 1.0;
          return (x - m.a) / (m.b - m.a);
        } else if constexpr (std::is_same_v<M, NormalModel>) {
          return normal_cdf((x - m.mu) / m.sigma);
        } else if constexpr (std::is_same_v<M, ExponentialModel>) {
          if (x <= 0.0) return 0.0;
          return -std::expm1(-m.lambda * x);
        } else {
          const auto& k = m.knots;
          if (x <= k.front().x) return 0.0;
          if (x >= k.back().x) return 1.0;
          auto it = std::upper_bound(k.begin(), k.end(), x,
                                     [](double v, const Knot& kn) { return v < kn.x; });
          const Knot& hi = *it;
          const Knot& lo = *(it - 1);
          const double t = (x - lo.x) / (hi.x - lo.x);
          return std::clamp(lo.f + t * (hi.f - lo.f), 0.0, 1.0);
        }
      },
      model.family());
}

inline double eval_quantile(const HypothesisModel& model, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("eval_quantile: p must lie in (0,1)");
  return std::visit(
      [p](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, UniformModel>) {
          return m.a + p * (m.b - m.a);
        } else if constexpr (std::is_same_v<M, NormalModel>) {
          return m.mu + m.sigma * normal_quantile(p);
        } else if constexpr (std::is_same_v<M, ExponentialModel>) {
          return -std::log1p(-p) / m.lambda;
        } else {
          // inf{x : F(x) >= p}; flat segments resolve to their left end.
          const auto& k = m.knots;
          auto it = std::lower_bound(k.begin(), k.end(), p,
                                     [](const Knot& kn, double v) { return kn.f < v; });
          const Knot& hi = *it;
          const Knot& lo = *(it - 1);
          const double t = (p - lo.f) / (hi.f - lo.f);
          return lo.x + t * (hi.x - lo.x);
        }
      },
      model.family());
}

// Sorted F0(x_i). Support endpoints map to 0 or 1 and are accepted.
inline UnitSample pit(const std::vector<double>& raw, const HypothesisModel& model) {
  if (raw.empty()) throw InputError("pit: sample is empty");
  const auto [lo, hi] = model.support();
  std::vector<double> u;
  u.reserve(raw.size());
  for (double x : raw) {
    if (std::isnan(x) || x < lo || x > hi) {
      std::ostringstream msg;
      msg << "pit: value " << x << " lies outside the model support";
      throw InputError(msg.str());
    }
    u.push_back(eval_cdf(model, x));
  }
  return UnitSample::from_unsorted(std::move(u));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Rows of comma-separated numbers; a single non-numeric first line is taken
// as a header. Blank lines are skipped.
inline std::vector<std::vector<double>> read_numeric_rows(std::istream& in,
                                                          std::size_t columns) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view = trim(view.substr(3));
    }
    if (view.empty()) continue;
    auto fields = split(view, ',');
    std::vector<double> row;
    bool ok = fields.size() == columns;
    for (auto f : fields) {
      if (!ok) break;
      auto v = parse_double(f);
      if (!v || !std::isfinite(*v)) {
        ok = false;
        break;
      }
      row.push_back(*v);
    }
    if (!ok) {
      if (lineno == 1) continue;  // header
      throw InputError("malformed numeric CSV at line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return in;
}

}  // namespace detail

// One value per line, optional single header line.
inline std::vector<double> read_sample_csv(std::istream& in) {
  std::vector<double> out;
  for (auto& row : detail::read_numeric_rows(in, 1)) out.push_back(row[0]);
  if (out.empty()) throw InputError("sample file contains no data");
  return out;
}

inline std::vector<double> read_sample_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_sample_csv(in);
}

// Model grammar: uniform:a,b | normal:mu,sigma | exp:lambda | pwl:file.csv
// The pwl file holds "x,F" rows.
inline HypothesisModel parse_model(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("model spec must look like family:params");
  }
  const auto family = detail::trim(spec.substr(0, colon));
  const auto params = spec.substr(colon + 1);

  if (family == "pwl") {
    auto in = detail::open_input(std::string(detail::trim(params)));
    std::vector<Knot> knots;
    for (auto& row : detail::read_numeric_rows(in, 2)) knots.push_back({row[0], row[1]});
    return HypothesisModel::piecewise_linear(std::move(knots));
  }

  std::vector<double> values;
  for (auto f : detail::split(params, ',')) {
    auto v = detail::parse_double(f);
    if (!v) throw InputError("bad numeric model parameter in '" + std::string(spec) + "'");
    values.push_back(*v);
  }
  auto expect = [&](std::size_t count) {
    if (values.size() != count) {
      throw InputError("model '" + std::string(family) + "' expects " +
                       std::to_string(count) + " parameter(s)");
    }
  };
  if (family == "uniform") {
    expect(2);
    return HypothesisModel::uniform(values[0], values[1]);
  }
  if (family == "normal") {
    expect(2);
    return HypothesisModel::normal(values[0], values[1]);
  }
  if (family == "exp") {
    expect(1);
    return HypothesisModel::exponential(values[0]);
  }
  throw InputError("unknown model family '" + std::string(family) + "'");
}

}  // namespace gof
