#pragma once

// Command-line front end. run_cli is separate from main so tests can drive it
// in-process.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gof/gof.hpp"
#include "report_json.hpp"

namespace gof::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitReject = 2,
  kExitInput = 64,
  kExitCapability = 65,
};

struct Grid {
  double lo;
  double hi;
  double step;

  std::vector<double> points() const {
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
};

inline Grid parse_grid(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw InputError("grid must look like lo:hi:step, got '" + text + "'");
  const auto lo = detail::parse_double(parts[0]);
  const auto hi = detail::parse_double(parts[1]);
  const auto step = detail::parse_double(parts[2]);
  if (!lo || !hi || !step || !(*step > 0.0) || *hi < *lo) {
    throw InputError("bad grid '" + text + "'");
  }
  return {*lo, *hi, *step};
}

// Sample sizes; "inf" becomes nullopt.
inline std::vector<std::optional<std::size_t>> parse_sizes(const std::string& text) {
  std::vector<std::optional<std::size_t>> out;
  for (auto part : detail::split(text, ',')) {
    part = detail::trim(part);
    if (part == "inf" || part == "Inf" || part == "infinity") {
      out.emplace_back(std::nullopt);
      continue;
    }
    const auto v = detail::parse_double(part);
    if (!v || *v < 1.0 || *v != std::floor(*v)) {
      throw InputError("sample sizes must be positive integers or inf, got '" +
                       std::string(part) + "'");
    }
    out.emplace_back(static_cast<std::size_t>(*v));
  }
  if (out.empty()) throw InputError("no sample sizes given");
  return out;
}

struct Options {
  int precision = 6;
  std::string cache_path;
  unsigned workers = 0;
  std::uint64_t seed = 20240601;
  std::size_t reps = 10000;
};

inline MCConfig mc_config(const Options& o) {
  return {o.reps, o.seed, o.workers != 0 ? o.workers : MCConfig::default_workers()};
}

inline CriticalCache open_cache(const Options& o) {
  return CriticalCache(o.cache_path.empty() ? CriticalCache::default_path() : o.cache_path);
}

inline std::string fmt(double v, const Options& o) { return format_sig(v, o.precision); }

inline double critval_for(TestStat stat, std::optional<std::size_t> n, double alpha,
                          Method method, const CriticalCache& cache) {
  if (!n) {
    if (stat == TestStat::WnGumbel || stat == TestStat::VnGumbel) {
      throw DomainError("Gumbel critical values need a finite n");
    }
    return asymptotic_critical(stat, alpha);
  }
  return critical_value({stat, *n, alpha, method}, &cache);
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-fit tests with exact and asymptotic null distributions"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--precision", opt.precision, "Significant digits in numeric output")
      ->check(CLI::Range(1, 17));
  app.add_option("--cache", opt.cache_path, "Critical-value cache file (default $GOF_CACHE)");
  app.add_option("--workers", opt.workers, "Monte-Carlo worker threads (default $GOF_WORKERS)");

  // test
  auto* test = app.add_subcommand("test", "Run a test on a data file");
  std::string data_path, f0 = "uniform:0,1", stat_name, method_name = "exact";
  double alpha = 0.05;
  bool exitcode = false;
  test->add_option("--data", data_path, "CSV file, one value per line")->required();
  test->add_option("--f0", f0, "Null model: uniform:a,b | normal:mu,sigma | exp:lambda | pwl:FILE");
  test->add_option("--stat", stat_name, "WnStar|Smirnov|MSplus|VnStar|KS|WnGumbel|VnGumbel")
      ->required();
  test->add_option("--alpha", alpha, "Significance level");
  test->add_option("--method", method_name, "exact|asymptotic|mc");
  test->add_option("--reps", opt.reps, "Monte-Carlo replicates (method mc)");
  test->add_option("--seed", opt.seed, "Monte-Carlo master seed (method mc)");
  test->add_flag("--exitcode", exitcode, "Exit with status 2 when the null is rejected");

  // critval
  auto* critval = app.add_subcommand("critval", "Critical values");
  std::string sizes_text;
  critval->add_option("--stat", stat_name)->required();
  critval->add_option("--alpha", alpha);
  critval->add_option("--n", sizes_text, "Comma-separated sample sizes, inf allowed")->required();
  critval->add_option("--method", method_name, "exact|asymptotic");

  // cdf
  auto* cdf = app.add_subcommand("cdf", "Null CDF of a test statistic");
  std::size_t n_value = 0;
  std::optional<double> x_value;
  std::string grid_text;
  bool asymptotic = false;
  cdf->add_option("--stat", stat_name)->required();
  cdf->add_option("--n", n_value, "Sample size");
  auto* x_opt = cdf->add_option("--x", x_value, "Evaluation point on the test-statistic scale");
  auto* grid_opt = cdf->add_option("--grid", grid_text, "lo:hi:step");
  x_opt->excludes(grid_opt);
  cdf->add_option("--alpha", alpha, "Level that fixes the MSplus weight");
  cdf->add_flag("--asymptotic", asymptotic, "Use the limit law");

  // power
  auto* power = app.add_subcommand("power", "Power of the N-, S- and MS-tests");
  double tau = 0.05;
  std::string delta_text = "1:19:0.5";
  power->add_option("--n", n_value)->required();
  power->add_option("--alpha", alpha);
  power->add_option("--tau", tau, "F0(tau) of the alternative");
  power->add_option("--delta", delta_text, "lo:hi:step");
  power->add_option("--reps", opt.reps);
  power->add_option("--seed", opt.seed);

  // type1
  auto* type1 = app.add_subcommand("type1", "Monte-Carlo type I error of a test");
  type1->add_option("--stat", stat_name)->required();
  type1->add_option("--n", n_value)->required();
  type1->add_option("--alpha", alpha);
  type1->add_option("--method", method_name, "exact|asymptotic");
  type1->add_option("--reps", opt.reps);
  type1->add_option("--seed", opt.seed);

  // table1
  auto* table1 = app.add_subcommand("table1", "Exact critical values of the N-, S- and MS-tests");
  std::string table_sizes = "30,50,100,500,1000,inf";
  table1->add_option("--alpha", alpha);
  table1->add_option("--n", table_sizes);

  // figure1
  auto* figure1 = app.add_subcommand("figure1", "Exact and limiting CDF of sqrt(n) W*_n");
  std::size_t fig_n = 15;
  std::string fig_grid = "0:4:0.02";
  figure1->add_option("--n", fig_n);
  figure1->add_option("--grid", fig_grid);

  std::vector<const char*> argv{"gof"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (opt.reps < 1) throw InputError("--reps must be >= 1");
    const auto cache = open_cache(opt);

    if (*test) {
      const auto model = parse_model(f0);
      const auto sample = pit(read_sample_csv(data_path), model);
      const TestSpec spec{parse_test_stat(stat_name), sample.size(), alpha,
                          parse_method(method_name)};
      const TestReport report = spec.method == Method::monte_carlo
                                    ? run_test(spec, sample, mc_config(opt))
                                    : run_test(spec, sample, &cache);
      out << report_to_json(report, opt.precision).dump() << "\n";
      return (exitcode && report.reject) ? kExitReject : kExitOk;
    }

    if (*critval) {
      const auto stat = parse_test_stat(stat_name);
      const auto method = parse_method(method_name);
      if (method == Method::monte_carlo) {
        throw CapabilityError("critval supports methods exact and asymptotic");
      }
      const auto sizes = parse_sizes(sizes_text);
      out << "stat,n,alpha,method,value\n";
      for (const auto& n : sizes) {
        const Method m = n ? method : Method::asymptotic;
        const double v = critval_for(stat, n, alpha, m, cache);
        out << to_string(stat) << ',' << (n ? std::to_string(*n) : "inf") << ',' << fmt(alpha, opt)
            << ',' << to_string(m) << ',' << fmt(v, opt) << "\n";
      }
      return kExitOk;
    }

    if (*cdf) {
      const auto stat = parse_test_stat(stat_name);
      if (!x_value && grid_text.empty()) throw InputError("cdf needs --x or --grid");
      TestSpec spec{stat, n_value, alpha, asymptotic ? Method::asymptotic : Method::exact};
      if (n_value == 0) {
        if (!asymptotic) throw InputError("--n is required for exact CDFs");
        spec.n = 1;  // ignored by the n-free limit laws
        if (stat == TestStat::WnGumbel || stat == TestStat::VnGumbel) {
          throw InputError("--n is required for the Gumbel approximations");
        }
      }
      if (x_value) {
        out << fmt(null_cdf(spec, *x_value), opt) << "\n";
      } else {
        out << "x,cdf\n";
        for (double x : parse_grid(grid_text).points()) {
          out << fmt(x, opt) << ',' << fmt(null_cdf(spec, x), opt) << "\n";
        }
      }
      return kExitOk;
    }

    if (*power) {
      if (n_value < 1) throw InputError("--n must be >= 1");
      const auto deltas = parse_grid(delta_text).points();
      const auto crit = power_criticals(n_value, alpha, &cache);
      const auto pc = power_curve(n_value, alpha, tau, deltas, mc_config(opt), crit);
      out << "delta,power_N,se_N,power_S,se_S,power_MS,se_MS\n";
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        out << fmt(deltas[i], opt);
        for (std::size_t t = 0; t < 3; ++t) {
          out << ',' << fmt(pc.power[t][i], opt) << ',' << fmt(pc.se[t][i], opt);
        }
        out << "\n";
      }
      return kExitOk;
    }

    if (*type1) {
      if (n_value < 1) throw InputError("--n must be >= 1");
      const TestSpec spec{parse_test_stat(stat_name), n_value, alpha, parse_method(method_name)};
      if (spec.method == Method::monte_carlo) {
        throw CapabilityError("type1 needs an exact or asymptotic critical value");
      }
      const double crit = critical_value(spec, &cache);
      const auto est = type_one_error(spec, mc_config(opt), &cache);
      out << "stat,n,alpha,method,critical_value,rate,se\n"
          << to_string(spec.stat) << ',' << spec.n << ',' << fmt(alpha, opt) << ','
          << to_string(spec.method) << ',' << fmt(crit, opt) << ',' << fmt(est.rate, opt) << ','
          << fmt(est.se, opt) << "\n";
      return kExitOk;
    }

    if (*table1) {
      const auto sizes = parse_sizes(table_sizes);
      out << "stat,n,alpha,method,value\n";
      for (TestStat stat : {TestStat::WnStar, TestStat::Smirnov, TestStat::MSplus}) {
        for (const auto& n : sizes) {
          const Method m = n ? Method::exact : Method::asymptotic;
          const double v = critval_for(stat, n, alpha, m, cache);
          out << to_string(stat) << ',' << (n ? std::to_string(*n) : "inf") << ','
              << fmt(alpha, opt) << ',' << to_string(m) << ',' << fmt(v, opt) << "\n";
        }
      }
      return kExitOk;
    }

    if (*figure1) {
      if (fig_n < 1) throw InputError("--n must be >= 1");
      const double root_n = std::sqrt(static_cast<double>(fig_n));
      double sup_diff = 0.0;
      out << "x,H_n,H\n";
      for (double x : parse_grid(fig_grid).points()) {
        const double hn = wstar_cdf(fig_n, x / root_n);
        const double h = maxwell_cdf(x);
        sup_diff = std::max(sup_diff, std::abs(hn - h));
        out << fmt(x, opt) << ',' << fmt(hn, opt) << ',' << fmt(h, opt) << "\n";
      }
      out << "# n=" << fig_n << " sup|H_n - H|=" << fmt(sup_diff, opt) << "\n";
      return kExitOk;
    }
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateSampleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace gof::cli
