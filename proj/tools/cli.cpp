#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "polya_aeppli/check.hpp"
#include "polya_aeppli/distribution.hpp"
#include "polya_aeppli/random.hpp"

namespace polya_aeppli::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamOptions {
  std::optional<double> lambda;
  std::optional<double> prob;
  std::optional<double> mean;
  std::optional<double> variance;

  void attach(CLI::App& cmd) {
    cmd.add_option("--lambda", lambda, "Poisson rate lambda");
    cmd.add_option("--prob", prob, "geometric parameter p in [0, 1)");
    cmd.add_option("--mean", mean, "mean mu (with --variance)");
    cmd.add_option("--variance", variance, "variance sigma^2 >= mu (with --mean)");
  }

  DistParams resolve() const {
    const bool direct = lambda || prob;
    const bool moment = mean || variance;
    if (direct == moment) {
      throw UsageError("give exactly one of --lambda/--prob or --mean/--variance");
    }
    try {
      if (direct) {
        if (!lambda || !prob) throw UsageError("--lambda and --prob must be given together");
        return DistParams(*lambda, *prob);
      }
      if (!mean || !variance) throw UsageError("--mean and --variance must be given together");
      return params_from_moments({*mean, *variance});
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
};

struct GridOptions {
  double from = 0.0;
  std::optional<double> to;
  double step = 1.0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--from", from, "first value of the grid")->capture_default_str();
    cmd.add_option("--to", to, "last value of the grid (inclusive)");
    cmd.add_option("--step", step, "grid spacing")->capture_default_str();
  }

  std::vector<double> values(bool integral) const {
    if (!to) throw UsageError("--to is required");
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(*to)) {
      throw UsageError("grid needs finite --from/--to and a positive --step");
    }
    if (integral && (std::floor(from) != from || std::floor(step) != step)) {
      throw UsageError("--from and --step must be integers");
    }
    std::vector<double> v;
    for (std::size_t k = 0;; ++k) {
      const double x = from + static_cast<double>(k) * step;
      if (x > *to) break;
      v.push_back(x);
    }
    return v;
  }
};

void write_csv(std::ostream& os, const char* header, const std::vector<double>& keys,
               const std::vector<double>& values) {
  os << header << '\n';
  for (std::size_t i = 0; i < keys.size(); ++i) {
    os << format_number(keys[i]) << ',' << format_number(values[i]) << '\n';
  }
}

void report_warnings(const Diagnostics& diag, std::ostream& err) {
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polya-Aeppli (geometric compound Poisson) distribution tables, quantiles, "
               "random variates and self-check"};
  app.require_subcommand(1);

  ParamOptions params;
  GridOptions grid;
  bool log_scale = false;
  bool upper_tail = false;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string out_path;
  std::vector<double> probabilities;

  auto* pmf_cmd = app.add_subcommand("pmf", "mass function over an integer range (x,value)");
  auto* cdf_cmd = app.add_subcommand("cdf", "distribution function over an integer range (x,value)");
  auto* q_cmd = app.add_subcommand("quantile", "quantiles of listed or gridded probabilities (p,q)");
  auto* sample_cmd = app.add_subcommand("sample", "random variates, one per line");
  auto* check_cmd = app.add_subcommand("check", "run the invariant suite against the oracles");

  for (auto* cmd : {pmf_cmd, cdf_cmd, q_cmd, sample_cmd}) {
    params.attach(*cmd);
    cmd->add_option("--out", out_path, "write data to this file instead of standard output");
  }
  for (auto* cmd : {pmf_cmd, cdf_cmd, q_cmd}) {
    grid.attach(*cmd);
    cmd->add_flag("--log", log_scale, "probabilities as natural logarithms");
  }
  for (auto* cmd : {cdf_cmd, q_cmd}) {
    cmd->add_flag("--upper-tail", upper_tail, "use P(X > x) instead of P(X <= x)");
  }
  q_cmd->add_option("probabilities", probabilities, "probabilities (instead of a grid)");
  sample_cmd->add_option("--n", n, "number of variates")->required();
  sample_cmd->add_option("--seed", seed, "generator seed")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check_cmd->parsed()) {
      const auto report = check::run_property_suite();
      double total = 0.0;
      for (const auto& r : report.results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.seconds << " s) "
            << r.detail << '\n';
        total += r.seconds;
      }
      out << (report.all_passed() ? "all checks passed" : "some checks FAILED") << " in "
          << total << " s\n";
      return report.all_passed() ? kExitOk : kExitFailure;
    }

    const DistParams dist = params.resolve();
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << out_path << " for writing\n";
        return kExitFailure;
      }
      file.imbue(std::locale::classic());
    }
    std::ostream& data = out_path.empty() ? out : file;

    const Scale scale = log_scale ? Scale::kLog : Scale::kLinear;
    const Tail tail = upper_tail ? Tail::kUpper : Tail::kLower;
    Diagnostics diag;
    if (pmf_cmd->parsed()) {
      const auto xs = grid.values(true);
      write_csv(data, "x,value", xs, pmf(xs, dist, scale, &diag));
    } else if (cdf_cmd->parsed()) {
      const auto xs = grid.values(true);
      write_csv(data, "x,value", xs, cdf(xs, dist, tail, scale));
    } else if (q_cmd->parsed()) {
      if (!probabilities.empty() && grid.to) {
        throw UsageError("give probabilities either as a list or as a grid, not both");
      }
      const auto ps = probabilities.empty() ? grid.values(false) : probabilities;
      write_csv(data, "p,q", ps, quantile(ps, dist, tail, scale, &diag));
    } else if (sample_cmd->parsed()) {
      for (const auto v : sample({n, seed}, dist)) data << v << '\n';
    }
    report_warnings(diag, err);
    data.flush();
    if (!data) {
      err << "error: failed writing output\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace polya_aeppli::cli
