#pragma once

// Command-line front end for the `rmt` tool.
//
//   rmt exact --kmax K
//   rmt bounds --variant {gue,goe,band} --N n [--b b] --A p/q --C p/q --chi p/q --kmax K
//   rmt mc --ensemble {gue,goe,antisym,band} --N n [--b b] --kmax K --samples S --seed s
//   rmt band-norm --N n --b b --eps e --samples S --seed s
//   rmt verify-all [--fast]
//
// Global options: --format {csv,json}, --output PATH, --plot PATH, --config FILE.
// The JSON config holds global keys at top level and per-command keys under
// the command name, e.g. {"format": "json", "mc": {"N": 8, "seed": 3}}.
// Values given on the command line override the file, which overrides defaults.
// Exit status: 0 all PASS, 1 some FAIL, 2 usage error, 3 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rmt/bound_engine.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/estimators.hpp"
#include "rmt/exact_moments.hpp"
#include "rmt/report.hpp"
#include "rmt/verification.hpp"

namespace rmt::cli {

enum ExitCode : int { kAllPass = 0, kFail = 1, kUsage = 2, kRuntime = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  // ensemble / scheme
  std::string ensemble = "gue";
  std::string variant = "gue";
  std::string profile = "indicator";
  std::optional<int> N;
  std::optional<int> b;
  int k_max = 0;  // 0 selects the per-command default
  // Monte Carlo
  long long samples = 0;
  std::optional<std::uint64_t> seed;
  double eps = 0.5;
  // constants
  std::string A = "1/8";
  std::string C = "1/20";
  std::string chi = "1/100";
  std::optional<std::string> u_hat1;
  // verify-all
  bool fast = false;
  // output
  std::string format = "csv";
  std::string output;  // empty: stdout
  std::string plot;    // empty: no plot file
};

/// Reads nested JSON objects into CLI11 config items; objects become sections.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config", "top level must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto path = parents;
        path.push_back(key);
        collect(value, path, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
  }
};

namespace detail {

inline Rational rational_field(const std::string& text, const char* field) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("--") + field + ": '" + text + "' is not a rational number");
  }
}

inline BandProfile profile_field(const std::string& name) {
  if (name == "indicator") return BandProfile::indicator();
  if (name == "triangle") return BandProfile::triangle();
  if (name == "gaussian") return BandProfile::gaussian();
  throw UsageError("--profile: unknown profile '" + name + "'");
}

inline int require_N(const RunConfig& c) {
  if (!c.N) throw UsageError("--N is required");
  if (*c.N < 1) throw UsageError("--N must be >= 1");
  return *c.N;
}

inline int require_b(const RunConfig& c) {
  if (!c.b) throw UsageError("--b is required for band matrices");
  if (*c.b < 1) throw UsageError("--b must be >= 1");
  return *c.b;
}

inline std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw UsageError("--seed is required for Monte Carlo commands");
  return *c.seed;
}

inline std::size_t require_samples(const RunConfig& c, long long minimum) {
  if (c.samples < minimum) throw UsageError("--samples must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(c.samples);
}

inline EnsembleSpec ensemble_spec(const RunConfig& c, EnsembleKind kind) {
  const int N = require_N(c);
  if (kind != EnsembleKind::band) return EnsembleSpec::gaussian(kind, N);
  const int b = require_b(c);
  if (b > N) throw UsageError("--b must not exceed --N");
  return EnsembleSpec::band(N, b, profile_field(c.profile));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline Report run_exact(const RunConfig& c) {
  const int k_max = c.k_max > 0 ? c.k_max : 10;
  Report report{"exact", {}, {}};
  for (int k = 0; k <= k_max; ++k) {
    const auto poly = hz_moment_poly(k);
    for (int j = 0; j <= poly.degree(); ++j) {
      ReportRow r;
      r.quantity = "hz_moment_poly";
      r.k = k;
      r.q = j;
      r.value = to_string(poly.coeff(j));
      report.rows.push_back(r);
    }
  }
  return report;
}

inline Report run_bounds(const RunConfig& c) {
  SchemeVariant variant;
  try {
    variant = parse_scheme_variant(c.variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--variant: ") + e.what());
  }
  const int k_max = c.k_max > 0 ? c.k_max : 40;
  SchemeParams params;
  if (variant == SchemeVariant::band) {
    const int b = detail::require_b(c);
    if (c.N && *c.N < b) throw UsageError("--b must not exceed --N");
    const Rational u1 = c.u_hat1 ? detail::rational_field(*c.u_hat1, "u-hat1") : indicator_u_hat1(b);
    if (u1 <= 0) throw UsageError("--u-hat1 must be positive");
    params = SchemeParams::band(b, u1, k_max);
  } else {
    params = SchemeParams::gue(detail::require_N(c), k_max);
  }
  EnvelopeConstants constants{detail::rational_field(c.A, "A"), detail::rational_field(c.C, "C"),
                              detail::rational_field(c.chi, "chi"), params.u_hat1};
  if (constants.chi <= 0) throw UsageError("--chi must be positive");

  const auto grid = run_scheme(variant, params);
  const auto check = envelope_check(grid, constants);
  Report report{"bounds", {}, {}};
  auto base = [&](std::string quantity) {
    ReportRow r;
    r.quantity = std::move(quantity);
    if (variant == SchemeVariant::band)
      r.b = params.b;
    else
      r.N = params.N;
    return r;
  };

  auto validity = base("constants_admissible");
  validity.value = check.constants_valid() ? "yes" : check.constants_issue;
  validity.reference = "yes";
  validity.verdict = verdict_of(check.constants_valid());
  report.rows.push_back(validity);

  auto domain = base("envelope_k0");
  domain.value = std::to_string(check.k0);
  domain.reference = "<= " + std::to_string(k_max);
  domain.verdict = verdict_of(check.domain_covered);
  report.rows.push_back(domain);

  const int k0 = check.domain_covered ? check.k0 : -1;
  for (int k = 0; k <= k_max; ++k) {
    auto r = base("B");
    r.k = k;
    r.value = to_string(grid.B(k));
    if (k <= k0) {
      const Rational bound = envelope_B(grid, constants, k);
      r.reference = to_string(bound);
      r.verdict = verdict_of(grid.B(k) <= bound);
    }
    report.rows.push_back(r);
  }
  for (auto [k, q] : grid.r_points()) {
    auto r = base("R");
    r.k = k;
    r.q = q;
    r.value = to_string(grid.R(k, q));
    if (k <= k0 && 2 * k + q <= 2 * k0) {
      const Rational bound = envelope_R(grid, constants, k, q);
      r.reference = to_string(bound);
      r.verdict = verdict_of(grid.R(k, q) <= bound);
    }
    report.rows.push_back(r);
  }
  if (variant == SchemeVariant::gue) {
    for (const auto& d : dominance_check(grid).rows) {
      auto r = base("moment_le_B");
      r.k = d.k;
      r.value = to_string(*d.moment);
      r.reference = to_string(d.bound);
      r.verdict = verdict_of(*d.holds);
      report.rows.push_back(r);
    }
  }
  // Sufficient, not necessary: reported for information.
  for (const auto& cond : sufficient_conditions(variant, constants).conditions) {
    auto r = base("condition[" + std::string(cond.holds ? "holds" : "fails") + "] " + cond.name);
    r.value = to_string(cond.lhs);
    r.reference = to_string(cond.rhs);
    report.rows.push_back(r);
  }
  return report;
}

inline Report run_mc(const RunConfig& c) {
  EnsembleKind kind;
  try {
    kind = parse_ensemble_kind(c.ensemble);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--ensemble: ") + e.what());
  }
  const auto spec = detail::ensemble_spec(c, kind);
  const int k_max = c.k_max > 0 ? c.k_max : 4;
  const std::size_t samples = detail::require_samples(c, 100);
  const std::uint64_t seed = detail::require_seed(c);
  const auto est = mc_moments(spec, k_max, samples, seed);
  const int N = spec.N;

  Report report{"mc", {}, {}};
  auto base = [&](std::string quantity, const MCEstimate& e, int k) {
    ReportRow r;
    r.quantity = std::move(quantity);
    r.k = k;
    r.N = N;
    if (kind == EnsembleKind::band) r.b = spec.b;
    r.value = format_double(e.mean);
    r.std_error = format_double(e.std_error);
    return r;
  };
  std::optional<Rational> u1;
  if (kind == EnsembleKind::band) {
    const auto mass = u_hat1(spec.profile, spec.b);
    if (mass.exact) u1 = *mass.exact;
  }
  for (int k = 1; k <= k_max; ++k) {
    const auto& e = est.even[k];
    auto r = base("M_2k_" + to_string(kind), e, k);
    switch (kind) {
      case EnsembleKind::gue: {
        const Rational exact = hz_moment(k, N);
        r.reference = to_string(exact);
        r.verdict = verdict_of(verify::within(e, exact.get_d()));
        break;
      }
      case EnsembleKind::goe:
      case EnsembleKind::antisymmetric: {
        // first-order expansion; exact at k = 1
        const Rational corr = kind == EnsembleKind::goe ? goe_correction(k) : antisym_correction(k);
        const Rational ref = wigner_moment(k) + corr / N;
        r.reference = to_string(ref);
        if (k == 1) r.verdict = verdict_of(verify::within(e, ref.get_d()));
        break;
      }
      case EnsembleKind::band: {
        if (!u1) break;
        const Rational u = std::max(*u1, make_rational(1, 8));
        const Rational bound =
            (1 + make_rational(1, 8) * u *
                     make_rational(static_cast<long>(k + 1) * (k + 1) * (k + 1), static_cast<long>(spec.b) * spec.b)) *
            band_limit_moment(k, *u1);
        r.reference = "<= " + to_string(bound);
        r.verdict = verdict_of(e.mean <= bound.get_d() + 4.0 * e.std_error);
        break;
      }
    }
    report.rows.push_back(r);
    report.plot.push_back({to_string(kind) + "_M2k_N" + std::to_string(N), static_cast<double>(k), e.mean, e.std_error});
  }
  for (int k = 0; k < k_max; ++k) {
    const auto& e = est.odd[k];
    auto r = base("L_odd_" + to_string(kind), e, 2 * k + 1);
    r.reference = "0";
    // roundoff floor for ensembles whose odd traces vanish identically
    r.verdict = verdict_of(std::abs(e.mean) <= 4.0 * e.std_error + 1e-12);
    report.rows.push_back(r);
  }
  if (kind == EnsembleKind::gue && k_max >= 2) {
    const double n2 = static_cast<double>(N) * N;
    const auto& e = est.even[2];
    report.plot.push_back({"gue_N2_excess_k2", static_cast<double>(N), n2 * (e.mean - wigner_moment(2).get_d()),
                           n2 * e.std_error});
  }
  return report;
}

inline Report run_band_norm(const RunConfig& c) {
  const auto spec = detail::ensemble_spec(c, EnsembleKind::band);
  const std::size_t samples = detail::require_samples(c, 20);
  const std::uint64_t seed = detail::require_seed(c);
  if (!(c.eps > -1.0)) throw UsageError("--eps must exceed -1");
  const auto tail = norm_tail(spec, c.eps, samples, seed);
  Report report{"band-norm", {}, {}};
  auto base = [&](std::string quantity) {
    ReportRow r;
    r.quantity = std::move(quantity);
    r.N = spec.N;
    r.b = spec.b;
    return r;
  };
  auto freq = base("tail_frequency");
  freq.value = format_double(tail.frequency.mean);
  freq.std_error = format_double(tail.frequency.std_error);
  freq.reference = "threshold " + format_double(tail.threshold);
  report.rows.push_back(freq);
  auto median = base("lambda_max_median");
  median.value = format_double(tail.median());
  report.rows.push_back(median);
  auto largest = base("lambda_max_largest");
  largest.value = format_double(*std::max_element(tail.norms.begin(), tail.norms.end()));
  report.rows.push_back(largest);
  report.plot.push_back({"band_lambda_max_median_N" + std::to_string(spec.N), static_cast<double>(spec.b),
                         tail.median(), 0.0});
  return report;
}

inline Report dispatch(const RunConfig& c) {
  if (c.command == "exact") return run_exact(c);
  if (c.command == "bounds") return run_bounds(c);
  if (c.command == "mc") return run_mc(c);
  if (c.command == "band-norm") return run_band_norm(c);
  if (c.command == "verify-all") return verify_all({c.fast});
  throw UsageError("unknown command '" + c.command + "'");
}

/// Runs the command and writes the report (and plot data when requested).
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (c.format != "csv" && c.format != "json") {
    err << "error: --format must be csv or json\n";
    return kUsage;
  }
  Report report;
  try {
    report = dispatch(c);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  auto write = [&](std::ostream& os) {
    if (c.format == "json")
      write_json(os, report);
    else
      write_csv(os, report);
  };
  if (c.output.empty()) {
    write(out);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << c.output << '\n';
      return kRuntime;
    }
    write(f);
  }
  if (!c.plot.empty()) {
    std::ofstream f(c.plot, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << c.plot << '\n';
      return kRuntime;
    }
    emit_plot_data(f, report);
  }
  return report.all_pass() ? kAllPass : kFail;
}

/// Parses argv into a RunConfig. Returns an exit code when parsing ends the
/// run (help, usage errors), otherwise std::nullopt.
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out = std::cout,
                                std::ostream& err = std::cerr) {
  CLI::App app{"Exact and Monte Carlo checks of Gaussian random matrix moment bounds", "rmt"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", c.output, "Report path (default stdout)");
  app.add_option("--plot", c.plot, "Write series,x,y,yerr plot data to this path");

  auto* exact = app.add_subcommand("exact", "Exact GUE moment polynomials");
  exact->add_option("--kmax", c.k_max, "Largest k (default 10)");

  auto* bounds = app.add_subcommand("bounds", "Triangular scheme grid and envelope checks");
  bounds->add_option("--variant", c.variant, "gue, goe or band");
  bounds->add_option("--N", c.N, "Matrix size");
  bounds->add_option("--b", c.b, "Band width (band variant)");
  bounds->add_option("--u-hat1", c.u_hat1, "Profile mass (band variant, default: indicator profile)");
  bounds->add_option("--A", c.A, "Envelope constant A");
  bounds->add_option("--C", c.C, "Envelope constant C");
  bounds->add_option("--chi", c.chi, "Envelope range chi (theta for band)");
  bounds->add_option("--kmax", c.k_max, "Largest k of the grid (default 40)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo moments");
  mc->add_option("--ensemble", c.ensemble, "gue, goe, antisym or band");
  mc->add_option("--N", c.N, "Matrix size");
  mc->add_option("--b", c.b, "Band width (band ensemble)");
  mc->add_option("--profile", c.profile, "Band profile: indicator, triangle or gaussian");
  mc->add_option("--kmax", c.k_max, "Largest k (default 4)");
  mc->add_option("--samples", c.samples, "Number of draws");
  mc->add_option("--seed", c.seed, "Random seed");

  auto* norm = app.add_subcommand("band-norm", "Spectral norm tail of band matrices");
  norm->add_option("--N", c.N, "Matrix size");
  norm->add_option("--b", c.b, "Band width");
  norm->add_option("--profile", c.profile, "Band profile: indicator, triangle or gaussian");
  norm->add_option("--eps", c.eps, "Tail threshold sqrt(u1)(1 + eps)");
  norm->add_option("--samples", c.samples, "Number of draws");
  norm->add_option("--seed", c.seed, "Random seed");

  auto* all = app.add_subcommand("verify-all", "Run the full verification suite");
  all->add_flag("--fast", c.fast, "Smaller sample counts and sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  for (auto* sub : {exact, bounds, mc, norm, all})
    if (sub->parsed()) c.command = sub->get_name();
  return std::nullopt;
}

inline int main(int argc, const char* const* argv) {
  RunConfig config;
  if (auto code = parse(argc, argv, config)) return *code;
  return run(config);
}

}  // namespace rmt::cli
