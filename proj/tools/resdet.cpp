#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "resdet/case_studies.hpp"
#include "resdet/errors.hpp"
#include "resdet/gevrey.hpp"
#include "resdet/laplace.hpp"
#include "resdet/regularizations.hpp"
#include "resdet/suite.hpp"
#include "resdet/theta.hpp"

using namespace resdet;

namespace {

enum class Format { json, csv, table };

struct Config {
  std::string spectrum, lengths, variant, format = "json", rho = "1.0";
  std::optional<int> genus;
  std::optional<double> s0, eps, tol;
  double theta = 0;
  int m = 1;
  std::uint64_t seed = 42;
};

cplx parse_rho(const std::string& s) {
  auto comma = s.find(',');
  try {
    size_t used = 0;
    double re = std::stod(s.substr(0, comma), &used);
    if (used != s.substr(0, comma).size()) throw std::invalid_argument(s);
    double im = 0;
    if (comma != std::string::npos) {
      std::string t = s.substr(comma + 1);
      im = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(s);
    }
    return {re, im};
  } catch (const std::logic_error&) {
    throw ValidationError("rho", "expected RE[,IM], got '" + s + "'");
  }
}

double tolerance(const Config& c, double fallback) {
  double t = c.tol.value_or(fallback);
  if (!(t >= 1e-14)) throw ValidationError("tol", "tolerance overrides must be >= 1e-14");
  return t;
}

// Single writer for every record; remembers failures for the exit code.
class Writer {
 public:
  Writer(Format f, std::string command) : f_(f), command_(std::move(command)) {
    if (f_ == Format::csv)
      fmt::print("kind,check,criterion,pass,residual,tolerance,lhs_re,lhs_im,rhs_re,rhs_im\n");
    if (f_ == Format::table)
      fmt::print("{:<28} {:>4} {:>6} {:>12} {:>12}  {}\n", "check", "crit", "pass", "residual",
                 "tolerance", "lhs");
  }

  void check(const CheckRecord& r, int criterion = 0) {
    ++checks_;
    if (!r.pass) {
      ++failed_;
      if (!last_failed_) last_failed_ = std::make_pair(r, criterion);
    }
    emit(r, criterion);
  }

  void value(const std::string& quantity, const nlohmann::json& inputs, cplx v, double error) {
    nlohmann::json j{{"schema", kSchemaVersion}, {"kind", "value"},      {"quantity", quantity},
                     {"inputs", inputs},         {"value", to_json(v)}, {"error_bound", error}};
    if (f_ == Format::json) fmt::print("{}\n", j.dump());
    if (f_ == Format::csv)
      fmt::print("value,{},,,{},,{},{},,\n", quantity, error, v.real(), v.imag());
    if (f_ == Format::table)
      fmt::print("{:<28} {:>4} {:>6} {:>12} {:>12}  {:.16g}{:+.16g}i\n", quantity, "", "", "",
                 fmt::format("{:.3g}", error), v.real(), v.imag());
  }

  int finish() {
    bool pass = failed_ == 0;
    if (!pass) emit(last_failed_->first, last_failed_->second);
    nlohmann::json s{{"schema", kSchemaVersion}, {"kind", "summary"}, {"command", command_},
                     {"checks", checks_},        {"failed", failed_}, {"pass", pass}};
    if (f_ == Format::json) fmt::print("{}\n", s.dump());
    if (f_ == Format::csv)
      fmt::print("summary,{},,{},,,,,,\n", command_, pass ? "true" : "false");
    if (f_ == Format::table)
      fmt::print("{}: {} checks, {} failed\n", command_, checks_, failed_);
    std::fflush(stdout);
    return pass ? 0 : 1;
  }

 private:
  void emit(const CheckRecord& r, int criterion) {
    if (f_ == Format::json) {
      auto j = to_json(r);
      if (criterion) j["criterion"] = criterion;
      fmt::print("{}\n", j.dump());
    } else if (f_ == Format::csv) {
      fmt::print("check,{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.check,
                 criterion ? std::to_string(criterion) : "", r.pass ? "true" : "false",
                 r.residual, r.tolerance, r.lhs.real(), r.lhs.imag(), r.rhs.real(),
                 r.rhs.imag());
    } else {
      fmt::print("{:<28} {:>4} {:>6} {:>12.3e} {:>12.3e}  {:.12g}{:+.12g}i\n", r.check,
                 criterion ? std::to_string(criterion) : "", r.pass ? "PASS" : "FAIL",
                 r.residual, r.tolerance, r.lhs.real(), r.lhs.imag());
    }
  }

  Format f_;
  std::string command_;
  int checks_ = 0, failed_ = 0;
  std::optional<std::pair<CheckRecord, int>> last_failed_;
};

std::shared_ptr<const Spectrum> spectrum(const Config& c) {
  if (c.spectrum.empty()) return std::make_shared<const Spectrum>(Spectrum::circle(200));
  return std::make_shared<const Spectrum>(load_spectrum(c.spectrum));
}

double s0_or(const Config& c, double fallback) {
  double s0 = c.s0.value_or(fallback);
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  return s0;
}

ThetaEvaluator theta_source(const Config& c) {
  if (c.variant == "s1") return ThetaEvaluator::closed_s1();
  if (c.variant == "s2") return ThetaEvaluator::closed_s2();
  if (c.variant == "lambda") return ThetaEvaluator::spectral_lambda(spectrum(c));
  if (c.variant.empty() || c.variant == "rho") return ThetaEvaluator::spectral_rho(spectrum(c));
  throw ValidationError("variant", "theta variant must be s1, s2, rho or lambda");
}

void cmd_theta(const Config& c, Writer& w) {
  ThetaEvaluator ev = theta_source(c);
  if (c.s0) ev = ThetaEvaluator::shifted(ev, s0_or(c, 0));
  cplx t = parse_rho(c.rho);
  auto v = theta_eval(ev, t, tolerance(c, 1e-12));
  w.value("theta", {{"t", to_json(t)}, {"variant", c.variant.empty() ? "rho" : c.variant}},
          v.value, v.tail.bound);
}

void cmd_laplace(const Config& c, Writer& w) {
  ThetaEvaluator ev = theta_source(c);
  if (c.s0) ev = ThetaEvaluator::shifted(ev, s0_or(c, 0));
  if (c.m < 0) throw ValidationError("m", "power of t must be non-negative");
  const int k = c.m;
  Integrand g;
  if (ev.closed() && !ev.is_shifted()) {
    g.f = [kind = ev.kind(), k](cplx t) { return t_pow_theta_closed(kind, t, k); };
  } else {
    g.f = [ev, k](cplx t) { return ipow(t, k) * theta_eval(ev, t, 1e-15).value; };
  }
  double d = ev.dimension();
  if (ev.kind() == ThetaKind::spectral_lambda) d /= 2;
  g.endpoint_power = ev.is_shifted() ? k : k - d;
  if (ev.closed())
    for (int j = -4; j <= 4; ++j)
      if (j || ev.is_shifted()) g.poles.push_back(ev.s0() + 2.0 * pi * I * double(j));
  cplx rho = parse_rho(c.rho);
  auto r = laplace_ray(g, {c.theta, 0, std::nullopt}, rho, tolerance(c, 1e-10));
  w.value("laplace", {{"rho", to_json(rho)}, {"theta", c.theta}, {"power", k}}, r.value,
          r.abs_error_estimate);
}

void cmd_regdet(const Config& c, Writer& w) {
  cplx z = parse_rho(c.rho);
  double tol = tolerance(c, 1e-12);
  auto sp = spectrum(c);
  nlohmann::json in{{"at", to_json(z)}, {"variant", c.variant}, {"m", c.m}};
  RegResult r;
  if (c.variant.empty() || c.variant == "lambda") {
    r = log_deriv_det({sp, c.m, Variable::lambda, false}, z, tol);
  } else if (c.variant == "rho") {
    r = log_deriv_det({sp, c.m, Variable::rho, true}, z, tol);
  } else if (c.variant == "rho-plain") {
    r = log_deriv_det({sp, c.m, Variable::rho, false}, z, tol);
  } else {
    ExpVariant v;
    if (c.variant == "sharp1-lambda")
      v = ExpVariant::sharp1_lambda;
    else if (c.variant == "sharp1-rho")
      v = ExpVariant::sharp1_rho;
    else if (c.variant == "sharp2")
      v = ExpVariant::sharp2;
    else
      throw ValidationError("variant",
                            "regdet variant must be lambda, rho, rho-plain, sharp1-lambda, "
                            "sharp1-rho or sharp2");
    double s0 = s0_or(c, -1.0);
    in["s0"] = s0;
    r = exp_deformed_det({sp, s0, v}, z, tol);
  }
  in["tail_method"] = to_string(r.tail.method);
  in["truncation_index"] = r.tail.truncation_index;
  w.value("regdet", in, r.value, r.tail.bound);
}

void cmd_psf(const Config& c, Writer& w) {
  w.check(psf_check(parse_rho(c.rho), 10000, tolerance(c, 1e-10)));
}

void cmd_deformed(const Config& c, Writer& w) {
  w.check(deformed_psf_check(parse_rho(c.rho), s0_or(c, -1.0), c.eps.value_or(0.3),
                             tolerance(c, 1e-8)));
}

void cmd_k(const Config& c, Writer& w) {
  cplx rho = parse_rho(c.rho);
  double s0 = s0_or(c, -1.0), eps = c.eps.value_or(0.3), tol = tolerance(c, 1e-8);
  auto ext = k_extension(rho, s0, eps);
  w.value("k_extension", {{"rho", to_json(rho)}, {"s0", s0}, {"eps", eps}}, ext.value, ext.error);
  double edge = std::atan(2 * pi / std::abs(s0));
  if (std::arg(rho) < edge) {
    double eps_d = 0.5 * (std::arg(rho) + edge);
    auto dir = k_direct(rho, s0, eps_d);
    w.check(make_record("k_overlap", {{"rho", to_json(rho)}, {"s0", s0}, {"eps", eps},
                                      {"eps_direct", eps_d}},
                        ext.value, dir.value, tol));
  }
}

void cmd_selberg(const Config& c, Writer& w) {
  if (c.lengths.empty()) throw ValidationError("lengths", "selberg-check needs --lengths");
  SelbergContext ctx{load_length_spectrum(c.lengths, FileFormat::csv, c.genus)};
  cplx rho = parse_rho(c.rho);
  double tol = tolerance(c, 1e-6);
  w.check(surface_identity_check(ctx, rho, c.eps.value_or(0.3), tol).record);
  w.check(selberg_fd_check(ctx, rho, std::max(tol, kSelbergFdBudget)));
}

void cmd_gevrey(const Config& c, Writer& w) {
  double s0 = s0_or(c, -1.0);
  auto sp = spectrum(c);
  bool rho_variant = c.variant == "rho";
  if (!c.variant.empty() && !rho_variant && c.variant != "lambda")
    throw ValidationError("variant", "gevrey variant must be lambda or rho");
  if (rho_variant && c.m != 1)
    throw ValidationError("m", "derivative expansions are validated for the lambda variant");
  auto ev = rho_variant ? ThetaEvaluator::spectral_rho(sp) : ThetaEvaluator::spectral_lambda(sp);
  const int N = 12;
  auto series = c.m == 1 ? gevrey_coefficients(ev, s0, N)
                         : gevrey_derivative_coefficients(ev, s0, c.m, N);
  ExpDeformRequest req{sp, s0, rho_variant ? ExpVariant::sharp1_rho : ExpVariant::sharp1_lambda};
  int order = c.m - 1;
  auto F = [req, order](cplx z) { return exp_deformed_det_derivative(req, order, z, 1e-15).value; };
  auto fit = gevrey_validate(F, series, sector_grid(2, 20, 8, pi / 4, 5), N);
  double slack = 1;
  for (double s : fit.residuals) slack = std::min(slack, s);
  CheckRecord r;
  r.check = "gevrey_fit";
  r.inputs = {{"s0", s0}, {"m", c.m}, {"variant", rho_variant ? "rho" : "lambda"}, {"N_max", N}};
  r.lhs = slack;
  r.residual = std::max(0.0, -slack);
  r.pass = slack >= 0;
  r.extra = to_json(fit);
  w.check(r);
}

void cmd_limit(const Config& c, Writer& w) {
  std::vector<double> s0s = {-0.4, -0.2, -0.1, -0.05};
  if (c.s0) s0s = {s0_or(c, 0)};
  w.check(regularization_limit_check(spectrum(c), c.m, parse_rho(c.rho), s0s).record);
}

void cmd_full(const Config& c, Writer& w) {
  SuiteOptions opt;
  opt.seed = c.seed;
  auto t0 = std::chrono::steady_clock::now();
  auto first = run_suite(opt);
  auto second = run_suite(opt);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto det = determinism_criterion(serialize(first), serialize(second), secs);
  first.push_back(det);
  for (const auto& cr : first)
    for (const auto& r : cr.records) w.check(r, cr.id);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized spectral determinants: evaluations and verification checks"};
  app.require_subcommand(1);
  Config c;
  std::string format = "json";
  app.add_option("--format", format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  auto common = [&](CLI::App* s) {
    s->add_option("--spectrum", c.spectrum, "spectrum CSV (sidecar JSON next to it)");
    s->add_option("--s0", c.s0, "deformation parameter, negative");
    s->add_option("--eps", c.eps, "sector margin");
    s->add_option("--tol", c.tol, "tolerance override, >= 1e-14");
    s->add_option("--rho,--at", c.rho, "evaluation point RE[,IM]");
    s->add_option("--variant", c.variant, "variant of the quantity");
    s->add_option("--m", c.m, "derivative order");
    s->add_option("--format", format, "json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
  };
  struct Cmd {
    const char* name;
    const char* help;
    void (*run)(const Config&, Writer&);
  };
  const Cmd cmds[] = {
      {"theta", "theta series at t (--rho), --variant s1|s2|rho|lambda", cmd_theta},
      {"laplace", "Laplace transform of t^m Theta along --theta", cmd_laplace},
      {"regdet", "regularized log-derivative or exp-deformed determinant", cmd_regdet},
      {"psf-check", "Poisson summation identity on the circle", cmd_psf},
      {"deformed-psf-check", "deformed Poisson summation identity", cmd_deformed},
      {"k-extension", "holomorphic extension of K and its overlap check", cmd_k},
      {"selberg-check", "third log-derivative of the Selberg zeta function", cmd_selberg},
      {"gevrey-check", "1-Gevrey remainder bounds for the exp-deformed series", cmd_gevrey},
      {"limit-check", "gap between the two regularizations as s0 -> 0-", cmd_limit},
      {"full-suite", "all acceptance criteria", cmd_full},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& cmd : cmds) {
    auto* s = app.add_subcommand(cmd.name, cmd.help);
    common(s);
    if (std::string(cmd.name) == "laplace") s->add_option("--theta", c.theta, "ray direction");
    if (std::string(cmd.name) == "selberg-check") {
      s->add_option("--lengths", c.lengths, "length spectrum CSV: length,multiplicity");
      s->add_option("--genus", c.genus, "genus, overrides the sidecar");
    }
    if (std::string(cmd.name) == "full-suite") s->add_option("--seed", c.seed, "grid seed");
    subs.emplace_back(s, &cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Format f = format == "csv" ? Format::csv : format == "table" ? Format::table : Format::json;
  for (auto& [s, cmd] : subs) {
    if (!s->parsed()) continue;
    try {
      Writer w(f, cmd->name);
      cmd->run(c, w);
      return w.finish();
    } catch (const Error& e) {
      std::fflush(stdout);
      std::cerr << "resdet " << cmd->name << ": " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
