// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nhssh/analysis.hpp"
#include "nhssh/correlation.hpp"
#include "nhssh/edoracle.hpp"
#include "nhssh/entanglement.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/linalg.hpp"
#include "nhssh/model.hpp"
#include "nhssh/serialize.hpp"

namespace nhssh::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Manifest {
 public:
  Manifest(std::string command, const Options& opts) : command_(std::move(command)), out_(opts.out) {
    doc_ = json{{"schema", kManifestSchema},
                {"tool", "nhssh"},
                {"version", kToolVersion},
                {"command", command_},
                {"options", {{"jobs", opts.jobs}, {"full_precision", opts.full_precision}}},
                {"outputs", json::array()},
                {"cache", json::array()},
                {"timings", json::object()},
                {"residuals", json::object()}};
  }

  void set_config(const RunConfig& cfg) {
    doc_["config"] = cfg.to_json();
    doc_["precision_digits"] = cfg.get_int("digits");
  }

  void timing(const std::string& stage, double seconds) { doc_["timings"][stage] = seconds; }
  void residual(const std::string& key, const std::string& value) { doc_["residuals"][key] = value; }
  void cache(const std::string& file, const std::string& status) {
    doc_["cache"].push_back({{"file", file}, {"status", status}});
  }

  /// Writes a data file under the output directory and records its digest.
  void emit(const std::string& name, const std::string& content) {
    write(out_ / name, content);
    doc_["outputs"].push_back({{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void finish(int code, const std::string& error_class = "", const std::string& message = "") {
    doc_["exit_code"] = code;
    doc_["status"] = code == kExitOk ? "ok" : "failed";
    doc_["error_class"] = error_class.empty() ? json(nullptr) : json(error_class);
    doc_["error_message"] = message.empty() ? json(nullptr) : json(message);
    write(out_ / ("manifest_" + command_ + ".json"), dump(doc_));
  }

  static void write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
  }

 private:
  std::string command_;
  fs::path out_;
  json doc_;
};

struct Context {
  const RunConfig& cfg;
  const Options& opts;
  Manifest& manifest;
  std::ostream& log;

  int csv_digits() const { return opts.full_precision ? full_digits(cfg.precision()) : cfg.get_int("csv_digits"); }
};

template <class F>
auto timed(Context& ctx, const std::string& stage, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  ctx.manifest.timing(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return result;
}

LinalgOptions linalg_options(const RunConfig& cfg) {
  LinalgOptions o;
  o.sweep_factor = cfg.get_int("sweep_factor");
  o.condition_cap_fraction = cfg.get_double("condition_cap_fraction");
  return o;
}

BranchRule branch_rule(const RunConfig& cfg) {
  return cfg.get("branch") == "upper" ? BranchRule::PrincipalUpper : BranchRule::PrincipalLower;
}

std::string tag(const ModelParams& params) { return params_digest(params).substr(0, 12); }

std::string config_tag(const RunConfig& cfg) { return sha256_hex(cfg.to_json().dump()).substr(0, 12); }

std::string ell_key(const std::string& stage, int ell) { return stage + " ell=" + std::to_string(ell); }

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Restricted correlation matrix, from the cache when it holds the same (params, P).
CorrelationMatrix correlation(Context& ctx, const ModelParams& params) {
  const fs::path file = ctx.opts.out / "cache" / ("correlation_" + params_digest(params) + ".json");
  const std::string rel = fs::relative(file, ctx.opts.out).string();
  if (ctx.cfg.get_bool("cache") && fs::exists(file)) {
    try {
      MatrixContainer c = matrix_from_json(json::parse(read_file(file)));
      if (params_digest(c.params) == params_digest(params) && c.restricted) {
        ctx.manifest.cache(rel, "hit");
        return correlation_from(c);
      }
    } catch (const std::exception& e) {
      ctx.log << "ignoring unreadable cache entry " << rel << ": " << e.what() << "\n";
    }
  }
  CorrelationMatrix c = timed(ctx, ell_key("correlation", params.ell), [&] { return build_restricted_correlation(params); });
  if (ctx.cfg.get_bool("cache")) {
    Manifest::write(file, dump(to_json(container(c))));
    ctx.manifest.cache(rel, "written");
  }
  return c;
}

EntanglementKernel kernel(Context& ctx, const CorrelationMatrix& c) {
  KernelOptions ko;
  ko.linalg = linalg_options(ctx.cfg);
  ko.exp_check = ctx.cfg.get_bool("exp_check");
  EntanglementKernel k = timed(ctx, ell_key("kernel", c.params.ell), [&] { return eh_kernel(c, branch_rule(ctx.cfg), ko); });
  const std::string e = " ell=" + std::to_string(c.params.ell);
  if (k.residual_computed) {
    ctx.manifest.residual("exp_roundtrip_relative" + e, to_string(k.residual, 6));
    ctx.manifest.residual("exp_roundtrip_absolute" + e,
                          to_string(k.residual * max(BigReal(1, k.m_norm.precision()), k.m_norm), 6));
  }
  ctx.manifest.residual("inverse" + e, to_string(k.inverse_residual, 6));
  ctx.manifest.residual("eigen" + e, to_string(k.eigen_residual, 6));
  ctx.manifest.residual("eigenvector_condition" + e, to_string(k.condition, 6));
  return k;
}

ModelParams ground_state_params(const RunConfig& cfg, int ell) {
  ModelParams p = cfg.params(ell);
  validate(p, true);
  require_ground_state(p);
  return p;
}

// ------------------------------------------------------------------ csv

class Csv {
 public:
  explicit Csv(const std::string& header) { out_ << header << "\n"; }

  Csv& cell(const std::string& s) {
    if (!first_) out_ << ",";
    out_ << s;
    first_ = false;
    return *this;
  }
  Csv& cell(long v) { return cell(std::to_string(v)); }
  Csv& end() {
    out_ << "\n";
    first_ = true;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

constexpr const char* kProfileHeader = "j,x_over_ell,re,im,pred_re,pred_im";

// ------------------------------------------------------------------ phase

int cmd_phase(Context& ctx) {
  const ModelParams params = ctx.cfg.params(ctx.cfg.get_int("ell"));
  validate(params, false);
  const Phase phase = classify_phase(params);
  const BigReal gap = params.w - params.v;
  const BigComplex e_min = csqrt(BigComplex(gap * gap - params.u * params.u));
  const BigReal top = params.w + params.v;
  const BigComplex e_max = csqrt(BigComplex(top * top - params.u * params.u));
  const BigReal c_s = speed_of_sound(params);
  const int d = ctx.csv_digits();
  json report{{"phase", std::string(to_string(phase))},
              {"critical", is_critical(phase)},
              {"speed_of_sound", decimal(c_s, d)},
              {"band_minimum", {decimal(e_min.re, d), decimal(e_min.im, d)}},
              {"band_maximum", {decimal(e_max.re, d), decimal(e_max.im, d)}},
              {"params", params_to_json(params)}};
  ctx.manifest.emit("phase_" + tag(params) + ".json", dump(report));
  ctx.log << "phase " << to_string(phase) << "\n"
          << "speed_of_sound " << to_string(c_s, 12) << "\n"
          << "band_minimum " << to_string(e_min, 12) << "\n"
          << "band_maximum " << to_string(e_max, 12) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ eh

int cmd_eh(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const int d = ctx.csv_digits();
  const double edge = cfg.get_double("endpoint_window");
  const double window = cfg.get_double("triangle_window");
  json report{{"thresholds",
               {{"endpoint_window", edge},
                {"endpoint_tolerance", cfg.get_double("endpoint_tolerance")},
                {"collapse_tolerance", cfg.get_double("collapse_tolerance")},
                {"diag_tolerance", cfg.get_double("diag_tolerance")},
                {"diag_profile_tolerance", cfg.get_double("diag_profile_tolerance")},
                {"triangle_window", window},
                {"triangle_tolerance", cfg.get_double("triangle_tolerance")},
                {"locality_edge", cfg.get_double("locality_edge")},
                {"locality_tolerance", cfg.get_double("locality_tolerance")}}},
              {"runs", json::array()}};
  std::vector<std::pair<int, std::vector<SitePoint>>> temps;
  bool critical = false;

  for (int ell : cfg.get_int_list("ells")) {
    const ModelParams params = ground_state_params(cfg, ell);
    const Precision p = params.precision;
    critical = is_critical(classify_phase(params));
    const CorrelationMatrix c = correlation(ctx, params);
    const EntanglementKernel k = kernel(ctx, c);
    const std::string t = tag(params);
    MatrixContainer kc{"kernel", params, true, k.kA, {{"branch", std::string(to_string(k.branch))}}};
    ctx.manifest.emit("kernel_" + t + ".json", dump(to_json(kc)));

    json run{{"ell", ell}, {"params_digest", params_digest(params)}, {"critical", critical}};
    const BigReal l(ell, p);
    const BigReal half = BigReal(1, p) / BigReal(2, p);
    run["locality_ratio"] = locality_ratio(k, cfg.get_double("locality_edge"));

    Csv nn(kProfileHeader), diag(kProfileHeader);
    if (critical) {
      const auto temp = critical_temperature(k);
      const ConjectureCurve pred = parabola_cft(ell, ell - 1, BigReal(1, p));
      for (std::size_t j = 0; j < temp.size(); ++j) {
        const auto& pt = temp[j];
        nn.cell(pt.j).cell(decimal(pred.samples[j].x / l, d)).cell(decimal(pt.value.re, d)).cell(decimal(pt.value.im, d));
        nn.cell(decimal(pred.samples[j].value.re, d)).cell(decimal(pred.samples[j].value.im, d)).end();
      }
      const ConjectureCurve comb = combined_curve(ell, params, half);
      for (int j = 0; j < ell; ++j) {
        diag.cell(j).cell(decimal(comb.samples[j].x / l, d)).cell(decimal(k.kA(j, j).re, d)).cell(decimal(k.kA(j, j).im, d));
        diag.cell("0").cell(decimal(comb.samples[j].value.re, d)).end();
      }
      // (Im k_jj - Im mu_jj) / (+-u) * 2 c_S / ell against the parabola
      const ConjectureCurve mu = mu_conjecture(ell, MuSign::Decreasing, p);
      const ConjectureCurve para = parabola_cft(ell, ell, half);
      const BigReal factor = BigReal(2, p) * speed_of_sound(params) / l;
      Csv sub(kProfileHeader);
      for (int j = 0; j < ell; ++j) {
        BigReal v = (k.kA(j, j).im - mu.samples[j].value.im) / params.u * factor;
        if (j % 2 != 0) v = -v;
        sub.cell(j).cell(decimal(para.samples[j].x / l, d)).cell(decimal(v, d)).cell("0");
        sub.cell(decimal(para.samples[j].value.re, d)).cell("0").end();
      }
      ctx.manifest.emit("diag_subtracted_" + t + ".csv", sub.str());

      const ScaledCurve curve = scaled_curve(temp, ell, 1.0);
      temps.emplace_back(ell, temp);
      run["endpoint_deviation"] = endpoint_deviation(curve, edge, true);
      const DiagonalCheck dc = critical_diagonal_check(k, edge);
      run["diag"] = {{"raw_first", decimal(dc.raw_first, d)},     {"raw_last", decimal(dc.raw_last, d)},
                     {"edge_first", decimal(dc.edge_first, d)},   {"edge_last", decimal(dc.edge_last, d)},
                     {"endpoint_error", dc.endpoint_error},       {"profile_error", dc.profile_error}};
    } else {
      const auto temp = nn_temperature(k);
      const auto pot = diag_potential(k, true);
      const TriangleCheck tc = triangle_check(k, window);
      for (const auto& pt : temp) {
        const BigReal x = BigReal(pt.j + 1, p);
        nn.cell(pt.j).cell(decimal(x / l, d)).cell(decimal(pt.value.re, d)).cell(decimal(pt.value.im, d));
        nn.cell(decimal(tc.coupling.slope * x + tc.coupling.intercept, d)).cell("0").end();
      }
      for (const auto& pt : pot) {
        const BigReal x = BigReal(pt.j, p) + half;
        diag.cell(pt.j).cell(decimal(x / l, d)).cell(decimal(pt.value.re, d)).cell(decimal(pt.value.im, d));
        diag.cell(decimal(tc.potential.slope * x + tc.potential.intercept, d)).cell("0").end();
      }
      run["triangle"] = {{"coupling_slope", decimal(tc.coupling.slope, d)},
                         {"coupling_intercept", decimal(tc.coupling.intercept, d)},
                         {"coupling_rms", decimal(tc.coupling.residual, 6)},
                         {"potential_slope", decimal(tc.potential.slope, d)},
                         {"potential_intercept", decimal(tc.potential.intercept, d)},
                         {"potential_rms", decimal(tc.potential.residual, 6)},
                         {"window_sites", {tc.coupling.first, tc.coupling.last}},
                         {"slope_mismatch", tc.slope_mismatch}};
    }
    ctx.manifest.emit("nn_temperature_" + t + ".csv", nn.str());
    ctx.manifest.emit("diag_potential_" + t + ".csv", diag.str());
    report["runs"].push_back(std::move(run));
    ctx.log << "eh ell=" << ell << " done\n";
  }

  if (critical && temps.size() >= 2) {
    // each bond type against the same bond type of the last ell
    const auto& [ell_ref, ref] = temps.back();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < temps.size(); ++i) {
      worst = std::max(worst, parity_collapse_deviation(temps[i].second, temps[i].first, ref, ell_ref, 1.0));
    }
    report["collapse_deviation"] = worst;
  }
  ctx.manifest.emit("eh_report_" + config_tag(cfg) + ".json", dump(report));
  return kExitOk;
}

// ------------------------------------------------------------------ spectrum

int cmd_spectrum(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const int ell = cfg.get_int("ell");
  const int d = ctx.csv_digits();
  const ModelParams params = ground_state_params(cfg, ell);
  const Precision p = params.precision;
  const CorrelationMatrix c = correlation(ctx, params);
  const EntanglementKernel k = kernel(ctx, c);
  const LinalgOptions lo = linalg_options(cfg);
  const SpectralData s = timed(ctx, "spectra", [&] { return spectra(c, k, lo); });
  const double thr = cfg.get_double("reality_threshold");
  const RealityCheck dec =
      timed(ctx, "reality decreasing", [&] { return spectrum_reality_check(k, mu_conjecture(ell, MuSign::Decreasing, p), thr, lo); });
  const RealityCheck inc =
      timed(ctx, "reality increasing", [&] { return spectrum_reality_check(k, mu_conjecture(ell, MuSign::Increasing, p), thr, lo); });

  const std::string t = tag(params);
  ctx.manifest.emit("eps_" + t + ".json", dump(spectrum_to_json("kernel_spectrum", params, s.eps)));
  ctx.manifest.emit("nu_" + t + ".json", dump(spectrum_to_json("correlation_spectrum", params, s.nu)));
  Csv csv("index,eps_re,eps_im,shifted_re,shifted_im,flipped_re,flipped_im");
  for (int i = 0; i < ell; ++i) {
    csv.cell(i).cell(decimal(s.eps[i].re, d)).cell(decimal(s.eps[i].im, d));
    csv.cell(decimal(dec.eigenvalues[i].re, d)).cell(decimal(dec.eigenvalues[i].im, d));
    csv.cell(decimal(inc.eigenvalues[i].re, d)).cell(decimal(inc.eigenvalues[i].im, d)).end();
  }
  ctx.manifest.emit("spectrum_" + t + ".csv", csv.str());

  BigReal im_dev(p);
  for (const auto& e : s.eps) im_dev = max(im_dev, abs(e.im - pi(p)));
  ctx.manifest.residual("pairing", to_string(s.pairing_error, 6));
  const double required = cfg.get_double("reality_fraction");
  json report{{"ell", ell},
              {"params_digest", params_digest(params)},
              {"pairing_error", decimal(s.pairing_error, 6)},
              {"max_abs_im_eps_minus_pi", decimal(im_dev, 6)},
              {"reality_threshold", thr},
              {"reality_fraction_required", required},
              {"decreasing", {{"fraction", dec.fraction}, {"max_im", decimal(dec.max_im, 6)}}},
              {"increasing", {{"fraction", inc.fraction}, {"max_im", decimal(inc.max_im, 6)}}},
              {"decreasing_preferred", dec.fraction > inc.fraction}};
  ctx.manifest.emit("spectrum_report_" + t + ".json", dump(report));
  ctx.log << "spectrum ell=" << ell << " real fraction " << dec.fraction << " (flipped " << inc.fraction << ")\n";
  return kExitOk;
}

// ------------------------------------------------------------------ entropy / fit

std::vector<std::pair<int, Entropies>> entropy_sweep(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<std::pair<int, Entropies>> out;
  for (int ell : cfg.get_int_list("entropy_ells")) {
    const ModelParams params = ground_state_params(cfg, ell);
    const CorrelationMatrix c = correlation(ctx, params);
    const auto nu = timed(ctx, ell_key("occupations", ell), [&] { return eigenvalues(c.matrix, linalg_options(cfg)); });
    out.emplace_back(ell, entropies(nu, cfg.get_int_list("renyi"), branch_rule(cfg)));
  }
  return out;
}

int cmd_entropy(Context& ctx) {
  const int d = ctx.csv_digits();
  const auto sweep = entropy_sweep(ctx);
  std::string header = "ell,s_re,s_im";
  for (int q : ctx.cfg.get_int_list("renyi")) header += ",renyi" + std::to_string(q) + "_re,renyi" + std::to_string(q) + "_im";
  Csv csv(header);
  for (const auto& [ell, e] : sweep) {
    csv.cell(ell).cell(decimal(e.von_neumann.re, d)).cell(decimal(e.von_neumann.im, d));
    for (const auto& r : e.renyi) csv.cell(decimal(r.re, d)).cell(decimal(r.im, d));
    csv.end();
    ctx.log << "entropy ell=" << ell << " S=" << to_string(e.von_neumann, 12) << "\n";
  }
  ctx.manifest.emit("entropy_" + config_tag(ctx.cfg) + ".csv", csv.str());
  return kExitOk;
}

int cmd_fit(Context& ctx) {
  const auto sweep = entropy_sweep(ctx);
  std::vector<EntropySample> samples;
  for (const auto& [ell, e] : sweep) samples.push_back({ell, e.von_neumann.re});
  const FitResult f = central_charge_fit(samples, ctx.cfg.get_int("L"));
  json report{{"quantity", "central_charge"},
              {"model", "Re S_A = (c/3) log[(L/pi) sin(pi ell/L)] + const"},
              {"ells", ctx.cfg.get_int_list("entropy_ells")},
              {"c", decimal(f.slope, 30)},
              {"intercept", decimal(f.intercept, 30)},
              {"rms_residual", decimal(f.residual, 6)},
              {"max_relative_residual", decimal(f.max_relative_residual, 6)}};
  ctx.manifest.emit("fit_" + config_tag(ctx.cfg) + ".json", dump(report));
  ctx.log << "central charge c = " << to_string(f.slope, 10) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ verify-ed

int cmd_verify_ed(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Precision p{cfg.get_int("ed_digits")};
  const int L = cfg.get_int("ed_L");
  const int ell = cfg.get_int("ed_ell");
  json report{{"L", L}, {"ell", ell}, {"precision_digits", p.digits}, {"sets", json::object()}};
  bool all = true;
  for (const std::string set : {"gapped", "critical"}) {
    const ModelParams params = cfg.params("ed_" + set + "_", L, ell, p);
    validate(params, true);
    const auto reports = timed(ctx, "oracle " + set, [&] { return compare_all(params, ell); });
    json arr = json::array();
    for (const auto& r : reports) {
      arr.push_back({{"quantity", r.quantity},
                     {"discrepancy", decimal(r.discrepancy, 6)},
                     {"threshold", decimal(r.threshold, 6)},
                     {"applicable", r.applicable},
                     {"pass", r.pass},
                     {"gaussian", r.gaussian},
                     {"ed", r.ed}});
      ctx.log << set << " " << r.quantity << " discrepancy " << to_string(r.discrepancy, 4) << " threshold "
              << to_string(r.threshold, 4) << (r.applicable ? "" : " (not applicable)") << (r.pass ? " ok" : " FAIL")
              << "\n";
      all = all && r.pass;
    }
    report["sets"][set] = {{"params", params_to_json(params)}, {"reports", std::move(arr)}};
  }
  report["pass"] = all;
  ctx.manifest.emit("verify_ed_" + config_tag(cfg) + ".json", dump(report));
  if (!all) throw OracleMismatch("Gaussian and exact-diagonalization results disagree");
  return kExitOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kExitNumerical;
  if (dynamic_cast<const OracleMismatch*>(&e) != nullptr) return kExitOracle;
  return kExitConfig;  // ConfigError, PhaseError, SizeError
}

std::string hint_for(const Error& e) {
  if (dynamic_cast<const SingularMatrix*>(&e) != nullptr || dynamic_cast<const NearDefective*>(&e) != nullptr ||
      dynamic_cast<const DefectivePoint*>(&e) != nullptr || dynamic_cast<const PairingMismatch*>(&e) != nullptr) {
    return "raise --digits, or move away from the exceptional point by raising delta";
  }
  if (dynamic_cast<const NoConvergence*>(&e) != nullptr) return "raise sweep_factor or --digits";
  return "";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"phase", "eh", "spectrum", "entropy", "fit", "verify-ed"};
  return names;
}

int run_command(const std::string& command, const RunConfig& config, const Options& opts, std::ostream& log) {
  Manifest manifest(command, opts);
  manifest.set_config(config);
  if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
  Context ctx{config, opts, manifest, log};
  try {
    int code = kExitConfig;
    if (command == "phase") code = cmd_phase(ctx);
    else if (command == "eh") code = cmd_eh(ctx);
    else if (command == "spectrum") code = cmd_spectrum(ctx);
    else if (command == "entropy") code = cmd_entropy(ctx);
    else if (command == "fit") code = cmd_fit(ctx);
    else if (command == "verify-ed") code = cmd_verify_ed(ctx);
    else throw ConfigError("unknown command '" + command + "'");
    manifest.finish(code);
    return code;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    std::string msg = e.what();
    const std::string hint = hint_for(e);
    log << "error [" << e.kind() << "]: " << msg << "\n";
    if (!hint.empty()) log << "hint: " << hint << "\n";
    manifest.finish(code, e.kind(), msg);
    return code;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    manifest.finish(kExitNumerical, "InternalError", e.what());
    return kExitNumerical;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Entanglement Hamiltonian of the non-Hermitian SSH chain at arbitrary precision"};
  std::string command, config_path;
  std::vector<std::string> sets;
  int digits = 0;
  Options opts;
  std::string out = opts.out.string();
  app.add_option("command", command, "phase | eh | spectrum | entropy | fit | verify-ed")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--digits", digits, "working precision in decimal digits");
  app.add_option("--out", out, "output directory");
  app.add_option("--jobs", opts.jobs, "OpenMP threads (0 = runtime default)");
  app.add_flag("--full-precision", opts.full_precision, "write CSV values at full working precision");
  app.add_option("--set", sets, "override one config field, key=value");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  opts.out = out;

  RunConfig cfg = RunConfig::defaults();
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    if (digits > 0) cfg.set("digits=" + std::to_string(digits), "--digits");
    for (const auto& s : sets) cfg.set(s);
    cfg.validate();
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    Manifest m(command, opts);
    m.set_config(cfg);
    m.finish(kExitConfig, e.kind(), e.what());
    return kExitConfig;
  }
  return run_command(command, cfg, opts, std::cout);
}

}  // namespace nhssh::cli
