#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ffmop/error.hpp"
#include "ffmop/model.hpp"
#include "ffmop/mop.hpp"
#include "ffmop/polynomial.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"
#include "ffmop/weights.hpp"
#include "run_record.hpp"
#include "spec_io.hpp"
#include "verify.hpp"

#ifndef FFMOP_VERSION
#define FFMOP_VERSION "0.0.0"
#endif

namespace ffmop::cli {

namespace {

// Thrown by commands whose check did not pass; the record is still printed.
struct CheckFailed {
  std::string message;
};

struct QuadFlags {
  double abs_tol = QuadratureConfig{}.abs_tol;
  double rel_tol = QuadratureConfig{}.rel_tol;
  double truncation = QuadratureConfig{}.contour_truncation;
  int nodes = QuadratureConfig{}.contour_nodes;
  int max_subdivisions = QuadratureConfig{}.max_subdivisions;

  void add(CLI::App* app) {
    app->add_option("--abs-tol", abs_tol, "Absolute quadrature tolerance")->capture_default_str();
    app->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance")->capture_default_str();
    app->add_option("--T", truncation, "Contour truncation height")->capture_default_str();
    app->add_option("--nodes", nodes, "Initial contour intervals")->capture_default_str();
    app->add_option("--max-subdivisions", max_subdivisions, "Panel budget")->capture_default_str();
  }
  QuadratureConfig config() const {
    QuadratureConfig c;
    c.abs_tol = abs_tol;
    c.rel_tol = rel_tol;
    c.contour_truncation = truncation;
    c.contour_nodes = nodes;
    c.max_subdivisions = max_subdivisions;
    c.validate();
    return c;
  }
  json to_json() const {
    return {{"abs_tol", abs_tol},
            {"rel_tol", rel_tol},
            {"contour_truncation", truncation},
            {"contour_nodes", nodes},
            {"max_subdivisions", max_subdivisions}};
  }
};

cplx parse_complex(const std::string& text) {
  std::stringstream ss(text);
  std::string re, im;
  std::getline(ss, re, ',');
  std::getline(ss, im, ',');
  try {
    std::size_t pos = 0;
    const double r = std::stod(re, &pos);
    if (pos != re.size()) throw std::invalid_argument("trailing");
    double i = 0.0;
    if (!im.empty()) {
      i = std::stod(im, &pos);
      if (pos != im.size()) throw std::invalid_argument("trailing");
    }
    return {r, i};
  } catch (const std::exception&) {
    throw DomainError("--s must be <re>[,<im>], got '" + text + "'");
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw DomainError("failed writing output file '" + path + "'");
}

json residuals_json(const ResidualMatrix& R) {
  json a = json::array();
  for (const auto& row : R) a.push_back(row);
  return a;
}

json validity_json(const ValidityReport& v) {
  return {{"pass", v.pass},       {"verdict", v.verdict}, {"violated", v.violated},
          {"alpha", v.alpha},     {"beta", v.beta},       {"beta_sum", v.beta_sum},
          {"d", v.d},             {"checked_points", v.checked_points}};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  return out;
}

struct Cli {
  CLI::App app{"Finite free convolutions, multiple orthogonal polynomial ensembles and random matrix sampling",
               "ffmop"};
  RunRecord rec;
  std::function<void()> action;
  std::string out_path;
  QuadFlags quad;

  // ffconv
  std::string conv_mode, conv_p, conv_q;
  int conv_n = 0;
  // transform
  std::string tr_kind, tr_density, tr_s = "1";
  double tr_x = 1.0, tr_contour = 1.0;
  // mop
  std::vector<std::string> mop_weights;
  int mop_n = 0;
  std::string mop_mode, mop_s = "1.1,1.4,1.8,2.3,2.9,3.4,4.0";
  double mop_tol = 1e-10, mop_threshold = 1e-8;
  bool mop_no_residuals = false, mop_broken = false;
  // rmt
  std::string rmt_model;
  long long rmt_samples = 10000;
  std::uint64_t rmt_seed = 0;
  int rmt_degree = 0, rmt_threads = 1;
  // verify
  std::vector<std::string> v_only;
  bool v_inject = false;
  std::uint64_t v_seed = verify::Options{}.seed;
  long long v_samples = verify::Options{}.mc_samples, v_ks = verify::Options{}.ks_samples;
  int v_threads = 1;

  Cli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", FFMOP_VERSION);
    setup_ffconv();
    setup_transform();
    setup_mop();
    setup_rmt();
    setup_verify();
  }

  void setup_ffconv() {
    auto* c = app.add_subcommand("ffconv", "Finite free convolution of two polynomials");
    c->add_option("mode", conv_mode, "mul or add")->required()->check(CLI::IsMember({"mul", "add"}));
    c->add_option("--n", conv_n, "Convolution order n")->required();
    c->add_option("--p", conv_p, "First polynomial, JSON coefficients lowest first")->required();
    c->add_option("--q", conv_q, "Second polynomial, JSON coefficients lowest first")->required();
    c->add_option("--out", out_path, "Also write the outputs JSON here");
    c->callback([this] {
      action = [this] {
        const Poly p = poly_from_json(parse_json_text(conv_p, "--p"));
        const Poly q = poly_from_json(parse_json_text(conv_q, "--q"));
        rec.command = "ffconv " + conv_mode;
        rec.config = {{"n", conv_n}, {"p", poly_to_json(p)}, {"q", poly_to_json(q)}};
        const Poly r = conv_mode == "mul" ? ff_mul_conv(p, q, conv_n) : ff_add_conv(p, q, conv_n);
        rec.outputs = {{"result", poly_to_json(r)}};
      };
    });
  }

  void setup_transform() {
    auto* t = app.add_subcommand("transform", "Forward and inverse Mellin/Laplace transforms of reference densities");
    t->add_option("kind", tr_kind, "mellin, laplace, inverse-mellin or inverse-laplace")
        ->required()
        ->check(CLI::IsMember({"mellin", "laplace", "inverse-mellin", "inverse-laplace"}));
    t->add_option("--density", tr_density, "Density id: beta:a,b gamma:a gauss be:d,a,b,c ai:d,c")->required();
    t->add_option("--s", tr_s, "Transform argument <re>[,<im>] (forward)")->capture_default_str();
    t->add_option("--x", tr_x, "Evaluation point (inverse)")->capture_default_str();
    t->add_option("--contour", tr_contour, "Contour abscissa Re s (inverse)")->capture_default_str();
    t->add_option("--out", out_path, "Also write the outputs JSON here");
    quad.add(t);
    t->callback([this] {
      action = [this] {
        const DensityId id = parse_density(tr_density);
        const QuadratureConfig cfg = quad.config();
        rec.command = "transform " + tr_kind;
        rec.config = {{"density", to_string(id)}, {"quadrature", quad.to_json()}};
        TransformResult r;
        if (tr_kind == "mellin" || tr_kind == "laplace") {
          const cplx s = parse_complex(tr_s);
          rec.config["s"] = {s.real(), s.imag()};
          r = tr_kind == "mellin" ? mellin_numeric(id, s, cfg) : laplace_numeric(id, s, cfg);
        } else {
          rec.config["x"] = tr_x;
          rec.config["contour"] = tr_contour;
          if (tr_kind == "inverse-mellin")
            r = inverse_mellin([&](cplx s) { return closed_mellin(id, s); }, tr_contour, tr_x, cfg);
          else
            r = inverse_laplace([&](cplx s) { return closed_laplace(id, s); }, tr_contour, tr_x, cfg);
        }
        rec.outputs = {{"value_re", r.value.real()},
                       {"value_im", r.value.imag()},
                       {"est_error", r.est_error},
                       {"nodes_used", r.nodes_used}};
        if (tr_kind == "inverse-mellin" || tr_kind == "inverse-laplace")
          rec.outputs["density_value"] = density_value(id, tr_x);
      };
    });
  }

  AnySpec load_spec(const std::string& path) {
    AnySpec s = read_spec_file(path);
    const std::string kind = std::holds_alternative<MDTWeightSpec>(s) ? "mdt" : "adt";
    if (!mop_mode.empty() && mop_mode != kind)
      throw DomainError("--mode " + mop_mode + " does not match weight spec kind " + kind);
    return s;
  }

  static ValidityReport validate_any(const AnySpec& s) {
    return std::visit(
        [](const auto& sp) {
          if constexpr (std::is_same_v<std::decay_t<decltype(sp)>, MDTWeightSpec>) return validate_mdt_spec(sp);
          else return validate_adt_spec(sp);
        },
        s);
  }

  void setup_mop() {
    auto* m = app.add_subcommand("mop", "Multiple orthogonal polynomials of derivative type");
    m->require_subcommand(1);
    auto add_common = [this](CLI::App* c) {
      c->add_option("--n", mop_n, "Polynomial degree n")->required()->check(CLI::Range(1, 64));
      c->add_option("--mode", mop_mode, "mdt or adt (must match the spec kind)")->check(CLI::IsMember({"mdt", "adt"}));
      c->add_option("--out", out_path, "Also write the outputs JSON here");
    };
    auto* b = m->add_subcommand("build", "Build the type II polynomial and its orthogonality residuals");
    b->add_option("--weights", mop_weights, "Weight spec JSON file")->required()->expected(1);
    b->add_flag("--no-residuals", mop_no_residuals, "Skip the orthogonality quadrature");
    add_common(b);
    quad.add(b);
    b->callback([this] {
      action = [this] {
        const AnySpec spec = load_spec(mop_weights.front());
        rec.command = "mop build";
        rec.config = {{"weights", spec_to_json(spec)}, {"n", mop_n}, {"residuals", !mop_no_residuals},
                      {"quadrature", quad.to_json()}};
        const ValidityReport v = validate_any(spec);
        if (!v.pass) {
          std::string msg = "weight spec fails the necessary conditions:";
          for (const auto& c : v.violated) msg += " [" + c + "]";
          throw DomainError(msg);
        }
        const QuadratureConfig cfg = quad.config();
        std::visit(
            [&](const auto& sp) {
              Poly P;
              if constexpr (std::is_same_v<std::decay_t<decltype(sp)>, MDTWeightSpec>) P = mop_mdt(sp, mop_n);
              else P = mop_adt(sp, mop_n);
              rec.outputs = {{"coeffs", poly_to_json(P)}, {"monic", P.leading() == 1.0 && P.degree() == mop_n},
                             {"validity", validity_json(v)}};
              if (!mop_no_residuals) {
                const ResidualMatrix R = orthogonality_residuals(P, sp, mop_n, cfg);
                rec.outputs["residual_matrix"] = residuals_json(R);
                rec.outputs["max_residual"] = max_abs(R);
              }
            },
            spec);
      };
    });

    auto* d = m->add_subcommand("decompose-check", "Compare P(omega1 * omega2) with the convolution of the parts");
    d->add_option("--weights", mop_weights, "Two weight spec JSON files (repeat the flag)")->required()->expected(2);
    d->add_option("--tol", mop_tol, "Relative deviation threshold")->capture_default_str();
    add_common(d);
    d->callback([this] {
      action = [this] {
        const AnySpec A = load_spec(mop_weights.at(0)), B = load_spec(mop_weights.at(1));
        if (A.index() != B.index()) throw DomainError("decompose-check: both specs must have the same kind");
        rec.command = "mop decompose-check";
        rec.config = {{"weights", {spec_to_json(A), spec_to_json(B)}}, {"n", mop_n}, {"tol", mop_tol}};
        DecompositionReport r;
        if (const auto* a = std::get_if<MDTWeightSpec>(&A)) r = decomposition_check(*a, std::get<MDTWeightSpec>(B), mop_n);
        else r = decomposition_check(std::get<ADTWeightSpec>(A), std::get<ADTWeightSpec>(B), mop_n);
        const bool pass = r.max_deviation < mop_tol;
        rec.outputs = {{"mode", A.index() == 0 ? "mul" : "add"},
                       {"combined", poly_to_json(r.combined)},
                       {"convolved", poly_to_json(r.convolved)},
                       {"max_deviation", r.max_deviation},
                       {"abs_deviation", r.abs_deviation},
                       {"pass", pass}};
        if (!pass) throw CheckFailed{"decomposition deviation exceeds tolerance"};
      };
    });

    auto* r = m->add_subcommand("ratio-check", "Check the rational ratio structure of the transforms");
    r->add_option("--weights", mop_weights, "Weight spec JSON file")->expected(1);
    r->add_flag("--broken", mop_broken, "Use the deliberately broken mixture G^0 + B^{0,1} instead of a spec");
    r->add_option("--s", mop_s, "Comma-separated real sample points")->capture_default_str();
    r->add_option("--threshold", mop_threshold, "Held-out residual threshold")->capture_default_str();
    add_common(r);
    r->callback([this] {
      action = [this] {
        if (mop_broken == !mop_weights.empty())
          throw DomainError("ratio-check: give exactly one of --weights or --broken");
        const std::vector<double> ss = parse_list(mop_s);
        rec.command = "mop ratio-check";
        rec.config = {{"n", mop_n}, {"s", ss}, {"threshold", mop_threshold}};
        TransformFamily fam;
        if (mop_broken) {
          rec.config["weights"] = "broken-mixture";
          fam = broken_mixture_family();
        } else {
          const AnySpec spec = load_spec(mop_weights.front());
          rec.config["weights"] = spec_to_json(spec);
          if (const auto* a = std::get_if<MDTWeightSpec>(&spec)) fam = mdt_family(*a);
          else fam = adt_family(std::get<ADTWeightSpec>(spec));
        }
        const RatioReport rr = ratio_structure_check(fam, mop_n, ss, mop_threshold);
        rec.outputs = {{"family", fam.name},
                       {"pass", rr.pass},
                       {"max_residual", rr.max_residual},
                       {"residuals", rr.residuals},
                       {"threshold", rr.threshold},
                       {"verdict", rr.pass ? "structure-pass" : "structure-fail"}};
        if (!rr.pass) throw CheckFailed{"ratio structure check failed"};
      };
    });
  }

  void setup_rmt() {
    auto* m = app.add_subcommand("rmt", "Random matrix sampling");
    m->require_subcommand(1);
    auto add_common = [this](CLI::App* c) {
      c->add_option("--model", rmt_model, "Model expression, e.g. ssv(prod(ginibre(3,3),ginibre(3,3)))")->required();
      c->add_option("--samples", rmt_samples, "Number of draws")->capture_default_str()->check(CLI::PositiveNumber);
      c->add_option("--seed", rmt_seed, "64-bit seed")->capture_default_str();
    };
    auto* s = m->add_subcommand("sample", "Draw point configurations into a CSV file");
    add_common(s);
    s->add_option("--out", out_path, "CSV output: sample_index,point_index,value")->required();
    s->callback([this] {
      action = [this] {
        const EnsembleModel model = parse_model(rmt_model);
        rec.command = "rmt sample";
        rec.seed = rmt_seed;
        rec.config = {{"model", model.to_string()}, {"samples", rmt_samples}, {"seed", rmt_seed}};
        RngState rng(rmt_seed, 0);
        std::string csv = "sample_index,point_index,value\n";
        char buf[64];
        for (long long i = 0; i < rmt_samples; ++i) {
          const std::vector<double> x = sample_points(model, rng);
          for (std::size_t k = 0; k < x.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", x[k]);
            csv += std::to_string(i) + "," + std::to_string(k) + "," + buf + "\n";
          }
        }
        write_file(out_path, csv);
        rec.outputs = {{"file", out_path}, {"samples", rmt_samples}, {"points_per_sample", model.rows},
                       {"seed", rmt_seed}};
        out_path.clear();
      };
    });
    auto* e = m->add_subcommand("ecp", "Monte Carlo expected characteristic polynomial");
    add_common(e);
    e->add_option("--degree", rmt_degree, "Polynomial degree (defaults to the model's point count)");
    e->add_option("--threads", rmt_threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1, 256));
    e->add_option("--out", out_path, "Also write the outputs JSON here");
    e->callback([this] {
      action = [this] {
        const EnsembleModel model = parse_model(rmt_model);
        const int degree = rmt_degree > 0 ? rmt_degree : model.rows;
        rec.command = "rmt ecp";
        rec.seed = rmt_seed;
        rec.config = {{"model", model.to_string()}, {"degree", degree}, {"samples", rmt_samples},
                      {"seed", rmt_seed}};
        const CharPolyEstimate est = expected_char_poly(model, degree, rmt_samples, rmt_seed, rmt_threads);
        rec.outputs = {{"coeffs", est.coeffs}, {"stderrs", est.stderrs}, {"N", est.samples}, {"seed", est.seed},
                       {"batches", est.batches}};
      };
    });
  }

  void setup_verify() {
    auto* v = app.add_subcommand("verify", "Run the acceptance criteria");
    v->add_option("--only", v_only, "Criterion numbers or groups: " + [] {
      std::string s;
      for (const auto& g : verify::group_names()) s += (s.empty() ? "" : ", ") + g;
      return s;
    }())->delimiter(',');
    v->add_flag("--inject-broken-weight", v_inject, "Substitute the broken mixture into the ratio-structure check");
    v->add_option("--seed", v_seed, "Seed for the stochastic criteria")->capture_default_str();
    v->add_option("--samples", v_samples, "Monte Carlo samples per estimator")->capture_default_str();
    v->add_option("--ks-samples", v_ks, "Samples per sampler in the KS comparison")->capture_default_str();
    v->add_option("--threads", v_threads, "Worker threads for Monte Carlo")->check(CLI::Range(1, 256));
    v->add_option("--out", out_path, "Also write the JSON report here");
    v->callback([this] {
      action = [this] {
        verify::Options opt;
        opt.only = v_only;
        opt.inject_broken_weight = v_inject;
        opt.seed = v_seed;
        opt.mc_samples = v_samples;
        opt.ks_samples = v_ks;
        opt.threads = v_threads;
        rec.command = "verify";
        rec.seed = v_seed;
        rec.config = {{"only", v_only},          {"inject_broken_weight", v_inject}, {"seed", v_seed},
                      {"samples", v_samples},    {"ks_samples", v_ks}};
        try {
          verify::check_selection(opt);
        } catch (const std::invalid_argument& e) {
          throw DomainError(std::string("verify: ") + e.what());
        }
        std::vector<verify::CriterionResult> results;
        for (int id = 1; id <= 10; ++id) {
          if (!verify::selected(opt, id)) continue;
          results.push_back(verify::run_criterion(id, opt));
          std::fprintf(stderr, "%s\n", results.back().line().c_str());
        }
        if (results.empty()) throw DomainError("verify: no criteria selected");
        rec.outputs = verify::to_json(results);
        if (!rec.outputs["pass"].get<bool>()) {
          std::string failed;
          for (int id : rec.outputs["failed"]) failed += " " + std::to_string(id);
          throw CheckFailed{"failed criteria:" + failed};
        }
      };
    });
  }
};

}  // namespace

int run(int argc, char** argv) {
  Cli cli;
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  cli.rec.version = FFMOP_VERSION;
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  auto finish = [&] {
    cli.rec.wall_time_ms = static_cast<long long>(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    if (!cli.out_path.empty()) write_file(cli.out_path, cli.rec.outputs.dump(2) + "\n");
    std::cout << cli.rec.to_json().dump(2) << std::endl;
  };
  try {
    cli.action();
    finish();
  } catch (const CheckFailed& f) {
    std::fprintf(stderr, "verification failure: %s\n", f.message.c_str());
    try {
      finish();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
    }
    code = kExitVerification;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = kExitUsage;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    code = kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    code = kExitNumerical;
  }
  return code;
}

}  // namespace ffmop::cli
