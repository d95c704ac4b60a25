#include "commands.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "kmfp/catalog.hpp"
#include "kmfp/errors.hpp"
#include "kmfp/km_engine.hpp"
#include "kmfp/product_afpp.hpp"
#include "kmfp/rates.hpp"
#include "kmfp/spaces.hpp"
#include "kmfp/uafpp.hpp"

#ifndef KMFP_VERSION
#define KMFP_VERSION "0.0.0"
#endif

namespace kmfp::cli {

namespace {

using nlohmann::json;

json header(const Config& cfg, const char* command) {
  return {{"artifact_version", KMFP_VERSION}, {"config_sha256", cfg.sha256}, {"command", command}};
}

std::string comment_line(const Config& cfg, const char* command) {
  return fmt::format("# kmfp {} {} config_sha256={}\n", KMFP_VERSION, command, cfg.sha256);
}

void emit(const Options& opts, std::ostream& console, const std::string& text) {
  if (opts.out.empty()) {
    console << text;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write " + opts.out);
  file << text;
}

std::uint64_t seed_of(const Config& cfg, const Options& opts) {
  return opts.seed ? *opts.seed : cfg.json.value("seed", std::uint64_t{0});
}

double eta_of(const Config& cfg, const Options& opts) {
  if (opts.eta) return *opts.eta;
  return cfg.json.contains("eta") ? real_from_json(cfg.json.at("eta")) : kDefaultEta;
}

const json& section(const Config& cfg, const char* key) {
  if (!cfg.json.contains(key)) throw ConfigError(fmt::format("config: missing '{}'", key));
  return cfg.json.at(key);
}

void require_schedule(const Schedule& sched, std::size_t horizon) {
  const auto v = validate_schedule(sched, horizon);
  if (!v.valid) {
    throw ConfigError(fmt::format("schedule violates '{}' at n = {}: {}", v.clause,
                                  *v.first_violation, v.detail));
  }
}

// Maps library exceptions onto exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ArgumentError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const MagnitudeOverflow& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "hypothesis violated: " << e.what() << '\n';
    return kViolation;
  } catch (const InvariantFailure& e) {
    err << "invariant failure: " << e.what() << '\n';
    return kViolation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kViolation;
  } catch (const OracleFailure& e) {
    err << "oracle failure: " << e.what() << '\n';
    return kViolation;
  }
}

void rate_inputs_from(const json& j, std::uint64_t& K, AlphaFunction& alpha) {
  const json& src = j.contains("schedule") ? j.at("schedule") : j;
  K = src.value("K", std::uint64_t{1});
  alpha = src.contains("alpha") ? alpha_from_json(src.at("alpha")) : AlphaFunction::identity();
}

UafppModulus modulus_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  UafppModulus phi;
  if (kind == "constant") {
    const double d = real_from_json(j.at("D"));
    phi.D_of = [d](double, double) { return d; };
    phi.label = fmt::format("D = {}", d);
  } else if (kind == "banach") {
    const double k = real_from_json(j.at("k"));
    banach_ufpp_modulus(k, 1.0);  // validates k
    phi.D_of = [k](double, double b) { return banach_ufpp_modulus(k, b); };
    phi.label = fmt::format("D = b/(1-{})", k);
  } else if (kind == "diameter") {
    const auto s = space_from_json(j.at("space"));
    const auto diam = s->diameter();
    if (!diam) throw ConfigError("diameter modulus needs a bounded space");
    phi.D_of = [d = *diam](double, double) { return d; };
    phi.label = fmt::format("D = diam = {}", *diam);
  } else {
    throw ConfigError("unknown modulus kind '" + kind + "'");
  }
  return phi;
}

std::vector<double> grid_of(const json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  std::vector<double> v;
  for (const auto& x : cfg.at(key)) v.push_back(real_from_json(x));
  return v;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Config config_from_text(const std::string& text) {
  Config cfg;
  try {
    cfg.json = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.json.is_object()) throw ConfigError("config must be a JSON object");
  cfg.sha256 = sha256_hex(text);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

int cmd_axioms(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto space = space_from_json(section(cfg, "space"));
    const auto samples = cfg.json.value("samples", std::size_t{1000});
    const auto seed = seed_of(cfg, opts);
    const double eta = eta_of(cfg, opts);
    const auto* hyperbolic = dynamic_cast<const HyperbolicSpace*>(space.get());
    const AxiomReport report = hyperbolic ? check_axioms(*hyperbolic, samples, seed, eta)
                                          : check_metric_axioms(*space, samples, seed, eta);
    json doc = header(cfg, "axioms");
    doc["seed"] = seed;
    doc["space"] = space->descriptor();
    doc["report"] = report.to_json();
    emit(opts, out, doc.dump(2) + "\n");
    if (report.passed()) return int{kOk};
    for (const auto& r : report.results) {
      if (!r.passed) err << r.name << " violated: " << r.counterexample.value_or("") << '\n';
    }
    return int{kViolation};
  });
}

int cmd_iterate(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto space = hyperbolic_space_from_json(section(cfg, "space"));
    const auto map = map_from_json(section(cfg, "map"), space);
    const Point x0 = point_from_json(section(cfg, "x0"));
    const auto sched = schedule_from_json(section(cfg, "schedule"));
    const auto steps = cfg.json.value("steps", std::size_t{100});
    if (opts.budget && steps > *opts.budget) {
      throw ConfigError(fmt::format("steps = {} exceeds the budget {}", steps, *opts.budget));
    }
    require_schedule(sched, steps);
    const auto trace = km_iterate(*space, map, x0, sched, steps);
    std::ostringstream csv;
    csv << comment_line(cfg, "iterate");
    write_trace_csv(csv, *space, trace);
    emit(opts, out, csv.str());
    return int{kOk};
  });
}

int cmd_rates(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Rational eps = rational_from_json(section(cfg, "epsilon"));
    std::uint64_t K = 1;
    AlphaFunction alpha = AlphaFunction::identity();
    rate_inputs_from(cfg.json, K, alpha);
    json doc = header(cfg, "rates");
    doc["inputs"] = {{"epsilon", eps.str()}, {"K", K}, {"alpha", alpha.descriptor()}};
    std::ostringstream lines;
    const auto report = [&](const char* name, const BigCount& value, const json& extra) {
      lines << name << " = " << value.to_string() << '\n';
      json entry = value.to_json();
      entry.update(extra);
      doc["values"][name] = entry;
    };
    const auto details = [](const RateEvaluation& ev) {
      return json{{"M", ev.M.str()}, {"exponent", ev.exponent.str()}, {"E", ev.E.to_json()}};
    };
    bool any = false;
    if (cfg.json.contains("b")) {
      const Rational b = rational_from_json(cfg.json.at("b"));
      doc["inputs"]["b"] = b.str();
      const RateInputs in{eps, b, K, alpha};
      const auto brs = evaluate_brs(in);
      const auto ish = evaluate_ishikawa(in);
      report("h", brs.value, details(brs));
      report("h_tilde", ish.value, details(ish));
      report("g_tilde", rate_product_ishikawa(eps, b, K, alpha), json::object());
      any = true;
    }
    if (cfg.json.contains("b1") && cfg.json.contains("b2")) {
      const Rational b1 = rational_from_json(cfg.json.at("b1"));
      const Rational b2 = rational_from_json(cfg.json.at("b2"));
      doc["inputs"]["b1"] = b1.str();
      doc["inputs"]["b2"] = b2.str();
      report("g", rate_product(eps, b1, b2, K, alpha), json::object());
      any = true;
    }
    if (!any) throw ConfigError("rates: give 'b' and/or 'b1' and 'b2'");
    out << lines.str();
    if (!opts.out.empty()) emit(opts, out, doc.dump(2) + "\n");
    return int{kOk};
  });
}

int cmd_product(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& j = cfg.json;
    const auto seed = seed_of(cfg, opts);
    const auto budget = opts.budget ? *opts.budget : j.value("budget", std::uint64_t{2000});
    const auto h = product_space_from_json(section(cfg, "product"), section(cfg, "selection"), seed);
    const auto map = product_map_from_json(section(cfg, "map"), h);
    const auto delta = selection_from_json(section(cfg, "selection"), h->right(), h->left());
    const auto sched = schedule_from_json(section(cfg, "schedule"));
    require_schedule(sched, budget);
    const auto oracle = oracle_from_json(section(cfg, "oracle"), h->right());
    const ProductProblem problem{map, delta, sched, oracle, eta_of(cfg, opts)};
    const Rational eps = rational_from_json(section(cfg, "epsilon"));
    const auto mode = j.value("mode", std::string{"bounded_orbit"});

    Hypothesis hyp;
    if (mode == "bounded_orbit") {
      BoundedOrbitHypothesis b;
      b.b = rational_from_json(section(cfg, "b"));
      if (j.contains("orbit_start")) b.start = selection_from_json(j.at("orbit_start"), h->right(), h->left());
      b.samples = j.value("orbit_samples", std::size_t{16});
      b.seed = seed;
      hyp = b;
    } else if (mode == "sup_rc") {
      SupDisplacementHypothesis s;
      s.sup_rc = rational_from_json(section(cfg, "sup_rc"));
      const Rational radius = rational_from_json(section(cfg, "radius"));
      s.radius = [radius](const Rational&) { return radius; };
      const Probe probe = probe_from_json(section(cfg, "probe"), problem);
      s.probe = [probe](const Point& u, const Rational&) { return probe(u); };
      hyp = s;
    } else {
      throw ConfigError("mode must be 'bounded_orbit' or 'sup_rc'");
    }

    const auto result = solve_product_afpp(problem, eps, hyp, budget, j.value("max_rounds", std::size_t{6}));
    json doc = header(cfg, "product");
    doc["seed"] = seed;
    doc["budget"] = budget;
    doc["space"] = h->descriptor();
    doc["map"] = {{"label", map.label()}, {"entry", j.at("map")}};
    doc["selection"] = j.at("selection");
    doc["schedule"] = sched.descriptor();
    doc["oracle"] = oracle->descriptor();
    doc["mode"] = mode;
    doc["epsilon"] = eps.str();
    doc["rounds"] = result.rounds;
    if (result.certificate) {
      doc["status"] = "certified";
      doc["certificate"] = result.certificate->to_json();
    } else {
      doc["status"] = "budget_exhausted";
      doc["best"] = result.best.to_json();
      doc["diagnostic"] = result.diagnostic;
    }
    emit(opts, out, doc.dump(2) + "\n");
    if (result.certificate) return int{kOk};
    err << result.diagnostic << '\n';
    return int{kBudgetExhausted};
  });
}

int cmd_uafpp(const Config& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& j = cfg.json;
    const auto sched = schedule_from_json(section(cfg, "schedule"));
    const auto phi = modulus_from_json(section(cfg, "modulus"));
    const auto budget = opts.budget ? *opts.budget : j.value("budget", std::uint64_t{1000});
    const auto eps_grid = grid_of(j, "eps_grid", {4.0, 1.0});
    const auto b_grid = grid_of(j, "b_grid", {0.5, 1.0});
    const auto reg = uafpp_to_regularity(phi, sched);
    const auto back = regularity_to_uafpp(reg, sched, budget);

    json doc = header(cfg, "uafpp");
    doc["schedule"] = sched.descriptor();
    doc["modulus"] = {{"label", phi.label}, {"table", modulus_table(phi, eps_grid, b_grid)}};
    doc["regularity"] = {{"label", reg.label},
                         {"residual_factor", reg.residual_factor},
                         {"table", modulus_table(reg, eps_grid, b_grid)}};
    doc["round_trip"] = {{"label", back.label}, {"table", modulus_table(back, eps_grid, b_grid)}};

    int code = kOk;
    if (j.contains("goebel_kirk")) {
      const auto& gk = j.at("goebel_kirk");
      const auto space = space_from_json(gk.at("space"));
      std::vector<std::pair<Point, Point>> pairs;
      for (const auto& p : gk.value("pairs", json::array())) {
        pairs.emplace_back(point_from_json(p.at(0)), point_from_json(p.at(1)));
      }
      const auto report = gk_boundedness_check(*space, real_from_json(gk.at("D1")),
                                               gk.value("samples", std::size_t{1000}),
                                               seed_of(cfg, opts), pairs, eta_of(cfg, opts));
      doc["goebel_kirk"] = report.to_json();
      if (!report.passed) {
        err << "uniform bound 2*D1+1 = " << format_real(report.bound) << " broken by x = "
            << to_string(*report.x) << ", T = const " << to_string(*report.y) << '\n';
        code = kViolation;
      }
    }
    emit(opts, out, doc.dump(2) + "\n");
    return code;
  });
}

}  // namespace kmfp::cli
