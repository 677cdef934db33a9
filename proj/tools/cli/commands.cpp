#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capi.hpp"
#include "config.hpp"
#include "format.hpp"
#include "pool.hpp"

namespace cli {

using nlohmann::json;

namespace {

std::optional<double> gamma0_of(int n, double s) {
  double g = 0.0;
  int bounded = 0;
  check(lam_gamma0(n, s, &g, &bounded), "gamma0");
  return bounded ? std::optional<double>(g) : std::nullopt;
}

std::string tail_text(int t) { return t == 0 ? std::string("default") : std::to_string(t); }

std::vector<std::string> energy_fields(const lam_energy& e) { return {fmt(e.h), fmt(e.w), fmt(e.k), fmt(e.total)}; }

void write_profile(JsonWriter& w, const lam_profile* p) {
  w.begin_object();
  w.key("N").value(static_cast<int>(lam_profile_size(p)));
  w.key("m").value(lam_profile_mass(p));
  w.key("interfaces").array(interfaces(p));
  w.end_object();
}

void write_energy(JsonWriter& w, const lam_energy& e) {
  w.begin_object();
  w.key("h").value(e.h);
  w.key("w").value(e.w);
  w.key("k").value(e.k);
  w.key("total").value(e.total);
  w.end_object();
}

/// Uniform samples in [-1, 1) from the top 53 bits of mt19937_64 output.
std::vector<double> uniform_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return out;
}

}  // namespace

int cmd_energy(const json& j) {
  const Common c = parse_common(j);
  const EnergyConfig e = parse_energy(j);
  struct Item {
    int n;
    double gamma;
    lam_energy energy{};
  };
  std::vector<Item> items;
  for (int n : e.N)
    for (double g : e.gamma) items.push_back({n, g});
  parallel_for(items.size(), c.threads, [&](std::size_t i) {
    auto model = make_model(e.s, items[i].gamma, 0.0, 1.0, e.tail_terms);
    auto u = equidistributed(items[i].n);
    items[i].energy = energy(model.get(), u.get());
  });
  Csv csv("energy", {{"N", join(e.N)}, {"s", fmt(e.s)}, {"gamma", join(e.gamma)}, {"tail_terms", tail_text(e.tail_terms)}},
          {"N", "s", "gamma", "h", "k", "total", "N_pow_2s", "k_closed_form"});
  for (const auto& it : items) {
    csv.row({std::to_string(it.n), fmt(e.s), fmt(it.gamma), fmt(it.energy.h), fmt(it.energy.k), fmt(it.energy.total),
             fmt(std::pow(static_cast<double>(it.n), 2.0 * e.s)),
             fmt(1.0 / (24.0 * it.gamma * it.gamma * it.n * it.n))});
  }
  emit(c.out, csv.text());
  return 0;
}

int cmd_spectrum(const json& j) {
  const Common c = parse_common(j);
  const SpectrumConfig sc = parse_spectrum(j);
  struct Item {
    int n;
    double gamma;
    std::vector<double> lambda, green, kernel;
    std::string classification;
  };
  std::vector<Item> items;
  for (int n : sc.N)
    for (double g : sc.gamma) items.push_back({n, g, {}, {}, {}, {}});
  parallel_for(items.size(), c.threads, [&](std::size_t i) {
    auto& it = items[i];
    auto model = make_model(sc.s, it.gamma, 0.0, 1.0, sc.tail_terms);
    lam_spectrum* raw = nullptr;
    check(lam_spectrum_create(model.get(), it.n, &raw), "spectrum");
    Spectrum spec(raw);
    for (int l = 0; l < it.n; ++l) {
      double lam = 0.0, gp = 0.0, kp = 0.0;
      check(lam_spectrum_eigenvalue(spec.get(), l, &lam), "eigenvalue");
      if (l > 0) {
        check(lam_spectrum_green_part(spec.get(), l, &gp), "green part");
        check(lam_spectrum_kernel_part(spec.get(), l, &kp), "kernel part");
      }
      it.lambda.push_back(lam);
      it.green.push_back(gp);
      it.kernel.push_back(kp);
    }
    it.classification = lam_stability_name(lam_spectrum_classification(spec.get()));
  });
  Csv csv("spectrum",
          {{"N", join(sc.N)}, {"s", fmt(sc.s)}, {"gamma", join(sc.gamma)}, {"m", fmt(sc.m)}, {"tail_terms", tail_text(sc.tail_terms)}},
          {"N", "s", "gamma", "l", "lambda", "green_part", "kernel_part", "classification", "gamma0"});
  for (const auto& it : items) {
    const std::string g0 = fmt(gamma0_of(it.n, sc.s));
    for (int l = 0; l < it.n; ++l) {
      csv.row({std::to_string(it.n), fmt(sc.s), fmt(it.gamma), std::to_string(l), fmt(it.lambda[l]), fmt(it.green[l]),
               fmt(it.kernel[l]), it.classification, g0});
    }
  }
  emit(c.out, csv.text());
  return 0;
}

int cmd_phase_diagram(const json& j) {
  const Common c = parse_common(j);
  const PhaseDiagramConfig pc = parse_phase_diagram(j);
  struct Curve {
    int n;
    double s;
    std::optional<double> gamma0, gamma_star;
    std::string flag = "ok";
  };
  std::vector<Curve> curves;
  for (int n : pc.N)
    for (double s : pc.s) curves.push_back({n, s, gamma0_of(n, s), std::nullopt});
  parallel_for(curves.size(), c.threads, [&](std::size_t i) {
    auto& cv = curves[i];
    if (cv.n == 2) {
      cv.flag = "unbounded";
      return;
    }
    double g = 0.0;
    int monotone = 1;
    const lam_status st = lam_critical_gamma(cv.n, cv.s, pc.tail_terms, &g, &monotone);
    if (st == LAM_ERR_NO_BRACKET) {
      cv.flag = "no_bracket";
      return;
    }
    check(st, "critical gamma");
    cv.gamma_star = g;
    if (!monotone) cv.flag = "non_monotone";
  });

  struct Point {
    std::size_t curve;
    double gamma;
    std::optional<double> min_lambda;
    std::string classification;
  };
  std::vector<Point> points;
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    if (!pc.gamma.empty()) {
      for (double g : pc.gamma) points.push_back({ci, g, std::nullopt, {}});
    } else {
      for (double r : pc.gamma_over_gamma0) points.push_back({ci, r * *curves[ci].gamma0, std::nullopt, {}});
    }
  }
  parallel_for(points.size(), c.threads, [&](std::size_t i) {
    auto& pt = points[i];
    const auto& cv = curves[pt.curve];
    auto model = make_model(cv.s, pt.gamma, 0.0, 1.0, pc.tail_terms);
    lam_spectrum* raw = nullptr;
    check(lam_spectrum_create(model.get(), cv.n, &raw), "spectrum");
    Spectrum spec(raw);
    double v = 0.0;
    if (lam_spectrum_min_constrained(spec.get(), &v)) pt.min_lambda = v;
    pt.classification = lam_stability_name(lam_spectrum_classification(spec.get()));
  });

  ParamList params{{"N", join(pc.N)}, {"s", join(pc.s)}};
  if (!pc.gamma.empty()) {
    params.emplace_back("gamma", join(pc.gamma));
  } else {
    params.emplace_back("gamma_over_gamma0", join(pc.gamma_over_gamma0));
  }
  params.emplace_back("tail_terms", tail_text(pc.tail_terms));
  Csv csv("phase-diagram", params,
          {"N", "s", "gamma", "min_constrained_eigenvalue", "classification", "gamma0", "gamma_star", "flag"});
  bool missing = false;
  for (const auto& pt : points) {
    const auto& cv = curves[pt.curve];
    missing = missing || cv.flag == "no_bracket";
    csv.row({std::to_string(cv.n), fmt(cv.s), fmt(pt.gamma), fmt(pt.min_lambda), pt.classification,
             fmt(cv.gamma0), fmt(cv.gamma_star), cv.flag});
  }
  emit(c.out, csv.text());
  if (missing) {
    std::cerr << "lamellar: critical gamma has no bracket in [1e-6, 1e3] for some (N, s); rows flagged no_bracket\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_minimize(const json& j) {
  const Common c = parse_common(j);
  const MinimizeConfig mc = parse_minimize(j);
  double gamma = 0.0;
  std::string gamma_rule;
  if (mc.gamma) {
    gamma = *mc.gamma;
    gamma_rule = "absolute";
  } else if (mc.gamma_over_gamma0) {
    gamma = *mc.gamma_over_gamma0 * *gamma0_of(mc.N, mc.s);
    gamma_rule = "gamma_over_gamma0=" + fmt(*mc.gamma_over_gamma0);
  } else {
    double gs = 0.0;
    check(lam_critical_gamma(mc.N, mc.s, mc.tail_terms, &gs, nullptr), "critical gamma");
    gamma = *mc.gamma_over_gamma_star * gs;
    gamma_rule = "gamma_over_gamma_star=" + fmt(*mc.gamma_over_gamma_star);
  }
  const double amplitude = mc.amplitude.value_or(1.0 / (10.0 * mc.N));

  auto model = make_model(mc.s, gamma, 0.0, 1.0, mc.tail_terms);
  auto u = equidistributed(mc.N);
  std::vector<double> noise(mc.N);
  check(lam_tangent_noise(mc.N, amplitude, c.seed, noise.data()), "tangent noise");
  lam_profile* raw = nullptr;
  check(lam_profile_perturb(u.get(), noise.data(), noise.size(), 1.0, &raw), "perturb");
  Profile start(raw);

  lam_descent_config dc;
  lam_descent_config_default(&dc);
  dc.max_iterations = mc.max_iterations;
  dc.gradient_tolerance = mc.gradient_tolerance;
  lam_descent_result* rraw = nullptr;
  check(lam_descent_run(model.get(), start.get(), &dc, &rraw), "descent");
  DescentResult res(rraw);
  lam_profile* fraw = nullptr;
  check(lam_descent_result_final(res.get(), &fraw), "descent final");
  Profile final_profile(fraw);
  const auto status = lam_descent_result_status(res.get());

  JsonWriter w;
  w.begin_object();
  w.key("lamellar").value(lam_version());
  w.key("command").value("minimize");
  w.key("params").begin_object();
  w.key("N").value(mc.N);
  w.key("s").value(mc.s);
  w.key("gamma").value(gamma);
  w.key("gamma_rule").value(gamma_rule);
  w.key("amplitude").value(amplitude);
  w.key("seed").value(c.seed);
  w.key("max_iterations").value(mc.max_iterations);
  w.key("gradient_tolerance").value(mc.gradient_tolerance);
  w.key("tail_terms").value(tail_text(mc.tail_terms));
  w.end_object();
  w.key("status").value(lam_descent_status_name(status));
  w.key("iterations").value(lam_descent_result_iterations(res.get()));
  w.key("initial");
  write_profile(w, start.get());
  w.key("final");
  write_profile(w, final_profile.get());
  w.key("energies").begin_object();
  w.key("equidistributed");
  write_energy(w, energy(model.get(), u.get()));
  w.key("initial");
  write_energy(w, energy(model.get(), start.get()));
  w.key("final");
  write_energy(w, energy(model.get(), final_profile.get()));
  w.end_object();
  w.key("trace").begin_array();
  for (std::size_t i = 0; i < lam_descent_result_trace_size(res.get()); ++i) {
    lam_descent_step st{};
    check(lam_descent_result_trace(res.get(), i, &st), "descent trace");
    w.begin_object();
    w.key("iteration").value(st.iteration);
    w.key("step").value(st.step);
    w.key("energy").value(st.energy);
    w.key("gradient_norm").value(st.gradient_norm);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  emit(c.out, w.str());
  if (status == LAM_DESCENT_BOUNDARY) {
    std::cerr << "lamellar: descent stopped because two interfaces nearly collided (profile left A_N)\n";
  } else if (status == LAM_DESCENT_ITERATION_CAP) {
    std::cerr << "lamellar: descent reached the iteration cap before the gradient tolerance\n";
  }
  return 0;
}

int cmd_flow(const json& j) {
  const Common c = parse_common(j);
  const FlowConfig fc = parse_flow(j);
  const std::string prefix = c.out.value_or("flow");
  const std::size_t M = static_cast<std::size_t>(fc.grid_points);

  auto u = equidistributed(fc.N);
  lam_grid* graw = nullptr;
  check(lam_grid_from_profile(u.get(), M, fc.s, fc.gamma, fc.eps.front(), &graw), "grid");
  Grid sampled(graw);
  std::vector<double> values(M);
  check(lam_grid_values(sampled.get(), values.data(), M), "grid values");
  const auto noise = uniform_noise(M, c.seed);
  for (std::size_t i = 0; i < M; ++i) values[i] += fc.noise * noise[i];
  check(lam_grid_create(values.data(), M, fc.s, fc.gamma, fc.m, fc.eps.front(), 1, &graw), "grid");
  Grid base(graw);

  lam_flow_config cfg;
  lam_flow_config_default(&cfg);
  cfg.dt = fc.dt;
  cfg.use_default_stabilization = fc.stabilization ? 0 : 1;
  cfg.stabilization = fc.stabilization.value_or(0.0);
  cfg.max_steps = fc.max_steps;
  cfg.energy_tolerance = fc.energy_tolerance;

  ParamList params{{"N", std::to_string(fc.N)}, {"s", fmt(fc.s)},           {"gamma", fmt(fc.gamma)},
                   {"m", fmt(fc.m)},            {"eps", join(fc.eps)},       {"grid_points", std::to_string(fc.grid_points)},
                   {"dt", fmt(fc.dt)},          {"stabilization", fc.stabilization ? fmt(*fc.stabilization) : "default"},
                   {"max_steps", std::to_string(fc.max_steps)},
                   {"energy_tolerance", fmt(fc.energy_tolerance)},
                   {"noise", fmt(fc.noise)},    {"seed", std::to_string(c.seed)}};
  const std::vector<std::string> energy_cols{"h", "w", "k", "total"};

  if (fc.eps.size() == 1) {
    lam_flow_result* fraw = nullptr;
    check(lam_flow_run(base.get(), &cfg, &fraw), "flow");
    FlowResult res(fraw);
    Csv trace("flow", params, {"step", "dt", "h", "w", "k", "total"});
    for (std::size_t i = 0; i < lam_flow_result_trace_size(res.get()); ++i) {
      lam_trace_row row{};
      check(lam_flow_result_trace(res.get(), i, &row), "flow trace");
      std::vector<std::string> f{std::to_string(row.step), fmt(row.dt)};
      for (auto& s : energy_fields(row.energy)) f.push_back(s);
      trace.row(f);
    }
    check(lam_flow_result_state(res.get(), &graw), "flow state");
    Grid state(graw);
    std::vector<double> out(M);
    check(lam_grid_values(state.get(), out.data(), M), "grid values");
    emit(prefix + ".trace.csv", trace.text());
    check(lam_checkpoint_save((prefix + ".llpf").c_str(), out.data(), M), "checkpoint");
    if (!lam_flow_result_converged(res.get())) {
      std::cerr << "lamellar: flow reached max_steps before the energy stalled\n";
    }
    return 0;
  }

  lam_gamma_records* rraw = nullptr;
  check(lam_gamma_limit(fc.eps.data(), fc.eps.size(), base.get(), &cfg, fc.N, &rraw), "gamma limit");
  GammaRecords recs(rraw);
  Csv trace("flow", params, {"epsilon", "step", "dt", "h", "w", "k", "total"});
  Csv records("flow", params,
              {"epsilon", "h", "w", "k", "total", "distance", "sharp_energy", "energy_gap", "steps", "converged",
               "energy_monotone", "max_mean_drift", "nearest_interfaces"});
  for (std::size_t r = 0; r < lam_gamma_records_size(recs.get()); ++r) {
    lam_gamma_record g{};
    check(lam_gamma_records_get(recs.get(), r, &g), "gamma record");
    std::string nearest;
    std::vector<std::string> f{fmt(g.epsilon)};
    for (auto& s : energy_fields(g.energy)) f.push_back(s);
    if (g.has_nearest) {
      lam_profile* praw = nullptr;
      check(lam_gamma_records_nearest(recs.get(), r, &praw), "nearest profile");
      Profile p(praw);
      nearest = join(interfaces(p.get()), ' ');
      f.insert(f.end(), {fmt(g.distance), fmt(g.sharp_energy), fmt(g.energy_gap)});
    } else {
      f.insert(f.end(), {"", "", ""});
    }
    f.insert(f.end(), {std::to_string(g.steps), std::to_string(g.converged), std::to_string(g.energy_monotone),
                       fmt(g.max_mean_drift), nearest});
    records.row(f);
    for (std::size_t i = 0; i < lam_gamma_records_trace_size(recs.get(), r); ++i) {
      lam_trace_row row{};
      check(lam_gamma_records_trace(recs.get(), r, i, &row), "flow trace");
      std::vector<std::string> t{fmt(g.epsilon), std::to_string(row.step), fmt(row.dt)};
      for (auto& s : energy_fields(row.energy)) t.push_back(s);
      trace.row(t);
    }
  }
  check(lam_gamma_records_state(recs.get(), &graw), "relaxed state");
  Grid state(graw);
  std::vector<double> out(M);
  check(lam_grid_values(state.get(), out.data(), M), "grid values");
  emit(prefix + ".trace.csv", trace.text());
  emit(prefix + ".records.csv", records.text());
  check(lam_checkpoint_save((prefix + ".llpf").c_str(), out.data(), M), "checkpoint");
  return 0;
}

int cmd_gamma0(const json& j) {
  const Common c = parse_common(j);
  const Gamma0Config gc = parse_gamma0(j);
  Csv csv("gamma0", {{"N", join(gc.N)}, {"s", join(gc.s)}}, {"N", "s", "gamma0"});
  for (int n : gc.N)
    for (double s : gc.s) csv.row({std::to_string(n), fmt(s), fmt(gamma0_of(n, s))});
  emit(c.out, csv.text());
  return 0;
}

}  // namespace cli
