#include "config.hpp"

#include <fstream>

#include "projdyn/random.hpp"

namespace projdyn::cli {

namespace {

Mat parse_matrix(const json& value, const char* name) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(std::string(name) + ": expected a nested array");
  }
  const Index rows = static_cast<Index>(value.size());
  const Index cols = static_cast<Index>(value.at(0).size());
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = value.at(i);
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ConfigError(std::string(name) + ": ragged rows");
    }
    for (Index j = 0; j < cols; ++j) m(i, j) = row.at(j).get<Real>();
  }
  return m;
}

Vec parse_vector(const json& value, const char* name) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(std::string(name) + ": expected a numeric array");
  }
  Vec v(static_cast<Index>(value.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = value.at(i).get<Real>();
  return v;
}

void check_symmetric(const Mat& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw ConfigError(std::string(name) + ": matrix must be square");
  }
  const Real scale = std::max<Real>(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ConfigError(std::string(name) + ": matrix must be symmetric");
  }
}

ScreenSpec parse_screen(const json& value) {
  ScreenSpec spec;
  if (value.is_string()) {
    spec.kind = value.get<std::string>();
  } else if (value.is_object()) {
    spec.kind = value.at("kind").get<std::string>();
    if (value.contains("C")) spec.C = parse_matrix(value.at("C"), "screen.C");
    if (value.contains("ell")) {
      spec.ell = parse_vector(value.at("ell"), "screen.ell").transpose();
    }
  } else {
    throw ConfigError("screen: expected a string or an object");
  }
  if (spec.kind == "quadric" && !spec.C) {
    throw ConfigError("screen: quadric requires C");
  }
  if (spec.kind == "linear" && !spec.ell) {
    throw ConfigError("screen: linear requires ell");
  }
  if (spec.kind != "quadric" && spec.kind != "linear" && spec.kind != "G" &&
      spec.kind != "A" && spec.kind != "B") {
    throw ConfigError("screen: unknown kind '" + spec.kind + "'");
  }
  return spec;
}

FieldSpec parse_field(const json& value) {
  FieldSpec spec;
  spec.kind = value.at("kind").get<std::string>();
  if (value.contains("dim")) spec.dim = value.at("dim").get<Index>();
  if (value.contains("strength")) spec.strength = value.at("strength").get<Real>();
  if (value.contains("matrix")) {
    spec.matrix = parse_matrix(value.at("matrix"), "field.matrix");
  }
  const bool known = spec.kind == "zero" || spec.kind == "braden" ||
                     spec.kind == "kepler" || spec.kind == "kepler_projective" ||
                     spec.kind == "inverse_square" || spec.kind == "linear";
  if (!known) throw ConfigError("field: unknown kind '" + spec.kind + "'");
  return spec;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  try {
    cfg.problem = doc.at("problem").get<std::string>();

    if (doc.contains("dimension")) cfg.dimension = doc.at("dimension").get<Index>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("nu")) cfg.nu = doc.at("nu").get<Real>();
    if (doc.contains("eta")) cfg.eta = doc.at("eta").get<Real>();
    if (doc.contains("prop1_field_degree")) {
      cfg.prop1_field_degree = doc.at("prop1_field_degree").get<Real>();
    }

    for (const char* name : {"G", "A"}) {
      if (!doc.contains(name)) continue;
      const json& value = doc.at(name);
      const bool is_g = name[0] == 'G';
      if (value.is_string() && value.get<std::string>() == "random") {
        (is_g ? cfg.random_G : cfg.random_A) = true;
      } else {
        Mat m = parse_matrix(value, name);
        check_symmetric(m, name);
        (is_g ? cfg.G : cfg.A) = m;
      }
    }

    if (doc.contains("field")) cfg.field = parse_field(doc.at("field"));
    if (doc.contains("screen")) cfg.screen = parse_screen(doc.at("screen"));
    if (doc.contains("reaction")) {
      cfg.reaction = doc.at("reaction").get<std::string>();
      if (cfg.reaction != "central" && cfg.reaction != "gauss") {
        throw ConfigError("reaction: unknown kind '" + cfg.reaction + "'");
      }
    }

    if (doc.contains("initial")) {
      const json& init = doc.at("initial");
      if (init.is_string() && init.get<std::string>() == "random") {
        cfg.random_initial = true;
      } else {
        cfg.q0 = parse_vector(init.at("q"), "initial.q");
        cfg.p0 = parse_vector(init.at("p"), "initial.p");
      }
    }

    if (doc.contains("t_end")) cfg.t_end = doc.at("t_end").get<Real>();

    if (doc.contains("integrator")) {
      const json& io = doc.at("integrator");
      if (io.contains("method")) {
        const std::string method = io.at("method").get<std::string>();
        if (method == "rk54") {
          cfg.integrator.method = IntegratorOptions::Method::adaptive_rk54;
        } else if (method == "rk4") {
          cfg.integrator.method = IntegratorOptions::Method::fixed_rk4;
        } else {
          throw ConfigError("integrator.method: unknown '" + method + "'");
        }
      }
      if (io.contains("rtol")) cfg.integrator.rtol = io.at("rtol").get<Real>();
      if (io.contains("atol")) cfg.integrator.atol = io.at("atol").get<Real>();
      if (io.contains("initial_step")) {
        cfg.integrator.initial_step = io.at("initial_step").get<Real>();
      }
      if (io.contains("fixed_step")) {
        cfg.integrator.fixed_step = io.at("fixed_step").get<Real>();
      }
      if (io.contains("max_step")) {
        cfg.integrator.max_step = io.at("max_step").get<Real>();
      }
      if (io.contains("max_steps")) {
        cfg.integrator.max_steps = io.at("max_steps").get<long>();
      }
      if (io.contains("stabilize")) {
        cfg.integrator.stabilize = io.at("stabilize").get<bool>();
      }
      if (io.contains("tau_stop")) {
        cfg.integrator.tau_stop = io.at("tau_stop").get<Real>();
      }
    }

    if (doc.contains("source")) cfg.source = doc.at("source").get<std::string>();
    if (doc.contains("reference")) cfg.reference = doc.at("reference");

    if (doc.contains("output")) {
      for (const auto& [key, value] : doc.at("output").items()) {
        cfg.output[key] = value.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // Structural validation.
  const bool known_problem = cfg.problem == "free" || cfg.problem == "constrained" ||
                             cfg.problem == "neumann" || cfg.problem == "braden" ||
                             cfg.problem == "jacobi" || cfg.problem == "project" ||
                             cfg.problem == "verify" || cfg.problem == "correspond";
  if (!known_problem) {
    throw ConfigError("problem: unknown kind '" + cfg.problem + "'");
  }

  const bool needs_run = cfg.problem == "free" || cfg.problem == "constrained" ||
                         cfg.problem == "neumann" || cfg.problem == "braden" ||
                         cfg.problem == "jacobi" || cfg.problem == "correspond";
  if (needs_run) {
    if (!(cfg.t_end > 0)) throw ConfigError("t_end must be positive");
    if (!(cfg.integrator.rtol > 0) || !(cfg.integrator.atol > 0) ||
        !(cfg.integrator.initial_step > 0) || !(cfg.integrator.fixed_step > 0) ||
        !(cfg.integrator.max_step > 0) || cfg.integrator.max_steps <= 0) {
      throw ConfigError("integrator: steps and tolerances must be positive");
    }
  }

  const bool uses_ga = cfg.problem == "neumann" || cfg.problem == "braden" ||
                       cfg.problem == "jacobi" || cfg.problem == "correspond";
  if (uses_ga) {
    if (cfg.dimension <= 0) throw ConfigError("dimension must be positive");
    if (!cfg.G && !cfg.random_G) throw ConfigError(cfg.problem + " requires G");
    if (!cfg.A && !cfg.random_A) throw ConfigError(cfg.problem + " requires A");
    for (const auto* pair : {&cfg.G, &cfg.A}) {
      if (*pair && (*pair)->rows() != cfg.dimension) {
        throw ConfigError("matrix dimensions do not match 'dimension'");
      }
    }
    if (!cfg.q0 && !cfg.random_initial) {
      throw ConfigError(cfg.problem + " requires initial data");
    }
  }
  if (cfg.problem == "free" || cfg.problem == "constrained") {
    if (!cfg.field) throw ConfigError(cfg.problem + " requires a field");
    if (cfg.problem == "constrained" && !cfg.screen) {
      throw ConfigError("constrained requires a screen");
    }
    if (!cfg.q0 && !cfg.random_initial) {
      throw ConfigError(cfg.problem + " requires initial data");
    }
  }
  if (cfg.problem == "project" && cfg.source.empty()) {
    throw ConfigError("project requires a source trajectory file");
  }
  if (cfg.q0 && cfg.p0 && cfg.q0->size() != cfg.p0->size()) {
    throw ConfigError("initial q and p have different dimensions");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

std::shared_ptr<const Screen> make_screen(const ScreenSpec& spec,
                                          const std::optional<EllipsoidData>& data) {
  try {
    if (spec.kind == "quadric") return std::make_shared<QuadricScreen>(SymForm(*spec.C));
    if (spec.kind == "linear") return std::make_shared<LinearScreen>(*spec.ell);
    if (!data) throw ConfigError("screen kind '" + spec.kind + "' requires G and A");
    if (spec.kind == "G") return std::make_shared<QuadricScreen>(data->G);
    if (spec.kind == "A") return std::make_shared<QuadricScreen>(data->A);
    return std::make_shared<QuadricScreen>(data->B);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("screen: ") + e.what());
  } catch (const NotSpdError& e) {
    throw ConfigError(std::string("screen: ") + e.what());
  }
}

namespace {

ForceField make_field(const FieldSpec& spec, const std::optional<EllipsoidData>& data,
                      Real eta) {
  if (spec.kind == "zero") {
    if (spec.dim <= 0) throw ConfigError("field zero: requires dim");
    return zero_field(spec.dim);
  }
  if (spec.kind == "kepler") {
    if (spec.dim <= 0) throw ConfigError("field kepler: requires dim");
    return kepler_field(spec.dim, spec.strength);
  }
  if (spec.kind == "kepler_projective") {
    if (spec.dim <= 0) throw ConfigError("field kepler_projective: requires dim");
    Covec ell = Covec::Zero(spec.dim + 1);
    ell(spec.dim) = 1;
    return projective_extension(ell, kepler_affine(spec.dim, spec.strength));
  }
  if (spec.kind == "inverse_square") {
    if (spec.dim <= 0) throw ConfigError("field inverse_square: requires dim");
    const SymForm metric = SymForm::identity(spec.dim);
    return gradient_field(metric,
                          quadratic_power_potential(metric, spec.strength, -1.0),
                          GradientMode::analytic);
  }
  if (spec.kind == "linear") {
    if (!spec.matrix) throw ConfigError("field linear: requires matrix");
    return linear_field(*spec.matrix);
  }
  // braden
  if (!data) throw ConfigError("field braden: requires G and A");
  return braden_field(data->G, data->A, eta);
}

}  // namespace

std::optional<EllipsoidData> resolve_ellipsoid(const RunConfig& cfg) {
  if (!cfg.G && !cfg.random_G && !cfg.A && !cfg.random_A) return std::nullopt;
  Rng rng(cfg.seed);
  const Index n = cfg.dimension > 0 ? cfg.dimension : (cfg.G ? cfg.G->rows() : 0);
  if (n <= 0) throw ConfigError("dimension must be set for G/A problems");
  try {
    const SymForm G = cfg.random_G ? random_spd(rng, n, 0.7, 1.6) : SymForm(*cfg.G);
    const SymForm A = cfg.random_A ? random_spd(rng, n, 0.7, 1.6) : SymForm(*cfg.A);
    return EllipsoidData::make(G, A);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

AssembledRun assemble_run(const RunConfig& cfg) {
  // Initial data draws from a stream separate from the matrix stream.
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  AssembledRun run;

  const std::optional<EllipsoidData> data = resolve_ellipsoid(cfg);
  run.data = data;

  if (cfg.problem == "neumann") {
    run.system = neumann_system(*data);
    run.constrained = true;
  } else if (cfg.problem == "braden") {
    run.system = braden_system(*data, cfg.eta);
    run.constrained = true;
  } else if (cfg.problem == "jacobi" || cfg.problem == "correspond") {
    run.system = jacobi_system({*data, cfg.nu});
    run.constrained = true;
  } else if (cfg.problem == "constrained") {
    run.system.field = make_field(*cfg.field, data, cfg.eta);
    run.system.screen = make_screen(*cfg.screen, data);
    if (cfg.reaction == "gauss") {
      if (!data) throw ConfigError("gauss reaction requires G and A");
      run.system.reaction =
          ReactionField::along([m = data->M](const Vec& q) -> Vec { return m * q; },
                               "gauss");
    } else {
      run.system.reaction = ReactionField::central();
    }
    run.system.label = "custom";
    run.constrained = true;
  } else if (cfg.problem == "free") {
    run.field = make_field(*cfg.field, data, cfg.eta);
    if (cfg.screen) run.screen = make_screen(*cfg.screen, data);
    run.constrained = false;
  }

  if (run.constrained) {
    run.field = run.system.field;
    run.screen = run.system.screen;
  }

  // Initial data; constrained starts are projected onto the screen.
  if (cfg.random_initial) {
    if (!run.constrained) throw ConfigError("random initial data needs a screen");
    const Screen& screen = *run.system.screen;
    for (;;) {
      Vec q = rng.vector(screen.dim(), -1.0, 1.0);
      if (q.norm() < 0.3 || !screen.in_domain(q)) continue;
      run.start.q = project_point(screen, q);
      break;
    }
    for (;;) {
      Vec v = rng.vector(screen.dim(), -1.0, 1.0);
      Vec w = tangent_project(screen, run.start.q, v);
      if (w.norm() < 0.1) continue;
      run.start.p = w / w.norm();
      break;
    }
  } else {
    run.start.q = *cfg.q0;
    run.start.p = *cfg.p0;
    if (run.start.q.size() != run.field.dim) {
      throw ConfigError("initial data dimension does not match the problem");
    }
    if (run.constrained) {
      try {
        run.start.q = project_point(*run.system.screen, run.start.q);
        run.start.p = tangent_project(*run.system.screen, run.start.q, run.start.p);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("initial data: ") + e.what());
      }
    }
  }
  run.start.t = 0;
  return run;
}

}  // namespace projdyn::cli
