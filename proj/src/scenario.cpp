#include "qrelent/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qrelent/combinatorics.hpp"
#include "qrelent/random.hpp"

namespace qrelent {
namespace {

struct KindName {
  ScenarioKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::Simulate, "simulate"},
    {ScenarioKind::VerifyTheorem3, "verify-theorem3"},
    {ScenarioKind::VerifyCancellation, "verify-cancellation"},
    {ScenarioKind::VerifyIdentities, "verify-identities"},
    {ScenarioKind::Enumerate, "enumerate"},
    {ScenarioKind::SemiclassicalBounds, "semiclassical-bounds"},
    {ScenarioKind::QuantizationChecks, "quantization-checks"},
};

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

[[noreturn]] void fail(const std::string& field, int line, const std::string& what) {
  std::ostringstream msg;
  msg << "scenario";
  if (line > 0) msg << " line " << line;
  msg << ": " << field << ": " << what;
  throw ScenarioError(msg.str(), field, line);
}

/// Rejects keys outside `allowed`, naming the first offender.
void check_keys(const YAML::Node& map, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(section.empty() ? "document" : section, line_of(map), "expected a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string key = it->first.as<std::string>();
    if (!allowed.count(key)) {
      const std::string field = section.empty() ? key : section + "." + key;
      fail(field, line_of(it->first), "unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read(const YAML::Node& map, const char* key, const std::string& section, T& out) {
  const YAML::Node node = map[key];
  if (!node) return;
  const std::string field = section.empty() ? key : section + "." + key;
  if (!node.IsScalar()) fail(field, line_of(node), "expected a scalar");
  try {
    out = node.as<T>();
  } catch (const YAML::BadConversion&) {
    fail(field, line_of(node), "cannot convert '" + node.Scalar() + "'");
  }
}

void read_list(const YAML::Node& map, const char* key, const std::string& section,
               std::vector<double>& out) {
  const YAML::Node node = map[key];
  if (!node) return;
  const std::string field = section.empty() ? key : section + "." + key;
  if (!node.IsSequence() || node.size() == 0) fail(field, line_of(node), "expected a non-empty list");
  out.clear();
  for (const auto& item : node) {
    try {
      out.push_back(item.as<double>());
    } catch (const YAML::BadConversion&) {
      fail(field, line_of(item), "cannot convert '" + item.Scalar() + "'");
    }
  }
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) fail(field, 0, what);
}

bool is_nbody_kind(ScenarioKind k) {
  return k == ScenarioKind::Simulate || k == ScenarioKind::VerifyTheorem3 ||
         k == ScenarioKind::VerifyIdentities;
}

}  // namespace

void ScenarioTolerances::override_all(double value) {
  margin = value;
  frechet_quadrature = value;
  frechet_finite_difference = value;
  commutator_identity = value;
  x_norm = value;
  coherent_norm = value;
  husimi_mass = value;
  toeplitz_trace = value;
  resolution = value;
  duality = value;
  roundoff = value;
}

std::string to_string(ScenarioKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ScenarioKind parse_kind(const std::string& name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  throw ArgumentError("unknown scenario kind '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail("document", e.mark.line + 1, e.msg);
  }
  if (!doc || doc.IsNull()) fail("document", 0, "empty document");
  check_keys(doc, "",
             {"schema", "id", "kind", "seed", "model", "n", "t_final", "dt", "store_stride",
              "initial", "cap", "tolerances", "samples", "m_max", "n_min", "n_max",
              "semiclassical", "quantization", "output"});

  Scenario s;
  std::string schema;
  read(doc, "schema", "", schema);
  if (schema != kScenarioSchema) {
    fail("schema", line_of(doc["schema"]),
         schema.empty() ? "missing (expected qrelent/1)" : "unsupported '" + schema + "'");
  }
  read(doc, "id", "", s.id);
  if (s.id.empty()) fail("id", line_of(doc), "missing");
  std::string kind;
  read(doc, "kind", "", kind);
  if (kind.empty()) fail("kind", line_of(doc), "missing");
  try {
    s.kind = parse_kind(kind);
  } catch (const ArgumentError& e) {
    fail("kind", line_of(doc["kind"]), e.what());
  }
  if (!doc["seed"]) fail("seed", line_of(doc), "missing (every scenario must fix its seed)");
  read(doc, "seed", "", s.seed);

  if (const YAML::Node m = doc["model"]) {
    check_keys(m, "model",
               {"builder", "site_dim", "w_norm", "h_norm", "l_strength", "lattice_size", "dephasing"});
    read(m, "builder", "model", s.model.builder);
    long site_dim = s.model.site_dim;
    read(m, "site_dim", "model", site_dim);
    s.model.site_dim = site_dim;
    read(m, "w_norm", "model", s.model.w_norm);
    read(m, "h_norm", "model", s.model.h_norm);
    read(m, "l_strength", "model", s.model.l_strength);
    read(m, "lattice_size", "model", s.model.lattice_size);
    read(m, "dephasing", "model", s.model.dephasing);
    if (s.model.builder == "bose-hubbard") s.model.site_dim = s.model.lattice_size;
  }
  read(doc, "n", "", s.n);
  read(doc, "t_final", "", s.t_final);
  read(doc, "dt", "", s.dt);
  read(doc, "store_stride", "", s.store_stride);
  if (const YAML::Node init = doc["initial"]) {
    check_keys(init, "initial", {"min_eigenvalue"});
    read(init, "min_eigenvalue", "initial", s.initial_min_eigenvalue);
  }
  long cap = s.cap;
  read(doc, "cap", "", cap);
  s.cap = cap;
  if (const YAML::Node tol = doc["tolerances"]) {
    auto& t = s.tolerances;
    check_keys(tol, "tolerances",
               {"margin", "positivity", "trace_drift", "frechet_quadrature",
                "frechet_finite_difference", "commutator_identity", "x_norm", "coherent_norm",
                "husimi_mass", "toeplitz_trace", "resolution", "duality", "roundoff"});
    read(tol, "margin", "tolerances", t.margin);
    read(tol, "positivity", "tolerances", t.positivity);
    read(tol, "trace_drift", "tolerances", t.trace_drift);
    read(tol, "frechet_quadrature", "tolerances", t.frechet_quadrature);
    read(tol, "frechet_finite_difference", "tolerances", t.frechet_finite_difference);
    read(tol, "commutator_identity", "tolerances", t.commutator_identity);
    read(tol, "x_norm", "tolerances", t.x_norm);
    read(tol, "coherent_norm", "tolerances", t.coherent_norm);
    read(tol, "husimi_mass", "tolerances", t.husimi_mass);
    read(tol, "toeplitz_trace", "tolerances", t.toeplitz_trace);
    read(tol, "resolution", "tolerances", t.resolution);
    read(tol, "duality", "tolerances", t.duality);
    read(tol, "roundoff", "tolerances", t.roundoff);
  }
  read(doc, "samples", "", s.samples);
  read(doc, "m_max", "", s.m_max);
  read(doc, "n_min", "", s.n_min);
  read(doc, "n_max", "", s.n_max);
  if (const YAML::Node sc = doc["semiclassical"]) {
    check_keys(sc, "semiclassical",
               {"c0", "c1", "c2", "t_final", "k", "d", "phi_norm", "grad_phi_norm",
                "lip_grad_phi", "n_grid"});
    auto& b = s.bounds;
    read(sc, "c0", "semiclassical", b.c0);
    read(sc, "c1", "semiclassical", b.c1);
    read(sc, "c2", "semiclassical", b.c2);
    read(sc, "t_final", "semiclassical", b.t_final);
    read(sc, "k", "semiclassical", b.k);
    read(sc, "d", "semiclassical", b.d);
    read(sc, "phi_norm", "semiclassical", b.phi_norm);
    read(sc, "grad_phi_norm", "semiclassical", b.grad_phi_norm);
    read(sc, "lip_grad_phi", "semiclassical", b.lip_grad_phi);
    read_list(sc, "n_grid", "semiclassical", s.n_grid);
  }
  if (const YAML::Node q = doc["quantization"]) {
    check_keys(q, "quantization", {"hbar", "fourier_cutoff", "grid"});
    read(q, "hbar", "quantization", s.hbar);
    read(q, "fourier_cutoff", "quantization", s.fourier_cutoff);
    read(q, "grid", "quantization", s.grid);
  }
  read(doc, "output", "", s.output);

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void validate_scenario(const Scenario& s) {
  for (char c : s.id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    require(ok, "id", "only letters, digits, '-', '_' and '.' are allowed");
  }
  const auto& m = s.model;
  require(m.builder == "random" || m.builder == "bose-hubbard", "model.builder",
          "unknown builder '" + m.builder + "' (expected random or bose-hubbard)");
  require(m.site_dim >= 1, "model.site_dim", "must be positive");
  require(m.lattice_size >= 2, "model.lattice_size", "must be at least 2");
  require(m.w_norm >= 0.0 && m.h_norm >= 0.0 && m.l_strength >= 0.0, "model",
          "norms and strengths must be nonnegative");
  require(m.dephasing >= 0.0, "model.dephasing", "must be nonnegative");
  require(s.n >= 1, "n", "must be positive");
  require(s.t_final > 0.0 && std::isfinite(s.t_final), "t_final", "must be positive");
  require(s.dt > 0.0 && s.dt <= s.t_final, "dt", "must lie in (0, t_final]");
  require(s.store_stride >= 1, "store_stride", "must be positive");
  require(s.cap >= 1, "cap", "must be positive");
  require(s.samples >= 1, "samples", "must be positive");
  {
    const auto& t = s.tolerances;
    const double values[] = {t.margin, t.positivity, t.frechet_quadrature,
                             t.frechet_finite_difference, t.commutator_identity, t.x_norm,
                             t.coherent_norm, t.husimi_mass, t.toeplitz_trace, t.resolution,
                             t.duality, t.roundoff};
    for (double v : values) require(v >= 0.0 && std::isfinite(v), "tolerances", "must be nonnegative");
    require(t.trace_drift > 0.0, "tolerances.trace_drift", "must be positive");
  }

  if (is_nbody_kind(s.kind) || s.kind == ScenarioKind::VerifyCancellation) {
    require(m.site_dim >= 2, "model.site_dim", "must be at least 2");
    require(s.initial_min_eigenvalue > 0.0 &&
                s.initial_min_eigenvalue * static_cast<double>(m.site_dim) < 1.0,
            "initial.min_eigenvalue", "must lie in (0, 1/site_dim)");
  }
  auto dim_of = [&](int legs) {
    double dim = std::pow(static_cast<double>(m.site_dim), legs);
    return dim;
  };
  if (is_nbody_kind(s.kind)) {
    require(s.n >= 2, "n", "must be at least 2");
    require(dim_of(s.n) <= static_cast<double>(s.cap), "n",
            "site_dim^n = " + std::to_string(static_cast<long long>(dim_of(s.n))) +
                " exceeds cap " + std::to_string(static_cast<long long>(s.cap)));
  }
  if (s.kind == ScenarioKind::VerifyCancellation || s.kind == ScenarioKind::Enumerate) {
    require(s.m_max >= 1 && s.m_max <= 8, "m_max", "must lie in [1, 8]");
    require(s.n_min >= 1 && s.n_max >= s.n_min, "n_max", "need 1 <= n_min <= n_max");
  }
  if (s.kind == ScenarioKind::VerifyCancellation) {
    require(s.n_min >= 2, "n_min", "must be at least 2");
    require(dim_of(s.n_max) <= static_cast<double>(s.cap), "n_max", "site_dim^n_max exceeds cap");
  }
  if (s.kind == ScenarioKind::Enumerate) {
    const double work = std::pow(static_cast<double>(s.n_max), 2.0 * s.m_max);
    require(work <= static_cast<double>(kEnumerationCap), "m_max", "n_max^(2 m_max) is beyond the enumeration budget");
  }
  if (s.kind == ScenarioKind::SemiclassicalBounds) {
    try {
      s.bounds.validate();
    } catch (const ArgumentError& e) {
      fail("semiclassical", 0, e.what());
    }
    for (double n : s.n_grid) require(n > 1.0, "semiclassical.n_grid", "entries must exceed 1");
  }
  if (s.kind == ScenarioKind::QuantizationChecks) {
    require(s.hbar > 0.0, "quantization.hbar", "must be positive");
    require(s.fourier_cutoff >= 1, "quantization.fourier_cutoff", "must be positive");
    require(s.grid >= 4, "quantization.grid", "must be at least 4");
  }
}

LindbladModel build_model(const Scenario& s) {
  if (s.model.builder == "bose-hubbard") {
    return bose_hubbard_model(s.model.lattice_size, s.model.dephasing);
  }
  RandomModelSpec spec;
  spec.site_dim = s.model.site_dim;
  spec.seed = derive_seed(s.seed, 1);
  spec.w_norm = s.model.w_norm;
  spec.h_norm = s.model.h_norm;
  spec.l_strength = s.model.l_strength;
  return random_model(spec);
}

}  // namespace qrelent
