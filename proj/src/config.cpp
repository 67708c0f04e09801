/* Copyright 2026 The nmrdj Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nmrdj/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nmrdj {

namespace {

using json = nlohmann::json;

std::string child(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

std::string item(const std::string &path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const json &obj, const std::string &path,
                std::initializer_list<const char *> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char *a : allowed)
      ok = ok || it.key() == a;
    if (!ok)
      throw ConfigError(child(path, it.key()), "unknown field");
  }
}

const json &require_object(const json &v, const std::string &path) {
  if (!v.is_object())
    throw ConfigError(path, "expected an object");
  return v;
}

double as_number(const json &v, const std::string &path) {
  if (!v.is_number())
    throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw ConfigError(path, "expected a finite number");
  return d;
}

double as_positive(const json &v, const std::string &path) {
  const double d = as_number(v, path);
  if (!(d > 0.0))
    throw ConfigError(path, "must be positive");
  return d;
}

std::string as_string(const json &v, const std::string &path) {
  if (!v.is_string())
    throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::size_t as_count(const json &v, const std::string &path) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

bool as_bool(const json &v, const std::string &path) {
  if (!v.is_boolean())
    throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

template <typename F>
auto rethrow_at(const std::string &path, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    throw ConfigError(path, e.what());
  }
}

Eigen::MatrixXd parse_couplings(const json &v, const std::vector<std::string> &labels,
                                const std::string &path) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  auto index_of = [&](const std::string &label, const std::string &where) -> Eigen::Index {
    for (Eigen::Index i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == label)
        return i;
    throw ConfigError(where, "unknown spin label '" + label + "'");
  };

  if (v.is_object()) {
    // {"A-B": 4000, ...}; an unlisted pair is uncoupled.
    Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n, n);
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string where = child(path, it.key());
      const auto dash = it.key().find('-');
      if (dash == std::string::npos)
        throw ConfigError(where, "pair key must look like \"A-B\"");
      const Eigen::Index i = index_of(it.key().substr(0, dash), where);
      const Eigen::Index j = index_of(it.key().substr(dash + 1), where);
      if (i == j)
        throw ConfigError(where, "a spin cannot couple to itself");
      d(i, j) = as_number(it.value(), where);
      seen(i, j) = 1;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (seen(i, j) && !seen(j, i))
          d(j, i) = d(i, j);
        else if (seen(j, i) && !seen(i, j))
          d(i, j) = d(j, i);
      }
    return d;
  }

  if (!v.is_array())
    throw ConfigError(path, "expected a matrix, an upper-triangular list, or a pair object");
  bool full = v.size() == static_cast<std::size_t>(n);
  for (const auto &row : v)
    full = full && row.is_array() && row.size() == static_cast<std::size_t>(n);
  if (full) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        d(i, j) = as_number(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                            item(item(path, static_cast<std::size_t>(i)),
                                 static_cast<std::size_t>(j)));
    return d;
  }
  // Upper-triangular rows: row i lists D(i, i+1) ... D(i, n-1).
  if (v.size() + 1 != static_cast<std::size_t>(n) && v.size() != static_cast<std::size_t>(n))
    throw ConfigError(path, "expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rp = item(path, i);
    const std::size_t want = static_cast<std::size_t>(n) - 1 - i;
    if (!v[i].is_array() || v[i].size() != want)
      throw ConfigError(rp, "upper-triangular row must hold " + std::to_string(want) +
                                " couplings");
    for (std::size_t k = 0; k < want; ++k) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(i + 1 + k);
      d(a, b) = d(b, a) = as_number(v[i][k], item(rp, k));
    }
  }
  return d;
}

SpinSystem system_from_json(const json &v, const std::string &path) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (name == "three_spin")
      return three_spin_system();
    if (name == "five_spin")
      return five_spin_system();
    throw ConfigError(path, "unknown built-in system '" + name +
                                "' (expected three_spin or five_spin)");
  }
  require_object(v, path);
  check_keys(v, path, {"labels", "shifts_hz", "couplings_hz", "work_spin", "description"});
  if (v.contains("description"))
    as_string(v["description"], child(path, "description"));
  for (const char *k : {"labels", "shifts_hz", "couplings_hz"})
    if (!v.contains(k))
      throw ConfigError(child(path, k), "required field missing");

  const std::string lp = child(path, "labels");
  if (!v["labels"].is_array())
    throw ConfigError(lp, "expected an array of strings");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < v["labels"].size(); ++i)
    labels.push_back(as_string(v["labels"][i], item(lp, i)));

  const std::string sp = child(path, "shifts_hz");
  if (!v["shifts_hz"].is_array())
    throw ConfigError(sp, "expected an array of numbers");
  if (v["shifts_hz"].size() != labels.size())
    throw ConfigError(sp, "expected " + std::to_string(labels.size()) +
                              " shifts, one per label");
  std::vector<double> shifts;
  for (std::size_t i = 0; i < v["shifts_hz"].size(); ++i)
    shifts.push_back(as_number(v["shifts_hz"][i], item(sp, i)));

  Eigen::MatrixXd d = parse_couplings(v["couplings_hz"], labels, child(path, "couplings_hz"));

  int work = 0;
  if (v.contains("work_spin")) {
    const std::string wp = child(path, "work_spin");
    const json &w = v["work_spin"];
    if (w.is_string()) {
      work = -1;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == w.get<std::string>())
          work = static_cast<int>(i);
      if (work < 0)
        throw ConfigError(wp, "unknown spin label '" + w.get<std::string>() + "'");
    } else {
      work = static_cast<int>(as_count(w, wp));
    }
  }
  return rethrow_at(child(path, "couplings_hz"), [&] {
    return SpinSystem(labels, shifts, d, work);
  });
}

PulseModel pulse_from_json(const json &v, const std::string &path) {
  if (v.is_string())
    return rethrow_at(path, [&] { return PulseModel::parse(v.get<std::string>()); });
  require_object(v, path);
  check_keys(v, path, {"model", "duration_ms", "truncation", "samples",
                       "remove_free_precession"});
  const std::string model = v.contains("model") ? as_string(v["model"], child(path, "model"))
                                                : std::string("ideal");
  if (model == "ideal") {
    for (const char *k : {"duration_ms", "truncation", "samples"})
      if (v.contains(k))
        throw ConfigError(child(path, k), "only meaningful for the gaussian model");
    return PulseModel::ideal();
  }
  if (model != "gaussian")
    throw ConfigError(child(path, "model"), "expected ideal or gaussian");
  PulseModel p = PulseModel::gaussian(kPresetGaussianDurationsS.back());
  if (v.contains("duration_ms"))
    p.duration_s = as_positive(v["duration_ms"], child(path, "duration_ms")) * 1e-3;
  if (v.contains("truncation")) {
    p.truncation = as_positive(v["truncation"], child(path, "truncation"));
    if (p.truncation > 1.0)
      throw ConfigError(child(path, "truncation"), "must lie in (0, 1]");
  }
  if (v.contains("samples"))
    p.samples = as_count(v["samples"], child(path, "samples"));
  if (v.contains("remove_free_precession"))
    p.remove_free_precession =
        as_bool(v["remove_free_precession"], child(path, "remove_free_precession"));
  return p;
}

AcquisitionParams acquisition_from_json(const json &v, const std::string &path,
                                        const SpinSystem &sys) {
  require_object(v, path);
  check_keys(v, path, {"points", "spectral_width_hz", "dwell_s", "t2_ms"});
  AcquisitionParams a = default_acquisition(sys);
  if (v.contains("points"))
    a.points = as_count(v["points"], child(path, "points"));
  if (v.contains("spectral_width_hz") && v.contains("dwell_s"))
    throw ConfigError(path, "give spectral_width_hz or dwell_s, not both");
  if (v.contains("spectral_width_hz"))
    a.dwell_s = 1.0 / as_positive(v["spectral_width_hz"], child(path, "spectral_width_hz"));
  if (v.contains("dwell_s"))
    a.dwell_s = as_positive(v["dwell_s"], child(path, "dwell_s"));
  if (v.contains("t2_ms"))
    a.t2_s = as_positive(v["t2_ms"], child(path, "t2_ms")) * 1e-3;
  rethrow_at(path, [&] {
    validate_acquisition(a, sys);
    return 0;
  });
  return a;
}

std::string read_file(const std::filesystem::path &file, const std::string &path) {
  std::ifstream in(file);
  if (!in)
    throw ConfigError(path, "cannot open file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(what, std::string("malformed JSON: ") + e.what());
  }
}

std::string fmt(const char *f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool same_system(const SpinSystem &a, const SpinSystem &b) {
  return a.labels() == b.labels() && a.shifts_hz() == b.shifts_hz() &&
         a.couplings_hz() == b.couplings_hz();
}

}  // namespace

SpinSystem parse_system(std::string_view document) {
  return system_from_json(parse_json(document, "system"), "system");
}

RunConfig parse_config(std::string_view document, const std::filesystem::path &base_dir) {
  const json doc = parse_json(document, "(document)");
  require_object(doc, "(document)");
  check_keys(doc, "", {"schema_version", "description", "system", "system_file", "init",
                       "function", "preset", "pulse", "acquisition", "display", "pops_path",
                       "selective_phase", "zero_order_phase", "output", "workers"});
  if (doc.contains("description"))
    as_string(doc["description"], "description");

  RunConfig cfg;
  auto mark = [&](const char *k) { cfg.explicit_fields.insert(k); };

  if (!doc.contains("schema_version"))
    throw ConfigError("schema_version", "required field missing");
  if (!doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<long long>() != kSchemaVersion)
    throw ConfigError("schema_version",
                      "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");

  if (doc.contains("system") && doc.contains("system_file"))
    throw ConfigError("system", "give system or system_file, not both");
  if (doc.contains("system")) {
    cfg.system = system_from_json(doc["system"], "system");
    cfg.system_given = true;
    mark("system");
  } else if (doc.contains("system_file")) {
    std::filesystem::path f = as_string(doc["system_file"], "system_file");
    if (f.is_relative())
      f = base_dir / f;
    if (!std::filesystem::exists(f))
      throw ConfigError("system_file", "referenced file does not exist: " + f.string());
    cfg.system = system_from_json(parse_json(read_file(f, "system_file"), "system_file"),
                                  "system_file");
    cfg.system_given = true;
    mark("system");
  }

  const bool has_f = doc.contains("function");
  const bool has_p = doc.contains("preset");
  if (has_f == has_p)
    throw ConfigError(has_f ? "preset" : "function",
                      "exactly one of function or preset must be supplied");
  if (has_p) {
    const std::string name = as_string(doc["preset"], "preset");
    if (!is_preset(name))
      throw ConfigError("preset", "unknown preset '" + name + "'");
    for (const char *k : {"init", "pulse", "display", "pops_path", "selective_phase"})
      if (doc.contains(k))
        throw ConfigError(k, "fixed by the preset; remove it or use function instead");
    cfg.preset = name;
    mark("preset");
  } else {
    cfg.function = rethrow_at("function", [&] {
      return BooleanFunction::parse(as_string(doc["function"], "function"));
    });
    mark("function");
    if (cfg.function->arity() != cfg.system.size() - 1)
      throw ConfigError("function", "arity " + std::to_string(cfg.function->arity()) +
                                        " does not match " +
                                        std::to_string(cfg.system.size() - 1) + " data qubits");
  }

  if (doc.contains("init")) {
    cfg.init = rethrow_at("init", [&] {
      return InitialStateSpec::parse(as_string(doc["init"], "init"));
    });
    mark("init");
  }
  if (doc.contains("pulse")) {
    cfg.pulse = pulse_from_json(doc["pulse"], "pulse");
    mark("pulse");
  }
  if (doc.contains("display")) {
    cfg.display = rethrow_at("display", [&] {
      return parse_display_mode(as_string(doc["display"], "display"));
    });
    mark("display");
  }
  if (doc.contains("pops_path")) {
    const std::string p = as_string(doc["pops_path"], "pops_path");
    if (p != "subtraction" && p != "direct")
      throw ConfigError("pops_path", "expected subtraction or direct");
    cfg.pops_path = p == "direct" ? PopsPath::direct : PopsPath::subtraction;
    mark("pops_path");
  }
  if (doc.contains("selective_phase")) {
    cfg.selective_phase = as_number(doc["selective_phase"], "selective_phase");
    mark("selective_phase");
  }
  if (doc.contains("zero_order_phase")) {
    cfg.zero_order_phase = as_number(doc["zero_order_phase"], "zero_order_phase");
    mark("zero_order_phase");
  }
  if (doc.contains("acquisition")) {
    SpinSystem acq_sys = cfg.system;
    if (cfg.preset && !cfg.system_given)
      acq_sys = expand_preset(*cfg.preset).front().system;
    cfg.acquisition = acquisition_from_json(doc["acquisition"], "acquisition", acq_sys);
    mark("acquisition");
  }
  if (doc.contains("output")) {
    const json &o = require_object(doc["output"], "output");
    check_keys(o, "output", {"dir", "plots"});
    if (o.contains("dir")) {
      std::filesystem::path d = as_string(o["dir"], "output.dir");
      cfg.output_dir = d.is_relative() ? base_dir / d : d;
      mark("output");
    }
    if (o.contains("plots"))
      cfg.plots = as_bool(o["plots"], "output.plots");
  }
  if (doc.contains("workers")) {
    cfg.workers = as_count(doc["workers"], "workers");
    if (cfg.workers == 0)
      throw ConfigError("workers", "must be at least 1");
    mark("workers");
  }

  // Pre-check every plan so invariant violations surface before any output is written.
  rethrow_at(cfg.preset ? "preset" : "init", [&] { return cfg.plans(); });
  note_defaults(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path &file) {
  if (!std::filesystem::exists(file))
    throw ConfigError("(config)", "file does not exist: " + file.string());
  return parse_config(read_file(file, "(config)"), file.parent_path());
}

std::vector<ExperimentPlan> RunConfig::plans() const {
  std::vector<ExperimentPlan> out;
  if (preset) {
    out = expand_preset(*preset, system_given ? std::optional<SpinSystem>(system) : std::nullopt);
    for (auto &p : out) {
      if (acquisition) {
        p.acquisition = *acquisition;
        p.zero_order_phase = thermal_reference_phase(p.system, p.acquisition);
      }
      if (zero_order_phase)
        p.zero_order_phase = zero_order_phase;
      validate_plan(p);
    }
    return out;
  }
  ExperimentPlan p;
  p.system = system;
  p.init = init;
  p.function = *function;
  p.pulse = pulse;
  p.acquisition = acquisition ? *acquisition : default_acquisition(system);
  p.display = display;
  p.pops_path = pops_path;
  p.selective_phase = selective_phase;
  p.zero_order_phase =
      zero_order_phase ? *zero_order_phase : thermal_reference_phase(system, p.acquisition);
  p.name = "run_" + function->notation();
  validate_plan(p);
  out.push_back(std::move(p));
  return out;
}

void note_defaults(RunConfig &cfg) {
  std::vector<std::string> notes;
  const auto plans = cfg.plans();
  const ExperimentPlan &p = plans.front();
  auto given = [&](const char *k) { return cfg.explicit_fields.count(k) != 0; };

  if (!cfg.system_given) {
    if (p.system.size() == 5)
      notes.push_back("system: built-in 5-spin parameters; the couplings are illustrative "
                      "defaults chosen for resolvable lines, not literature values");
    else
      notes.push_back("system: built-in 3-spin parameters");
  } else if (same_system(p.system, five_spin_system())) {
    notes.push_back("system: 5-spin couplings are illustrative defaults, not literature values");
  }
  if (cfg.preset)
    notes.push_back("preset " + *cfg.preset + ": init " + p.init.notation() + ", pulse " +
                    p.pulse.notation() + ", display " + to_string(p.display));
  if (!given("init") && !cfg.preset)
    notes.push_back("init: thermal");
  if (!given("display") && !cfg.preset)
    notes.push_back("display: phased");
  if (!given("pulse") && !cfg.preset)
    notes.push_back("pulse: ideal transition-selective pi rotations");
  if (p.init.kind == StateKind::pops && !given("pops_path"))
    notes.push_back("pops_path: subtraction of sequence 3 from sequence 2");
  if (!given("selective_phase"))
    notes.push_back("selective pulse phase: 0 rad (x axis)");
  if (!given("acquisition")) {
    const double sw = p.acquisition.spectral_width_hz();
    notes.push_back("acquisition: " + std::to_string(p.acquisition.points) +
                    " points, spectral width " + fmt("%.6g", sw) + " Hz, T2 " +
                    fmt("%.6g", p.acquisition.t2_s * 1e3) + " ms");
  }
  if (!given("zero_order_phase"))
    notes.push_back("zero-order phase: " + fmt("%.6g", *p.zero_order_phase) +
                    " rad, from the no-op thermal spectrum (one value for the whole run)");
  notes.push_back("first FID point halved before the transform");
  if (p.pulse.kind == PulseModelKind::gaussian) {
    notes.push_back("gaussian envelope: truncated at " + fmt("%.6g", p.pulse.truncation) +
                    " of peak at both edges, centred at T/2");
    if (p.pulse.samples == 0)
      notes.push_back("gaussian samples: automatic, max(64, ceil(20 * T * f_max))");
    if (p.pulse.remove_free_precession)
      notes.push_back("shaped-pulse propagators referenced to the pulse start "
                      "(free precession over the pulse removed)");
    notes.push_back("classification thresholds: suppressed < 5%, present >= 10%");
  } else {
    notes.push_back("classification thresholds: suppressed < 1%, present >= 10%");
  }
  if (!given("workers"))
    notes.push_back("workers: 1");
  cfg.defaults_used = std::move(notes);
}

}  // namespace nmrdj
