#include "crossings/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace crossings {

using nlohmann::json;

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::gaussian: return "gaussian";
    case ProcessKind::poisson_ar: return "poisson_ar";
    case ProcessKind::cpp: return "cpp";
    case ProcessKind::kernel: return "kernel";
    case ProcessKind::pdmp: return "pdmp";
  }
  return "unknown";
}

const SpectralModel* Config::model() const {
  const auto* smooth = std::get_if<SmoothPlusJump>(&experiment.process);
  return smooth == nullptr ? nullptr : &smooth->model;
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Reads fields of one JSON object and rejects keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "document" : path_, "expected an object");
  }

  [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError(field(key), "required field is missing");
    return *v;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ConfigError(field(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
    return x;
  }

  double required_number(const std::string& key) {
    (void)require(key);
    return *number(key);
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
    if (v->is_number_float()) {
      const double x = v->get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    throw ConfigError(field(key), "expected a nonnegative integer");
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ConfigError(field(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (seen_.count(key) == 0) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> parse_words(const std::string& text, const std::string& head, std::size_t count,
                                const std::string& field) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  if (word != head) throw ConfigError(field, "expected '" + head + " ...', got '" + text + "'");
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    double x = 0.0;
    if (!(in >> x) || !std::isfinite(x)) throw ConfigError(field, "expected " + std::to_string(count) + " numbers after '" + head + "'");
    out.push_back(x);
  }
  if (in >> word) throw ConfigError(field, "trailing text in '" + text + "'");
  return out;
}

std::vector<SpectralAtom> parse_atoms(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a nonempty list of [weight, frequency] pairs");
  std::vector<SpectralAtom> atoms;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const json& pair = v[k];
    const std::string at = field + "[" + std::to_string(k) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ConfigError(at, "expected [weight, frequency]");
    }
    atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return atoms;
}

InitialLaw parse_initial(const std::string& text, const std::string& field) {
  if (text.rfind("point", 0) == 0) return PointLaw{parse_words(text, "point", 1, field)[0]};
  const auto w = parse_words(text, "normal", 2, field);
  if (!(w[1] > 0.0)) throw ConfigError(field, "normal sd must be > 0");
  return NormalLaw{w[0], w[1]};
}

double expected_variance(ProcessKind kind, const std::string& kernel) {
  if (kind == ProcessKind::poisson_ar || (kind == ProcessKind::kernel && kernel == "poisson_ar")) return 0.5;
  if (kind == ProcessKind::cpp || (kind == ProcessKind::kernel && kernel == "cpp")) return 1.0;
  return std::nan("");
}

json parse_document(std::string_view text) {
  std::vector<std::set<std::string>> keys;
  std::optional<std::string> duplicate;
  const json::parser_callback_t check = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start: keys.emplace_back(); break;
      case json::parse_event_t::object_end:
        if (!keys.empty()) keys.pop_back();
        break;
      case json::parse_event_t::key:
        if (!keys.empty() && !keys.back().insert(parsed.get<std::string>()).second && !duplicate) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default: break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), check);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte)), std::string("malformed JSON: ") + e.what());
  }
  if (duplicate) {
    // Locate the second occurrence of the key for the diagnostic.
    const std::string needle = "\"" + *duplicate + "\"";
    const std::size_t first = text.find(needle);
    const std::size_t second = first == std::string_view::npos ? first : text.find(needle, first + needle.size());
    const std::string where = second == std::string_view::npos ? "" : " (line " + std::to_string(line_of(text, second)) + ")";
    throw ConfigError(*duplicate, "duplicate key" + where);
  }
  return doc;
}

}  // namespace

Config parse_config(std::string_view text) {
  const json doc = parse_document(text);
  ObjectReader top(doc, "");

  const std::string name = top.string("name").value_or("experiment");
  const double horizon = top.number("T").value_or(1.0);
  if (!(horizon > 0.0)) throw ConfigError("T", "must be > 0");
  const double step = top.number("h").value_or(1e-3 * horizon);
  if (!(step > 0.0)) throw ConfigError("h", "must be > 0");
  const std::size_t reps = top.unsigned_integer("reps").value_or(100000);
  if (reps < 100) throw ConfigError("reps", "must be >= 100");
  const std::uint64_t seed = top.unsigned_integer("seed").value_or(0);
  const std::string output = top.string("output").value_or("out");
  const double series_tol = top.number("tol").value_or(1e-10);
  if (!(series_tol > 0.0 && series_tol <= 1e-6)) throw ConfigError("tol", "must lie in (0, 1e-6]");
  const double delta = top.number("delta").value_or(0.01);
  if (!(delta > 0.0)) throw ConfigError("delta", "must be > 0");

  const json& levels_json = top.require("levels");
  if (!levels_json.is_array() || levels_json.empty()) throw ConfigError("levels", "expected a nonempty list of numbers");
  std::vector<double> levels;
  for (std::size_t k = 0; k < levels_json.size(); ++k) {
    const std::string at = "levels[" + std::to_string(k) + "]";
    if (!levels_json[k].is_number()) throw ConfigError(at, "expected a number");
    const double u = levels_json[k].get<double>();
    if (!std::isfinite(u) || std::abs(u) > 5.0) throw ConfigError(at, "levels must be finite with |u| <= 5");
    levels.push_back(u);
  }

  Quadrature quad;
  if (const json* q = top.find("quadrature")) {
    ObjectReader qr(*q, "quadrature");
    quad.abs_tol = qr.number("abs_tol").value_or(quad.abs_tol);
    quad.rel_tol = qr.number("rel_tol").value_or(series_tol);
    quad.max_depth = static_cast<int>(qr.unsigned_integer("max_depth").value_or(static_cast<std::uint64_t>(quad.max_depth)));
    quad.half_width = qr.number("half_width").value_or(quad.half_width);
    qr.finish();
    try {
      quad.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("quadrature", e.what());
    }
  } else {
    quad.rel_tol = series_tol;
  }

  ObjectReader proc(top.require("process"), "process");
  const std::string kind_name = proc.string("kind").value_or("");
  ProcessKind kind;
  if (kind_name == "gaussian") {
    kind = ProcessKind::gaussian;
  } else if (kind_name == "poisson_ar") {
    kind = ProcessKind::poisson_ar;
  } else if (kind_name == "cpp") {
    kind = ProcessKind::cpp;
  } else if (kind_name == "kernel") {
    kind = ProcessKind::kernel;
  } else if (kind_name == "pdmp") {
    kind = ProcessKind::pdmp;
  } else {
    throw ConfigError("process.kind", "expected one of gaussian, poisson_ar, cpp, kernel, pdmp");
  }

  std::string kernel;
  std::optional<LinearDrift> drift;
  std::optional<ProcessSpec> process;

  auto read_lambda = [&](bool required) {
    const std::optional<double> l = required ? std::optional<double>(proc.required_number("lambda")) : proc.number("lambda");
    const double lambda = l.value_or(0.0);
    if (!(lambda >= 0.0)) throw ConfigError("process.lambda", "must be >= 0");
    return lambda;
  };
  auto read_rho = [&] {
    const double rho = proc.required_number("rho");
    if (!(std::abs(rho) < 1.0)) throw ConfigError("process.rho", "must satisfy |rho| < 1");
    return rho;
  };

  if (kind == ProcessKind::pdmp) {
    PdmpSpec spec;
    const std::string mu = proc.string("mu").value_or("");
    const auto ab = parse_words(mu, "linear", 2, "process.mu");
    drift = LinearDrift{ab[0], ab[1]};
    spec.drift = *drift;
    spec.lambda = read_lambda(true);
    const std::string mark = proc.string("mark").value_or("normal 0 1");
    const auto m = parse_words(mark, "normal", 2, "process.mark");
    if (!(m[1] >= 0.0)) throw ConfigError("process.mark", "normal sd must be >= 0");
    spec.mark = PdmpSpec::normal_mark(m[0], m[1]);
    spec.initial = parse_initial(proc.string("x0").value_or("normal 0 1"), "process.x0");
    spec.ode_step = proc.number("h_ode").value_or(step);
    if (!(spec.ode_step > 0.0)) throw ConfigError("process.h_ode", "must be > 0");
    spec.horizon = horizon;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("process", e.what());
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if ((*drift)(levels[k]) == 0.0) {
        throw ConfigError("levels[" + std::to_string(k) + "]", "level is a zero of the drift; crossing formula does not apply");
      }
    }
    process = spec;
  } else {
    const auto atoms = parse_atoms(proc.require("atoms"), "process.atoms");
    JumpSpec jumps = NoJumps{};
    if (kind == ProcessKind::poisson_ar) {
      const double lambda = read_lambda(true);
      jumps = PoissonArJumps{lambda, read_rho()};
    } else if (kind == ProcessKind::cpp) {
      jumps = CppJumps{read_lambda(true)};
    } else if (kind == ProcessKind::kernel) {
      kernel = proc.string("kernel").value_or("");
      if (kernel == "cpp") {
        jumps = KernelJumps{kernel, read_lambda(true), 0.0};
        if (!(std::get<KernelJumps>(jumps).lambda > 0.0)) throw ConfigError("process.lambda", "must be > 0 for a kernel");
      } else if (kernel == "poisson_ar") {
        const double lambda = read_lambda(true);
        if (!(lambda > 0.0)) throw ConfigError("process.lambda", "must be > 0 for a kernel");
        jumps = KernelJumps{kernel, lambda, read_rho()};
      } else if (kernel == "frozen") {
        jumps = KernelJumps{kernel, 0.0, 0.0};
      } else {
        throw ConfigError("process.kernel", "expected one of cpp, poisson_ar, frozen");
      }
    }
    const double target = expected_variance(kind, kernel);
    try {
      SpectralModel model(atoms, std::isnan(target) ? std::nullopt : std::optional<double>(target));
      process = SmoothPlusJump{std::move(model), jumps};
    } catch (const std::invalid_argument& e) {
      throw ConfigError("process.atoms", e.what());
    }
  }
  proc.finish();
  top.finish();

  Config cfg{name,
             kind,
             kernel,
             ExperimentSpec{std::move(*process), levels, horizon, step, reps, seed, 0},
             drift,
             output,
             quad,
             series_tol,
             delta};
  try {
    cfg.experiment.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace crossings
