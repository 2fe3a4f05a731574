#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adaprox/numkit/format.hpp"
#include "adaprox/numkit/types.hpp"

namespace adaprox {

/// One experiment, flat enough to live in a key = value file.
struct ExperimentSpec {
  // problem: lasso | logistic | cubic | dual_svm | medreg
  std::string problem = "lasso";
  // adapgm | adapgm_mm | pi | mm23 | pgm | pgm_ls | fista (composite problems)
  // adapdm | adapdm_plus | pdhg_cv (primal-dual problems)
  std::string algorithm = "adapgm";

  // LIBSVM file; empty means synthetic data from `seed`
  std::string data;
  std::uint64_t seed = 0;
  Index samples = 100;
  Index features = 50;
  double density = 0.2;
  double label_noise = 0.05;

  Index lasso_m = 25;
  Index lasso_n = 50;
  Index lasso_nstar = 10;
  double lasso_rho = 1.0;

  double lambda = 0.01;  // logistic and medreg
  double cubic_m = 1.0;
  double svm_c = 1.0;
  int p = 1;  // medreg norm, 1 or 2
  bool bias = false;

  double pi = 1.0;
  double gamma = 0.0;  // 0: automatic
  std::optional<double> gamma_max;
  double backtrack_r = 1.0;

  double t = 1.0;
  double epsilon = 1e-6;
  double nu = 1.2;
  double pd_r = 2.0;
  double shrink = 0.95;
  std::string eta_guess = "shrink";  // shrink | observed_ratio
  std::optional<double> eta0;

  double tol = 1e-8;
  std::size_t max_iters = 100000;
  bool relative = true;

  std::optional<double> phi_star;

  bool operator==(const ExperimentSpec&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct SpecKey {
  const char* name;
  const char* help;
  std::function<std::string(const ExperimentSpec&)> get;
  std::function<bool(ExperimentSpec&, std::string_view)> set;  // false on bad value
};

template <class T>
SpecKey number_key(const char* name, const char* help, T ExperimentSpec::*field) {
  return {name, help,
          [field](const ExperimentSpec& s) {
            if constexpr (std::is_floating_point_v<T>) return format_double(s.*field);
            else return std::to_string(s.*field);
          },
          [field](ExperimentSpec& s, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              const auto d = parse_double(v);
              if (!d) return false;
              s.*field = *d;
            } else {
              const auto i = parse_int<T>(v);
              if (!i) return false;
              s.*field = *i;
            }
            return true;
          }};
}

inline SpecKey optional_key(const char* name, const char* help,
                            std::optional<double> ExperimentSpec::*field) {
  return {name, help,
          [field](const ExperimentSpec& s) {
            return (s.*field) ? format_double(*(s.*field)) : std::string();
          },
          [field](ExperimentSpec& s, std::string_view v) {
            if (v.empty()) {
              s.*field = std::nullopt;
              return true;
            }
            const auto d = parse_double(v);
            if (!d) return false;
            s.*field = *d;
            return true;
          }};
}

inline SpecKey string_key(const char* name, const char* help, std::string ExperimentSpec::*field,
                          std::vector<std::string> allowed = {}) {
  return {name, help, [field](const ExperimentSpec& s) { return s.*field; },
          [field, allowed](ExperimentSpec& s, std::string_view v) {
            if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
              return false;
            }
            s.*field = std::string(v);
            return true;
          }};
}

inline SpecKey bool_key(const char* name, const char* help, bool ExperimentSpec::*field) {
  return {name, help, [field](const ExperimentSpec& s) { return std::string(s.*field ? "true" : "false"); },
          [field](ExperimentSpec& s, std::string_view v) {
            if (v == "true" || v == "1") s.*field = true;
            else if (v == "false" || v == "0") s.*field = false;
            else return false;
            return true;
          }};
}

}  // namespace detail

inline const std::vector<std::string>& pg_algorithms() {
  static const std::vector<std::string> v{"adapgm", "adapgm_mm", "pi", "mm23",
                                          "pgm", "pgm_ls", "fista"};
  return v;
}
inline const std::vector<std::string>& pd_algorithms() {
  static const std::vector<std::string> v{"adapdm", "adapdm_plus", "pdhg_cv"};
  return v;
}

/// Every config key in file order.
inline const std::vector<detail::SpecKey>& spec_keys() {
  using detail::bool_key;
  using detail::number_key;
  using detail::optional_key;
  using detail::string_key;
  using S = ExperimentSpec;
  static const std::vector<detail::SpecKey> keys = [] {
    std::vector<std::string> algos = pg_algorithms();
    algos.insert(algos.end(), pd_algorithms().begin(), pd_algorithms().end());
    return std::vector<detail::SpecKey>{
        string_key("problem", "lasso | logistic | cubic | dual_svm | medreg", &S::problem,
                   {"lasso", "logistic", "cubic", "dual_svm", "medreg"}),
        string_key("algorithm", "solver name", &S::algorithm, algos),
        string_key("data", "LIBSVM file (empty: synthetic)", &S::data),
        number_key("seed", "generator seed", &S::seed),
        number_key("samples", "synthetic rows", &S::samples),
        number_key("features", "synthetic columns", &S::features),
        number_key("density", "synthetic classification density", &S::density),
        number_key("label_noise", "fraction of flipped labels", &S::label_noise),
        number_key("lasso_m", "lasso rows", &S::lasso_m),
        number_key("lasso_n", "lasso columns", &S::lasso_n),
        number_key("lasso_nstar", "lasso support size", &S::lasso_nstar),
        number_key("lasso_rho", "lasso solution magnitude", &S::lasso_rho),
        number_key("lambda", "l1 weight (logistic, medreg)", &S::lambda),
        number_key("cubic_m", "cubic weight M", &S::cubic_m),
        number_key("svm_c", "SVM box bound C", &S::svm_c),
        number_key("p", "medreg norm (1 or 2)", &S::p),
        bool_key("bias", "append a constant feature (logistic)", &S::bias),
        number_key("pi", "pi-rule parameter", &S::pi),
        number_key("gamma", "stepsize; 0 picks one automatically", &S::gamma),
        optional_key("gamma_max", "stepsize cap for the adaptive rules", &S::gamma_max),
        number_key("backtrack_r", "backtracking warm-start factor", &S::backtrack_r),
        number_key("t", "primal-dual ratio", &S::t),
        number_key("epsilon", "primal-dual epsilon", &S::epsilon),
        number_key("nu", "primal-dual nu", &S::nu),
        number_key("pd_r", "norm linesearch growth", &S::pd_r),
        number_key("shrink", "norm linesearch first trial factor", &S::shrink),
        string_key("eta_guess", "shrink | observed_ratio", &S::eta_guess,
                   {"shrink", "observed_ratio"}),
        optional_key("eta0", "initial norm estimate (empty: Frobenius)", &S::eta0),
        number_key("tol", "residual tolerance", &S::tol),
        number_key("max_iters", "iteration cap", &S::max_iters),
        bool_key("relative", "scale tol by 1 + first residual", &S::relative),
        optional_key("phi_star", "known optimal value for cost_gap", &S::phi_star),
    };
  }();
  return keys;
}

/// Sets one key from its text form.
inline void set_spec_value(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  for (const auto& k : spec_keys()) {
    if (key != k.name) continue;
    if (!k.set(spec, value)) {
      throw ConfigError("bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    }
    return;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

inline void write_spec(std::ostream& out, const ExperimentSpec& spec) {
  for (const auto& k : spec_keys()) out << k.name << " = " << k.get(spec) << '\n';
}

inline std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  write_spec(out, spec);
  return out.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Reads `key = value` lines; `#` starts a comment. Keys not present keep
/// their defaults; repeating a key is an error.
inline ExperimentSpec read_spec(std::istream& in, const std::string& origin = "<config>") {
  ExperimentSpec spec;
  std::vector<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    const auto where = origin + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(detail::trim(v.substr(0, eq)));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    seen.push_back(key);
    try {
      set_spec_value(spec, key, detail::trim(v.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return spec;
}

inline ExperimentSpec parse_spec(const std::string& text) {
  std::istringstream in(text);
  return read_spec(in);
}

inline ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  return read_spec(in, path);
}

inline void save_config(const std::string& path, const ExperimentSpec& spec) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path + ": cannot write");
  write_spec(out, spec);
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace adaprox
