// Command-line front end: validate, classify, roots, solve, simulate, report.
// Exit codes: 0 success, 1 a validation found violations, 2 usage or input
// errors. All output is deterministic; --json output is byte-stable across
// runs for identical inputs.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json_writer.hpp"
#include "tpt/analytic.hpp"
#include "tpt/io.hpp"
#include "tpt/numerics.hpp"
#include "tpt/simulate.hpp"
#include "tpt/solvers.hpp"
#include "tpt/tensor.hpp"

namespace {

using tpt::format_double;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view token(text.data() + pos,
                           (comma == std::string::npos ? text.size() : comma) - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw UsageError("expected a comma-separated list of numbers, got '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw UsageError("expected integers, got '" + text + "'");
    }
    out.push_back(i);
  }
  return out;
}

std::variant<tpt::TransitionTensor, tpt::SymmetricFamily2> load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return tpt::read_input(in);
}

// Input resolution shared by the subcommands that accept either --m/--a or
// --file. Tensors that are exact members of the symmetric family are routed
// through the family evaluators.
struct Source {
  std::optional<tpt::SymmetricFamily2> family;
  std::optional<tpt::TransitionTensor> tensor;
};

Source resolve_source(int m, double a, bool have_params, const std::string& file) {
  if (have_params == !file.empty()) {
    throw UsageError("give either --m and --a, or --file");
  }
  Source src;
  if (have_params) {
    src.family = tpt::SymmetricFamily2(m, a);
    return src;
  }
  auto input = load_input(file);
  if (std::holds_alternative<tpt::SymmetricFamily2>(input)) {
    src.family = std::get<tpt::SymmetricFamily2>(input);
    return src;
  }
  auto& tensor = std::get<tpt::TransitionTensor>(input);
  if (auto fam = tpt::detect_symmetric_family(tensor)) {
    src.family = fam;
  } else {
    src.tensor = std::move(tensor);
  }
  return src;
}

std::string vector2_text(double x) {
  return "(" + format_double(x) + ", " + format_double(1.0 - x) + ")";
}

const char* bracket_kind_name(tpt::Bracket::Kind kind) {
  switch (kind) {
    case tpt::Bracket::Kind::kSignChange: return "sign_change";
    case tpt::Bracket::Kind::kEndpoint: return "endpoint";
    case tpt::Bracket::Kind::kTangential: return "tangential";
  }
  return "unknown";
}

void write_coords(JsonWriter& json, std::span<const double> coords) {
  json.begin_array();
  for (double c : coords) json.value(c);
  json.end_array();
}

void write_classification(JsonWriter& json, const tpt::ClassificationReport& report) {
  json.key("order").value(report.order);
  json.key("a").value(report.a);
  json.key("b").value(report.b);
  json.key("spread").value(report.spread);
  json.key("case").value(std::string_view(tpt::to_string(report.family_case)));
  json.key("contraction_bound").value(report.contraction_bound);
  json.key("critical_points");
  json.begin_array();
  for (double x : report.critical_points) json.value(x);
  json.end_array();
  json.key("stationary");
  json.begin_array();
  for (const auto& p : report.stationary) {
    json.begin_object();
    json.key("coords");
    write_coords(json, p.coords);
    json.key("residual").value(p.residual);
    json.end_object();
  }
  json.end_array();
  json.key("irreducible").value(report.irreducible);
  json.key("reducible_witness");
  if (report.reducible_witness) {
    json.begin_array();
    for (int s : *report.reducible_witness) json.value(s);
    json.end_array();
  } else {
    json.null();
  }
  json.key("claimed_set");
  json.begin_array();
  for (const auto& v : report.claimed_set) {
    json.begin_array();
    json.value(v[0]).value(v[1]);
    json.end_array();
  }
  json.end_array();
  json.key("discrepancy_flags");
  json.begin_array();
  for (const auto& flag : report.discrepancy_flags) json.value(std::string_view(flag));
  json.end_array();
  json.key("claimed_constant_gap").value(report.claimed_constant_gap);
}

void print_classification(std::ostream& out, const tpt::ClassificationReport& report) {
  out << "order " << report.order << ", a = " << format_double(report.a)
      << ", b = " << format_double(report.b) << ", spread = " << format_double(report.spread)
      << "\n";
  out << "case " << tpt::to_string(report.family_case) << ", contraction bound "
      << format_double(report.contraction_bound) << "\n";
  out << "critical points:";
  if (report.critical_points.empty()) out << " none";
  for (double x : report.critical_points) out << " " << format_double(x);
  out << "\n";
  out << "stationary vectors (" << report.stationary.size() << "):\n";
  for (const auto& p : report.stationary) {
    out << "  " << vector2_text(p.coords[0]) << "  defect " << format_double(p.residual) << "\n";
  }
  if (report.reducible_witness) {
    out << "reducible, witness {";
    for (std::size_t i = 0; i < report.reducible_witness->size(); ++i) {
      if (i) out << ",";
      out << (*report.reducible_witness)[i];
    }
    out << "}\n";
  } else {
    out << "irreducible\n";
  }
  out << "claimed set:";
  for (const auto& v : report.claimed_set) {
    out << " (" << format_double(v[0]) << ", " << format_double(v[1]) << ")";
  }
  out << "\n";
  if (report.discrepancy_flags.empty()) {
    out << "claimed set agrees with the enumeration\n";
  } else {
    out << "discrepancies (" << report.discrepancy_flags.size() << "):\n";
    for (const auto& flag : report.discrepancy_flags) out << "  " << flag << "\n";
  }
  out << "claimed-constant gap: " << format_double(report.claimed_constant_gap) << "\n";
}

void write_iteration(JsonWriter& json, const tpt::IterationResult& result, bool with_history) {
  json.key("converged").value(result.converged);
  json.key("iterations").value(static_cast<std::uint64_t>(result.iterations));
  json.key("coords");
  write_coords(json, result.iterate.coords);
  json.key("residual").value(result.iterate.residual);
  json.key("rate_estimate").value(result.rate_estimate);
  if (with_history) {
    json.key("residual_history");
    json.begin_array();
    for (double d : result.residual_history) json.value(d);
    json.end_array();
  }
}

void write_lifted(JsonWriter& json, const tpt::LiftedStationary& lifted, std::size_t states) {
  json.key("window_states").value(static_cast<std::uint64_t>(states));
  json.key("marginal");
  write_coords(json, lifted.marginal);
  json.key("iterations").value(static_cast<std::uint64_t>(lifted.iterations));
  json.key("converged").value(lifted.converged);
  json.key("ergodic").value(lifted.ergodic);
}

void write_empirical(JsonWriter& json, const tpt::EmpiricalDistribution& empirical) {
  json.key("counts");
  json.begin_array();
  for (std::uint64_t c : empirical.counts) json.value(c);
  json.end_array();
  json.key("total").value(empirical.total);
  json.key("probabilities");
  write_coords(json, empirical.probabilities());
}

// -------------------------------------------------------------------------
// validate

int run_validate(const std::string& file, double tol, bool as_json) {
  auto input = load_input(file);
  tpt::TransitionTensor tensor =
      std::holds_alternative<tpt::TransitionTensor>(input)
          ? std::move(std::get<tpt::TransitionTensor>(input))
          : std::get<tpt::SymmetricFamily2>(input).materialize();
  tpt::ValidationReport report = tpt::validate(tensor, tol);
  if (as_json) {
    JsonWriter json;
    json.begin_object();
    json.key("order").value(tensor.order());
    json.key("dim").value(tensor.dim());
    json.key("valid").value(report.valid);
    json.key("max_column_defect").value(report.max_column_defect);
    json.key("violations");
    json.begin_array();
    for (const auto& v : report.violations) json.value(std::string_view(v));
    json.end_array();
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    if (report.valid) {
      std::cout << "valid: order " << tensor.order() << " dim " << tensor.dim()
                << ", max column defect " << format_double(report.max_column_defect) << "\n";
    } else {
      std::cout << "invalid: " << report.violations.size() << " violation(s)\n";
      for (const auto& v : report.violations) std::cout << "  " << v << "\n";
    }
  }
  return report.valid ? 0 : 1;
}

// -------------------------------------------------------------------------
// classify

int run_classify(const Source& src, bool as_json) {
  if (src.family) {
    tpt::ClassificationReport report = tpt::classify(*src.family);
    if (as_json) {
      JsonWriter json;
      json.begin_object();
      json.key("mode").value(std::string_view("family"));
      write_classification(json, report);
      json.end_object();
      std::cout << json.str() << "\n";
    } else {
      print_classification(std::cout, report);
    }
    return 0;
  }

  // General tensor: no closed-form enumeration, report the computable parts.
  const tpt::TransitionTensor& tensor = *src.tensor;
  tpt::ValidationReport validation = tpt::validate(tensor);
  auto witness = tpt::reducibility_witness(tensor);
  std::vector<double> x0(static_cast<std::size_t>(tensor.dim()),
                         1.0 / static_cast<double>(tensor.dim()));
  tpt::IterationResult fixed = tpt::fixed_point_iterate(tensor, x0);
  std::optional<tpt::LiftedStationary> lifted;
  std::size_t states = 0;
  try {
    tpt::LiftedChain chain(tensor);
    states = chain.state_count();
    lifted = tpt::matrix_stationary(chain);
  } catch (const std::invalid_argument&) {
    // window space above the cap; leave the lifted section out
  }
  const char* notice =
      "general tensor: stationary vectors are reported from iteration, not enumeration; "
      "uniqueness is not decided";
  if (as_json) {
    JsonWriter json;
    json.begin_object();
    json.key("mode").value(std::string_view("general"));
    json.key("order").value(tensor.order());
    json.key("dim").value(tensor.dim());
    json.key("valid").value(validation.valid);
    json.key("irreducible").value(!witness.has_value());
    json.key("reducible_witness");
    if (witness) {
      json.begin_array();
      for (int s : *witness) json.value(s);
      json.end_array();
    } else {
      json.null();
    }
    json.key("fixed_point");
    json.begin_object();
    write_iteration(json, fixed, false);
    json.end_object();
    json.key("lifted");
    if (lifted) {
      json.begin_object();
      write_lifted(json, *lifted, states);
      json.end_object();
    } else {
      json.null();
    }
    json.key("notice").value(std::string_view(notice));
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    std::cout << "general tensor: order " << tensor.order() << " dim " << tensor.dim()
              << (validation.valid ? ", valid" : ", INVALID") << "\n";
    if (witness) {
      std::cout << "reducible, witness {";
      for (std::size_t i = 0; i < witness->size(); ++i) {
        if (i) std::cout << ",";
        std::cout << (*witness)[i];
      }
      std::cout << "}\n";
    } else {
      std::cout << "irreducible\n";
    }
    std::cout << "fixed point from uniform: (";
    for (std::size_t i = 0; i < fixed.iterate.coords.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << format_double(fixed.iterate.coords[i]);
    }
    std::cout << ") residual " << format_double(fixed.iterate.residual) << " after "
              << fixed.iterations << " iterations\n";
    if (lifted) {
      std::cout << "window-chain marginal: (";
      for (std::size_t i = 0; i < lifted->marginal.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << format_double(lifted->marginal[i]);
      }
      std::cout << ")" << (lifted->ergodic ? ", ergodic" : ", ergodicity unknown") << "\n";
    }
    std::cout << notice << "\n";
  }
  return 0;
}

// -------------------------------------------------------------------------
// roots

int run_roots(int m, double a, std::size_t grid, double tol, bool as_json) {
  tpt::SymmetricFamily2 family(m, a);
  auto defect = [&family](double x) { return tpt::stationary_defect(family, x); };
  tpt::RootSet roots = tpt::root_scan(defect, grid, tol);
  if (as_json) {
    JsonWriter json;
    json.begin_object();
    json.key("order").value(m);
    json.key("a").value(a);
    json.key("grid_points").value(static_cast<std::uint64_t>(grid));
    json.key("tol").value(tol);
    json.key("roots");
    json.begin_array();
    for (std::size_t i = 0; i < roots.roots.size(); ++i) {
      json.begin_object();
      json.key("x").value(roots.roots[i]);
      json.key("defect").value(std::abs(defect(roots.roots[i])));
      json.key("bracket");
      json.begin_object();
      json.key("lo").value(roots.brackets[i].lo);
      json.key("hi").value(roots.brackets[i].hi);
      json.key("kind").value(std::string_view(bracket_kind_name(roots.brackets[i].kind)));
      json.end_object();
      json.end_object();
    }
    json.end_array();
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    std::cout << roots.roots.size() << " root(s) of the stationarity defect on [0,1]\n";
    for (std::size_t i = 0; i < roots.roots.size(); ++i) {
      std::cout << "  x = " << format_double(roots.roots[i]) << "  |defect| = "
                << format_double(std::abs(defect(roots.roots[i]))) << "  ["
                << bracket_kind_name(roots.brackets[i].kind) << "]\n";
    }
  }
  return 0;
}

// -------------------------------------------------------------------------
// solve

int run_solve(const Source& src, const std::string& x0_text, const tpt::FixedPointOptions& opts,
              bool as_json) {
  std::size_t dim = src.family ? 2 : static_cast<std::size_t>(src.tensor->dim());
  std::vector<double> x0;
  if (x0_text.empty()) {
    x0.assign(dim, 1.0 / static_cast<double>(dim));
  } else {
    x0 = parse_double_list(x0_text);
    if (x0.size() != dim) {
      throw UsageError("--x0 needs " + std::to_string(dim) + " entries");
    }
  }
  tpt::IterationResult result = src.family ? tpt::fixed_point_iterate(*src.family, x0, opts)
                                           : tpt::fixed_point_iterate(*src.tensor, x0, opts);
  if (as_json) {
    JsonWriter json;
    json.begin_object();
    if (src.family) {
      json.key("order").value(src.family->order());
      json.key("a").value(src.family->a());
    } else {
      json.key("order").value(src.tensor->order());
      json.key("dim").value(src.tensor->dim());
    }
    json.key("x0");
    write_coords(json, x0);
    json.key("tol").value(opts.tol);
    json.key("max_iterations").value(static_cast<std::uint64_t>(opts.max_iterations));
    json.key("damping").value(opts.damping);
    write_iteration(json, result, true);
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    std::cout << (result.converged ? "converged" : "did not converge") << " after "
              << result.iterations << " iteration(s)\n";
    std::cout << "iterate: (";
    for (std::size_t i = 0; i < result.iterate.coords.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << format_double(result.iterate.coords[i]);
    }
    std::cout << ")\n";
    std::cout << "residual: " << format_double(result.iterate.residual) << "\n";
    std::cout << "rate estimate: " << format_double(result.rate_estimate) << "\n";
  }
  return 0;
}

// -------------------------------------------------------------------------
// simulate

int run_simulate(const Source& src, std::uint64_t steps, std::uint64_t seed,
                 std::optional<std::uint64_t> burn_in, const std::string& window_text,
                 const std::string& trace_path, bool as_json) {
  int order = src.family ? src.family->order() : src.tensor->order();
  int dim = src.family ? 2 : src.tensor->dim();
  std::vector<int> window;
  if (window_text.empty()) {
    window.assign(static_cast<std::size_t>(order - 1), 1);
  } else {
    window = parse_int_list(window_text);
  }
  tpt::ChainTrace trace = src.family ? tpt::sample_chain(*src.family, window, steps, seed)
                                     : tpt::sample_chain(*src.tensor, window, steps, seed);
  std::uint64_t burn = burn_in.value_or(steps / 10);
  tpt::EmpiricalDistribution empirical = tpt::empirical_distribution(trace, burn);

  if (!trace_path.empty()) {
    if (!src.family) {
      throw UsageError("trace export is defined for symmetric family inputs only");
    }
    std::ofstream out(trace_path);
    if (!out) throw UsageError("cannot write '" + trace_path + "'");
    tpt::write_trace(out, trace, src.family->a());
  }

  if (as_json) {
    JsonWriter json;
    json.begin_object();
    json.key("order").value(order);
    if (src.family) {
      json.key("a").value(src.family->a());
    } else {
      json.key("dim").value(dim);
    }
    json.key("steps").value(steps);
    json.key("seed").value(seed);
    json.key("burn_in").value(burn);
    json.key("initial_window");
    json.begin_array();
    for (int s : window) json.value(s);
    json.end_array();
    write_empirical(json, empirical);
    json.key("trace_file");
    if (trace_path.empty()) {
      json.null();
    } else {
      json.value(std::string_view(trace_path));
    }
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    std::cout << "sampled " << steps << " step(s), seed " << seed << ", burn-in " << burn << "\n";
    std::cout << "state counts:";
    for (std::size_t s = 0; s < empirical.counts.size(); ++s) {
      std::cout << " " << (s + 1) << ":" << empirical.counts[s];
    }
    std::cout << "\nempirical distribution: (";
    auto probs = empirical.probabilities();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << format_double(probs[i]);
    }
    std::cout << ")\n";
    if (!trace_path.empty()) std::cout << "trace written to " << trace_path << "\n";
  }
  return 0;
}

// -------------------------------------------------------------------------
// report

int run_report(int m, double a, const tpt::CompareOptions& opts, bool as_json) {
  tpt::SymmetricFamily2 family(m, a);
  tpt::ComparisonReport report = tpt::compare_report(family, opts);
  if (as_json) {
    JsonWriter json;
    json.begin_object();
    json.key("classification");
    json.begin_object();
    write_classification(json, report.classification);
    json.end_object();
    json.key("fixed_point");
    json.begin_object();
    write_iteration(json, report.fixed_point, false);
    json.end_object();
    json.key("lifted");
    if (report.lifted) {
      json.begin_object();
      write_lifted(json, *report.lifted, std::size_t{1} << (m - 1));
      json.end_object();
    } else {
      json.null();
    }
    json.key("empirical");
    json.begin_object();
    write_empirical(json, report.empirical);
    json.end_object();
    json.key("steps").value(report.steps);
    json.key("seed").value(report.seed);
    json.key("burn_in").value(report.burn_in);
    json.key("initial_window");
    json.begin_array();
    for (int s : report.initial_window) json.value(s);
    json.end_array();
    json.key("deviations");
    json.begin_object();
    json.key("fixed_vs_empirical").value(report.fixed_vs_empirical);
    json.key("fixed_vs_lifted");
    report.fixed_vs_lifted ? json.value(*report.fixed_vs_lifted) : json.null();
    json.key("lifted_vs_empirical");
    report.lifted_vs_empirical ? json.value(*report.lifted_vs_empirical) : json.null();
    json.key("fixed_to_stationary").value(report.fixed_to_stationary);
    json.key("lifted_to_stationary");
    report.lifted_to_stationary ? json.value(*report.lifted_to_stationary) : json.null();
    json.key("empirical_to_stationary").value(report.empirical_to_stationary);
    json.end_object();
    json.end_object();
    std::cout << json.str() << "\n";
  } else {
    print_classification(std::cout, report.classification);
    std::cout << "\nfixed point from uniform: " << vector2_text(report.fixed_point.iterate.coords[0])
              << (report.fixed_point.converged ? " (converged in " : " (stopped after ")
              << report.fixed_point.iterations << " iterations)\n";
    if (report.lifted) {
      std::cout << "window-chain marginal: (" << format_double(report.lifted->marginal[0]) << ", "
                << format_double(report.lifted->marginal[1]) << ")"
                << (report.lifted->ergodic ? ", ergodic" : ", ergodicity unknown") << "\n";
    } else {
      std::cout << "window-chain marginal: skipped (window space too large)\n";
    }
    auto probs = report.empirical.probabilities();
    std::cout << "empirical (" << report.empirical.total << " draws, seed " << report.seed
              << "): (" << format_double(probs[0]) << ", " << format_double(probs[1]) << ")\n";
    std::cout << "\ndeviations (max norm):\n";
    std::cout << "  fixed point vs empirical:  " << format_double(report.fixed_vs_empirical) << "\n";
    if (report.fixed_vs_lifted) {
      std::cout << "  fixed point vs marginal:   " << format_double(*report.fixed_vs_lifted) << "\n";
    }
    if (report.lifted_vs_empirical) {
      std::cout << "  marginal vs empirical:     " << format_double(*report.lifted_vs_empirical)
                << "\n";
    }
    std::cout << "  fixed point to stationary: " << format_double(report.fixed_to_stationary)
              << "\n";
    if (report.lifted_to_stationary) {
      std::cout << "  marginal to stationary:    " << format_double(*report.lifted_to_stationary)
                << "\n";
    }
    std::cout << "  empirical to stationary:   " << format_double(report.empirical_to_stationary)
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary vectors of higher-order transition probability tensors"};
  app.require_subcommand(1);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check stochasticity of a tensor file");
  std::string validate_file;
  double validate_tol = 1e-12;
  bool validate_json = false;
  validate_cmd->add_option("--file", validate_file, "TPT1 or SYM2 input")->required();
  validate_cmd->add_option("--tol", validate_tol, "column-sum tolerance");
  validate_cmd->add_flag("--json", validate_json, "emit JSON");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "enumerate stationary vectors analytically");
  int classify_m = 0;
  double classify_a = -1.0;
  std::string classify_file;
  bool classify_json = false;
  auto* classify_m_opt = classify_cmd->add_option("--m", classify_m, "family order (>= 3)");
  auto* classify_a_opt = classify_cmd->add_option("--a", classify_a, "family parameter in [0,1]");
  classify_cmd->add_option("--file", classify_file, "TPT1 or SYM2 input");
  classify_cmd->add_flag("--json", classify_json, "emit JSON");

  // roots
  auto* roots_cmd = app.add_subcommand("roots", "scan the stationarity defect for roots");
  int roots_m = 0;
  double roots_a = -1.0;
  std::size_t roots_grid = 100001;
  double roots_tol = 1e-12;
  bool roots_json = false;
  roots_cmd->add_option("--m", roots_m, "family order (>= 3)")->required();
  roots_cmd->add_option("--a", roots_a, "family parameter in [0,1]")->required();
  roots_cmd->add_option("--grid", roots_grid, "grid points (>= 1001)");
  roots_cmd->add_option("--tol", roots_tol, "acceptance tolerance on |defect|");
  roots_cmd->add_flag("--json", roots_json, "emit JSON");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "fixed-point iteration of the contraction map");
  int solve_m = 0;
  double solve_a = -1.0;
  std::string solve_file;
  std::string solve_x0;
  tpt::FixedPointOptions solve_opts;
  bool solve_json = false;
  auto* solve_m_opt = solve_cmd->add_option("--m", solve_m, "family order (>= 3)");
  auto* solve_a_opt = solve_cmd->add_option("--a", solve_a, "family parameter in [0,1]");
  solve_cmd->add_option("--file", solve_file, "TPT1 or SYM2 input");
  solve_cmd->add_option("--x0", solve_x0, "start vector, comma separated");
  solve_cmd->add_option("--tol", solve_opts.tol, "step-size tolerance");
  solve_cmd->add_option("--max-iter", solve_opts.max_iterations, "iteration cap");
  solve_cmd->add_option("--damping", solve_opts.damping, "damping factor in [0,1)");
  solve_cmd->add_flag("--json", solve_json, "emit JSON");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "sample the chain and count states");
  int simulate_m = 0;
  double simulate_a = -1.0;
  std::string simulate_file;
  std::uint64_t simulate_steps = 100000;
  std::uint64_t simulate_seed = 1;
  std::uint64_t simulate_burn = 0;
  std::string simulate_window;
  std::string simulate_trace;
  bool simulate_json = false;
  auto* simulate_m_opt = simulate_cmd->add_option("--m", simulate_m, "family order (>= 3)");
  auto* simulate_a_opt = simulate_cmd->add_option("--a", simulate_a, "family parameter in [0,1]");
  simulate_cmd->add_option("--file", simulate_file, "TPT1 or SYM2 input");
  simulate_cmd->add_option("--steps", simulate_steps, "number of draws");
  simulate_cmd->add_option("--seed", simulate_seed, "RNG seed");
  auto* simulate_burn_opt = simulate_cmd->add_option("--burn-in", simulate_burn,
                                                     "draws discarded before counting (default steps/10)");
  simulate_cmd->add_option("--window", simulate_window,
                           "initial window, newest state first (default all 1)");
  simulate_cmd->add_option("--trace-out", simulate_trace, "write the sampled trace to a file");
  simulate_cmd->add_flag("--json", simulate_json, "emit JSON");

  // report
  auto* report_cmd = app.add_subcommand("report", "cross-validate analytic, iterative, and sampled answers");
  int report_m = 0;
  double report_a = -1.0;
  tpt::CompareOptions report_opts;
  std::string report_window;
  std::uint64_t report_burn = 0;
  bool report_json = false;
  report_cmd->add_option("--m", report_m, "family order (>= 3)")->required();
  report_cmd->add_option("--a", report_a, "family parameter in [0,1]")->required();
  report_cmd->add_option("--steps", report_opts.steps, "number of draws");
  report_cmd->add_option("--seed", report_opts.seed, "RNG seed");
  auto* report_burn_opt = report_cmd->add_option("--burn-in", report_burn,
                                                 "draws discarded before counting (default steps/10)");
  report_cmd->add_option("--window", report_window, "initial window, newest state first");
  report_cmd->add_flag("--json", report_json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) {
      return run_validate(validate_file, validate_tol, validate_json);
    }
    if (classify_cmd->parsed()) {
      bool have_params = classify_m_opt->count() > 0 || classify_a_opt->count() > 0;
      if (have_params && (classify_m_opt->count() == 0 || classify_a_opt->count() == 0)) {
        throw UsageError("--m and --a go together");
      }
      return run_classify(resolve_source(classify_m, classify_a, have_params, classify_file),
                          classify_json);
    }
    if (roots_cmd->parsed()) {
      return run_roots(roots_m, roots_a, roots_grid, roots_tol, roots_json);
    }
    if (solve_cmd->parsed()) {
      bool have_params = solve_m_opt->count() > 0 || solve_a_opt->count() > 0;
      if (have_params && (solve_m_opt->count() == 0 || solve_a_opt->count() == 0)) {
        throw UsageError("--m and --a go together");
      }
      return run_solve(resolve_source(solve_m, solve_a, have_params, solve_file), solve_x0,
                       solve_opts, solve_json);
    }
    if (simulate_cmd->parsed()) {
      bool have_params = simulate_m_opt->count() > 0 || simulate_a_opt->count() > 0;
      if (have_params && (simulate_m_opt->count() == 0 || simulate_a_opt->count() == 0)) {
        throw UsageError("--m and --a go together");
      }
      std::optional<std::uint64_t> burn;
      if (simulate_burn_opt->count() > 0) burn = simulate_burn;
      return run_simulate(resolve_source(simulate_m, simulate_a, have_params, simulate_file),
                          simulate_steps, simulate_seed, burn, simulate_window, simulate_trace,
                          simulate_json);
    }
    if (report_cmd->parsed()) {
      if (report_burn_opt->count() > 0) report_opts.burn_in = report_burn;
      if (!report_window.empty()) report_opts.initial_window = parse_int_list(report_window);
      return run_report(report_m, report_a, report_opts, report_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
