// circuitrand: circuit bases and randomisation schemes for experimental designs.
//
// Exit codes: 0 ok, 2 parse/parameter error, 3 model precondition,
// 4 invalid randomisation system, 5 budget exceeded.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circuitrand/circuitrand.hpp"

namespace cr = circuitrand;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kParams = 2, kModel = 3, kInvalidSystem = 4, kBudget = 5 };

int exit_code_for(cr::ErrorCode code) {
  switch (code) {
    case cr::ErrorCode::JNotInColumnSpace:
    case cr::ErrorCode::NotBalanced:
      return kModel;
    case cr::ErrorCode::InvalidSystem:
    case cr::ErrorCode::NotARandomisationVector:
      return kInvalidSystem;
    case cr::ErrorCode::TooLarge:
    case cr::ErrorCode::OutOfBudget:
      return kBudget;
    default:
      return kParams;
  }
}

struct Options {
  std::string format = "text";
  bool records() const { return format == "records"; }
};

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json matrix_json(const cr::IntMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j).str());
    rows.push_back(row);
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"entries", rows}};
}

json block_json(const cr::IndexSet& b) {
  json out = json::array();
  for (auto i : b) out.push_back(i + 1);
  return out;
}

json system_json(const cr::RandomisationSystem& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks()) blocks.push_back(block_json(b));
  return {{"shape", cr::shape_to_string(r.shape())}, {"blocks", blocks}};
}

json rationals_json(const cr::RationalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(cr::io::format_rational(x));
  return out;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

cr::IntMatrix read_matrix(const std::string& path) { return cr::io::parse_matrix(cr::io::read_file(path)); }

// ---------------------------------------------------------------- catalog

struct CatalogArgs {
  std::string family;
  std::optional<std::size_t> k, levels_a, levels_b, vertices;
  std::string edges, out, labels;
};

int run_catalog(const CatalogArgs& a, const Options& opt) {
  cr::DesignModel d;
  auto need = [&](const std::optional<std::size_t>& v, const char* flag) {
    if (!v) throw cr::Error(cr::ErrorCode::InvalidArgument, a.family + " needs " + flag);
    return *v;
  };
  if (a.family == "factorial") {
    d = cr::factorial_two_level(need(a.k, "--k"));
  } else if (a.family == "anova2") {
    d = cr::anova_two_way(need(a.levels_a, "--I"), need(a.levels_b, "--J"));
  } else if (a.family == "choice") {
    d = cr::choice_k_of_2k(need(a.k, "--k"));
  } else if (a.family == "digraph") {
    const cr::DirectedGraph g = a.edges.empty()
                                    ? cr::example_digraph()
                                    : cr::io::parse_edge_list(cr::io::read_file(a.edges), a.vertices.value_or(0));
    d = cr::digraph_design(g);
  } else {
    throw cr::Error(cr::ErrorCode::InvalidArgument,
                    "unknown family '" + a.family + "' (factorial, anova2, choice, digraph)");
  }

  if (!a.labels.empty()) {
    std::ofstream f(a.labels);
    f << "# runs\n";
    for (const auto& l : d.run_labels) f << l << '\n';
    f << "# parameters\n";
    for (const auto& l : d.param_labels) f << l << '\n';
  }

  if (opt.records()) {
    emit({{"command", "catalog"},
          {"family", a.family},
          {"matrix", matrix_json(d.x)},
          {"run_labels", d.run_labels},
          {"param_labels", d.param_labels}});
  } else if (a.out.empty()) {
    cr::io::write_matrix(std::cout, d.x);
  }
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    cr::io::write_matrix(f, d.x);
  }
  return kOk;
}

// ---------------------------------------------------------------- circuits

struct CircuitArgs {
  std::string input;
  bool transpose = false, design = false, nonnegative = false, binary = false;
};

int run_circuits(const CircuitArgs& a, const Options& opt) {
  cr::IntMatrix m = read_matrix(a.input);
  if (a.design) {
    m = cr::to_contrast_form(cr::DesignModel::unlabelled(m)).x1.transpose();
  } else if (a.transpose) {
    m = m.transpose();
  }
  const auto basis = cr::circuit_basis(m);
  const auto nonneg = cr::nonnegative_circuits(basis);
  const auto bin = cr::binary_circuits(basis);
  const std::vector<cr::Circuit>& listed = a.binary ? bin : a.nonnegative ? nonneg : basis.circuits;
  const cr::IntMatrix listing = cr::io::circuits_matrix(listed, m.cols());

  if (opt.records()) {
    emit({{"command", "circuits"},
          {"circuits", basis.size()},
          {"nonnegative", nonneg.size()},
          {"binary", bin.size()},
          {"listed", a.binary ? "binary" : a.nonnegative ? "nonnegative" : "all"},
          {"listing", matrix_json(listing)}});
  } else {
    cr::io::write_matrix(std::cout, listing);
    std::cout << "circuits=" << basis.size() << " nonnegative=" << nonneg.size()
              << " binary=" << bin.size() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- randomise

struct RandomiseArgs {
  std::string input, check;
  bool enumerate = false, include_full = false, shapes = false, lattice = false;
};

int run_check(const cr::ContrastModel& m, const std::string& path, const Options& opt) {
  const auto r = cr::io::parse_partition(cr::io::read_file(path), m.n_runs);
  std::string verdict = "valid";
  json record = {{"command", "randomise"}, {"check", cr::io::format_system(r)}};
  int code = kOk;
  if (!r.is_potential()) {
    verdict = "invalid: not a partition of all runs into blocks of size >= 2";
    record["valid"] = false;
    record["reason"] = "not_a_partition";
    code = kInvalidSystem;
  } else if (auto v = cr::first_violation(m, r)) {
    verdict = "invalid: block " + cr::io::format_block(r.blocks()[v->block]) +
              " has inner products " + cr::io::format_vector(v->products) + " with the contrasts";
    record["valid"] = false;
    record["reason"] = "not_orthogonal";
    record["block"] = block_json(r.blocks()[v->block]);
    json p = json::array();
    for (const auto& x : v->products) p.push_back(x.str());
    record["inner_products"] = p;
    code = kInvalidSystem;
  } else {
    record["valid"] = true;
  }
  if (opt.records())
    emit(record);
  else
    std::cout << verdict << '\n';
  return code;
}

int run_randomise(const RandomiseArgs& a, const Options& opt) {
  const auto m = cr::to_contrast_form(cr::DesignModel::unlabelled(read_matrix(a.input)));
  if (!a.check.empty()) return run_check(m, a.check, opt);

  const auto cat = cr::enumerate_circuit_randomisations(m, {.include_full = a.include_full});
  if (opt.records()) {
    json systems = json::array();
    for (const auto& s : cat.systems) systems.push_back(system_json(s));
    json rec = {{"command", "randomise"},
                {"runs", m.n_runs},
                {"contrasts", m.n_contrasts()},
                {"randomisation_vectors", cat.vectors.size()},
                {"systems", systems},
                {"count", cat.systems.size()}};
    if (a.shapes) {
      json shapes = json::array();
      for (const auto& [s, c] : cat.shape_counts) shapes.push_back({{"shape", cr::shape_to_string(s)}, {"count", c}});
      rec["shapes"] = shapes;
    }
    if (a.lattice) {
      json edges = json::array();
      for (const auto& [c, f] : cat.refinement_edges) edges.push_back({c + 1, f + 1});
      rec["lattice"] = edges;
    }
    emit(rec);
    return kOk;
  }

  std::cout << "runs=" << m.n_runs << " contrasts=" << m.n_contrasts()
            << " randomisation_vectors=" << cat.vectors.size() << '\n';
  for (std::size_t i = 0; i < cat.systems.size(); ++i) {
    std::cout << "system " << i + 1 << " shape=" << cr::shape_to_string(cat.systems[i].shape()) << '\n'
              << cr::io::partition_to_string(cat.systems[i]);
  }
  std::cout << "systems=" << cat.systems.size() << '\n';
  if (a.shapes) {
    std::cout << "shape count\n";
    for (const auto& [s, c] : cat.shape_counts) std::cout << cr::shape_to_string(s) << ' ' << c << '\n';
  }
  if (a.lattice) {
    for (const auto& [c, f] : cat.refinement_edges) std::cout << "refines " << f + 1 << ' ' << c + 1 << '\n';
    std::cout << "lattice_edges=" << cat.refinement_edges.size() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- tu

int run_tu(const std::string& input, std::uint64_t cap, const Options& opt) {
  const auto m = read_matrix(input);
  try {
    const bool tu = cr::is_totally_unimodular(m, cap);
    if (opt.records())
      emit({{"command", "tu"}, {"totally_unimodular", tu}});
    else
      std::cout << "totally unimodular: " << (tu ? "yes" : "no") << '\n';
    return kOk;
  } catch (const cr::Error& e) {
    if (e.code() != cr::ErrorCode::TooLarge) throw;
    const std::string count = cr::square_submatrix_count(m.rows(), m.cols()).str();
    if (opt.records())
      emit({{"command", "tu"}, {"refused", true}, {"submatrices", count}, {"cap", cap}});
    else
      std::cout << "refused: " << count << " square submatrices exceed cap " << cap << '\n';
    return kBudget;
  }
}

// ---------------------------------------------------------------- analyse

struct AnalyseArgs {
  std::string input, blocks, y, gamma;
  bool simulate = false;
  std::size_t n1 = 50, n2 = 50, reps = 1000;
  double theta1 = 1, theta2 = 0, sd = 1;
  std::uint64_t seed = 1;
};

int run_simulate(const AnalyseArgs& a, const Options& opt) {
  const auto s = cr::simulate_ab(a.n1, a.n2, a.theta1, a.theta2, a.sd, a.reps, a.seed);
  if (opt.records()) {
    emit({{"command", "analyse"},
          {"simulate", {{"n1", a.n1}, {"n2", a.n2}, {"theta1", a.theta1}, {"theta2", a.theta2}, {"sd", a.sd}}},
          {"replications", s.replications},
          {"seed", s.seed},
          {"mean", format_double(s.mean)},
          {"se", format_double(s.standard_error)},
          {"min", format_double(s.min)},
          {"max", format_double(s.max)}});
  } else {
    std::cout << "replications=" << s.replications << " seed=" << s.seed << '\n'
              << "mean=" << format_double(s.mean) << " se=" << format_double(s.standard_error) << '\n'
              << "min=" << format_double(s.min) << " max=" << format_double(s.max) << '\n';
  }
  return kOk;
}

int run_analyse(const AnalyseArgs& a, const Options& opt) {
  if (a.simulate) return run_simulate(a, opt);
  if (a.input.empty()) throw cr::Error(cr::ErrorCode::InvalidArgument, "analyse needs a design file or --simulate");
  const auto m = cr::to_contrast_form(cr::DesignModel::unlabelled(read_matrix(a.input)));

  cr::RandomisationSystem blocks(m.n_runs, {});
  if (!a.blocks.empty()) blocks = cr::io::parse_partition(cr::io::read_file(a.blocks), m.n_runs);
  cr::RationalVector y = a.y.empty() ? cr::RationalVector(m.n_runs, 0)
                                     : cr::io::parse_rational_vector(cr::io::read_file(a.y));
  cr::RationalVector gamma = a.gamma.empty() ? cr::RationalVector(blocks.blocks().size(), 1)
                                             : cr::io::parse_rational_vector(cr::io::read_file(a.gamma));
  if (y.size() != m.n_runs)
    throw cr::Error(cr::ErrorCode::DimensionMismatch, "response file has " + std::to_string(y.size()) +
                                                          " values for " + std::to_string(m.n_runs) + " runs");
  if (gamma.size() != blocks.blocks().size())
    throw cr::Error(cr::ErrorCode::DimensionMismatch, "gamma file needs one value per block");

  const auto rep = cr::analyse(m, blocks, y, gamma);
  const bool valid_system = blocks.is_potential() && cr::is_valid_randomisation(m, blocks);
  const std::string invariance = rep.invariant ? "exact" : "broken";

  if (opt.records()) {
    emit({{"command", "analyse"},
          {"contrast_estimates", rationals_json(rep.phi_hat)},
          {"bias", rationals_json(rep.bias)},
          {"invariance", invariance},
          {"covariance", std::string(cr::to_string(rep.covariance_ordering))},
          {"valid_system", valid_system}});
  } else {
    std::cout << "contrast estimates: " << cr::io::format_vector(rep.phi_hat) << '\n'
              << "bias: " << cr::io::format_vector(rep.bias) << '\n'
              << "invariance: " << invariance << '\n'
              << "covariance: " << cr::to_string(rep.covariance_ordering) << '\n'
              << "valid system: " << (valid_system ? "yes" : "no") << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit bases and randomisation schemes for experimental designs"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();

  CatalogArgs cat;
  auto* catalog = app.add_subcommand("catalog", "Write the design matrix of a built-in family");
  catalog->add_option("family", cat.family, "factorial | anova2 | choice | digraph")->required();
  catalog->add_option("--k", cat.k, "Factor count (factorial) or subset size (choice)");
  catalog->add_option("--I", cat.levels_a, "Row levels (anova2)");
  catalog->add_option("--J", cat.levels_b, "Column levels (anova2)");
  catalog->add_option("--edges", cat.edges, "Edge-list file (digraph); built-in example if omitted");
  catalog->add_option("--vertices", cat.vertices, "Vertex count (digraph)");
  catalog->add_option("-o,--out", cat.out, "Write the matrix to this file");
  catalog->add_option("--labels", cat.labels, "Write run and parameter labels to this file");

  CircuitArgs cir;
  auto* circuits = app.add_subcommand("circuits", "Circuit basis of a matrix");
  circuits->add_option("input", cir.input, "Matrix file")->required();
  circuits->add_flag("--transpose", cir.transpose, "Use the transpose of the input");
  circuits->add_flag("--design", cir.design, "Input is a design; use x1^T of its contrast form");
  circuits->add_flag("--nonnegative", cir.nonnegative, "List only nonnegative circuits");
  circuits->add_flag("--binary", cir.binary, "List only binary circuits");

  RandomiseArgs ran;
  auto* randomise = app.add_subcommand("randomise", "Enumerate or check randomisation systems of a design");
  randomise->add_option("input", ran.input, "Design matrix file")->required();
  randomise->add_flag("--enumerate", ran.enumerate, "Enumerate circuit-based systems (default)");
  randomise->add_option("--check", ran.check, "Partition file to validate");
  randomise->add_flag("--include-full", ran.include_full, "Also report the single-block system");
  randomise->add_flag("--shapes", ran.shapes, "Print counts per block-size partition");
  randomise->add_flag("--lattice", ran.lattice, "Print refinement covering edges");

  std::string tu_input;
  std::uint64_t tu_cap = cr::kDefaultTuCap;
  auto* tu = app.add_subcommand("tu", "Total unimodularity test");
  tu->add_option("input", tu_input, "Matrix file")->required();
  tu->add_option("--cap", tu_cap, "Maximum number of square submatrices")->capture_default_str();

  AnalyseArgs an;
  auto* analyse = app.add_subcommand("analyse", "Least-squares analysis under blocking");
  analyse->add_option("input", an.input, "Design matrix file");
  analyse->add_option("--blocks", an.blocks, "Block file (one block per line, 1-based)");
  analyse->add_option("--y", an.y, "Response vector file");
  analyse->add_option("--gamma", an.gamma, "Block offset file");
  analyse->add_flag("--simulate", an.simulate, "Run the two-treatment Monte Carlo instead");
  analyse->add_option("--n1", an.n1)->capture_default_str();
  analyse->add_option("--n2", an.n2)->capture_default_str();
  analyse->add_option("--theta1", an.theta1)->capture_default_str();
  analyse->add_option("--theta2", an.theta2)->capture_default_str();
  analyse->add_option("--sd", an.sd, "Confounder standard deviation")->capture_default_str();
  analyse->add_option("--reps", an.reps)->capture_default_str();
  analyse->add_option("--seed", an.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParams;
  }

  try {
    if (*catalog) {
      try {
        return run_catalog(cat, opt);
      } catch (const cr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == cr::ErrorCode::NotBalanced ? kModel : kParams;
      }
    }
    if (*circuits) return run_circuits(cir, opt);
    if (*randomise) return run_randomise(ran, opt);
    if (*tu) return run_tu(tu_input, tu_cap, opt);
    if (*analyse) return run_analyse(an, opt);
  } catch (const cr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParams;
  }
  return kOk;
}
