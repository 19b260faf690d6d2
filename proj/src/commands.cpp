#include "opgraph/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "opgraph/algebra.hpp"
#include "opgraph/channel.hpp"
#include "opgraph/expr.hpp"
#include "opgraph/fpalg.hpp"
#include "opgraph/graph.hpp"
#include "opgraph/rep.hpp"
#include "opgraph/rng.hpp"

namespace opgraph::cli {

namespace {

using nlohmann::json;

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

json subspace_json(const Subspace& s, int n) {
  json out = json::array();
  for (const ScalarVec& v : s.basis()) {
    out.push_back(matrix_json(CMatrix::unflatten(v, n, n, s.backend())));
  }
  return out;
}

json config_json(const RunConfig& cfg, const std::string& backend_used) {
  return json{{"theta", cfg.theta_spec},
              {"backend", backend_used},
              {"tol", cfg.tol},
              {"seed", cfg.seed}};
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

bool is_klein_theta(const Theta& theta, double tol) {
  return scalar_equals_int(theta.value, 1, 0, tol) ||
         scalar_equals_int(theta.value, -1, 0, tol);
}

struct CheckList {
  json checks = json::array();
  bool ok = true;

  void push(const std::string& name, bool check_ok, double residual,
            json extra = json::object()) {
    extra["name"] = name;
    extra["ok"] = check_ok;
    extra["residual"] = residual;
    checks.push_back(std::move(extra));
    ok = ok && check_ok;
  }
};

// ---- verify ---------------------------------------------------------------

CommandResult cmd_verify(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Theta theta = resolve_theta(cfg.theta_spec, cfg.backend, cfg.tol);
  const bool exact = theta.backend() == Backend::kExact;
  const bool klein = is_klein_theta(theta, cfg.tol);
  CheckList list;

  graph::GraphGenerators gens = graph::build_generators(theta);
  graph::RelationReport relations = graph::check_relations(gens, cfg.tol);
  for (const auto& c : relations.checks) {
    list.push("relation: " + c.name, c.ok, c.residual);
  }

  alg::MatrixAlgebra algebra =
      alg::generate_algebra({gens.x, gens.y, gens.z}, true, cfg.tol);
  const int expected_dim = klein ? 4 : 8;
  list.push("algebra dimension", algebra.dim() == expected_dim, 0.0,
            {{"dimension", algebra.dim()}, {"expected", expected_dim}});

  alg::StructureReport structure =
      alg::block_decompose(algebra, cfg.tol, cfg.seed);
  bool blocks_ok = structure.radical_dim == 0;
  if (klein) {
    blocks_ok = blocks_ok && structure.blocks.size() == 4 &&
                structure.center_dim == 4;
    for (const auto& b : structure.blocks) {
      blocks_ok = blocks_ok && b.block_dim == 1 && b.is_full_matrix_algebra;
    }
  } else {
    blocks_ok = blocks_ok && structure.blocks.size() == 2 &&
                structure.center_dim == 2;
    for (const auto& b : structure.blocks) {
      blocks_ok = blocks_ok && b.block_dim == 4 && b.is_full_matrix_algebra &&
                  b.matrix_size == 2;
    }
  }
  json block_sizes = json::array();
  for (const auto& b : structure.blocks) {
    block_sizes.push_back(std::to_string(b.matrix_size) + "x" +
                          std::to_string(b.matrix_size));
  }
  list.push("block structure", blocks_ok, 0.0,
            {{"blocks", block_sizes},
             {"center_dim", structure.center_dim},
             {"radical_dim", structure.radical_dim}});

  fp::Theorem2Report deformation = fp::verify_theorem2(theta, cfg.tol);
  for (const auto& c : deformation.checks) {
    list.push("deformation: " + c.name, c.ok, c.residual);
  }

  rep::DecompositionReport split = rep::decompose_phi(theta, cfg.tol, cfg.seed);
  const double rep_bound = exact ? 0.0 : 1e-10;
  bool split_ok = split.residual <= rep_bound &&
                  static_cast<int>(split.characters.size()) == (klein ? 4 : 2);
  json characters = json::array();
  for (const auto& chi : split.characters) {
    characters.push_back(
        {{"chi_g", chi.chi_g.str()}, {"chi_z", chi.chi_z.str()}});
  }
  list.push("representation split", split_ok, split.residual,
            {{"characters", characters}, {"block_dims", split.block_dims}});

  const bool osys = graph::is_operator_system(theta, cfg.tol);
  list.push("operator system", osys == theta.on_unit_circle, 0.0,
            {{"value", osys}, {"unit_circle", theta.on_unit_circle}});

  CommandResult result;
  result.report = {{"command", "verify"},
                   {"config", config_json(cfg, backend_name(theta.backend()))},
                   {"theta_value", theta.value.str()},
                   {"checks", std::move(list.checks)},
                   {"ok", list.ok},
                   {"elapsed_ms", elapsed_ms(start)}};
  result.exit_code = list.ok ? 0 : 1;
  return result;
}

// ---- sweep ----------------------------------------------------------------

json sweep_row(const std::string& label, const Theta& theta, double tol,
               uint64_t seed) {
  graph::GraphGenerators gens = graph::build_generators(theta);
  alg::MatrixAlgebra algebra =
      alg::generate_algebra({gens.x, gens.y, gens.z}, true, tol);
  alg::StructureReport structure = alg::block_decompose(algebra, tol, seed);
  fp::FPPresentation pres = fp::make_presentation(theta, tol);
  Subspace kernel = fp::kernel_of_psi(pres, tol);

  json blocks = json::array();
  for (const auto& b : structure.blocks) {
    blocks.push_back(std::to_string(b.matrix_size) + "x" +
                     std::to_string(b.matrix_size));
  }
  return json{{"theta", label},
              {"value", theta.value.str()},
              {"backend", backend_name(theta.backend())},
              {"dim", algebra.dim()},
              {"blocks", std::move(blocks)},
              {"kernel_dim", kernel.dim()},
              {"regime", fp::regime_name(pres.regime)}};
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, Theta>> points;

  if (cfg.theta_spec.rfind("unit-circle", 0) == 0) {
    int n = 16;
    const auto colon = cfg.theta_spec.find(':');
    if (colon != std::string::npos) {
      const std::string tail = cfg.theta_spec.substr(colon + 1);
      if (tail.rfind("n=", 0) != 0) {
        throw std::invalid_argument("bad sweep spec '" + cfg.theta_spec +
                                    "' (expected unit-circle:n=COUNT)");
      }
      try {
        n = std::stoi(tail.substr(2));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad sweep count in '" + cfg.theta_spec +
                                    "'");
      }
      if (n < 1 || n > 100000) {
        throw std::invalid_argument("sweep count out of range");
      }
    }

    struct Sample {
      double angle;
      std::string label;
      bool special;
    };
    std::vector<Sample> samples;
    for (int k = 0; k < n; ++k) {
      samples.push_back({2.0 * M_PI * k / n,
                         "exp(2*pi*i*" + std::to_string(k) + "/" +
                             std::to_string(n) + ")",
                         false});
    }
    // The regime boundary lives exactly at the fourth roots of unity, so
    // those points always join the sweep.
    const std::pair<double, const char*> special[] = {
        {0.0, "1"}, {M_PI / 2, "i"}, {M_PI, "-1"}, {3 * M_PI / 2, "-i"}};
    for (const auto& [angle, text] : special) {
      bool merged = false;
      for (auto& s : samples) {
        if (std::abs(s.angle - angle) < 1e-9) {
          s.label = text;
          s.special = true;
          merged = true;
          break;
        }
      }
      if (!merged) samples.push_back({angle, text, true});
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.angle < b.angle; });

    for (const auto& s : samples) {
      if (s.special) {
        points.emplace_back(s.label,
                            resolve_theta(s.label, cfg.backend, cfg.tol));
      } else {
        if (cfg.backend == "exact") {
          throw std::invalid_argument(
              "exact backend requires Gaussian-rational theta");
        }
        Scalar v = Scalar::floating(std::cos(s.angle), std::sin(s.angle));
        points.emplace_back(s.label, make_theta(v, cfg.tol));
      }
    }
  } else {
    std::stringstream ss(cfg.theta_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      const auto last = item.find_last_not_of(" \t");
      if (first == std::string::npos) continue;
      item = item.substr(first, last - first + 1);
      points.emplace_back(item, resolve_theta(item, cfg.backend, cfg.tol));
    }
    if (points.empty()) {
      throw std::invalid_argument("empty sweep list");
    }
  }

  json rows = json::array();
  json gap = json::array();
  for (const auto& [label, theta] : points) {
    json row = sweep_row(label, theta, cfg.tol, cfg.seed);
    if (row["dim"].get<int>() == 4) gap.push_back(label);
    rows.push_back(std::move(row));
  }

  CommandResult result;
  result.report = {{"command", "sweep"},
                   {"config", config_json(cfg, cfg.backend)},
                   {"rows", std::move(rows)},
                   {"gap_thetas", std::move(gap)},
                   {"ok", true},
                   {"elapsed_ms", elapsed_ms(start)}};
  return result;
}

// ---- fp -------------------------------------------------------------------

CommandResult cmd_fp(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Theta theta = resolve_theta(cfg.theta_spec, cfg.backend, cfg.tol);
  fp::FPPresentation pres = fp::make_presentation(theta, cfg.tol);
  fp::FPElement element = parse_element(cfg.expression, pres);

  const auto& names = fp::basis_names(pres.regime);
  json coeffs = json::object();
  for (int k = 0; k < 8; ++k) coeffs[names[k]] = element.coeffs[k].str();

  CMatrix image = fp::psi(element, pres);
  const bool image_zero =
      pres.backend() == Backend::kExact ? image.max_abs() == 0.0
                                        : image.max_abs() <= cfg.tol;

  CommandResult result;
  result.report = {{"command", "fp"},
                   {"config", config_json(cfg, backend_name(theta.backend()))},
                   {"input", cfg.expression},
                   {"regime", fp::regime_name(pres.regime)},
                   {"normal_form", fp::fp_str(element)},
                   {"coefficients", std::move(coeffs)},
                   {"psi_image", matrix_json(image)},
                   {"psi_zero", image_zero},
                   {"ok", true},
                   {"elapsed_ms", elapsed_ms(start)}};
  return result;
}

// ---- rep ------------------------------------------------------------------

CommandResult cmd_rep(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Theta theta = resolve_theta(cfg.theta_spec, cfg.backend, cfg.tol);
  const bool exact = theta.backend() == Backend::kExact;
  rep::DecompositionReport split = rep::decompose_phi(theta, cfg.tol, cfg.seed);

  json blocks = json::array();
  for (size_t t = 0; t < split.characters.size(); ++t) {
    json entry = {{"dim", split.block_dims[t]},
                  {"chi_g", split.characters[t].chi_g.str()},
                  {"chi_z", split.characters[t].chi_z.str()}};
    if (split.block_dims[t] == 2) {
      entry["irreducible"] = rep::is_irreducible(
          rep::induce(split.characters[t]), cfg.tol);
    }
    blocks.push_back(std::move(entry));
  }

  const double bound = exact ? 0.0 : 1e-10;
  const bool ok = split.residual <= bound;
  CommandResult result;
  result.report = {{"command", "rep"},
                   {"config", config_json(cfg, backend_name(theta.backend()))},
                   {"blocks", std::move(blocks)},
                   {"basis_change", matrix_json(split.basis_change)},
                   {"residual", split.residual},
                   {"ok", ok},
                   {"elapsed_ms", elapsed_ms(start)}};
  result.exit_code = ok ? 0 : 1;
  return result;
}

// ---- channel --------------------------------------------------------------

Scalar scalar_from_json(const json& e, Backend be) {
  if (e.is_string()) {
    if (be != Backend::kExact) {
      throw std::invalid_argument("channel entries must all use one scalar form");
    }
    return parse_scalar(e.get<std::string>(), Backend::kExact);
  }
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    if (be != Backend::kFloat) {
      throw std::invalid_argument("channel entries must all use one scalar form");
    }
    return Scalar::floating(e[0].get<double>(), e[1].get<double>());
  }
  if (e.is_number()) {
    if (be != Backend::kFloat) {
      throw std::invalid_argument("channel entries must all use one scalar form");
    }
    return Scalar::floating(e.get<double>(), 0.0);
  }
  throw std::invalid_argument(
      "bad scalar entry in channel file (want \"p/q+r/si\" or [re, im])");
}

bool tree_has_string_scalars(const json& node) {
  if (node.is_string()) return true;
  if (node.is_array()) {
    for (const auto& child : node) {
      if (tree_has_string_scalars(child)) return true;
    }
  }
  return false;
}

CMatrix matrix_from_json(const json& rows, Backend be) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw std::invalid_argument("bad matrix in channel file");
  }
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  CMatrix m = CMatrix::zeros(r, c, be);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c) {
      throw std::invalid_argument("bad matrix in channel file");
    }
    for (int j = 0; j < c; ++j) m.at(i, j) = scalar_from_json(rows[i][j], be);
  }
  return m;
}

chan::KrausChannel channel_from_json(const json& j) {
  if (j.contains("kraus")) {
    const json& ops = j["kraus"];
    if (!ops.is_array() || ops.empty()) {
      throw std::invalid_argument("channel file has an empty kraus list");
    }
    const Backend be = tree_has_string_scalars(ops) ? Backend::kExact
                                                    : Backend::kFloat;
    std::vector<CMatrix> kraus;
    for (const auto& op : ops) kraus.push_back(matrix_from_json(op, be));
    chan::KrausChannel ch = chan::make_channel(std::move(kraus));
    if (j.contains("dim_in") && j["dim_in"].get<int>() != ch.dim_in) {
      throw std::invalid_argument("dim_in does not match the kraus shapes");
    }
    if (j.contains("dim_out") && j["dim_out"].get<int>() != ch.dim_out) {
      throw std::invalid_argument("dim_out does not match the kraus shapes");
    }
    return ch;
  }
  if (j.contains("vectors") && j.contains("gram")) {
    const Backend be = tree_has_string_scalars(j["vectors"]) ||
                               tree_has_string_scalars(j["gram"])
                           ? Backend::kExact
                           : Backend::kFloat;
    chan::GramFrame frame;
    frame.gram = matrix_from_json(j["gram"], be);
    for (const auto& vec : j["vectors"]) {
      if (!vec.is_array()) {
        throw std::invalid_argument("bad frame vector in channel file");
      }
      ScalarVec v;
      for (const auto& e : vec) v.push_back(scalar_from_json(e, be));
      frame.vectors.push_back(std::move(v));
    }
    return chan::pseudo_diagonal(frame);
  }
  throw std::invalid_argument(
      "channel file needs either a \"kraus\" list or \"vectors\"+\"gram\"");
}

chan::KrausChannel float_channel(const chan::KrausChannel& ch) {
  std::vector<CMatrix> ops;
  for (const CMatrix& v : ch.kraus) ops.push_back(to_float_matrix(v));
  return chan::make_channel(std::move(ops));
}

CMatrix random_square(int n, Backend be, Rng& rng) {
  CMatrix m = CMatrix::zeros(n, n, be);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.at(i, j) = rng.small_scalar(be);
  }
  return m;
}

CommandResult cmd_channel(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::ifstream in(cfg.channel_path);
  if (!in) {
    throw std::invalid_argument("cannot open channel file '" +
                                cfg.channel_path + "'");
  }
  json parsed;
  try {
    parsed = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("failed to parse channel file: " +
                                std::string(e.what()));
  }
  chan::KrausChannel ch = channel_from_json(parsed);
  const bool exact = ch.backend() == Backend::kExact;

  CheckList list;
  json info = {{"dim_in", ch.dim_in},
               {"dim_out", ch.dim_out},
               {"env_dim", ch.env_dim()},
               {"backend", backend_name(ch.backend())}};

  // Trace preservation gates every action.
  CMatrix acc = CMatrix::zeros(ch.dim_in, ch.dim_in, ch.backend());
  for (const CMatrix& v : ch.kraus) acc = acc + v.adjoint() * v;
  const double tp_residual =
      max_abs_diff(acc, CMatrix::identity(ch.dim_in, ch.backend()));
  const double tp_bound = exact ? 0.0 : std::max(cfg.tol, 1e-10);
  list.push("trace preservation", tp_residual <= tp_bound, tp_residual);

  if (list.ok) {
    if (cfg.action == "graph") {
      Subspace s = chan::nc_graph(ch, cfg.tol);
      info["graph_dim"] = s.dim();
      info["graph_basis"] = subspace_json(s, ch.dim_in);
      list.push("graph computed", true, 0.0);
    } else if (cfg.action == "graph-check") {
      Subspace direct = chan::nc_graph(ch, cfg.tol);
      Subspace routed = chan::graph_via_dual(ch, cfg.tol);
      const bool equal = subspace_equal(direct, routed);
      info["graph_dim"] = direct.dim();
      info["dual_route_dim"] = routed.dim();
      list.push("graph equals dual route", equal, 0.0);
    } else if (cfg.action == "duality-test") {
      Rng rng(cfg.seed);
      double worst = 0.0;
      for (int trial = 0; trial < 50; ++trial) {
        CMatrix rho = random_square(ch.dim_in, ch.backend(), rng);
        CMatrix x = random_square(ch.dim_out, ch.backend(), rng);
        Scalar lhs = (chan::apply(ch, rho) * x).trace();
        Scalar rhs = (rho * chan::dual(ch, x)).trace();
        const double scale = 1.0 + lhs.abs() + rhs.abs();
        worst = std::max(worst, (lhs - rhs).abs() / scale);
      }
      const double bound = exact ? 0.0 : 1e-12;
      list.push("duality identity", worst <= bound, worst,
                {{"trials", 50}});
    } else if (cfg.action == "match-L") {
      if (cfg.theta_spec.empty()) {
        throw std::invalid_argument("match-L requires --theta");
      }
      if (ch.dim_in != 4) {
        throw std::invalid_argument(
            "match-L requires a channel with a four-dimensional input space");
      }
      Theta theta = resolve_theta(cfg.theta_spec, cfg.backend, cfg.tol);
      Subspace graph_space(16, theta.backend(), cfg.tol);
      Subspace channel_space(16, ch.backend(), cfg.tol);
      if (theta.backend() == ch.backend()) {
        graph_space = graph::graph_span(theta, cfg.tol);
        channel_space = chan::nc_graph(ch, cfg.tol);
      } else {
        Theta ftheta =
            make_theta(Scalar::floating(theta.value.to_complex()), cfg.tol);
        graph_space = graph::graph_span(ftheta, cfg.tol);
        channel_space = chan::nc_graph(float_channel(ch), cfg.tol);
      }
      const bool equal = subspace_equal(graph_space, channel_space);
      info["graph_dim"] = channel_space.dim();
      info["target_dim"] = graph_space.dim();
      list.push("graph matches the operator graph of theta", equal, 0.0);
    } else {
      throw std::invalid_argument("unknown channel action '" + cfg.action +
                                  "'");
    }
  }

  CommandResult result;
  result.report = {{"command", "channel"},
                   {"action", cfg.action},
                   {"config", config_json(cfg, backend_name(ch.backend()))},
                   {"channel", std::move(info)},
                   {"checks", std::move(list.checks)},
                   {"ok", list.ok},
                   {"elapsed_ms", elapsed_ms(start)}};
  result.exit_code = list.ok ? 0 : 1;
  return result;
}

// ---- rendering ------------------------------------------------------------

std::string format_residual(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

void render_checks(std::ostringstream& os, const json& checks) {
  for (const auto& c : checks) {
    os << "  [" << (c["ok"].get<bool>() ? "ok" : "FAIL") << "] "
       << c["name"].get<std::string>();
    const double r = c["residual"].get<double>();
    if (r != 0.0) os << "  (residual " << format_residual(r) << ")";
    os << "\n";
  }
}

}  // namespace

Theta resolve_theta(const std::string& text, const std::string& backend,
                    double tol) {
  if (text.empty()) {
    throw std::invalid_argument("missing theta");
  }
  if (backend == "exact") return parse_theta(text, Backend::kExact, tol);
  if (backend == "float") return parse_theta(text, Backend::kFloat, tol);
  if (backend != "auto") {
    throw std::invalid_argument("unknown backend '" + backend + "'");
  }
  try {
    return parse_theta(text, Backend::kExact, tol);
  } catch (const std::invalid_argument&) {
    return parse_theta(text, Backend::kFloat, tol);
  }
}

CommandResult run_command(const RunConfig& cfg) {
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "fp") return cmd_fp(cfg);
  if (cfg.command == "rep") return cmd_rep(cfg);
  if (cfg.command == "channel") return cmd_channel(cfg);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

std::string render_text(const json& report) {
  std::ostringstream os;
  const std::string command = report.value("command", "");
  os << "command: " << command << "\n";
  if (report.contains("config")) {
    const json& cfg = report["config"];
    os << "theta: " << cfg.value("theta", "") << "   backend: "
       << cfg.value("backend", "") << "   tol: " << cfg.value("tol", 0.0)
       << "   seed: " << cfg.value("seed", uint64_t{0}) << "\n";
  }

  if (command == "sweep") {
    os << "\n  theta                    backend  dim  blocks"
          "           kernel  regime\n";
    for (const auto& row : report["rows"]) {
      std::string blocks;
      for (const auto& b : row["blocks"]) {
        if (!blocks.empty()) blocks += " ";
        blocks += b.get<std::string>();
      }
      std::ostringstream line;
      line << "  " << row["theta"].get<std::string>();
      std::string head = line.str();
      head.resize(std::max<size_t>(head.size() + 2, 27), ' ');
      os << head << row["backend"].get<std::string>() << "    "
         << row["dim"].get<int>() << "    " << blocks;
      for (size_t pad = blocks.size(); pad < 16; ++pad) os << ' ';
      os << row["kernel_dim"].get<int>() << "       "
         << row["regime"].get<std::string>() << "\n";
    }
    std::string gap;
    for (const auto& g : report["gap_thetas"]) {
      if (!gap.empty()) gap += ", ";
      gap += g.get<std::string>();
    }
    os << "dimension gap at: " << (gap.empty() ? "(none)" : gap) << "\n";
  } else if (command == "fp") {
    os << "input: " << report["input"].get<std::string>() << "\n"
       << "regime: " << report["regime"].get<std::string>() << "\n"
       << "normal form: " << report["normal_form"].get<std::string>() << "\n"
       << "psi zero: " << (report["psi_zero"].get<bool>() ? "yes" : "no")
       << "\n";
    os << "psi image:\n";
    for (const auto& row : report["psi_image"]) {
      os << "  [";
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) os << ", ";
        os << row[j].get<std::string>();
      }
      os << "]\n";
    }
  } else if (command == "rep") {
    os << "blocks:\n";
    for (const auto& b : report["blocks"]) {
      os << "  dim " << b["dim"].get<int>() << "  chi(g) = "
         << b["chi_g"].get<std::string>() << "  chi(z) = "
         << b["chi_z"].get<std::string>();
      if (b.contains("irreducible")) {
        os << (b["irreducible"].get<bool>() ? "  irreducible"
                                            : "  reducible");
      }
      os << "\n";
    }
    os << "residual: " << format_residual(report["residual"].get<double>())
       << "\n";
  } else if (command == "channel") {
    const json& info = report["channel"];
    os << "action: " << report["action"].get<std::string>() << "\n"
       << "dims: " << info["dim_in"].get<int>() << " -> "
       << info["dim_out"].get<int>() << "  env " << info["env_dim"].get<int>()
       << "  (" << info["backend"].get<std::string>() << ")\n";
    if (info.contains("graph_dim")) {
      os << "graph dimension: " << info["graph_dim"].get<int>() << "\n";
    }
    render_checks(os, report["checks"]);
  }

  if (command == "verify") {
    os << "\n";
    render_checks(os, report["checks"]);
  }
  if (report.contains("ok")) {
    os << "result: " << (report["ok"].get<bool>() ? "ok" : "FAILED") << "   ("
       << report.value("elapsed_ms", 0L) << " ms)\n";
  }
  return os.str();
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"operator graph, deformation algebra, and channel toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub, bool with_theta) {
    if (with_theta) {
      sub->add_option("--theta", cfg.theta_spec,
                      "theta value (rational, a+bi, or exp(i*pi*p/q))");
    }
    sub->add_option("--backend", cfg.backend, "auto, exact, or float")
        ->check(CLI::IsMember({"auto", "exact", "float"}));
    sub->add_option("--tol", cfg.tol, "float-backend tolerance");
    sub->add_option("--seed", cfg.seed, "seed for randomized steps");
    sub->add_flag("--json", cfg.json_output, "emit the report as JSON");
    sub->add_option("--out", cfg.out_path, "write the report to a file");
  };

  CLI::App* verify =
      app.add_subcommand("verify", "run the full verification suite");
  add_common(verify, true);
  verify->get_option("--theta")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate dimensions over a theta list or the unit circle");
  add_common(sweep, true);
  sweep->get_option("--theta")->required();

  CLI::App* fp_cmd =
      app.add_subcommand("fp", "normal-form arithmetic in the presentation");
  add_common(fp_cmd, true);
  fp_cmd->get_option("--theta")->required();
  fp_cmd->add_option("expression", cfg.expression, "element expression")
      ->required();

  CLI::App* rep_cmd =
      app.add_subcommand("rep", "decompose the four-dimensional representation");
  add_common(rep_cmd, true);
  rep_cmd->get_option("--theta")->required();

  CLI::App* channel =
      app.add_subcommand("channel", "analyze a Kraus channel or frame file");
  channel->add_option("action", cfg.action,
                      "graph, graph-check, duality-test, or match-L")
      ->required();
  channel->add_option("--in", cfg.channel_path, "channel JSON file")
      ->required();
  add_common(channel, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();

  CommandResult result;
  try {
    result = run_command(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string body = cfg.json_output ? result.report.dump(2) + "\n"
                                           : render_text(result.report);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << cfg.out_path << "'\n";
      return 2;
    }
    out << body;
  } else {
    std::cout << body;
  }
  return result.exit_code;
}

}  // namespace opgraph::cli
