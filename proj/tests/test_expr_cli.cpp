#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "opgraph/commands.hpp"
#include "opgraph/expr.hpp"
#include "opgraph/fpalg.hpp"
#include "test_support.hpp"

using namespace opgraph;
using cli::RunConfig;
using nlohmann::json;

namespace {

fp::FPPresentation pres_at(const std::string& theta) {
  return fp::make_presentation(cli::resolve_theta(theta, "auto", kDefaultTol),
                               kDefaultTol);
}

fp::FPElement parse_at(const std::string& text, const fp::FPPresentation& p) {
  return cli::parse_element(text, p);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

RunConfig base_config(std::string command, std::string theta) {
  RunConfig cfg;
  cfg.command = std::move(command);
  cfg.theta_spec = std::move(theta);
  return cfg;
}

// Spectral projections of the commuting generator triple at theta = 1; the
// four rank-one Kraus operators give a channel whose graph is exactly the
// generator span.
json klein_projection_channel() {
  json ops = json::array();
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      const int v[4] = {1, s2, s1, s1 * s2};
      json rows = json::array();
      for (int a = 0; a < 4; ++a) {
        json row = json::array();
        for (int b = 0; b < 4; ++b) {
          row.push_back(v[a] * v[b] > 0 ? "1/4" : "-1/4");
        }
        rows.push_back(std::move(row));
      }
      ops.push_back(std::move(rows));
    }
  }
  return json{{"dim_in", 4}, {"dim_out", 4}, {"kraus", std::move(ops)}};
}

}  // namespace

TEST_CASE("expression grammar accepts the documented forms") {
  fp::FPPresentation p = pres_at("2");
  const fp::FPElement g = parse_at("g", p);
  const fp::FPElement x = parse_at("x", p);
  const fp::FPElement one = fp::fp_one(p);

  CHECK(parse_at("x*y", p).coeffs == g.coeffs);
  CHECK(parse_at("xy", p).coeffs == g.coeffs);
  CHECK(parse_at("x y", p).coeffs == g.coeffs);
  CHECK(parse_at("3/4*g", p).coeffs ==
        fp::fp_scale(g, Scalar::exact(mpq_class(3, 4))).coeffs);
  CHECK(parse_at("2.5x", p).coeffs ==
        fp::fp_scale(x, Scalar::exact(mpq_class(5, 2))).coeffs);
  CHECK(parse_at("2x + 3x", p).coeffs ==
        fp::fp_scale(x, Scalar::exact_int(5)).coeffs);
  CHECK(parse_at("-x + x", p).coeffs == fp::fp_zero(p).coeffs);
  CHECK(parse_at("i*x + 2", p).coeffs ==
        fp::fp_add(fp::fp_scale(x, Scalar::exact_int(0, 1)),
                   fp::fp_scale(one, Scalar::exact_int(2))).coeffs);

  CHECK(parse_at("x^-3", p).coeffs == x.coeffs);
  CHECK(parse_at("z^2", p).coeffs == one.coeffs);
  CHECK(parse_at("xgxg", p).coeffs == one.coeffs);
  CHECK(fp::fp_multiply(parse_at("g^-1", p), g, p).coeffs == one.coeffs);

  fp::FPPresentation cp = pres_at("i");
  CHECK(parse_at("g^-1", cp).coeffs ==
        fp::fp_scale(parse_at("g", cp), -Scalar::one(Backend::kExact)).coeffs);
  CHECK(fp::fp_multiply(parse_at("g^-1", cp), parse_at("g", cp), cp).coeffs ==
        fp::fp_one(cp).coeffs);
}

TEST_CASE("expression errors carry one-based column positions") {
  fp::FPPresentation p = pres_at("2");
  auto bad = [&p](const std::string& text, const std::string& message) {
    CHECK_THROWS_WITH_AS(cli::parse_element(text, p), message.c_str(),
                         std::invalid_argument);
  };
  bad("", "syntax error at column 1: empty expression");
  bad("x +", "syntax error at column 4: dangling sign");
  bad("*x", "syntax error at column 1: '*' without a left factor");
  bad("x*", "syntax error at column 3: dangling '*'");
  bad("x^", "syntax error at column 3: expected an integer exponent");
  bad("x^999", "syntax error at column 3: exponent out of range");
  bad("w", "unknown symbol 'w' at column 1");
  bad("x w", "unknown symbol 'w' at column 3");
  bad("x ? y", "syntax error at column 3: unexpected character '?'");
  bad("2 + 3//4*x", "syntax error at column 5: bad coefficient '3//4'");
  bad("1.2.3*x", "syntax error at column 1: bad coefficient '1.2.3'");
}

TEST_CASE("parsed kernel elements vanish at the degenerate point") {
  fp::FPPresentation p = pres_at("1");
  const fp::FPElement rel = parse_at("g^2 - 1", p);
  CHECK(fp::psi(rel, p).max_abs() == 0.0);
  Subspace kernel = fp::kernel_of_psi(p, kDefaultTol);
  CHECK(kernel.contains(rel.coeffs));

  const fp::FPElement shifted = parse_at("x*g^2 - x", p);
  CHECK(fp::psi(shifted, p).max_abs() == 0.0);

  // The same elements are invertible away from the degenerate point.
  fp::FPPresentation q = pres_at("2");
  CHECK(fp::psi(parse_at("g^2 - 1", q), q).max_abs() > 0.5);
}

TEST_CASE("theta resolution picks backends") {
  CHECK(cli::resolve_theta("2", "auto", kDefaultTol).backend() ==
        Backend::kExact);
  CHECK(cli::resolve_theta("3/2", "auto", kDefaultTol).backend() ==
        Backend::kExact);
  CHECK(cli::resolve_theta("1.5", "auto", kDefaultTol).value ==
        Scalar::exact(mpq_class(3, 2)));
  CHECK(cli::resolve_theta("exp(i*pi/3)", "auto", kDefaultTol).backend() ==
        Backend::kFloat);
  CHECK(cli::resolve_theta("2", "float", kDefaultTol).backend() ==
        Backend::kFloat);
  CHECK(cli::resolve_theta("exp(i*pi/3)", "auto", kDefaultTol).on_unit_circle);
  CHECK_THROWS_AS(cli::resolve_theta("exp(i*pi/3)", "exact", kDefaultTol),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(cli::resolve_theta("0", "auto", kDefaultTol),
                       "theta must be nonzero", std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_theta("2", "weird", kDefaultTol),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_theta("", "auto", kDefaultTol),
                  std::invalid_argument);
}

TEST_CASE("verify command aggregates the full suite") {
  cli::CommandResult generic = cli::run_command(base_config("verify", "2"));
  CHECK(generic.exit_code == 0);
  CHECK(generic.report["ok"].get<bool>());
  CHECK(generic.report["checks"].size() == 12);
  CHECK(generic.report["config"]["backend"] == "exact");
  for (const auto& c : generic.report["checks"]) {
    CHECK(c["ok"].get<bool>());
    CHECK(c["residual"].get<double>() == 0.0);
  }

  cli::CommandResult klein = cli::run_command(base_config("verify", "1"));
  CHECK(klein.exit_code == 0);
  CHECK(klein.report["checks"].size() == 16);
  std::vector<std::string> names;
  for (const auto& c : klein.report["checks"]) {
    names.push_back(c["name"].get<std::string>());
  }
  CHECK(std::find(names.begin(), names.end(), "relation: xy = theta z") !=
        names.end());
  CHECK(std::find(names.begin(), names.end(), "deformation: psi(J) = 0") !=
        names.end());

  cli::CommandResult rotated =
      cli::run_command(base_config("verify", "exp(i*pi/3)"));
  CHECK(rotated.exit_code == 0);
  CHECK(rotated.report["config"]["backend"] == "float");

  CHECK_THROWS_WITH_AS(cli::run_command(base_config("verify", "0")),
                       "theta must be nonzero", std::invalid_argument);
}

TEST_CASE("sweep command tabulates the unit circle and lists") {
  cli::CommandResult circle =
      cli::run_command(base_config("sweep", "unit-circle:n=8"));
  CHECK(circle.exit_code == 0);
  const json& rows = circle.report["rows"];
  REQUIRE(rows.size() == 8);
  const int expected_dims[8] = {4, 8, 8, 8, 4, 8, 8, 8};
  for (int k = 0; k < 8; ++k) {
    CHECK(rows[k]["dim"].get<int>() == expected_dims[k]);
  }
  CHECK(rows[0]["theta"] == "1");
  CHECK(rows[0]["backend"] == "exact");
  CHECK(rows[0]["regime"] == "klein");
  CHECK(rows[0]["kernel_dim"].get<int>() == 4);
  CHECK(rows[2]["theta"] == "i");
  CHECK(rows[2]["backend"] == "exact");
  CHECK(rows[2]["regime"] == "clifford");
  CHECK(rows[1]["backend"] == "float");
  CHECK(rows[1]["regime"] == "generic");
  CHECK(rows[1]["kernel_dim"].get<int>() == 0);
  const json& gap = circle.report["gap_thetas"];
  REQUIRE(gap.size() == 2);
  CHECK(gap[0] == "1");
  CHECK(gap[1] == "-1");

  cli::CommandResult list = cli::run_command(base_config("sweep", "2, 1"));
  REQUIRE(list.report["rows"].size() == 2);
  CHECK(list.report["rows"][0]["dim"].get<int>() == 8);
  CHECK(list.report["rows"][1]["dim"].get<int>() == 4);

  CHECK_THROWS_AS(cli::run_command(base_config("sweep", "unit-circle:n=oops")),
                  std::invalid_argument);
}

TEST_CASE("fp and rep commands report normal forms and blocks") {
  RunConfig fp_cfg = base_config("fp", "2");
  fp_cfg.expression = "x*y + y*x";
  cli::CommandResult fp_res = cli::run_command(fp_cfg);
  CHECK(fp_res.exit_code == 0);
  CHECK(fp_res.report["normal_form"] == "21/4*g - g^3");
  CHECK_FALSE(fp_res.report["psi_zero"].get<bool>());
  CHECK(fp_res.report["coefficients"].size() == 8);
  CHECK(fp_res.report["coefficients"]["g"] == "21/4");
  CHECK(fp_res.report["psi_image"][0][3] == "5/2");

  RunConfig ideal_cfg = base_config("fp", "1");
  ideal_cfg.expression = "g^2 - 1";
  cli::CommandResult ideal_res = cli::run_command(ideal_cfg);
  CHECK(ideal_res.report["psi_zero"].get<bool>());
  CHECK(ideal_res.report["regime"] == "klein");

  cli::CommandResult rep_res = cli::run_command(base_config("rep", "2"));
  CHECK(rep_res.exit_code == 0);
  const json& blocks = rep_res.report["blocks"];
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0]["chi_g"] == "2");
  CHECK(blocks[0]["chi_z"] == "1");
  CHECK(blocks[0]["irreducible"].get<bool>());
  CHECK(blocks[1]["chi_g"] == "-2");
  CHECK(rep_res.report["residual"].get<double>() == 0.0);

  cli::CommandResult rep_klein = cli::run_command(base_config("rep", "1"));
  CHECK(rep_klein.report["blocks"].size() == 4);
  for (const auto& b : rep_klein.report["blocks"]) {
    CHECK(b["dim"].get<int>() == 1);
  }
}

TEST_CASE("channel command loads files and gates on trace preservation") {
  const auto dephase = temp_file("opgraph_test_dephase.json");
  write_file(dephase, R"({
    "dim_in": 2, "dim_out": 2,
    "kraus": [[["1", "0"], ["0", "0"]], [["0", "0"], ["0", "1"]]]
  })");

  RunConfig cfg = base_config("channel", "");
  cfg.channel_path = dephase.string();
  cfg.action = "graph";
  cli::CommandResult graph_res = cli::run_command(cfg);
  CHECK(graph_res.exit_code == 0);
  CHECK(graph_res.report["channel"]["graph_dim"].get<int>() == 2);
  CHECK(graph_res.report["channel"]["backend"] == "exact");

  cfg.action = "graph-check";
  CHECK(cli::run_command(cfg).exit_code == 0);
  cfg.action = "duality-test";
  CHECK(cli::run_command(cfg).exit_code == 0);

  const auto lossy = temp_file("opgraph_test_lossy.json");
  write_file(lossy, R"({"kraus": [[["1", "0"], ["0", "1/2"]]]})");
  cfg.channel_path = lossy.string();
  cfg.action = "graph";
  cli::CommandResult lossy_res = cli::run_command(cfg);
  CHECK(lossy_res.exit_code == 1);
  CHECK_FALSE(lossy_res.report["ok"].get<bool>());
  CHECK(lossy_res.report["checks"][0]["residual"].get<double>() ==
        doctest::Approx(0.75));

  const auto frame = temp_file("opgraph_test_frame.json");
  write_file(frame, R"({
    "vectors": [[[0.816496580927726, 0], [0, 0]],
                [[-0.408248290463863, 0], [0.7071067811865476, 0]],
                [[-0.408248290463863, 0], [-0.7071067811865476, 0]]],
    "gram": [[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]]
  })");
  cfg.channel_path = frame.string();
  cfg.action = "graph";
  cli::CommandResult frame_res = cli::run_command(cfg);
  CHECK(frame_res.exit_code == 0);
  CHECK(frame_res.report["channel"]["dim_in"].get<int>() == 2);
  CHECK(frame_res.report["channel"]["dim_out"].get<int>() == 3);
  CHECK(frame_res.report["channel"]["backend"] == "float");

  cfg.channel_path = temp_file("opgraph_test_missing.json").string();
  CHECK_THROWS_AS(cli::run_command(cfg), std::invalid_argument);

  const auto broken = temp_file("opgraph_test_broken.json");
  write_file(broken, "{\"kraus\": [");
  cfg.channel_path = broken.string();
  CHECK_THROWS_AS(cli::run_command(cfg), std::invalid_argument);

  const auto mixed = temp_file("opgraph_test_mixed.json");
  write_file(mixed, R"({"kraus": [[["1", 0.5], ["0", "0"]]]})");
  cfg.channel_path = mixed.string();
  CHECK_THROWS_AS(cli::run_command(cfg), std::invalid_argument);
}

TEST_CASE("match-L distinguishes the generator span") {
  const auto klein = temp_file("opgraph_test_klein_proj.json");
  write_file(klein, klein_projection_channel().dump());

  RunConfig cfg = base_config("channel", "1");
  cfg.channel_path = klein.string();
  cfg.action = "match-L";
  cli::CommandResult hit = cli::run_command(cfg);
  CHECK(hit.exit_code == 0);
  CHECK(hit.report["channel"]["graph_dim"].get<int>() == 4);
  CHECK(hit.report["channel"]["target_dim"].get<int>() == 4);

  cfg.theta_spec = "i";
  CHECK(cli::run_command(cfg).exit_code == 1);
  cfg.theta_spec = "2";
  CHECK(cli::run_command(cfg).exit_code == 1);

  // Mixed backends: float theta against the exact channel still matches.
  cfg.theta_spec = "1";
  cfg.backend = "float";
  CHECK(cli::run_command(cfg).exit_code == 0);

  // The standard-basis dephasing graph is diagonal, not the generator span.
  const auto diag = temp_file("opgraph_test_diag4.json");
  json ops = json::array();
  for (int k = 0; k < 4; ++k) {
    json rows = json::array();
    for (int a = 0; a < 4; ++a) {
      json row = json::array();
      for (int b = 0; b < 4; ++b) {
        row.push_back(a == k && b == k ? "1" : "0");
      }
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  write_file(diag, json{{"kraus", std::move(ops)}}.dump());
  RunConfig mism = base_config("channel", "1");
  mism.channel_path = diag.string();
  mism.action = "match-L";
  CHECK(cli::run_command(mism).exit_code == 1);

  RunConfig no_theta = base_config("channel", "");
  no_theta.channel_path = klein.string();
  no_theta.action = "match-L";
  CHECK_THROWS_AS(cli::run_command(no_theta), std::invalid_argument);
}

TEST_CASE("cli entry point wires arguments and exit codes") {
  auto run = [](std::vector<const char*> argv) {
    argv.insert(argv.begin(), "opgraph");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data());
  };

  const auto out = temp_file("opgraph_test_cli_out.json");
  CHECK(run({"verify", "--theta", "2", "--json", "--out",
             out.string().c_str()}) == 0);
  std::ifstream in(out);
  json report = json::parse(in);
  CHECK(report["command"] == "verify");
  CHECK(report["ok"].get<bool>());

  const auto fp_out = temp_file("opgraph_test_cli_fp.txt");
  CHECK(run({"fp", "--theta", "2", "xy", "--out", fp_out.string().c_str()}) ==
        0);
  std::ifstream fp_in(fp_out);
  std::string body((std::istreambuf_iterator<char>(fp_in)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("normal form: g") != std::string::npos);

  CHECK(run({"verify", "--theta", "0"}) == 2);
  CHECK(run({"verify"}) == 2);
  CHECK(run({"nonsense"}) == 2);
  CHECK(run({"verify", "--theta", "2", "--backend", "weird"}) == 2);
  CHECK(run({"--help"}) == 0);
}
