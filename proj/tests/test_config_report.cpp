// Configuration parsing/emission round-trips, strictness of the schema,
// deterministic number formatting, report envelopes, sweep CSV shape, and
// SVG plot well-formedness.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "hardygap/config.hpp"
#include "hardygap/report.hpp"
#include "hardygap/svg.hpp"

using namespace hardygap;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("config round-trip: parse(emit(cfg)) == cfg") {
  SECTION("defaults") {
    const RunConfig cfg;
    CHECK(parse_config(emit_config(cfg)) == cfg);
  }

  SECTION("fully customized exterior run") {
    RunConfig cfg;
    cfg.domain = make_exterior_ball(2.0);
    cfg.params = make_params(0.5, 2.5, 4);
    cfg.mesh.elements = 512;
    cfg.mesh.grading = "log";
    cfg.mesh.ratio = 1.5;
    cfg.mesh.t_min = {1e-3, 1e-4};
    cfg.mesh.r_max = {100.0, 1000.0};
    cfg.mesh.levels = 4;
    cfg.mesh.depth0 = 5.0;
    cfg.mesh.depth_step = 1.5;
    cfg.solver.tol = 1e-9;
    cfg.solver.max_iter = 200;
    cfg.indicial.location = "infinity";
    cfg.indicial.mu = {0.0, 0.1};
    cfg.indicial.grid_count = 11;
    cfg.hardy.refine_levels = 2;
    cfg.hardy.decay_fit = false;
    cfg.collar.widths = {0.25, 0.125};
    cfg.collar.tail_cut = 4.0;
    cfg.verify.suites = {"indicial-roots"};
    cfg.verify.samples = 777;
    cfg.verify.seed = 99;
    cfg.sweep.alpha = {0.0, 0.5};
    cfg.sweep.p = {2.0, 3.0};
    CHECK(parse_config(emit_config(cfg)) == cfg);
  }

  SECTION("half-line and annulus domains") {
    RunConfig hl;
    hl.domain = make_interval(2.0);
    CHECK(parse_config(emit_config(hl)) == hl);
    RunConfig two;
    two.domain = make_interval(1.0, false);
    CHECK(parse_config(emit_config(two)) == two);
    RunConfig ann;
    ann.domain = make_annulus(1.0, 2.0);
    CHECK(parse_config(emit_config(ann)) == ann);
  }
}

TEST_CASE("config parsing is strict") {
  const auto parse = [](const char* text) { return parse_config_text(text); };

  CHECK_THROWS_AS(parse("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"domain":{"kind":"ball","radius":1},"turbo":true})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"domain":{"kind":"ball","radius":1},"mesh":{"elments":64}})"),
      ConfigError);  // misspelled nested key
  CHECK_THROWS_AS(parse(R"({"domain":{"kind":"cube","side":1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"domain":{"kind":"ball","radius":-1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({})"), ConfigError);  // missing domain
  CHECK_THROWS_AS(
      parse(R"({"domain":{"kind":"ball","radius":1},"alpha":"zero"})"),
      ConfigError);  // wrong type
  CHECK_THROWS_AS(parse(R"({"schema_version":99,
                            "domain":{"kind":"ball","radius":1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"domain":{"kind":"ball","radius":1},"p":0.5})"),
                  ConfigError);  // invalid exponent
  CHECK_THROWS_AS(
      parse(
          R"({"domain":{"kind":"ball","radius":1},"mesh":{"grading":"cubic"}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse(
          R"({"domain":{"kind":"ball","radius":1},"mesh":{"elements":4}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"domain":{"kind":"exterior-ball","radius":1},
                "mesh":{"t_min":[1e-3,1e-4],"r_max":[100]}})"),
      ConfigError);  // unpaired cutoff sequences
  CHECK_THROWS_AS(
      parse(R"({"domain":{"kind":"ball","radius":1},
                "indicial":{"location":"edge"}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse(R"({"domain":{"kind":"ball","radius":1},
                "sweep":{"alpha":[0],"p":[1.0]}})"),
      ConfigError);  // p must exceed 1
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("sweep axes accept lists and ranges") {
  const RunConfig a = parse_config_text(
      R"({"domain":{"kind":"ball","radius":1},
          "sweep":{"alpha":[0.0,0.5,1.0],"p":[2.0]}})");
  CHECK(a.sweep.alpha == std::vector<double>{0.0, 0.5, 1.0});

  const RunConfig b = parse_config_text(
      R"({"domain":{"kind":"ball","radius":1},
          "sweep":{"alpha":{"min":0,"max":1,"count":5},"p":{"min":2,"max":2,"count":1}}})");
  CHECK(b.sweep.alpha == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(b.sweep.p == std::vector<double>{2.0});

  CHECK_THROWS_AS(parse_config_text(
                      R"({"domain":{"kind":"ball","radius":1},
                          "sweep":{"alpha":{"min":0,"max":1,"count":0},"p":[2]}})"),
                  ConfigError);
}

TEST_CASE("deterministic number formatting") {
  CHECK(format_sig(0.1) == "0.1");
  CHECK(format_sig(0.25) == "0.25");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333333");
  CHECK(sig15(1.0 / 3.0) == 0.333333333333333);
  // Idempotent: rounding an already-rounded value changes nothing.
  for (double v : {1.0 / 3.0, 0.1875, 2.718281828459045, 1e-7 / 3.0}) {
    CHECK(sig15(sig15(v)) == sig15(v));
    CHECK(format_sig(sig15(v)) == format_sig(v));
  }
  CHECK(std::isinf(sig15(std::numeric_limits<double>::infinity())));

  const ordered_json t = tagged(0.25, Source::Formula);
  CHECK(t.at("value") == 0.25);
  CHECK(t.at("source") == "formula");
  CHECK(to_string(Source::Extrapolated) == "extrapolated");
}

TEST_CASE("domain formatting for reports") {
  CHECK(format_domain(make_interval(1.0)) == "half-line(1)");
  CHECK(format_domain(make_interval(2.0, false)) == "interval(0,2)");
  CHECK(format_domain(make_ball(1.0)) == "ball(1)");
  CHECK(format_domain(make_annulus(1.0, 2.0)) == "annulus(1,2)");
  CHECK(format_domain(make_exterior_ball(1.5)) == "exterior-ball(1.5)");
}

TEST_CASE("report skeleton: envelope fields and determinism") {
  const RunConfig cfg;
  const ReportDocument doc = report_skeleton("gap", cfg, false);
  CHECK(doc.body.at("tool") == "hardygap");
  CHECK(doc.body.at("command") == "gap");
  CHECK(doc.body.at("schema_version") == kSchemaVersion);
  CHECK(doc.body.contains("config"));
  CHECK(doc.body.at("notes").is_array());
  CHECK_FALSE(doc.body.contains("generated_at"));

  const ReportDocument again = report_skeleton("gap", cfg, false);
  CHECK(doc.body.dump() == again.body.dump());

  const ReportDocument stamped = report_skeleton("gap", cfg, true);
  CHECK(stamped.body.contains("generated_at"));
}

TEST_CASE("gap verdicts serialize with all populated fields") {
  const GapReport rep =
      classify(make_params(0.0, 2.0, 3), make_exterior_ball(1.0));
  const ordered_json j = gap_report_json(rep);
  CHECK(j.at("regime") == "between");
  CHECK(j.at("domain_class") == "exterior");
  CHECK(j.at("H").at("kind") == "exact-value");
  CHECK(j.at("H").at("value") == 0.25);
  CHECK(j.at("lambda_inf").at("value") == 0.25);
  CHECK(j.at("lambda_inf").at("source") == "formula");
  CHECK(j.at("gap") == "zero");
  CHECK(j.at("minimizer_exists") == "no");
  CHECK(j.at("nu_boundary") == 0.5);
  CHECK(j.at("nu_infinity") == -0.5);
  CHECK(j.at("basis").is_array());
  CHECK_FALSE(j.at("basis").empty());

  // Unresolved cells omit the unknown numbers instead of writing NaN.
  const GapReport open =
      classify(make_params(0.0, 2.0, 3), make_annulus(1.0, 2.0));
  const ordered_json oj = gap_report_json(open);
  CHECK(oj.at("H").at("kind") == "positive-unknown");
  CHECK_FALSE(oj.at("H").contains("value"));
  CHECK_FALSE(oj.contains("gap_estimate"));
  CHECK_FALSE(oj.contains("nu_boundary"));
}

TEST_CASE("sweep CSV has the fixed column set") {
  CHECK(sweep_csv_header() ==
        "alpha,p,N,domain,H_bound,lambda_inf,gap,nu,nu_tilde,iterations,"
        "error_estimate");

  SweepRow row;
  row.params = make_params(0.0, 2.0, 3);
  row.domain = make_ball(1.0);
  row.h_bound = 0.25;
  row.lambda_inf = 0.25;
  row.gap = 0.0;
  row.regime = "between";
  row.nu = 0.5;
  row.iterations = 7;
  row.error_estimate = 1e-6;
  const std::string line = sweep_csv_line(row);
  CHECK(std::count(line.begin(), line.end(), ',') == 10);
  CHECK_THAT(line, ContainsSubstring("ball(1)"));
  CHECK_THAT(line, ContainsSubstring("0.25"));
  // nu_tilde was absent: consecutive separators, not a stray "nan".
  CHECK_THAT(line, ContainsSubstring("0.5,,7"));

  const std::string text = sweep_csv({row, row});
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("svg plots are well-formed") {
  PlotSeries s1{"a<b", {{1.0, 1.0}, {2.0, 4.0}, {3.0, 9.0}}};
  PlotSeries s2{"other", {{1.0, 2.0}, {2.0, 3.0}, {3.0, 5.0}}};
  PlotOptions opt;
  opt.title = "quadratic <growth>";
  opt.x_label = "x";
  opt.y_label = "y";
  const std::string svg = svg_line_plot({s1, s2}, opt);
  CHECK_THAT(svg, ContainsSubstring("<svg"));
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
  CHECK_THAT(svg, ContainsSubstring("polyline"));
  CHECK_THAT(svg, ContainsSubstring("a&lt;b"));
  CHECK_THAT(svg, ContainsSubstring("quadratic &lt;growth&gt;"));
  CHECK(svg.find('\0') == std::string::npos);

  // Log axes drop nonpositive points without failing.
  PlotOptions logo;
  logo.log_x = true;
  logo.log_y = true;
  const std::string lsvg =
      svg_line_plot({{"decay", {{0.0, 1.0}, {1.0, 0.1}, {10.0, 0.01}}}}, logo);
  CHECK_THAT(lsvg, ContainsSubstring("</svg>"));
}
