#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <rcis/io.hpp>

namespace fs = std::filesystem;

using rcis::ControlStrategy;
using rcis::RunConfig;
using rcis::Vec;

namespace {

const fs::path& temp_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("rcis_io_tests_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p);
  os << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// the command entry points talk to stdout/stderr; keep test output clean
struct CaptureStreams {
  std::ostringstream out, err;
  std::streambuf* old_out;
  std::streambuf* old_err;
  CaptureStreams()
      : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
  ~CaptureStreams() {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
  }
};

std::string tanks_config_text(const fs::path& out_dir, const std::string& extra_solver = "",
                              const std::string& extra_output = "") {
  return "[model]\n"
         "name = coupled_tanks\n"
         "\n"
         "[solver]\n"
         "epsilon = 1\n"
         "T_max = 200\n"
         "h = 0.01\n"
         "strategy = \"csm_min\"\n" +
         extra_solver +
         "\n"
         "[output]\n"
         "directory = " +
         out_dir.string() + "\n" + extra_output;
}

}  // namespace

TEST_CASE("config file parsing", "[io]") {
  const fs::path dir = temp_root() / "parse";
  SECTION("sections, comments, quoting and inline comments") {
    const fs::path p = dir / "ok.toml";
    write_file(p,
               "# leading comment\n"
               "[model]\n"
               "name = \"coupled_tanks\"  # trailing note\n"
               "; alt comment style\n"
               "[solver]\n"
               "epsilon = 0.5\n"
               "  h =   0.02\t\n");
    rcis::ConfigFile cf = rcis::ConfigFile::load(p.string());
    REQUIRE(cf.entries.size() == 3);
    CHECK(cf.entries[0].section == "model");
    CHECK(cf.entries[0].key == "name");
    CHECK(cf.entries[0].value == "\"coupled_tanks\"");
    CHECK(cf.entries[0].line == 3);
    CHECK(cf.entries[1].section == "solver");
    CHECK(cf.entries[1].value == "0.5");
    CHECK(cf.entries[2].key == "h");
    CHECK(cf.entries[2].value == "0.02");
  }
  SECTION("errors carry the file position") {
    auto load_expect = [&](const std::string& name, const std::string& text,
                           const std::string& needle, std::size_t line) {
      const fs::path p = dir / name;
      write_file(p, text);
      try {
        rcis::ConfigFile::load(p.string());
        FAIL("expected a parse error for " << name);
      } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        INFO(what);
        CHECK(what.find(needle) != std::string::npos);
        CHECK(what.find(":" + std::to_string(line) + ":") != std::string::npos);
      }
    };
    load_expect("noeq.toml", "[model]\nname = x\njunk line\n", "key = value", 3);
    load_expect("unterminated.toml", "[model\n", "unterminated", 1);
    load_expect("emptysec.toml", "[  ]\n", "empty section", 1);
    load_expect("emptyval.toml", "[model]\nname =\n", "empty value", 2);
    load_expect("emptykey.toml", "[model]\n= 3\n", "empty key", 2);
  }
  SECTION("missing files are reported") {
    CHECK_THROWS_WITH(rcis::ConfigFile::load((dir / "absent.toml").string()),
                      Catch::Matchers::ContainsSubstring("cannot open"));
  }
}

TEST_CASE("run configuration fields", "[io]") {
  const fs::path dir = temp_root() / "runconfig";
  SECTION("an empty file yields the defaults") {
    const fs::path p = dir / "empty.toml";
    write_file(p, "# nothing to see\n");
    RunConfig rc = RunConfig::from_file(p.string());
    CHECK(rc.model == "coupled_tanks");
    CHECK(rc.monotone == "trust");
    CHECK(rc.solver.epsilon == 1.0);
    CHECK(rc.solver.strategy.kind == ControlStrategy::Kind::CsmMin);
    CHECK(rc.out_dir == "out");
    CHECK(rc.export_csv);
    CHECK(rc.export_svg);
    CHECK(rc.export_trajectories);
  }
  SECTION("every section reaches its target field") {
    const fs::path p = dir / "full.toml";
    write_file(p,
               "[model]\n"
               "name = coupled_tanks\n"
               "monotone_class = check\n"
               "A = 5.0\n"
               "d_min = -10\n"
               "[safety]\n"
               "generator = 28, 19\n"
               "ambient_upper = 30, 20\n"
               "[solver]\n"
               "epsilon = 0.5\n"
               "T_max = 100\n"
               "h = 0.005\n"
               "margin = 0.01\n"
               "tau = 0.001\n"
               "strategy = grid\n"
               "grid_points = 3\n"
               "use_beta = true\n"
               "lipschitz = 1.5\n"
               "max_iterations = 500\n"
               "grid_resolution = 0.2\n"
               "seed = 29, 19\n"
               "seed = 10, 10\n"
               "threads = 2\n"
               "[output]\n"
               "directory = results\n"
               "csv = yes\n"
               "svg = off\n"
               "trajectories = false\n");
    RunConfig rc = RunConfig::from_file(p.string());
    CHECK(rc.monotone == "check");
    CHECK(rc.tank.A == 5.0);
    CHECK(rc.tank.d_min == -10.0);
    REQUIRE(rc.generators.size() == 1);
    CHECK(rc.generators[0] == Vec{28.0, 19.0});
    REQUIRE(rc.ambient_upper.has_value());
    CHECK(*rc.ambient_upper == Vec{30.0, 20.0});
    CHECK(rc.solver.epsilon == 0.5);
    CHECK(rc.solver.T_max == 100.0);
    CHECK(rc.solver.h == 0.005);
    CHECK(rc.solver.margin == 0.01);
    CHECK(rc.solver.tau == 0.001);
    CHECK(rc.solver.strategy.kind == ControlStrategy::Kind::Grid);
    CHECK(rc.solver.strategy.grid_points_per_axis == 3);
    CHECK(rc.solver.use_beta);
    REQUIRE(rc.solver.lipschitz.has_value());
    CHECK(*rc.solver.lipschitz == 1.5);
    CHECK(rc.solver.max_iterations == 500);
    CHECK(rc.solver.grid_resolution == 0.2);
    REQUIRE(rc.solver.seeds.size() == 2);
    CHECK(rc.solver.seeds[1] == Vec{10.0, 10.0});
    CHECK(rc.solver.threads == 2);
    CHECK(rc.out_dir == "results");
    CHECK(rc.export_csv);
    CHECK_FALSE(rc.export_svg);
    CHECK_FALSE(rc.export_trajectories);
  }
  SECTION("rejections") {
    auto expect = [&](const std::string& name, const std::string& text,
                      const std::string& needle) {
      const fs::path p = dir / name;
      write_file(p, text);
      CHECK_THROWS_WITH(RunConfig::from_file(p.string()),
                        Catch::Matchers::ContainsSubstring(needle));
    };
    expect("badkey.toml", "[model]\nvolume = 3\n", "unknown key");
    expect("badsec.toml", "[plotting]\ncolor = red\n", "unknown section");
    expect("badnum.toml", "[solver]\nepsilon = fast\n", "expects a number");
    expect("badint.toml", "[solver]\nthreads = -2\n", "non-negative integer");
    expect("badbool.toml", "[output]\ncsv = maybe\n", "true/false");
    expect("badvec.toml", "[safety]\ngenerator = 1, two\n", "comma-separated");
    expect("badstrat.toml", "[solver]\nstrategy = annealing\n", "unknown strategy");
    expect("badmono.toml", "[model]\nmonotone_class = maybe\n", "trust or check");
    expect("badeps.toml", "[solver]\nepsilon = 0\n", "epsilon");
  }
}

TEST_CASE("model and safety construction", "[io]") {
  SECTION("the annotation survives unless a check is requested") {
    RunConfig rc;
    CHECK(rcis::build_model(rc).monotone_class == rcis::MonotoneClass::CSM);
    rc.monotone = "check";
    CHECK(rcis::build_model(rc).monotone_class == rcis::MonotoneClass::Unknown);
    rc.monotone = "trust";
    rc.model = "warp_drive";
    CHECK_THROWS_WITH(rcis::build_model(rc),
                      Catch::Matchers::ContainsSubstring("unknown model"));
  }
  SECTION("tanks default to the built-in constraint set") {
    RunConfig rc;
    rcis::LowerSet X = rcis::build_safety(rc, rcis::build_model(rc));
    CHECK(X.ambient.upper == Vec{30.0, 20.0});
    REQUIRE(X.generators.points.size() == 1);
  }
  SECTION("explicit generators are reduced to an antichain") {
    RunConfig rc;
    rc.generators = {{28.0, 15.0}, {20.0, 19.0}, {10.0, 10.0}};  // third is dominated
    rcis::LowerSet X = rcis::build_safety(rc, rcis::build_model(rc));
    CHECK(X.generators.points.size() == 2);
    CHECK(X.ambient.upper == Vec{28.0, 19.0});  // hull of the generators
  }
  SECTION("the ambient box may widen but never cut a generator") {
    RunConfig rc;
    rc.generators = {{28.0, 15.0}};
    rc.ambient_upper = Vec{30.0, 20.0};
    rcis::LowerSet X = rcis::build_safety(rc, rcis::build_model(rc));
    CHECK(X.ambient.upper == Vec{30.0, 20.0});
    rc.ambient_upper = Vec{27.0, 20.0};
    CHECK_THROWS_WITH(rcis::build_safety(rc, rcis::build_model(rc)),
                      Catch::Matchers::ContainsSubstring("falls below"));
    rc.ambient_upper = Vec{30.0};
    CHECK_THROWS_WITH(rcis::build_safety(rc, rcis::build_model(rc)),
                      Catch::Matchers::ContainsSubstring("dimension"));
  }
  SECTION("non-tank models need explicit generators") {
    RunConfig rc;
    rc.model = "linear_decay";
    CHECK_THROWS_WITH(rcis::build_safety(rc, rcis::build_model(rc)),
                      Catch::Matchers::ContainsSubstring("no [safety] generator"));
    rc.generators = {{1.0, 1.0}};  // wrong dimension for a scalar model
    CHECK_THROWS_WITH(rcis::build_safety(rc, rcis::build_model(rc)),
                      Catch::Matchers::ContainsSubstring("dimension"));
  }
}

TEST_CASE("signal serialization round trips", "[io]") {
  SECTION("constant") {
    rcis::ControlSignal s = rcis::constant_signal({1.5, -2.0});
    rcis::ControlSignal t = rcis::control_from_json(rcis::to_json(s));
    CHECK(t.kind == rcis::ControlSignal::Kind::Constant);
    CHECK(t.constant == s.constant);
    CHECK(t.offset == 0.0);
  }
  SECTION("piecewise with an evaluation shift") {
    rcis::ControlSignal s =
        rcis::shifted(rcis::piecewise_signal({0.0, 0.1, 0.25}, {{1.0}, {2.0}, {3.0}}), 0.05);
    rcis::ControlSignal t = rcis::control_from_json(rcis::to_json(s));
    CHECK(t.kind == rcis::ControlSignal::Kind::Piecewise);
    CHECK(t.piecewise.times == s.piecewise.times);
    CHECK(t.piecewise.values == s.piecewise.values);
    CHECK(t.offset == 0.05);
  }
  SECTION("periodic") {
    rcis::ControlSignal base = rcis::piecewise_signal({0.0, 0.1}, {{1.0}, {2.0}});
    rcis::ControlSignal s = rcis::periodic_signal(base.piecewise, 0.2, 0.05);
    rcis::ControlSignal t = rcis::control_from_json(rcis::to_json(s));
    CHECK(t.kind == rcis::ControlSignal::Kind::Periodic);
    CHECK(t.period_T == 0.2);
    CHECK(t.period_delta == 0.05);
    for (double tt : {0.0, 0.15, 0.5, 1.0})
      CHECK(rcis::eval_signal(t, tt) == rcis::eval_signal(s, tt));
  }
  SECTION("unknown kinds are rejected") {
    rcis::json j{{"kind", "spline"}};
    CHECK_THROWS_WITH(rcis::control_from_json(j),
                      Catch::Matchers::ContainsSubstring("unknown control kind"));
  }
}

TEST_CASE("certificate serialization round trips", "[io]") {
  rcis::FeasibilityCertificate c;
  c.x0 = {29.0, 19.0};
  c.control = rcis::constant_signal({0.0, 0.0});
  c.T = 0.4;
  c.t_dom = 0.39;
  c.delta = 0.01;
  c.eps_T = 0.000849148526935295;
  c.gamma = 0.08638586902937817;
  c.beta = 0.0002;
  rcis::FeasibilityCertificate d = rcis::certificate_from_json(rcis::to_json(c));
  CHECK(d.x0 == c.x0);
  CHECK(d.T == c.T);
  CHECK(d.t_dom == c.t_dom);
  CHECK(d.delta == c.delta);
  CHECK(d.eps_T == c.eps_T);
  CHECK(d.gamma == c.gamma);
  CHECK(d.beta == c.beta);
  CHECK(d.control.kind == rcis::ControlSignal::Kind::Constant);
  CHECK(d.control.constant == c.control.constant);
}

TEST_CASE("configuration echo round trips", "[io]") {
  RunConfig rc;
  rc.generators = {{28.0, 19.0}};
  rc.ambient_upper = Vec{30.0, 20.0};
  rc.solver.epsilon = 0.5;
  rc.solver.T_max = 100.0;
  rc.solver.h = 0.005;
  rc.solver.margin = 0.01;
  rc.solver.tau = 0.001;
  rc.solver.strategy = ControlStrategy::grid(3);
  rc.solver.use_beta = true;
  rc.solver.lipschitz = 1.5;
  rc.solver.max_iterations = 500;
  rc.solver.seeds = {{29.0, 19.0}};
  rcis::SystemModel model = rcis::build_model(rc);
  rcis::LowerSet X = rcis::build_safety(rc, model);

  RunConfig back = rcis::runconfig_from_json(rcis::to_json(rc, X));
  CHECK(back.model == rc.model);
  CHECK(back.tank.A == rc.tank.A);
  CHECK(back.generators == rc.generators);
  REQUIRE(back.ambient_upper.has_value());
  CHECK(*back.ambient_upper == *rc.ambient_upper);
  CHECK(back.solver.epsilon == 0.5);
  CHECK(back.solver.T_max == 100.0);
  CHECK(back.solver.h == 0.005);
  CHECK(back.solver.margin == 0.01);
  CHECK(back.solver.tau == 0.001);
  CHECK(back.solver.strategy.kind == ControlStrategy::Kind::Grid);
  CHECK(back.solver.strategy.grid_points_per_axis == 3);
  CHECK(back.solver.use_beta);
  REQUIRE(back.solver.lipschitz.has_value());
  CHECK(*back.solver.lipschitz == 1.5);
  CHECK(back.solver.max_iterations == 500);
  CHECK(back.solver.seeds == rc.solver.seeds);
  CHECK(back.solver.resolved_resolution() == rc.solver.resolved_resolution());

  rcis::LowerSet X2 = rcis::build_safety(back, model);
  CHECK(X2.ambient.upper == X.ambient.upper);
  CHECK(X2.generators.points == X.generators.points);
}

TEST_CASE("trajectory export columns", "[io]") {
  rcis::SystemModel tanks = rcis::coupled_tanks();
  rcis::Trajectory tr =
      rcis::simulate(tanks, {30.0, 18.0}, rcis::constant_signal({0.0, 0.0}),
                     rcis::constant_signal({0.0}), 0.02, 0.01);
  std::ostringstream os;
  rcis::write_trajectory_csv(os, tanks, tr);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "t,x1,x2,u1,u2,d1");
  REQUIRE(std::getline(is, line));
  CHECK(line == "0,30,18,0,0,0");
  std::size_t rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("region rendering", "[io]") {
  rcis::SystemModel tanks = rcis::coupled_tanks();
  rcis::LowerSet X = rcis::tank_safety_set();
  rcis::SolverConfig cfg;
  rcis::SolverResult res = rcis::compute_invariant(tanks, X, cfg);
  SECTION("all three regions and the orbit overlay appear") {
    std::vector<rcis::Trajectory> orbits;
    orbits.push_back(rcis::simulate(tanks, res.certificates[0].x0,
                                    res.certificates[0].control,
                                    rcis::constant_signal({0.0}),
                                    res.certificates[0].T, cfg.h));
    std::ostringstream os;
    rcis::render_svg(os, tanks, X, res, orbits, cfg.tau);
    const std::string svg = os.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("#9c6b30") != std::string::npos);  // certified feasible
    CHECK(svg.find("#3fa8a8") != std::string::npos);  // certified unsafe
    CHECK(svg.find("#f3d95c") != std::string::npos);  // unresolved band
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  SECTION("only planar state spaces are drawn") {
    rcis::SystemModel decay = rcis::linear_decay();
    rcis::LowerSet Xd;
    Xd.ambient = rcis::Box{{0.0}, {2.0}};
    Xd.generators.points = {{2.0}};
    rcis::SolverConfig c1;
    c1.epsilon = 0.1;
    c1.T_max = 50.0;
    rcis::SolverResult r1 = rcis::compute_invariant(decay, Xd, c1);
    std::ostringstream os;
    CHECK_THROWS_AS(rcis::render_svg(os, decay, Xd, r1, {}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("point argument parsing and exit codes", "[io]") {
  CHECK(rcis::parse_point("29,19") == Vec{29.0, 19.0});
  CHECK(rcis::parse_point(" 1.5 , -2 , 3e-1 ") == Vec{1.5, -2.0, 0.3});
  CHECK_THROWS_WITH(rcis::parse_point("1,mid,3"),
                    Catch::Matchers::ContainsSubstring("bad point component"));
  CHECK_THROWS_AS(rcis::parse_point(""), std::invalid_argument);

  CHECK(rcis::exit_code_for(rcis::Termination::GapConverged) == 0);
  CHECK(rcis::exit_code_for(rcis::Termination::EmptySet) == 0);
  CHECK(rcis::exit_code_for(rcis::Termination::IterationLimit) == 2);
  CHECK(rcis::exit_code_for(rcis::Termination::UnknownLimited) == 2);
  CHECK(rcis::exit_code_for(rcis::Termination::LatticeExhausted) == 2);
}

TEST_CASE("compute command end to end", "[io]") {
  const fs::path dir = temp_root() / "compute";
  SECTION("a converged run writes the whole result directory") {
    const fs::path out = dir / "out_a";
    const fs::path cfg = dir / "tanks.toml";
    write_file(cfg, tanks_config_text(out));
    CaptureStreams cap;
    int rcode = rcis::cmd_compute(cfg.string());
    INFO(cap.err.str());
    CHECK(rcode == 0);
    CHECK(cap.out.str().find("termination: gap_converged") != std::string::npos);
    CHECK(fs::exists(out / "result.json"));
    CHECK(fs::exists(out / "F1.csv"));
    CHECK(fs::exists(out / "F2.csv"));
    CHECK(fs::exists(out / "plot.svg"));
    CHECK(fs::exists(out / "trajectories" / "cert_000.csv"));

    rcis::json j = rcis::json::parse(slurp(out / "result.json"));
    CHECK(j.at("termination") == "gap_converged");
    CHECK(j.at("gap").get<double>() <= 1.0 + 1e-12);
    std::ifstream f1(out / "F1.csv");
    rcis::Antichain a1 = rcis::read_antichain_csv(f1);
    CHECK(a1.points.size() == j.at("f1_generators").get<std::size_t>());
    CHECK(a1.points.size() == j.at("generator_time").size());
  }
  SECTION("repeated runs write identical data files") {
    const fs::path out1 = dir / "rep1", out2 = dir / "rep2";
    const fs::path c1 = dir / "rep1.toml", c2 = dir / "rep2.toml";
    write_file(c1, tanks_config_text(out1));
    write_file(c2, tanks_config_text(out2));
    CaptureStreams cap;
    REQUIRE(rcis::cmd_compute(c1.string()) == 0);
    REQUIRE(rcis::cmd_compute(c2.string()) == 0);
    CHECK(slurp(out1 / "F1.csv") == slurp(out2 / "F1.csv"));
    CHECK(slurp(out1 / "F2.csv") == slurp(out2 / "F2.csv"));
    CHECK(slurp(out1 / "plot.svg") == slurp(out2 / "plot.svg"));
  }
  SECTION("command-line overrides land in the echo") {
    const fs::path out = dir / "out_override";
    const fs::path cfg = dir / "override.toml";
    write_file(cfg, tanks_config_text(dir / "ignored"));
    rcis::ComputeOverrides ov;
    ov.epsilon = 2.0;
    ov.out_dir = out.string();
    CaptureStreams cap;
    CHECK(rcis::cmd_compute(cfg.string(), ov) == 0);
    rcis::json j = rcis::json::parse(slurp(out / "result.json"));
    CHECK(j.at("config").at("solver").at("epsilon").get<double>() == 2.0);
    CHECK_FALSE(fs::exists(dir / "ignored" / "result.json"));
  }
  SECTION("an empty invariant still exits cleanly") {
    const fs::path out = dir / "out_drift";
    const fs::path cfg = dir / "drift.toml";
    write_file(cfg,
               "[model]\nname = constant_drift\n"
               "[safety]\ngenerator = 1\n"
               "[solver]\nepsilon = 0.1\nT_max = 10\n"
               "[output]\ndirectory = " + out.string() + "\nsvg = false\n");
    CaptureStreams cap;
    CHECK(rcis::cmd_compute(cfg.string()) == 0);
    rcis::json j = rcis::json::parse(slurp(out / "result.json"));
    CHECK(j.at("termination") == "empty");
    CHECK(j.at("f1_generators").get<std::size_t>() == 0);
    CHECK_FALSE(fs::exists(out / "plot.svg"));
  }
  SECTION("an exhausted refinement budget is a distinct exit code") {
    const fs::path out = dir / "out_budget";
    const fs::path cfg = dir / "budget.toml";
    write_file(cfg, tanks_config_text(out, "max_iterations = 1\nepsilon = 0.5\n"));
    CaptureStreams cap;
    CHECK(rcis::cmd_compute(cfg.string()) == 2);
    CHECK(cap.out.str().find("termination: iteration_limit") != std::string::npos);
  }
  SECTION("configuration failures are reported, not thrown") {
    CaptureStreams cap;
    CHECK(rcis::cmd_compute((dir / "no_such.toml").string()) == 1);
    CHECK(cap.err.str().find("error:") != std::string::npos);
  }
}

TEST_CASE("classify command", "[io]") {
  const fs::path dir = temp_root() / "classify";
  const fs::path out = dir / "out";
  const fs::path cfg = dir / "tanks.toml";
  write_file(cfg, tanks_config_text(out));
  SECTION("a feasible point prints its certificate and writes the orbit") {
    CaptureStreams cap;
    CHECK(rcis::cmd_classify(cfg.string(), "29,19") == 0);
    const std::string s = cap.out.str();
    CHECK(s.find("classification: feasible") != std::string::npos);
    CHECK(s.find("T: 0.4") != std::string::npos);
    CHECK(fs::exists(out / "classify_trajectory.csv"));
  }
  SECTION("an unsafe point reports its exit time") {
    CaptureStreams cap;
    CHECK(rcis::cmd_classify(cfg.string(), "30,19") == 0);
    const std::string s = cap.out.str();
    CHECK(s.find("classification: unsafe") != std::string::npos);
    CHECK(s.find("exit_time: 0.31") != std::string::npos);
  }
  SECTION("bad points are rejected with exit 1") {
    CaptureStreams cap;
    CHECK(rcis::cmd_classify(cfg.string(), "30.5,20") == 1);
    CHECK(cap.err.str().find("outside the safety set") != std::string::npos);
    CHECK(rcis::cmd_classify(cfg.string(), "1,2,3") == 1);
    CHECK(rcis::cmd_classify(cfg.string(), "a,b") == 1);
  }
}

TEST_CASE("verify command round trip", "[io]") {
  const fs::path dir = temp_root() / "verify";
  const fs::path out = dir / "out";
  const fs::path cfg = dir / "tanks.toml";
  write_file(cfg, tanks_config_text(out));
  {
    CaptureStreams cap;
    REQUIRE(rcis::cmd_compute(cfg.string()) == 0);
  }
  SECTION("a fresh result verifies") {
    CaptureStreams cap;
    CHECK(rcis::cmd_verify(out.string()) == 0);
    CHECK(cap.out.str().find("verified: containment holds") != std::string::npos);
  }
  SECTION("a generator outside the constraint set fails the integrity check") {
    write_file(out / "F1.csv", slurp(out / "F1.csv") + "31,20\n");
    CaptureStreams cap;
    CHECK(rcis::cmd_verify(out.string()) == 1);
    CHECK(cap.err.str().find("outside the safety set") != std::string::npos);
  }
  SECTION("a generator nobody certified fails its replay") {
    // swap the first data row for a point just past the certified frontier
    std::istringstream is(slurp(out / "F1.csv"));
    std::string header, first, rest, line;
    REQUIRE(std::getline(is, header));
    REQUIRE(std::getline(is, first));
    while (std::getline(is, line)) rest += line + "\n";
    write_file(out / "F1.csv", header + "\n30,19.5\n" + rest);
    CaptureStreams cap;
    CHECK(rcis::cmd_verify(out.string()) == 2);
    CHECK(cap.out.str().find("verification FAILED") != std::string::npos);
  }
  SECTION("missing inputs are reported") {
    CaptureStreams cap;
    CHECK(rcis::cmd_verify((dir / "nowhere").string()) == 1);
    CHECK(cap.err.str().find("missing") != std::string::npos);
  }
}
