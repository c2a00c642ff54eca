#include <doctest.h>

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "nslab/operators.hpp"
#include "nslab/snapshot_io.hpp"

using namespace nslab;
using namespace nslab::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path config_dir() {
  const char* d = std::getenv("NSLAB_CONFIG_DIR");
  return d ? fs::path(d) : fs::path("tools/configs");
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("nslab_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

Overrides out_to(const fs::path& p) {
  Overrides o;
  o.out = p.string();
  return o;
}

int run_quiet(const fs::path& cfg, const Overrides& o, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cmd_run(cfg, o, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

const char* kShipped[] = {"stokes_single_mode", "taylor_green", "linearized_vs_expm", "long_horizon_decay",
                          "convergence_stokes_forced", "convergence_stokes_forced_rk4",
                          "convergence_taylor_green_grid"};

}  // namespace

TEST_CASE("git-style blob hashes") {
  CHECK(blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("shipped configs parse and round-trip") {
  for (const char* name : kShipped) {
    CAPTURE(name);
    const RunConfig c = load_config(config_dir() / (std::string(name) + ".json"));
    const json once = config_to_json(c);
    const json twice = config_to_json(config_from_json(once));
    CHECK(once == twice);
    CHECK(json::parse(once.dump()) == once);
  }
}

TEST_CASE("config validation") {
  json base = read_json(config_dir() / "stokes_single_mode.json");
  auto rejects = [&](const std::function<void(json&)>& edit, const std::string& needle) {
    json j = base;
    edit(j);
    try {
      (void)config_from_json(j);
      FAIL("accepted: " << j.dump());
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  rejects([](json& j) { j["schema"] = "nslab.run/0"; }, "schema");
  rejects([](json& j) { j["grid"]["n"] = 7; }, "grid");
  rejects([](json& j) { j["grid"]["spacing"] = 1; }, "unknown key");
  rejects([](json& j) { j["physics"]["mu"] = 0; }, "physics.mu");
  rejects([](json& j) { j["physics"]["equation"] = "euler"; }, "euler");
  rejects([](json& j) { j["initial"]["kind"] = "vortex_ring"; }, "vortex_ring");
  rejects([](json& j) { j["scheme"]["dt"] = 2.0; }, "scheme.dt");
  rejects([](json& j) { j["scheme"]["name"] = "leapfrog"; }, "leapfrog");
  rejects([](json& j) { j["monitors"].push_back("unknown_monitor"); }, "unknown monitor");
  rejects([](json& j) { j["monitors"].push_back("energy_estimate"); }, "listed twice");
  rejects([](json& j) { j["monitors"][4]["params"]["r"] = json::array({3}); }, "r > 3");
  rejects([](json& j) { j["monitors"][4]["params"]["s"] = 2; }, "unknown parameter");
  rejects([](json& j) { j["monitors"].push_back("linearized_bound"); }, "linearized");
  rejects([](json& j) { j["monitors"].push_back(json{{"name", "l2r"}, {"params", {{"r", 1.5}}}}); }, "r > 1.5");
  rejects([](json& j) { j["output"]["formats"] = json::array({"xml"}); }, "formats");
  rejects([](json& j) { j["output"]["checkpoint_interval"] = 0.5; }, "snapshots");
  rejects([](json& j) { j["advecting"] = json{{"kind", "single_mode"}}; }, "advecting");

  json lin = read_json(config_dir() / "linearized_vs_expm.json");
  lin["monitors"].push_back("energy_identity");
  CHECK_THROWS_AS(config_from_json(lin), ConfigError);

  json minimal{{"schema", kConfigSchema}};
  const RunConfig d = config_from_json(minimal);
  CHECK(d.grid.n == 16);
  CHECK(d.scheme.scheme == Scheme::if_rk4);
  CHECK(d.monitors.empty());
}

TEST_CASE("environment overrides") {
  ::setenv("NSLAB_OUT", "/tmp/from_env", 1);
  ::setenv("NSLAB_SEED", "17", 1);
  ::setenv("NSLAB_THREADS", "3", 1);
  Overrides flags;
  flags.seed = 5;
  const Overrides o = with_environment(flags);
  CHECK(*o.out == "/tmp/from_env");
  CHECK(*o.seed == 5);
  CHECK(*o.threads == 3);
  ::setenv("NSLAB_SEED", "-4", 1);
  CHECK_THROWS_AS(with_environment({}), ConfigError);
  ::setenv("NSLAB_SEED", "12abc", 1);
  CHECK_THROWS_AS(with_environment({}), ConfigError);
  ::setenv("NSLAB_THREADS", "0", 1);
  ::unsetenv("NSLAB_SEED");
  CHECK_THROWS_AS(with_environment({}), ConfigError);
  ::unsetenv("NSLAB_OUT");
  ::unsetenv("NSLAB_THREADS");
  const Overrides none = with_environment({});
  CHECK(!none.out);
  CHECK(!none.seed);
  CHECK(!none.threads);
}

TEST_CASE("run: single-mode Stokes passes with a positive energy margin") {
  TempDir tmp("stokes");
  const int code = run_quiet(config_dir() / "stokes_single_mode.json", out_to(tmp.path));
  CHECK(code == kExitOk);
  const json rep = read_json(tmp.path / "reports" / "energy_estimate.json");
  CHECK(rep.at("min_margin").get<double>() > 0.0);
  CHECK(rep.at("schema") == "nslab.report/1");
  CHECK(fs::exists(tmp.path / "reports" / "energy_estimate.csv"));
  CHECK(fs::exists(tmp.path / "snapshots" / "u_final.snap"));

  const json man = read_json(tmp.path / "manifest.json");
  CHECK(man.at("schema") == "nslab.manifest/1");
  CHECK(man.at("status") == "pass");
  CHECK(man.at("input_hash") == blob_sha1(man.at("config").dump(2)));
  CHECK(man.at("reports").size() == 5);
  for (const auto& o : man.at("outputs"))
    CHECK(o.at("sha1") == blob_sha1(slurp(tmp.path / o.at("path").get<std::string>())));
  bool saw_literature = false;
  for (const auto& c : man.at("constants")) {
    const std::string p = c.at("provenance");
    CHECK((p == "literature" || p == "exact" || p == "empirical"));
    saw_literature = saw_literature || p == "literature";
  }
  CHECK(saw_literature);
}

TEST_CASE("run: an lps monitor with r = 3 is a config error") {
  TempDir tmp("lps");
  json j = read_json(config_dir() / "stokes_single_mode.json");
  j["monitors"] = json::array({json{{"name", "lps"}, {"params", {{"r", json::array({3.0})}}}}});
  std::string err;
  CHECK(run_quiet(write_config(tmp.path, "c.json", j), out_to(tmp.path / "out"), &err) == kExitConfigError);
  CHECK(err.find("r > 3") != std::string::npos);
  CHECK(!fs::exists(tmp.path / "out" / "manifest.json"));
}

TEST_CASE("run: unreadable or malformed config files") {
  TempDir tmp("bad");
  CHECK(run_quiet(tmp.path / "missing.json", {}) == kExitConfigError);
  std::ofstream(tmp.path / "broken.json") << "{ not json";
  CHECK(run_quiet(tmp.path / "broken.json", {}) == kExitConfigError);
  json j{{"schema", kConfigSchema}, {"initial", {{"kind", "single_mode"}, {"wavenumber", 9}}}, {"grid", {{"n", 8}}}};
  std::string err;
  CHECK(run_quiet(write_config(tmp.path, "c.json", j), out_to(tmp.path / "o"), &err) == kExitConfigError);
}

TEST_CASE("run: blow-up is a numerical abort") {
  TempDir tmp("abort");
  json j{{"schema", kConfigSchema},
         {"grid", {{"n", 8}}},
         {"physics", {{"equation", "navier_stokes"}, {"mu", 1e-3}, {"T", 10.0}}},
         {"initial", {{"kind", "taylor_green_3d"}}},
         {"forcing", {{"terms", json::array({json{{"shape", "abc"}, {"amplitude", 1e4}}})}}},
         {"scheme", {{"name", "if_rk2"}, {"dt", 0.5}}},
         {"monitors", json::array({"energy_estimate"})}};
  CHECK(run_quiet(write_config(tmp.path, "c.json", j), out_to(tmp.path / "o")) == kExitNumericalAbort);
  CHECK(read_json(tmp.path / "o" / "manifest.json").at("status") == "numerical_abort");
}

TEST_CASE("run: a failing monitor gives exit code 1") {
  TempDir tmp("fail");
  json j = read_json(config_dir() / "stokes_single_mode.json");
  j["scheme"]["dt"] = 0.1;
  j["scheme"]["snapshot_every"] = 1;
  j["monitors"] = json::array({json{{"name", "energy_identity"}, {"params", {{"tolerance", 1e-15}}}}});
  CHECK(run_quiet(write_config(tmp.path, "c.json", j), out_to(tmp.path / "o")) == kExitMonitorFailure);
  CHECK(read_json(tmp.path / "o" / "manifest.json").at("status") == "monitor_failure");
}

TEST_CASE("run: outputs are bit-identical across runs") {
  TempDir tmp("det");
  json j = read_json(config_dir() / "stokes_single_mode.json");
  j["initial"] = json{{"kind", "random_band_limited"}, {"band", 3}};
  j["physics"]["equation"] = "navier_stokes";
  j["scheme"]["dt"] = 0.01;
  j["monitors"] = json::array({"energy_estimate", "lps"});
  j["output"]["snapshots"] = "all";
  const fs::path cfg = write_config(tmp.path, "c.json", j);
  Overrides o = out_to(tmp.path / "o");
  o.seed = 11;
  REQUIRE(run_quiet(cfg, o) == kExitOk);
  const std::string first = slurp(tmp.path / "o" / "manifest.json");
  REQUIRE(run_quiet(cfg, o) == kExitOk);
  CHECK(slurp(tmp.path / "o" / "manifest.json") == first);
  CHECK(read_json(tmp.path / "o" / "manifest.json").at("config").at("initial").at("seed") == 11);

  o.seed = 12;
  REQUIRE(run_quiet(cfg, o) == kExitOk);
  CHECK(slurp(tmp.path / "o" / "manifest.json") != first);
}

TEST_CASE("run: resume and checkpointing reproduce an uninterrupted run") {
  TempDir tmp("resume");
  json j = read_json(config_dir() / "stokes_single_mode.json");
  j["physics"]["equation"] = "navier_stokes";
  j["initial"] = json{{"kind", "taylor_green_3d"}};
  j["grid"]["n"] = 12;
  j["scheme"]["dt"] = 0.01;
  j["monitors"] = json::array({"energy_identity", "energy_estimate"});
  j["output"]["snapshots"] = "all";

  REQUIRE(run_quiet(write_config(tmp.path, "full.json", j), out_to(tmp.path / "full")) == kExitOk);

  json half = j;
  half["physics"]["T"] = 0.5;
  REQUIRE(run_quiet(write_config(tmp.path, "half.json", half), out_to(tmp.path / "split")) == kExitOk);
  Overrides r = out_to(tmp.path / "split");
  r.resume = true;
  REQUIRE(run_quiet(write_config(tmp.path, "full2.json", j), r) == kExitOk);
  CHECK(read_json(tmp.path / "split" / "manifest.json").at("resumed_from") == doctest::Approx(0.5));

  json chunked = j;
  chunked["output"]["checkpoint_interval"] = 0.3;
  REQUIRE(run_quiet(write_config(tmp.path, "chunk.json", chunked), out_to(tmp.path / "chunk")) == kExitOk);

  const auto last = [](const fs::path& dir) {
    std::size_t i = 0;
    char buf[32];
    for (;; ++i) {
      std::snprintf(buf, sizeof buf, "u_%06zu.snap", i + 1);
      if (!fs::exists(dir / "snapshots" / buf)) break;
    }
    std::snprintf(buf, sizeof buf, "u_%06zu.snap", i);
    return read_snapshot(dir / "snapshots" / buf);
  };
  const Snapshot a = last(tmp.path / "full"), b = last(tmp.path / "split"), c = last(tmp.path / "chunk");
  CHECK(a.header.time == doctest::Approx(1.0));
  CHECK(b.header.time == doctest::Approx(1.0));
  CHECK(c.header.time == doctest::Approx(1.0));
  const auto ua = snapshot_to_vector(a);
  const double scale = spectral_l2(ua);
  CHECK(spectral_l2(snapshot_to_vector(b) - ua) <= 1e-12 * scale);
  CHECK(spectral_l2(snapshot_to_vector(c) - ua) <= 1e-12 * scale);

  Overrides missing = out_to(tmp.path / "nothing");
  missing.resume = true;
  CHECK(run_quiet(write_config(tmp.path, "full3.json", j), missing) == kExitConfigError);
}

TEST_CASE("run: the shipped reference configs pass") {
  for (const char* name : {"linearized_vs_expm", "long_horizon_decay"}) {
    CAPTURE(name);
    TempDir tmp(name);
    CHECK(run_quiet(config_dir() / (std::string(name) + ".json"), out_to(tmp.path)) == kExitOk);
  }
}

TEST_CASE("run: Taylor-Green reference config at N = 32 within 60 s") {
  TempDir tmp("tg");
  const auto start = std::chrono::steady_clock::now();
  CHECK(run_quiet(config_dir() / "taylor_green.json", out_to(tmp.path)) == kExitOk);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("taylor_green: " << secs << " s");
  CHECK(secs < 60.0);
  CHECK(read_json(tmp.path / "manifest.json").at("config").at("grid").at("n") == 32);
}

TEST_CASE("check suites") {
  for (const char* s : {"projector", "calculus", "inequalities", "identities"}) {
    CAPTURE(s);
    std::ostringstream out, err;
    CHECK(cmd_check(s, out, err) == kExitOk);
    CHECK(out.str().find("[FAIL]") == std::string::npos);
  }
  std::ostringstream out, err;
  CHECK(cmd_check("everything", out, err) == kExitConfigError);
  CHECK(run_checks("projector").size() == 4);
}

TEST_CASE("convergence: time-step ladders recover the scheme order") {
  const RunConfig rk2 = load_config(config_dir() / "convergence_stokes_forced.json");
  const auto a = convergence(rk2, LadderKind::dt, {4e-3, 2e-3, 1e-3});
  CHECK(a.reference == "exact");
  CHECK(a.monotone);
  CHECK(a.fitted_order == doctest::Approx(2.0).epsilon(0.05));

  const RunConfig rk4 = load_config(config_dir() / "convergence_stokes_forced_rk4.json");
  const auto b = convergence(rk4, LadderKind::dt, {0.05, 0.2, 0.1}, 2);
  CHECK(b.entries.front().dt == 0.2);
  CHECK(std::abs(b.fitted_order - 4.0) <= 0.2);

  // Same numbers whatever the parallelism.
  const auto c = convergence(rk4, LadderKind::dt, {0.2, 0.1, 0.05}, 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(c.entries[i].error == b.entries[i].error);

  CHECK_THROWS_AS(convergence(rk2, LadderKind::dt, {1e-3, 2e-3}), ConfigError);
  CHECK_THROWS_AS(convergence(rk2, LadderKind::dt, {1e-3, 1e-3, 2e-3}), ConfigError);
  CHECK_THROWS_AS(convergence(rk2, LadderKind::n, {8, 12.5, 16}), ConfigError);
}

TEST_CASE("convergence: grid ladder on a smooth flow") {
  const RunConfig tg = load_config(config_dir() / "convergence_taylor_green_grid.json");
  const auto r = convergence(tg, LadderKind::n, {8, 12, 16, 24});
  CHECK(r.reference == "finest");
  CHECK(r.monotone);
  CHECK(r.entries.back().error == 0.0);
  CHECK(r.entries[2].error < 1e-4);
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("n,error,quantity\n", 0) == 0);
}

TEST_CASE("convergence command writes its outputs") {
  TempDir tmp("conv");
  std::ostringstream out, err;
  Overrides o = out_to(tmp.path);
  CHECK(cmd_convergence(config_dir() / "convergence_stokes_forced.json", LadderKind::dt, {4e-3, 2e-3, 1e-3}, o,
                        2.0, 0.1, out, err) == kExitOk);
  CHECK(fs::exists(tmp.path / "convergence.csv"));
  CHECK(read_json(tmp.path / "convergence.json").at("schema") == "nslab.convergence/1");
  CHECK(read_json(tmp.path / "manifest.json").at("command") == "convergence");
  CHECK(cmd_convergence(config_dir() / "convergence_stokes_forced.json", LadderKind::dt, {4e-3, 2e-3, 1e-3}, o,
                        4.0, 0.1, out, err) == kExitMonitorFailure);
  CHECK(cmd_convergence(config_dir() / "convergence_stokes_forced.json", LadderKind::dt, {4e-3, 2e-3}, o,
                        std::nullopt, 0.1, out, err) == kExitConfigError);
}
