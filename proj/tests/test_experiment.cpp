#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "starpls/experiment.hpp"
#include "starpls/parallel.hpp"

using namespace starpls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small instance that keeps the full pipeline in the millisecond range.
const char* kTinyConfig = R"({
    "P_tmax": 1.0,
    "M": 4,
    "N_t": 2,
    "sigma2_dBm": -30,
    "max_outer": 3,
    "max_ceo": 5,
    "tol_outer": 1e-2
})";

}  // namespace

TEST_CASE("config parsing: presets, unit conversions and defaults") {
    const SystemConfig desk =
        config_from_json_text(R"({"preset":"desk_scale","P_tmax_dBm":30})");
    CHECK(desk.m == 16);
    CHECK(desk.n_t == 4);
    CHECK(desk.lambda_bits == 2);
    CHECK(desk.p_tmax == doctest::Approx(1.0).epsilon(1e-12));

    const SystemConfig paper =
        config_from_json_text(R"({"preset":"paper_scale","P_tmax_dBm":30})");
    CHECK(paper.m == 64);
    CHECK(paper.n_t == 9);

    const SystemConfig noisy = config_from_json_text(
        R"({"P_tmax":2.0,"sigma2_dBm":-110})");
    CHECK(noisy.sigma2_b == doctest::Approx(1e-14).epsilon(1e-12));
    CHECK(noisy.sigma2_c == doctest::Approx(1e-14).epsilon(1e-12));
    CHECK(noisy.sigma2_e == doctest::Approx(1e-14).epsilon(1e-12));

    // default dual step scales inversely with the budget
    const SystemConfig p4 = config_from_json_text(R"({"P_tmax":4.0})");
    CHECK(p4.subgrad_step == doctest::Approx(0.0025).epsilon(1e-12));
    const SystemConfig st =
        config_from_json_text(R"({"P_tmax":4.0,"subgrad_step":0.5})");
    CHECK(st.subgrad_step == 0.5);

    const SystemConfig caps = config_from_json_text(
        R"({"P_tmax":1.0,"M":8,"LAMBDA_BITS":3,"Seed":17})");
    CHECK(caps.m == 8);
    CHECK(caps.lambda_bits == 3);
    CHECK(caps.seed == 17);
}

TEST_CASE("config parsing: rejections") {
    CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text("[1,2]"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"M":16})"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"P_tmax":1,"bogus":3})"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"P_tmax":1,"m":8,"M":8})"),
                    ConfigError);
    CHECK_THROWS_AS(
        config_from_json_text(R"({"P_tmax":1,"P_tmax_dBm":30})"),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json_text(R"({"P_tmax":1,"sigma2_b":1e-14,"sigma2_dBm":-110})"),
        ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"P_tmax":1,"omega1":0})"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"P_tmax":1,"M":2.5})"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"P_tmax":1,"preset":"mars"})"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

    try {
        config_from_json_text(R"({"M":16})", "probe.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("P_tmax") != std::string::npos);
    }
}

TEST_CASE("sweep specs parse with defaults and strict keys") {
    const SweepSpec s =
        sweep_spec_from_json_text(R"({"axis":"M","values":[8,16]})");
    CHECK(s.axis == "M");
    REQUIRE(s.values.size() == 2);
    CHECK(s.schemes.size() == 3);
    REQUIRE(s.seeds.size() == 1);
    CHECK(s.seeds[0] == 1);

    const SweepSpec t = sweep_spec_from_json_text(
        R"({"axis":"P1","values":[0.25,0.5],"schemes":["zf"],"seeds":[3,4]})");
    CHECK(t.schemes.size() == 1);
    CHECK(t.schemes[0] == Scheme::zf);
    CHECK(t.seeds[1] == 4);

    CHECK_THROWS_AS(sweep_spec_from_json_text(R"({"values":[1]})"), ConfigError);
    CHECK_THROWS_AS(sweep_spec_from_json_text(R"({"axis":"M"})"), ConfigError);
    CHECK_THROWS_AS(
        sweep_spec_from_json_text(R"({"axis":"M","values":[8],"x":1})"),
        ConfigError);
    CHECK_THROWS_AS(
        sweep_spec_from_json_text(R"({"axis":"frequency","values":[1]})"),
        ConfigError);
    CHECK_THROWS_AS(
        sweep_spec_from_json_text(
            R"({"axis":"M","values":[8],"schemes":["mrc"]})"),
        ConfigError);
}

TEST_CASE("axis application touches exactly one knob") {
    const SystemConfig base = config_from_json_text(R"({"P_tmax":1.0})");

    CHECK(apply_axis(base, "M", 24).m == 24);
    CHECK(apply_axis(base, "N_t", 6).n_t == 6);
    CHECK(apply_axis(base, "lambda_bits", 3).lambda_bits == 3);
    CHECK(apply_axis(base, "P1", 0.25).p1 == 0.25);
    CHECK(apply_axis(base, "P_tmax_dBm", 0.0).p_tmax ==
          doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(apply_axis(base, "M", 24).seed == base.seed);

    CHECK_THROWS_AS(apply_axis(base, "M", 16.5), ConfigError);
    CHECK_THROWS_AS(apply_axis(base, "carrier", 1.0), ConfigError);
}

TEST_CASE("summary statistics use the population convention") {
    std::vector<ResultRecord> recs(4);
    for (int i = 0; i < 3; ++i) {
        recs[i].scheme = "proposed";
        recs[i].axis = "M";
        recs[i].value = 8.0;
        recs[i].seed = static_cast<std::uint64_t>(i + 1);
        recs[i].objective = 1.0 + i;
        recs[i].r_b_sec = 0.5;
        recs[i].r_c = 0.25;
        recs[i].ok = true;
    }
    recs[3] = recs[2];
    recs[3].ok = false;  // failed points are excluded
    recs[3].objective = 1000.0;

    const auto rows = summarize(recs);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_ok == 3);
    CHECK(rows[0].objective_mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rows[0].objective_std ==
          doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(rows[0].r_b_sec_mean == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(emit_summary(recs).find("proposed") != std::string::npos);
}

TEST_CASE("csv doubles survive a round trip") {
    CHECK(format_csv_double(1.0) == "1");
    CHECK(format_csv_double(0.1) == "0.10000000000000001");
    for (double v : {3.141592653589793, -2.5e-14, 1e300, 0.3333333333333333}) {
        CHECK(std::strtod(format_csv_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("sweeps are ordered, reproducible and scheduling-independent") {
    const SystemConfig base = config_from_json_text(kTinyConfig);
    const SweepSpec spec = sweep_spec_from_json_text(
        R"({"axis":"M","values":[2,4],"schemes":["proposed","zf"],"seeds":[1,2]})");

    const auto recs = run_sweep(base, spec);
    REQUIRE(recs.size() == 8);

    // (scheme, value, seed) in declaration order
    CHECK(recs[0].scheme == "proposed");
    CHECK(recs[0].value == 2.0);
    CHECK(recs[0].seed == 1);
    CHECK(recs[1].seed == 2);
    CHECK(recs[2].value == 4.0);
    CHECK(recs[4].scheme == "zf");
    for (const auto& r : recs) {
        CHECK(r.ok);
        CHECK(r.status == "ok");
        CHECK(r.axis == "M");
        CHECK(std::isfinite(r.objective));
    }

    const auto again = run_sweep(base, spec);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].objective == again[i].objective);
        CHECK(recs[i].r_b_sec == again[i].r_b_sec);
        CHECK(recs[i].outer_iterations == again[i].outer_iterations);
    }

    set_thread_budget(3);
    const auto threaded = run_sweep(base, spec);
    set_thread_budget(0);
    for (std::size_t i = 0; i < recs.size(); ++i)
        CHECK(recs[i].objective == threaded[i].objective);

    // a sweep point reproduces the equivalent standalone run
    const SystemConfig cfg4 = apply_axis(base, "M", 4);
    const ChannelSet ch = generate_channels(cfg4, channel_stream(2));
    const OptResult direct = optimize(ch, cfg4, scheme_stream(2, Scheme::proposed));
    CHECK(direct.report.objective == recs[3].objective);
}

TEST_CASE("failed sweep points are recorded, not thrown") {
    const SystemConfig base = config_from_json_text(kTinyConfig);
    const SweepSpec spec = sweep_spec_from_json_text(
        R"({"axis":"N_t","values":[1],"schemes":["zf"],"seeds":[1]})");

    const auto recs = run_sweep(base, spec);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].ok);
    CHECK(recs[0].status != "ok");
    CHECK(!std::isfinite(recs[0].objective));
}

TEST_CASE("sweep outputs are written once and byte-stable") {
    const SystemConfig base = config_from_json_text(kTinyConfig);
    const SweepSpec spec = sweep_spec_from_json_text(
        R"({"axis":"M","values":[2,4],"schemes":["proposed"],"seeds":[1]})");
    const auto recs = run_sweep(base, spec);

    const fs::path dir1 = fs::temp_directory_path() / "starpls_sweep_a";
    const fs::path dir2 = fs::temp_directory_path() / "starpls_sweep_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    write_sweep_outputs(dir1.string(), base, spec, recs);
    write_sweep_outputs(dir2.string(), base, spec, recs);

    for (const char* name : {"records.csv", "summary.csv", "summary.json"}) {
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    }
    CHECK(fs::exists(dir1 / "timings.csv"));
    CHECK(fs::exists(dir1 / "trajectories" / "run_0000_proposed_s1.csv"));

    const std::string records = slurp(dir1 / "records.csv");
    CHECK(records.rfind("# config_hash=", 0) == 0);
    CHECK(records.find("# axis=M") != std::string::npos);
    CHECK(records.find("scheme,axis,value,seed,objective") != std::string::npos);
    CHECK(records.find("\r") == std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}
