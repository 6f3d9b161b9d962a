#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tocgeo/experiments.hpp"

using namespace tocgeo;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"tocgeo"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("linspace endpoints and counts") {
    const auto xs = linspace(-0.1, 0.1, 41);
    CHECK(xs.size() == 41);
    CHECK(xs.front() == doctest::Approx(-0.1));
    CHECK(xs.back() == doctest::Approx(0.1));
    CHECK(xs[20] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("format_double uses 12 significant digits and a dot") {
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(12.3413414949) == "12.3413414949");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
}

TEST_CASE("angle parsing") {
    CHECK(parse_angle("0.5pi") == doctest::Approx(kPi / 2.0));
    CHECK(parse_angle("pi") == doctest::Approx(kPi));
    CHECK(parse_angle("-pi/4") == doctest::Approx(-kPi / 4.0));
    CHECK(parse_angle("pi/2") == doctest::Approx(kPi / 2.0));
    CHECK(parse_angle("1.25") == doctest::Approx(1.25));
    CHECK(parse_angle("-0.5pi") == doctest::Approx(-kPi / 2.0));
    CHECK_THROWS(parse_angle("twopi"));
    CHECK_THROWS(parse_angle(""));
}

TEST_CASE("config loading, unit conversion and rejection of unknown keys") {
    const auto path = temp_file("tocgeo_test_config.ini");
    write_file(path,
               "# sample\n"
               "[device]\n"
               "omega_max_mhz = 40\n"
               "kappa_minus_khz = 8\n"
               "[gate]\n"
               "axis = y\n"
               "angle = -0.5pi\n"
               "kind = dynamical\n"
               "drag = off\n"
               "[sweep]\n"
               "steps = 21\n"
               "range = 0.05\n"
               "[integrator]\n"
               "dt_ns = 0.004\n"
               "[output]\n"
               "format = json\n");
    const RunConfig cfg = load_config(path.string());
    CHECK(cfg.omega_max == doctest::Approx(mhz(40.0)));
    CHECK(cfg.kappa_minus == doctest::Approx(khz(8.0)));
    CHECK(cfg.kappa_z == doctest::Approx(khz(4.0)));  // untouched default
    CHECK(cfg.axis == Axis::Y);
    CHECK(cfg.angle == doctest::Approx(-kPi / 2.0));
    CHECK(cfg.kind == GateKind::Dynamical);
    CHECK_FALSE(cfg.drag);
    CHECK(cfg.grid_steps == 21);
    CHECK(cfg.range == doctest::Approx(0.05));
    CHECK(cfg.dt == doctest::Approx(0.004));
    CHECK(cfg.format == OutputFormat::Json);
    std::filesystem::remove(path);
}

TEST_CASE("config errors carry the offending location") {
    const auto path = temp_file("tocgeo_bad_config.ini");

    write_file(path, "[device]\nconfusing_key = 1\n");
    CHECK_THROWS_AS(load_config(path.string()), ConfigError);
    try {
        load_config(path.string());
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
        CHECK(std::string(e.what()).find("confusing_key") != std::string::npos);
    }

    write_file(path, "omega_max_mhz = 45\n");
    CHECK_THROWS_AS(load_config(path.string()), ConfigError);  // key outside section

    write_file(path, "[sweep]\nomega_start_mhz = 60\nomega_stop_mhz = 20\n");
    CHECK_THROWS_AS(load_config(path.string()), ConfigError);  // start > stop

    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
    std::filesystem::remove(path);
}

TEST_CASE("fig1b table: ratio law row at theta = pi") {
    const auto table = run_fig1b(mhz(45.0), {kPi / 4.0, kPi / 2.0, kPi});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.columns.size() == 4);
    // TOC durations agree between the axes
    for (const auto& row : table.rows) CHECK(row[1] == doctest::Approx(row[2]));
    // theta = pi: tau_toc = tau_conv / 2
    CHECK(table.rows[2][1] == doctest::Approx(table.rows[2][3] / 2.0).epsilon(1e-12));
    // frozen check at pi/2
    CHECK(table.rows[1][1] == doctest::Approx(12.3413414949).epsilon(1e-9));
    // durations shrink toward small angles
    CHECK(table.rows[0][1] < table.rows[1][1]);
}

TEST_CASE("fig3 grid: center cell is exact and the run is reproducible") {
    const auto grid =
        run_fig3(Axis::X, kPi / 2.0, GateKind::Geometric, 0.1, 5, mhz(45.0));
    CHECK(grid.values[2][2] == doctest::Approx(1.0).epsilon(1e-9));
    const auto again =
        run_fig3(Axis::X, kPi / 2.0, GateKind::Geometric, 0.1, 5, mhz(45.0));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(grid.values[i][j] == again.values[i][j]);

    const auto table = robustness_table(grid);
    CHECK(table.rows.size() == 25);
    CHECK(table.columns == std::vector<std::string>{"delta", "epsilon", "fidelity"});

    CHECK_THROWS_AS(run_fig3(Axis::X, kPi / 2.0, GateKind::Geometric, 0.5, 5, mhz(45.0)),
                    std::invalid_argument);
}

TEST_CASE("fig4 rows carry the re-synthesized pulse parameters") {
    const auto table = run_fig4(Axis::X, kPi / 2.0, {mhz(30.0), mhz(45.0)},
                                DragCorrection{true, mhz(220.0)},
                                TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3}, 21);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][0] == doctest::Approx(45.0));
    CHECK(table.rows[1][3] == doctest::Approx(12.3413414949).epsilon(1e-9));
    CHECK(table.rows[1][4] == doctest::Approx(69.162124).epsilon(1e-6));
    for (const auto& row : table.rows) {
        CHECK(row[1] > 0.99);
        CHECK(row[1] < 1.0);
        CHECK(row[2] >= 0.0);
    }
    // slower gate at smaller peak amplitude loses more to decoherence
    CHECK(table.rows[0][1] < table.rows[1][1]);
}

TEST_CASE("fig5 drive construction marks unreachable cells invalid") {
    CoupledSystemParams params;
    params.g12 = mhz(8.0);
    params.delta1 = mhz(320.0);
    params.q1 = TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3};
    params.q2 = TransmonParams{mhz(180.0), khz(4.0), khz(4.0), 3};

    // at the synthesized operating point the scan drive matches synthesis
    const auto ref = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));
    const auto same = fig5_drive(1.3, ref.nu, params, kPi / 2.0, kPi / 2.0);
    REQUIRE(same.has_value());
    CHECK(same->duration == doctest::Approx(ref.duration).epsilon(1e-12));
    CHECK(same->eta == doctest::Approx(ref.eta).epsilon(1e-12));

    // nu too close to delta1: eta >= 0, no -pi winding
    CHECK_FALSE(fig5_drive(1.3, mhz(321.0), params, kPi / 2.0, kPi / 2.0).has_value());

    // the quoted operating point, nu = 2pi x 340 MHz exactly
    const auto cell = fig5_drive(1.3, mhz(340.0), params, kPi / 2.0, kPi / 2.0);
    REQUIRE(cell.has_value());
    CHECK(cell->duration == doctest::Approx(42.92719498).epsilon(1e-8));
}

TEST_CASE("fig5 table shape and the invalid-cell convention") {
    CoupledSystemParams params;
    params.g12 = mhz(8.0);
    params.delta1 = mhz(320.0);
    params.q1 = TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3};
    params.q2 = TransmonParams{mhz(180.0), khz(4.0), khz(4.0), 3};
    const auto table = run_fig5(SweepSpec{1.3, 1.3, 1}, SweepSpec{mhz(321.0), mhz(340.0), 2},
                                params, kPi / 2.0, kPi / 2.0, 3);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.columns ==
          std::vector<std::string>{"beta", "nu_mhz", "fidelity", "T_ns", "valid"});
    CHECK(table.rows[0][4] == 0.0);  // nu = 321 MHz cell invalid
    CHECK(std::isnan(table.rows[0][2]));
    CHECK(table.rows[1][4] == 1.0);
    CHECK(table.rows[1][2] > 0.99);
}

TEST_CASE("worker count does not change a single bit of the averages") {
    CoupledSystemParams params;
    params.g12 = mhz(8.0);
    params.delta1 = mhz(320.0);
    params.q1 = TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3};
    params.q2 = TransmonParams{mhz(180.0), khz(4.0), khz(4.0), 3};
    const auto drive = synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, mhz(8.0), 1.3, mhz(320.0));

    setenv("TOCGEO_WORKERS", "1", 1);
    const auto serial = avg_gate_fidelity_2q(drive, params, 9);
    const auto pulse = synth_single_qubit_toc(Axis::X, kPi / 2.0, mhz(45.0));
    const auto serial1q = avg_gate_fidelity_1q(pulse, DragCorrection{true, mhz(220.0)},
                                               params.q1, 31);
    setenv("TOCGEO_WORKERS", "4", 1);
    const auto parallel = avg_gate_fidelity_2q(drive, params, 9);
    const auto parallel1q = avg_gate_fidelity_1q(pulse, DragCorrection{true, mhz(220.0)},
                                                 params.q1, 31);
    unsetenv("TOCGEO_WORKERS");

    CHECK(serial.value == parallel.value);  // bitwise
    CHECK(serial.mean_leakage == parallel.mean_leakage);
    CHECK(serial1q.value == parallel1q.value);
}

TEST_CASE("fig5 alternate axes sweep derives nu per cell") {
    CoupledSystemParams params;
    params.g12 = mhz(8.0);
    params.delta1 = mhz(320.0);
    params.q1 = TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3};
    params.q2 = TransmonParams{mhz(180.0), khz(4.0), khz(4.0), 3};
    const auto table = run_fig5_delta1(SweepSpec{mhz(320.0), mhz(320.0), 1},
                                       SweepSpec{1.3, 1.3, 1}, params, kPi / 2.0,
                                       kPi / 2.0, 5);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.columns ==
          std::vector<std::string>{"delta1_mhz", "beta", "nu_mhz", "fidelity", "T_ns",
                                   "valid"});
    CHECK(table.rows[0][0] == doctest::Approx(320.0));
    CHECK(table.rows[0][2] == doctest::Approx(340.164409661).epsilon(1e-8));
    CHECK(table.rows[0][5] == 1.0);
    CHECK(table.rows[0][3] > 0.99);
}

TEST_CASE("a high-fidelity neighborhood surrounds the two-qubit operating point") {
    // Device-parameter cells near (delta1 = 2pi x 320 MHz, beta = 1.3), with
    // the drive re-derived per cell, stay at or above 99.80%.
    CoupledSystemParams params;
    params.g12 = mhz(8.0);
    params.q1 = TransmonParams{mhz(220.0), khz(4.0), khz(4.0), 3};
    params.q2 = TransmonParams{mhz(180.0), khz(4.0), khz(4.0), 3};
    const double cells[][2] = {{320.0, 1.30}, {322.0, 1.30}, {320.0, 1.28}};
    for (const auto& cell : cells) {
        params.delta1 = mhz(cell[0]);
        const auto drive =
            synth_two_qubit_toc(kPi / 2.0, kPi / 2.0, params.g12, cell[1], params.delta1);
        const auto report = avg_gate_fidelity_2q_process(drive, params, 441);
        CAPTURE(cell[0]);
        CAPTURE(cell[1]);
        CHECK(report.value >= 0.9980);
        CHECK(report.value < 1.0);
    }
}

TEST_CASE("csv writer emits a header and 12-digit values") {
    ResultTable table;
    table.columns = {"a", "b"};
    table.rows = {{1.0, 0.5}, {2.0, 1.0 / 3.0}};
    std::ostringstream out;
    write_csv(table, out);
    CHECK(out.str() == "a,b\n1,0.5\n2,0.333333333333\n");
}

TEST_CASE("json writer embeds the manifest and null for NaN") {
    ResultTable table;
    table.columns = {"x"};
    table.rows = {{std::numeric_limits<double>::quiet_NaN()}};
    table.manifest = {{"command", "test"}, {"version", kVersion}};
    std::ostringstream out;
    write_json(table, out);
    CHECK(out.str().find("\"command\": \"test\"") != std::string::npos);
    CHECK(out.str().find("null") != std::string::npos);
}

TEST_CASE("cli: synth prints parameters and exits cleanly") {
    CHECK(run_cli({"synth", "--axis", "x", "--angle", "0.5pi", "--omega-max", "45"}) == 0);
    CHECK(run_cli({"synth", "--two-qubit", "--beta", "1.3"}) == 0);
}

TEST_CASE("cli: fig3 writes byte-identical CSV across runs") {
    const auto out1 = temp_file("tocgeo_fig3_a.csv");
    const auto out2 = temp_file("tocgeo_fig3_b.csv");
    CHECK(run_cli({"fig3", "--kind", "geometric", "--axis", "x", "--angle", "0.5pi",
                   "--range", "0.1", "--steps", "5", "--out", out1.string().c_str()}) == 0);
    CHECK(run_cli({"fig3", "--kind", "geometric", "--axis", "x", "--angle", "0.5pi",
                   "--range", "0.1", "--steps", "5", "--out", out2.string().c_str()}) == 0);
    const std::string a = read_file(out1), b = read_file(out2);
    CHECK(!a.empty());
    CHECK(a == b);
    // 25 rows + header
    CHECK(std::count(a.begin(), a.end(), '\n') == 26);
    // manifest sidecar captures the device numbers
    const std::string manifest = read_file(out1.string() + ".manifest.json");
    CHECK(manifest.find("device.omega_max_mhz") != std::string::npos);
    CHECK(manifest.find("\"45\"") != std::string::npos);
    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
    std::filesystem::remove(out1.string() + ".manifest.json");
}

TEST_CASE("cli: config file errors exit with code 2") {
    const auto path = temp_file("tocgeo_cli_bad.ini");
    write_file(path, "[device]\nbogus = 1\n");
    CHECK(run_cli({"fig1b", "--config", path.string().c_str()}) == 2);
    CHECK(run_cli({"fig1b", "--config", "/no/such/file.ini"}) == 2);
    CHECK(run_cli({"fig3", "--range", "0.5"}) == 2);
    CHECK(run_cli({"nonsense"}) == 2);
    std::filesystem::remove(path);
}

TEST_CASE("cli: a hopeless step size fails its convergence check with code 3") {
    CHECK(run_cli({"fidelity", "--n-states", "3", "--dt", "6", "--convergence-check"}) == 3);
}

TEST_CASE("cli: fig1b json output to stdout parses") {
    const auto out = temp_file("tocgeo_fig1b.json");
    CHECK(run_cli({"fig1b", "--theta-count", "4", "--format", "json", "--out",
                   out.string().c_str()}) == 0);
    const std::string text = read_file(out);
    CHECK(text.find("\"columns\"") != std::string::npos);
    CHECK(text.find("tau_conventional_ns") != std::string::npos);
    std::filesystem::remove(out);
}

}  // TEST_SUITE
