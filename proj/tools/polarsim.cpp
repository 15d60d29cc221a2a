#include "polarsim/errors.hpp"
#include "polarsim/output.hpp"
#include "polarsim/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int exit_failure = 1;
constexpr int exit_config_error = 2;
constexpr int exit_bracket_error = 3;

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw polarsim::Error("cannot write " + path.string());
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polarsim: nonlocal boundary Keller-Segel simulations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* run_cmd = app.add_subcommand("run", "run one configuration");
    run_cmd->add_option("--config", config_path, "JSON config")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    std::string param;
    std::vector<double> values;
    unsigned threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("--config", config_path, "JSON config")->required();
    sweep_cmd->add_option("--param", param, "mass, alpha, L, gamma, C_2d or J0-scale")->required();
    sweep_cmd->add_option("--values", values, "comma separated values")->delimiter(',');
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

    double m_lo = 0.0;
    double m_hi = 0.0;
    double tol = 0.0;
    auto* bisect_cmd = app.add_subcommand("bisect", "locate the critical mass by bisection");
    bisect_cmd->add_option("--config", config_path, "JSON config")->required();
    bisect_cmd->add_option("--m-lo", m_lo, "mass expected to stay global")->required();
    bisect_cmd->add_option("--m-hi", m_hi, "mass expected to blow up")->required();
    bisect_cmd->add_option("--tol", tol, "bracket width")->required();
    bisect_cmd->add_option("--out", out_dir, "output directory")->required();
    bisect_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config_error;
    }

    try {
        const polarsim::RunConfig config = polarsim::parse_config(config_path);
        const std::filesystem::path dir(out_dir);
        if (*run_cmd) {
            const auto result = polarsim::run(config);
            polarsim::write_run_outputs(dir, result);
            std::cout << "blowup=" << (result.blowup.detected ? "true" : "false");
            if (result.blowup.detected) std::cout << " t_detect=" << polarsim::format_number(result.blowup.t_detect);
            std::cout << '\n';
        } else if (*sweep_cmd) {
            const auto p = polarsim::parse_sweep_param(param);
            const auto rows = polarsim::sweep(config, p, values, threads);
            std::filesystem::create_directories(dir);
            std::ofstream out(dir / "sweep.csv");
            if (!out) throw polarsim::Error("cannot write " + (dir / "sweep.csv").string());
            polarsim::write_sweep_csv(out, p, rows);
        } else if (*bisect_cmd) {
            const auto b = polarsim::bisect_critical_mass(config, m_lo, m_hi, tol, threads);
            std::filesystem::create_directories(dir);
            write_text(dir / "bisection.json", polarsim::bisection_json(b, tol));
            std::cout << "estimate=" << polarsim::format_number(b.estimate) << " bracket=["
                      << polarsim::format_number(b.lo) << ", " << polarsim::format_number(b.hi) << "]\n";
        }
    } catch (const polarsim::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return exit_config_error;
    } catch (const polarsim::BracketError& e) {
        std::cerr << "bracket error: " << e.what() << '\n';
        return exit_bracket_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return 0;
}
