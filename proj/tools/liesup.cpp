#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liesup/cli.hpp"

int main(int argc, char** argv) {
    using namespace liesup;
    CLI::App app{"Lie systems and (mixed) superposition rules"};
    app.require_subcommand(1);

    std::string file;
    std::string out;
    std::size_t cap = 64;
    long order = 2;
    std::string which = "gl";
    std::uint64_t seed = 0;
    cli::IntegrateOptions iopt;
    std::string method = "rkf45";

    auto* closure = app.add_subcommand("closure", "Lie closure of a generators file");
    closure->add_option("file", file, "generators document")->required();
    closure->add_option("--cap", cap, "maximum closure dimension")->capture_default_str();
    closure->add_option("--out", out, "write the report here instead of stdout");

    auto* hierarchy = app.add_subcommand("hierarchy", "print the order-s Riccati hierarchy member");
    hierarchy->add_option("--order", order, "s in [2, 8]")->required();

    auto* basis = app.add_subcommand("basis", "print the gl(s) basis or the linear generators");
    basis->add_option("--order", order, "s")->required();
    basis->add_option("which", which, "gl or linear")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("file", file, "suite document")->required();
    verify->add_option("--out", out, "write the report here instead of stdout");
    auto* seed_opt = verify->add_option("--seed", seed, "override every item's seed");

    auto* integrate = app.add_subcommand("integrate", "integrate a system spec to CSV");
    integrate->add_option("file", file, "system spec document")->required();
    integrate->add_option("--x0", iopt.x0, "initial state, comma separated")->delimiter(',')->allow_extra_args(false);
    integrate->add_option("--tspan", iopt.tspan, "t0,t1")->delimiter(',')->allow_extra_args(false);
    integrate->add_option("--method", method, "rk4 or rkf45")->check(CLI::IsMember({"rk4", "rkf45"}))->capture_default_str();
    integrate->add_option("--rtol", iopt.cfg.rtol)->capture_default_str();
    integrate->add_option("--atol", iopt.cfg.atol)->capture_default_str();
    integrate->add_option("--step", iopt.cfg.step, "RK4 step / RKF45 initial step")->capture_default_str();
    integrate->add_option("--out", out, "CSV path (default stdout)");
    integrate->add_flag("--dump-spec", iopt.dump_spec, "print the canonical spec and exit");

    auto* report = app.add_subcommand("report", "pretty-print a report document");
    report->add_option("file", file, "report document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::InputError;
    }

    const std::optional<std::string> out_path = out.empty() ? std::nullopt : std::optional<std::string>(out);
    if (*closure) return cli::cmd_closure(file, cap, out_path, std::cout, std::cerr);
    if (*hierarchy) return cli::cmd_hierarchy(order, std::cout, std::cerr);
    if (*basis) return cli::cmd_basis(order, which, std::cout, std::cerr);
    if (*verify) {
        return cli::cmd_verify(file, out_path, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt, std::cout, std::cerr);
    }
    if (*integrate) {
        iopt.cfg.method = parse_method(method);
        iopt.out = out_path;
        return cli::cmd_integrate(file, iopt, std::cout, std::cerr);
    }
    if (*report) return cli::cmd_report(file, std::cout, std::cerr);
    return cli::InputError;
}
