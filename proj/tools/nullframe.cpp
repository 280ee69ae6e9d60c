// Command-line front end: run residual checks on catalog or inline scenarios,
// sweep grids, emit JSON reports and CSV tables.
//
// Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
// 3 evaluation failure (more than 10% of sample points skipped).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nullframe/checks.hpp"

namespace {

int fail_config(const std::string& what) {
    std::cerr << "config error: " << what << "\n";
    return 2;
}

nullframe::RunConfig load_config(const std::string& path, const std::vector<std::string>& tol_flags) {
    std::ifstream in(path);
    if (!in) throw nullframe::config_error("cannot open '" + path + "'");
    nullframe::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw nullframe::config_error(std::string("JSON parse failure: ") + e.what());
    }
    nullframe::RunConfig cfg = nullframe::parse_config(j);
    for (const std::string& flag : tol_flags) {
        auto eq = flag.find('=');
        if (eq == std::string::npos)
            throw nullframe::config_error("--tol expects name=value, got '" + flag + "'");
        try {
            cfg.tolerances[flag.substr(0, eq)] = std::stod(flag.substr(eq + 1));
        } catch (const std::exception&) {
            throw nullframe::config_error("--tol value in '" + flag + "' is not a number");
        }
    }
    return cfg;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nullframe::config_error("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"null-coframe laboratory for CR structures and their spacetime lifts"};
    app.require_subcommand(1);

    auto* cat = app.add_subcommand("catalog", "catalog operations");
    bool do_list = false;
    auto* cat_list = cat->add_subcommand("list", "list built-in scenarios");
    cat_list->callback([&] { do_list = true; });

    std::string check_path, grid_path;
    std::vector<std::string> tol_flags;
    auto* chk = app.add_subcommand("check", "run checks from a JSON config");
    chk->add_option("config", check_path, "config file")->required();
    chk->add_option("--tol", tol_flags, "tolerance override name=value (repeatable)");
    auto* grd = app.add_subcommand("grid", "emit a CSV sweep from a JSON config");
    grd->add_option("config", grid_path, "config file")->required();
    grd->add_option("--tol", tol_flags, "tolerance override name=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (do_list) {
            for (const auto& e : nullframe::catalog_list()) {
                std::cout << e.name;
                if (!e.params.empty()) std::cout << "(" << e.params << ")";
                std::cout << " - " << e.summary << "\n";
            }
            return 0;
        }
        if (chk->parsed()) {
            nullframe::RunConfig cfg = load_config(check_path, tol_flags);
            nullframe::RunResult rr = nullframe::run_checks(cfg);
            write_out(cfg.out_report, rr.report.dump(2) + "\n");
            return rr.exit_code();
        }
        if (grd->parsed()) {
            nullframe::RunConfig cfg = load_config(grid_path, tol_flags);
            std::string csv = nullframe::run_grid(cfg);
            write_out(cfg.out_csv, csv);
            return 0;
        }
    } catch (const nullframe::config_error& e) {
        return fail_config(e.what());
    } catch (const nullframe::parse_error& e) {
        return fail_config(e.what());
    } catch (const nullframe::numeric_error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
