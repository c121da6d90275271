#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "twoarc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "twoarc: two-arc inverse polynomial images — endpoint certification, "
        "O(1/n) snapping, Pell pair construction and preimage tracing"};
    app.require_subcommand(0, 1);

    std::string tuple_arg, out_path, json_path;
    int n = 0;
    double tol = 0.0;
    int samples = 256;
    int grid = 128;

    auto add_common = [&](CLI::App* cmd, bool needs_n) {
        cmd->add_option("--tuple", tuple_arg,
                        "four endpoints as \"[re,im] [re,im] [re,im] [re,im]\"");
        if (needs_n) cmd->add_option("--n", n, "polynomial degree");
        cmd->add_option("--tol", tol, "primary tolerance for this command");
        cmd->add_option("--out", out_path, "output path (base name for trace)");
    };

    CLI::App* check = app.add_subcommand("check", "certify a tuple at degree n");
    add_common(check, true);
    CLI::App* approx =
        app.add_subcommand("approx", "snap a tuple to the nearest degree-n tuple");
    add_common(approx, true);
    CLI::App* construct =
        app.add_subcommand("construct", "build the polynomial pair (T, U)");
    add_common(construct, true);
    CLI::App* trace =
        app.add_subcommand("trace", "trace the two-arc preimage of [-1,1]");
    add_common(trace, true);
    trace->add_option("--samples", samples, "number of level samples");
    CLI::App* bounds =
        app.add_subcommand("bounds", "certified approximation constants");
    add_common(bounds, false);
    bounds->add_option("--grid", grid, "extrema sampling grid per axis");

    app.add_option("--json", json_path,
                   "run a request (or a previous report) from a JSON file");

    CLI11_PARSE(app, argc, argv);

    twoarc::cli::JobRequest req;
    try {
        if (!json_path.empty()) {
            std::ifstream in(json_path);
            if (!in) throw std::invalid_argument("cannot open " + json_path);
            nlohmann::json j = nlohmann::json::parse(in);
            req = twoarc::cli::request_from_json(j);
        } else {
            CLI::App* active = nullptr;
            for (CLI::App* cmd : {check, approx, construct, trace, bounds})
                if (cmd->parsed()) active = cmd;
            if (active == nullptr) {
                std::cerr << app.help() << std::endl;
                return 1;
            }
            req.command = twoarc::cli::command_from_string(active->get_name());
            if (tuple_arg.empty())
                throw std::invalid_argument("--tuple is required");
            req.tuple = twoarc::cli::parse_tuple_arg(tuple_arg);
            if (active != bounds && active->count("--n")) req.n = n;
            if (tol > 0.0) {
                const char* key =
                    req.command == twoarc::cli::Command::construct ||
                            req.command == twoarc::cli::Command::trace
                        ? "pell"
                        : "cert";
                req.tolerances[key] = tol;
            }
            req.samples = samples;
            req.grid = grid;
            req.out = out_path;
        }
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["ok"] = false;
        err["error"] = {{"type", "malformed_input"}, {"message", e.what()}};
        std::cout << err.dump(2) << std::endl;
        return 1;
    }

    const twoarc::cli::JobResult res = twoarc::cli::run(req);
    std::cout << res.report.dump(2) << std::endl;
    return res.exit_code;
}
