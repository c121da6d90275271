#ifndef TWOARC_CLI_HPP
#define TWOARC_CLI_HPP

#include <array>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "twoarc/types.hpp"

namespace twoarc::cli {

enum class Command { check, approx, construct, trace, bounds };

/// One job per process. Complex values serialize as [re, im].
struct JobRequest {
    Command command = Command::check;
    std::array<Complex, 4> tuple{};
    std::optional<int> n;
    std::map<std::string, double> tolerances;
    int samples = 256;
    int grid = 128;
    std::string out;  // output path base for trace exports
};

struct JobResult {
    int exit_code = 0;  // 0 ok, 1 malformed, 2 domain error, 3 numeric error
    nlohmann::ordered_json report;
};

Command command_from_string(const std::string& s);
std::string command_to_string(Command c);

JobRequest request_from_json(const nlohmann::json& j);
nlohmann::ordered_json request_to_json(const JobRequest& r);

/// Executes the request; never throws. Failures are encoded in the report
/// and exit code.
JobResult run(const JobRequest& request);

/// Parses the --tuple argument: four "[re,im]" groups, e.g.
/// "[-1,0] [-0.5,0] [0.5,0] [1,0]".
std::array<Complex, 4> parse_tuple_arg(const std::string& arg);

}  // namespace twoarc::cli

#endif
