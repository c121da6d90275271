#include "twoarc/cli.hpp"

#include <fstream>
#include <sstream>

#include "twoarc/arc_trace.hpp"
#include "twoarc/density.hpp"
#include "twoarc/pell.hpp"

namespace twoarc::cli {

namespace {

using nlohmann::ordered_json;

ordered_json complex_to_json(Complex z) {
    return ordered_json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number())
        throw std::invalid_argument("complex values must be [re, im] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json certificate_to_json(const TupleCertificate& c) {
    ordered_json j;
    j["n"] = c.n;
    j["m"] = c.m;
    j["mPrime"] = c.m_prime;
    j["lambdaResidual"] = c.lambda_residual;
    j["lambdaPrimeResidual"] = c.lambda_prime_residual;
    j["accepted"] = c.accepted;
    return j;
}

ordered_json bounds_to_json(const ErrorBoundReport& r) {
    ordered_json j;
    j["C1"] = r.C1;
    j["C2"] = r.C2;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["n3"] = r.n3;
    j["N"] = r.N;
    j["sStar"] = r.s_star;
    j["cStar"] = r.c_star;
    j["dStar"] = r.d_star;
    j["sStarStar"] = r.s_star_star;
    j["BObserved"] = r.B_observed;
    return j;
}

ordered_json pair_to_json(const PolynomialPair& p) {
    ordered_json j;
    j["n"] = p.degree();
    ordered_json tc = ordered_json::array();
    for (Eigen::Index i = 0; i < p.t_coeffs.size(); ++i)
        tc.push_back(complex_to_json(p.t_coeffs(i)));
    ordered_json uc = ordered_json::array();
    for (Eigen::Index i = 0; i < p.u_coeffs.size(); ++i)
        uc.push_back(complex_to_json(p.u_coeffs(i)));
    j["tCoeffs"] = tc;
    j["uCoeffs"] = uc;
    j["tau"] = complex_to_json(p.tau);
    j["pellResidual"] = p.pell_residual;
    return j;
}

Real tol_or(const JobRequest& r, const std::string& key, Real fallback) {
    const auto it = r.tolerances.find(key);
    return it == r.tolerances.end() ? fallback : it->second;
}

EndpointTuple request_tuple(const JobRequest& r) {
    for (const Complex& z : r.tuple)
        if (!is_finite(z))
            throw std::invalid_argument("tuple entries must be finite");
    return EndpointTuple{r.tuple[0], r.tuple[1], r.tuple[2], r.tuple[3],
                         false};
}

int required_n(const JobRequest& r) {
    if (!r.n) throw std::invalid_argument("this command requires --n");
    return *r.n;
}

}  // namespace

Command command_from_string(const std::string& s) {
    if (s == "check") return Command::check;
    if (s == "approx") return Command::approx;
    if (s == "construct") return Command::construct;
    if (s == "trace") return Command::trace;
    if (s == "bounds") return Command::bounds;
    throw std::invalid_argument("unknown command: " + s);
}

std::string command_to_string(Command c) {
    switch (c) {
        case Command::check: return "check";
        case Command::approx: return "approx";
        case Command::construct: return "construct";
        case Command::trace: return "trace";
        case Command::bounds: return "bounds";
    }
    return "check";
}

std::array<Complex, 4> parse_tuple_arg(const std::string& arg) {
    std::array<Complex, 4> out{};
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        const std::size_t open = arg.find('[', pos);
        const std::size_t comma = arg.find(',', open);
        const std::size_t close = arg.find(']', comma);
        if (open == std::string::npos || comma == std::string::npos ||
            close == std::string::npos)
            throw std::invalid_argument(
                "tuple must be four [re,im] groups, e.g. \"[-1,0] [1,0] ...\"");
        try {
            const double re = std::stod(arg.substr(open + 1, comma - open - 1));
            const double im = std::stod(arg.substr(comma + 1, close - comma - 1));
            out[static_cast<std::size_t>(i)] = Complex(re, im);
        } catch (const std::exception&) {
            throw std::invalid_argument("could not parse tuple component " +
                                        std::to_string(i + 1));
        }
        pos = close + 1;
    }
    if (arg.find('[', pos) != std::string::npos)
        throw std::invalid_argument("expected exactly four tuple components");
    return out;
}

JobRequest request_from_json(const nlohmann::json& j) {
    JobRequest r;
    const nlohmann::json& src = j.contains("request") ? j["request"] : j;
    if (!src.contains("command"))
        throw std::invalid_argument("request is missing \"command\"");
    r.command = command_from_string(src["command"].get<std::string>());
    if (!src.contains("tuple") || !src["tuple"].is_array() ||
        src["tuple"].size() != 4)
        throw std::invalid_argument("request needs a 4-element \"tuple\"");
    for (int i = 0; i < 4; ++i)
        r.tuple[static_cast<std::size_t>(i)] =
            complex_from_json(src["tuple"][static_cast<std::size_t>(i)]);
    if (src.contains("n")) r.n = src["n"].get<int>();
    if (src.contains("samples")) r.samples = src["samples"].get<int>();
    if (src.contains("grid")) r.grid = src["grid"].get<int>();
    if (src.contains("out")) r.out = src["out"].get<std::string>();
    if (src.contains("tolerances"))
        for (const auto& [key, val] : src["tolerances"].items())
            r.tolerances[key] = val.get<double>();
    return r;
}

ordered_json request_to_json(const JobRequest& r) {
    ordered_json j;
    j["command"] = command_to_string(r.command);
    ordered_json tup = ordered_json::array();
    for (const Complex& z : r.tuple) tup.push_back(complex_to_json(z));
    j["tuple"] = tup;
    if (r.n) j["n"] = *r.n;
    if (!r.tolerances.empty()) {
        ordered_json tols;
        for (const auto& [key, val] : r.tolerances) tols[key] = val;
        j["tolerances"] = tols;
    }
    if (r.command == Command::trace) j["samples"] = r.samples;
    if (r.command == Command::bounds) j["grid"] = r.grid;
    if (!r.out.empty()) j["out"] = r.out;
    return j;
}

JobResult run(const JobRequest& request) {
    JobResult res;
    res.report["request"] = request_to_json(request);
    try {
        const EndpointTuple tuple = request_tuple(request);
        switch (request.command) {
            case Command::check: {
                const int n = required_n(request);
                const TupleCertificate cert =
                    is_tn_tuple(tuple, n, tol_or(request, "cert", 1e-9));
                res.report["ok"] = true;
                res.report["result"]["certificate"] = certificate_to_json(cert);
                break;
            }
            case Command::approx: {
                const int n = required_n(request);
                const ApproxResult ap = approximate_tuple(
                    tuple, n, tol_or(request, "cert", 1e-9));
                BoundsOptions opt;
                opt.grid = request.grid;
                const ErrorBoundReport rep =
                    error_bounds(canonical_order(tuple).tuple, opt);
                res.report["ok"] = true;
                ordered_json& out = res.report["result"];
                out["a2Tilde"] = complex_to_json(ap.a2_tilde);
                out["a3Tilde"] = complex_to_json(ap.a3_tilde);
                out["m"] = ap.m;
                out["mPrime"] = ap.m_prime;
                out["exactHit"] = ap.exact_hit;
                out["certificate"] = certificate_to_json(ap.cert);
                out["N"] = rep.N;
                out["boundCertified"] = n >= rep.N;
                if (n < rep.N)
                    out["note"] = "bound not certified for this n (n < N)";
                break;
            }
            case Command::construct: {
                const int n = required_n(request);
                const EndpointTuple canon = canonical_order(tuple).tuple;
                const TupleCertificate cert =
                    is_tn_tuple(canon, n, tol_or(request, "cert", 1e-9));
                if (!cert.accepted) {
                    res.exit_code = 2;
                    res.report["ok"] = false;
                    res.report["error"] = {
                        {"type", "not_certified"},
                        {"message",
                         "tuple rejected at this degree; see certificate"}};
                    res.report["error"]["certificate"] =
                        certificate_to_json(cert);
                    break;
                }
                const PolynomialPair pair = construct_pair(
                    canon, cert, tol_or(request, "pell", 1e-8));
                res.report["ok"] = true;
                res.report["result"]["pair"] = pair_to_json(pair);
                res.report["result"]["certificate"] =
                    certificate_to_json(cert);
                break;
            }
            case Command::trace: {
                const int n = required_n(request);
                const EndpointTuple canon = canonical_order(tuple).tuple;
                const TupleCertificate cert =
                    is_tn_tuple(canon, n, tol_or(request, "cert", 1e-9));
                if (!cert.accepted) {
                    res.exit_code = 2;
                    res.report["ok"] = false;
                    res.report["error"] = {
                        {"type", "not_certified"},
                        {"message", "tuple rejected at this degree"}};
                    res.report["error"]["certificate"] =
                        certificate_to_json(cert);
                    break;
                }
                const PolynomialPair pair = construct_pair(
                    canon, cert, tol_or(request, "pell", 1e-8));
                const PreimageTrace trace =
                    trace_preimage(pair, request.samples);
                res.report["ok"] = true;
                ordered_json& out = res.report["result"];
                out["componentCount"] = trace.component_count;
                ordered_json eps = ordered_json::array();
                for (const Complex& e : trace.endpoint_estimates)
                    eps.push_back(complex_to_json(e));
                out["endpointEstimates"] = eps;
                out["branches"] = static_cast<int>(trace.gamma.size());
                out["samples"] = request.samples;
                out["flaggedLevels"] = trace.flagged;
                if (!request.out.empty()) {
                    const std::string csv_path = request.out + ".csv";
                    const std::string svg_path = request.out + ".svg";
                    std::ofstream csv(csv_path, std::ios::binary);
                    csv << trace_to_csv(trace);
                    std::ofstream svg(svg_path, std::ios::binary);
                    svg << trace_to_svg(trace);
                    if (!csv || !svg)
                        throw error("failed to write trace exports");
                    out["csv"] = csv_path;
                    out["svg"] = svg_path;
                }
                break;
            }
            case Command::bounds: {
                BoundsOptions opt;
                opt.grid = request.grid;
                const ErrorBoundReport rep =
                    error_bounds(canonical_order(tuple).tuple, opt);
                res.report["ok"] = true;
                res.report["result"]["bounds"] = bounds_to_json(rep);
                break;
            }
        }
    } catch (const std::invalid_argument& e) {
        res.exit_code = 1;
        res.report["ok"] = false;
        res.report["error"] = {{"type", "malformed_input"},
                               {"message", e.what()}};
    } catch (const pole_error& e) {
        res.exit_code = 3;
        res.report["ok"] = false;
        res.report["error"] = {{"type", "pole"},
                               {"message", e.what()},
                               {"distance", e.distance}};
    } catch (const numeric_error& e) {
        res.exit_code = 3;
        res.report["ok"] = false;
        res.report["error"] = {{"type", "numeric"},
                               {"message", e.what()},
                               {"residual", e.residual}};
    } catch (const domain_error& e) {
        res.exit_code = 2;
        res.report["ok"] = false;
        res.report["error"] = {{"type", "domain"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        res.exit_code = 3;
        res.report["ok"] = false;
        res.report["error"] = {{"type", "internal"}, {"message", e.what()}};
    }
    return res;
}

}  // namespace twoarc::cli
