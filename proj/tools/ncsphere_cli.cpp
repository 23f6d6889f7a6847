// Batch front-end: structure-constant, reduced-element, norm, Hahn,
// Clebsch-Gordan, and classical-limit tables, plus the verification suite.
//
// Settings resolve in three layers: built-in defaults, then a flat
// `key = value` config file (--config), then command-line flags.  The only
// environment variable honored is NCSPHERE_OUT_DIR, which prefixes relative
// --out paths.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsphere/errors.hpp"
#include "ncsphere/numeric.hpp"
#include "ncsphere/tables.hpp"
#include "ncsphere/verify.hpp"

namespace {

using ncsphere::ParamPoint;
using ncsphere::Rational;
using ncsphere::Scalar;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// "3", "-1/2" -> exact rational; rejects empty fields and zero denominators.
Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(ncsphere::Int(s));
        const ncsphere::Int num(trim(s.substr(0, slash)));
        const ncsphere::Int den(trim(s.substr(slash + 1)));
        if (den == 0) throw std::runtime_error("zero denominator");
        return Rational(num) / Rational(den);
    } catch (const std::exception&) {
        throw std::runtime_error("not a rational number: '" + s + "'");
    }
}

// Half-integer fraction to its doubled integer: "3/2" -> 3, "2" -> 4.
int parse_fraction2(const std::string& s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return 2 * std::stoi(trim(s));
        const int num = std::stoi(trim(s.substr(0, slash)));
        const int den = std::stoi(trim(s.substr(slash + 1)));
        if (den == 1) return 2 * num;
        if (den == 2) return num;
    } catch (const std::exception&) {
    }
    throw std::runtime_error(
        "not an integer or half-integer fraction: '" + s + "'");
}

long parse_long(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const long v = std::stol(trim(s), &used);
        if (used == trim(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error(flag + " expects an integer, got '" + s + "'");
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": empty key");
        cfg[key] = val;
    }
    return cfg;
}

// Raw option values as typed on the command line; presence is tracked by
// CLI11 option counts so config values only fill the gaps.
struct RawOpts {
    std::string config, nmax, eps, k, rhat, format, out, jobs, seed, samples;
    bool allow_large = false;
    std::vector<std::string> suites;
};

struct Resolver {
    const CLI::App* sub;
    const std::map<std::string, std::string>& cfg;

    std::string get(const std::string& flag, const std::string& cli_val,
                    const std::string& key, const std::string& dflt) const {
        if (sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0)
            return cli_val;
        const auto it = cfg.find(key);
        return it != cfg.end() ? it->second : dflt;
    }
    bool has(const std::string& flag, const std::string& key) const {
        if (sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0)
            return true;
        return cfg.count(key) > 0;
    }
};

std::string resolve_out_path(const std::string& out) {
    if (out.empty()) return out;
    const char* dir = std::getenv("NCSPHERE_OUT_DIR");
    if (dir == nullptr || *dir == '\0' || out.front() == '/') return out;
    return std::string(dir) + "/" + out;
}

void write_output(const std::string& out, const std::string& text) {
    const std::string path = resolve_out_path(out);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
    if (!f.good()) throw std::runtime_error("write failed: " + path);
}

// (eps, k, rhat) -> evaluation point.  k fixes Rhat = eps (k + 1/2) (or stays
// symbolic in eps when eps is absent); rhat needs eps to pin the scale.
std::optional<ParamPoint> assemble_point(const std::optional<Rational>& eps,
                                         const std::optional<int>& k2,
                                         const std::optional<Rational>& rhat) {
    if (k2 && rhat)
        throw std::runtime_error("--k and --rhat are mutually exclusive");
    if (k2) {
        if (*k2 < 0) throw std::runtime_error("--k must be nonnegative");
        return eps ? ParamPoint::level_at(*k2, *eps) : ParamPoint::level(*k2);
    }
    if (rhat) {
        if (!eps)
            throw std::runtime_error(
                "--rhat fixes a numeric point only together with --eps");
        return ParamPoint::numeric(*eps, Scalar(*rhat));
    }
    return std::nullopt;
}

int run_table(ncsphere::TableKind kind, const Resolver& r, const RawOpts& raw) {
    ncsphere::TableRequest req;
    req.kind = kind;
    req.n2_max = parse_fraction2(r.get("--nmax", raw.nmax, "nmax", "2"));
    req.jobs = static_cast<int>(
        parse_long(r.get("--jobs", raw.jobs, "jobs", "1"), "--jobs"));
    const std::string al = r.get("--allow-large", raw.allow_large ? "1" : "0",
                                 "allow_large", "0");
    req.allow_large = al == "1" || al == "true";
    req.seed = static_cast<unsigned>(
        parse_long(r.get("--seed", raw.seed, "seed", "12345"), "--seed"));
    req.samples = static_cast<int>(parse_long(
        r.get("--samples", raw.samples, "samples", "5"), "--samples"));

    std::optional<Rational> eps, rhat;
    std::optional<int> k2;
    if (r.has("--eps", "eps"))
        eps = parse_rational(r.get("--eps", raw.eps, "eps", ""));
    if (r.has("--k", "k"))
        k2 = parse_fraction2(r.get("--k", raw.k, "k", ""));
    if (r.has("--rhat", "rhat"))
        rhat = parse_rational(r.get("--rhat", raw.rhat, "rhat", ""));
    if (eps && !k2 && !rhat)
        throw std::runtime_error(
            "--eps alone does not fix a point; add --k or --rhat "
            "(tables default to the symbolic point)");
    if (const auto p = assemble_point(eps, k2, rhat)) req.points = {*p};

    const std::string format = r.get("--format", raw.format, "format", "csv");
    if (format != "csv" && format != "json")
        throw std::runtime_error("--format must be csv or json, got '" +
                                 format + "'");

    const ncsphere::Table table = ncsphere::generate_table(req);
    write_output(r.get("--out", raw.out, "out", ""),
                 format == "csv" ? table.to_csv() : table.to_json());
    return 0;
}

int run_verify_cmd(const Resolver& r, const RawOpts& raw) {
    ncsphere::VerifyOptions opt;
    opt.seed = static_cast<unsigned>(
        parse_long(r.get("--seed", raw.seed, "seed", "12345"), "--seed"));
    if (r.sub->count("--suite") > 0) {
        opt.suites = raw.suites;
    } else if (r.cfg.count("suite")) {
        // Comma-separated list in the config file.
        std::string rest = r.cfg.at("suite");
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string head = trim(rest.substr(0, comma));
            if (!head.empty()) opt.suites.push_back(head);
            if (comma == std::string::npos) break;
            rest.erase(0, comma + 1);
        }
    }

    std::optional<Rational> eps, rhat;
    std::optional<int> k2;
    if (r.has("--eps", "eps"))
        eps = parse_rational(r.get("--eps", raw.eps, "eps", ""));
    if (r.has("--k", "k"))
        k2 = parse_fraction2(r.get("--k", raw.k, "k", ""));
    if (r.has("--rhat", "rhat"))
        rhat = parse_rational(r.get("--rhat", raw.rhat, "rhat", ""));
    opt.eps = eps;
    if (k2 || rhat) opt.point = assemble_point(eps, k2, rhat);

    const ncsphere::VerifyReport rep = ncsphere::run_verify(opt);
    std::cerr << rep.summary();
    write_output(r.get("--out", raw.out, "out", ""), rep.to_json());
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ncsphere: exact tables and verification for the traceless "
        "symmetric two-oscillator algebra"};
    app.require_subcommand(1);
    app.footer(
        "Settings resolve as defaults < config file (--config, flat "
        "'key = value' lines,\n'#' comments) < flags.  Config keys: nmax, "
        "eps, k, rhat, format, out, jobs,\nseed, samples, allow_large, "
        "suite.  NCSPHERE_OUT_DIR prefixes relative --out paths.\n"
        "\nPoints: --k [--eps] evaluates at the fuzzy level k "
        "(Rhat = eps (k + 1/2));\n--rhat with --eps evaluates at a free "
        "numeric point; neither means symbolic.\n"
        "\nExamples:\n"
        "  ncsphere norms --nmax 2 --eps 1 --k 2\n"
        "  ncsphere structure --nmax 3/2 --format json --jobs 4 --out s.json\n"
        "  ncsphere verify --suite classical --seed 7\n"
        "  ncsphere verify --eps 0 --suite basis\n");

    RawOpts raw;
    const std::map<std::string, ncsphere::TableKind> kinds = {
        {"structure", ncsphere::TableKind::Structure},
        {"reduced", ncsphere::TableKind::Reduced},
        {"norms", ncsphere::TableKind::Norms},
        {"hahn", ncsphere::TableKind::Hahn},
        {"cg", ncsphere::TableKind::Cg},
        {"classical", ncsphere::TableKind::Classical},
    };
    const std::map<std::string, std::string> table_help = {
        {"structure",
         "Structure constants of the basis product (selection rules applied)"},
        {"reduced",
         "Wigner-Eckart reduced elements (m-independence checked per row)"},
        {"norms", "Closed-form squared norms with the sign classification"},
        {"hahn", "Hahn-polynomial coefficients of the reduced basis form"},
        {"cg", "Exact Clebsch-Gordan coefficients"},
        {"classical",
         "Classical-limit comparison: direct substitution vs closed form"},
    };

    auto add_common = [&raw](CLI::App* sub) {
        sub->add_option("--config", raw.config,
                        "Flat key = value settings file");
        sub->add_option("--eps", raw.eps, "Deformation parameter (rational)");
        sub->add_option("--k", raw.k,
                        "Fuzzy level (integer or half-integer fraction)");
        sub->add_option("--rhat", raw.rhat,
                        "Radius parameter Rhat (rational; needs --eps)");
        sub->add_option("--out", raw.out, "Output path (default: stdout)");
    };

    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, kind] : kinds) {
        CLI::App* sub = app.add_subcommand(name, table_help.at(name));
        add_common(sub);
        sub->add_option("--nmax", raw.nmax,
                        "Label range cap n (fraction; hard cap 4, override "
                        "with --allow-large)");
        sub->add_option("--format", raw.format, "Output format: csv or json");
        sub->add_option("--jobs", raw.jobs, "Parallel worker count");
        sub->add_option("--seed", raw.seed,
                        "Random seed (classical angle sampling)");
        sub->add_option("--samples", raw.samples,
                        "Euler-angle samples per label (classical)");
        sub->add_flag("--allow-large", raw.allow_large,
                      "Acknowledge the runtime of requests beyond the cap");
        subs[name] = sub;
    }
    CLI::App* vsub = app.add_subcommand(
        "verify", "Run the property-verification suites and report JSON");
    add_common(vsub);
    vsub->add_option("--suite", raw.suites,
                     "Suite filter; repeatable (default: all suites)");
    vsub->add_option("--seed", raw.seed, "Seed for randomized checks");
    subs["verify"] = vsub;

    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* active = app.get_subcommands().front();
        std::map<std::string, std::string> cfg;
        if (active->count("--config") > 0) cfg = read_config(raw.config);
        const Resolver r{active, cfg};

        if (active == vsub) return run_verify_cmd(r, raw);
        return run_table(kinds.at(active->get_name()), r, raw);
    } catch (const ncsphere::CapExceeded& e) {
        std::cerr << "error: " << e.what()
                  << "\nPass --allow-large to acknowledge the runtime cost."
                  << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
