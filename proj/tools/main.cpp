// Batch front-end for the streaming binary clustering and low-rank solvers.
// One invocation = one run; results go out as a JSON report, written
// atomically when --out is given, to stdout otherwise.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "blr/baseline.hpp"
#include "blr/errors.hpp"
#include "blr/lowrank.hpp"
#include "blr/oracle.hpp"
#include "blr/ptas.hpp"
#include "blr/relations.hpp"
#include "blr/stream.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw blr::ParseError("cannot open file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

void write_atomically(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw blr::Error("cannot open output file: " + tmp);
        out << body;
        out.flush();
        if (!out) throw blr::Error("failed writing output file: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::size_t width_cap_from_env() {
    const char* raw = std::getenv("BLR_MAX_D");
    if (raw == nullptr || *raw == '\0') return blr::kDefaultMaxWidth;
    try {
        const long long value = std::stoll(raw);
        if (value < 1) throw std::out_of_range("non-positive");
        return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
        throw blr::InvalidParameterError("BLR_MAX_D is not a positive integer");
    }
}

blr::InnerProduct load_field(const std::string& spec, std::size_t r) {
    if (spec == "gf2") return blr::InnerProduct::gf2(r);
    if (spec == "boolean") return blr::InnerProduct::boolean(r);
    if (spec.rfind("table:", 0) == 0) {
        const std::string body = read_file(spec.substr(6));
        const std::size_t side = std::size_t{1} << r;
        std::vector<bool> entries;
        entries.reserve(side * side);
        std::istringstream lines(body);
        std::string line;
        std::size_t rows = 0;
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            if (line.size() != side)
                throw blr::ParseError("table row must have exactly 2^r characters");
            for (char c : line) {
                if (c != '0' && c != '1')
                    throw blr::ParseError("table entries must be '0' or '1'");
                entries.push_back(c == '1');
            }
            ++rows;
        }
        if (rows != side)
            throw blr::ParseError("table must have exactly 2^r rows");
        return blr::InnerProduct::table(r, std::move(entries));
    }
    throw blr::InvalidParameterError("unknown field '" + spec +
                                     "' (expected gf2, boolean, or table:<path>)");
}

json centers_json(const blr::CenterSet& centers) {
    json out = json::array();
    for (const auto& c : centers.centers) out.push_back(c.to_string());
    return out;
}

json rows_json(const std::vector<blr::BitRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) out.push_back(r.to_string());
    return out;
}

struct Options {
    std::string mode;
    std::string input;
    std::string relations_path;
    std::string out_path;
    std::string field = "gf2";
    std::uint64_t k = 0;
    std::uint64_t r = 0;
    std::string epsilon = "0.5";
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> tau, eta, zeta, budget;
    double alpha = 4.0;
    double coreset_constant = 8.0;
};

int run(const Options& opt) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t max_width = width_cap_from_env();

    json report;
    report["schema"] = 1;
    report["mode"] = opt.mode;
    report["input"] = opt.input;
    report["seed"] = opt.seed;

    json params;
    params["epsilon"] = opt.epsilon;
    params["alpha"] = opt.alpha;
    params["coreset_constant"] = opt.coreset_constant;

    const auto finish = [&](json& rep) {
        rep["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started)
                .count();
        const std::string body = rep.dump(2) + "\n";
        if (opt.out_path.empty())
            std::cout << body;
        else
            write_atomically(opt.out_path, body);
        return 0;
    };

    const auto make_params = [&](std::size_t k) {
        auto p = blr::default_params(k, blr::Ratio::parse(opt.epsilon), opt.alpha);
        if (opt.tau) p.tau = *opt.tau;
        if (opt.eta) p.eta = *opt.eta;
        if (opt.zeta) p.zeta = *opt.zeta;
        p.candidate_budget = opt.budget;
        params["tau"] = p.tau;
        params["eta"] = p.eta;
        params["zeta"] = p.zeta;
        if (opt.budget) params["budget"] = *opt.budget;
        return p;
    };

    if (opt.mode == "solve" || opt.mode == "baseline") {
        blr::FilePointStream stream(opt.input, max_width);
        std::optional<blr::RelationSet> relations;
        std::size_t k = static_cast<std::size_t>(opt.k);
        if (!opt.relations_path.empty()) {
            relations = blr::parse_relations(read_file(opt.relations_path));
            if (k == 0) k = relations->k();
            if (k != relations->k())
                throw blr::ShapeMismatchError("--k disagrees with the relations file");
            if (relations->d() != stream.width())
                throw blr::ShapeMismatchError(
                    "relations dimension differs from the input width");
        }
        if (k == 0)
            throw blr::InvalidParameterError("mode needs --k (or a relations file)");
        params["k"] = k;

        blr::SeededRng rng(opt.seed);
        std::uint64_t peak = 0;
        const auto baseline = blr::baseline_binary_kmeans(
            stream, k, rng.fork(11), opt.coreset_constant, &peak);
        report["d"] = stream.width();
        report["n"] = stream.size();

        if (opt.mode == "baseline") {
            const auto cost = blr::cost_phi(baseline, stream);
            report["cost"] = cost;
            report["centers"] = centers_json(baseline);
            report["passes"] = stream.pass_count();
            report["peak_stored_points"] = peak;
            report["params"] = params;
            return finish(report);
        }

        if (!relations)
            relations = blr::RelationSet::unconstrained(k, stream.width());
        const auto p = make_params(k);
        const auto result =
            blr::good_centers(stream, *relations, baseline, p, rng.fork(12));

        report["cost"] = result.cost;
        report["centers"] = centers_json(result.centers);
        report["feasible"] = blr::validate_center_set(result.centers, *relations);
        report["passes"] = stream.pass_count();
        report["peak_stored_points"] =
            std::max<std::uint64_t>(peak, p.zeta * p.eta * k);
        report["params"] = params;
        json diag;
        diag["candidates_generated"] = result.diagnostics.candidates_generated;
        diag["candidates_distinct"] = result.diagnostics.candidates_distinct;
        diag["subsets_enumerated"] = result.diagnostics.subsets_enumerated;
        diag["grid_size"] = result.diagnostics.grid_size;
        diag["budget_truncated"] = result.diagnostics.budget_truncated;
        report["diagnostics"] = diag;
        return finish(report);
    }

    if (opt.mode == "lowrank") {
        if (opt.r == 0) throw blr::InvalidParameterError("mode lowrank needs --r");
        const std::size_t r = static_cast<std::size_t>(opt.r);
        const auto f = load_field(opt.field, r);
        params["field"] = opt.field;
        params["r"] = r;
        blr::FilePointStream stream(opt.input, max_width);
        const std::size_t k = std::size_t{1} << r;
        params["k"] = k;
        const auto p = make_params(k);
        const auto result =
            blr::lowrank_approx(stream, r, f, p, blr::SeededRng(opt.seed),
                                blr::kDefaultMaxRank, opt.coreset_constant);
        report["d"] = stream.width();
        report["n"] = stream.size();
        report["error"] = result.factorization.error;
        report["U"] = rows_json(result.factorization.u_rows);
        report["V"] = rows_json(result.factorization.v_rows);
        report["field"] = f.name();
        report["r"] = r;
        report["passes"] = stream.pass_count();
        report["peak_stored_points"] =
            std::max<std::uint64_t>(result.baseline_peak_stored,
                                    p.zeta * p.eta * k);
        report["params"] = params;
        json diag;
        diag["candidates_generated"] = result.diagnostics.candidates_generated;
        diag["candidates_distinct"] = result.diagnostics.candidates_distinct;
        diag["subsets_enumerated"] = result.diagnostics.subsets_enumerated;
        diag["grid_size"] = result.diagnostics.grid_size;
        diag["budget_truncated"] = result.diagnostics.budget_truncated;
        report["diagnostics"] = diag;
        return finish(report);
    }

    if (opt.mode == "oracle") {
        const auto rows = blr::parse_bin01(read_file(opt.input), max_width);
        if (rows.empty()) throw blr::ParseError("no data rows in " + opt.input);
        report["n"] = rows.size();
        report["d"] = rows.front().width();
        if (opt.r != 0) {
            const std::size_t r = static_cast<std::size_t>(opt.r);
            const auto f = load_field(opt.field, r);
            params["field"] = opt.field;
            params["r"] = r;
            const auto best = blr::exact_lowrank(rows, r, f);
            report["opt"] = best.error;
            report["U"] = rows_json(best.u_rows);
            report["V"] = rows_json(best.v_rows);
            report["field"] = f.name();
            report["r"] = r;
        } else {
            if (opt.k == 0)
                throw blr::InvalidParameterError("mode oracle needs --k or --r");
            const std::size_t k = static_cast<std::size_t>(opt.k);
            params["k"] = k;
            blr::ExactKmeansResult best;
            if (!opt.relations_path.empty()) {
                const auto relations =
                    blr::parse_relations(read_file(opt.relations_path));
                best = blr::exact_constrained_kmeans(rows, k, relations);
            } else {
                best = blr::exact_binary_kmeans(rows, k);
            }
            report["opt"] = best.opt;
            report["centers"] = centers_json(best.centers);
        }
        report["passes"] = 0;
        report["params"] = params;
        return finish(report);
    }

    throw blr::InvalidParameterError("unknown mode '" + opt.mode + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming solvers for constrained binary k-means and "
                 "binary rank-r reconstruction"};
    Options opt;
    app.add_option("--mode", opt.mode, "solve | lowrank | baseline | oracle")
        ->required();
    app.add_option("--input", opt.input, "bin01 matrix/point file")->required();
    app.add_option("--relations", opt.relations_path, "relations file");
    app.add_option("--k", opt.k, "number of centers");
    app.add_option("--r", opt.r, "target rank");
    app.add_option("--epsilon", opt.epsilon, "accuracy in (0, 1/2], e.g. 0.5");
    app.add_option("--field", opt.field, "gf2 | boolean | table:<path>");
    app.add_option("--seed", opt.seed, "random seed");
    std::uint64_t tau = 0, eta = 0, zeta = 0, budget = 0;
    auto* tau_opt = app.add_option("--tau", tau, "samples per cluster override");
    auto* eta_opt = app.add_option("--eta", eta, "oversampling override");
    auto* zeta_opt = app.add_option("--zeta", zeta, "repetition override");
    auto* budget_opt =
        app.add_option("--budget", budget, "candidate combination cap");
    app.add_option("--alpha", opt.alpha, "assumed baseline approximation factor");
    app.add_option("--coreset-constant", opt.coreset_constant,
                   "facility budget constant");
    app.add_option("--out", opt.out_path, "report path (written atomically)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    if (*tau_opt) opt.tau = tau;
    if (*eta_opt) opt.eta = eta;
    if (*zeta_opt) opt.zeta = zeta;
    if (*budget_opt) opt.budget = budget;

    try {
        return run(opt);
    } catch (const blr::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const blr::EmptyRelationError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const blr::LimitsExceededError& e) {
        std::cerr << "limits exceeded: " << e.what() << "\n";
        return 5;
    } catch (const blr::Error& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
