// Command-line front end: parameter generation and validation, configuration
// builds, orthogonality-graph exports, bicolorability certification, and
// deformation checks. Every run prints a JSON report to stdout.
//
// Exit codes: 0 success/certified, 1 internal error, 2 invalid input,
// 3 inconclusive (search budget exceeded), 4 checks completed with failures.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rayconfig/colorability.hpp"
#include "rayconfig/common.hpp"
#include "rayconfig/graph.hpp"
#include "rayconfig/indexset.hpp"
#include "rayconfig/io.hpp"
#include "rayconfig/params.hpp"
#include "rayconfig/rays.hpp"

namespace {

using namespace rayconfig;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitChecksFailed = 4;

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

json violations_to_json(const ValidationReport& r) {
    json out = json::array();
    for (const auto& v : r.violations)
        out.push_back({{"condition", v.condition}, {"indices", v.indices}, {"measured", v.measured}});
    return out;
}

void print_report(const RunReport& report) { std::cout << report.to_json().dump(2) << "\n"; }

struct GenerateOpts {
    int n = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool allow_non_4n = false;
};

int run_generate(const GenerateOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "generate";
    report.inputs = {{"n", opt.n}, {"out", opt.out}};
    if (opt.seed) report.inputs["seed"] = *opt.seed;

    const PointSet ps = make_point_set(opt.n, opt.allow_non_4n);
    const ParameterSet params =
        opt.seed ? random_parameters(ps, *opt.seed) : all_ones_parameters(ps);
    const ValidationReport check = validate_parameters(ps, params);
    report.add_outcome("params", check.passed, {{"violations", violations_to_json(check)}});
    if (!check.passed) {
        print_report(report);
        return kExitInternal;  // generated parameters must always validate
    }
    const std::string body = params_to_json(ps, params).dump(2) + "\n";
    write_file(opt.out, body);
    report.digest = digest_hex(fnv1a64(body));
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    return kExitOk;
}

struct VerifyOpts {
    std::string params_path;
    std::vector<std::string> checks;
    std::string bases_path;
    std::string out;
    int threads = 1;
};

int run_verify(const VerifyOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "verify";
    report.inputs = {{"params", opt.params_path}};

    auto [ps, params] = load_params(opt.params_path);
    std::vector<BasisPair> phi;
    if (!opt.bases_path.empty()) {
        phi = load_basis_family(ps, opt.bases_path);
        report.inputs["bases"] = opt.bases_path;
    }

    std::vector<std::string> order = opt.checks;
    if (order.empty()) order = {"params", "unitarity", "reduced-system", "relation", "bases"};
    report.inputs["checks"] = order;

    bool failed = false;
    std::optional<Configuration> cfg;
    std::optional<OrthogonalityGraph> graph;
    auto ensure_graph = [&]() {
        if (!cfg) cfg = build_configuration(ps, params, phi);
        if (!graph) graph = orthogonality_graph(*cfg, 1e-9, DenseCheck::Auto, opt.threads);
    };

    for (const std::string& check : order) {
        if (failed) {
            report.add_outcome(check, false, {{"skipped", true}});
            continue;
        }
        if (check == "params") {
            const ValidationReport r = validate_parameters(ps, params);
            report.add_outcome(check, r.passed, {{"violations", violations_to_json(r)}});
            failed = !r.passed;
        } else if (check == "unitarity") {
            const YZTables yz = derive_yz(ps, params, derive_x(ps, params));
            const ValidationReport r = check_unitarity(ps, build_coeff_table(ps, yz));
            report.add_outcome(check, r.passed, {{"violations", violations_to_json(r)}});
            failed = !r.passed;
        } else if (check == "reduced-system") {
            const YZTables yz = derive_yz(ps, params, derive_x(ps, params));
            const ValidationReport r = verify_reduced_system(ps, yz, build_coeff_table(ps, yz));
            report.add_outcome(check, r.passed, {{"violations", violations_to_json(r)}});
            failed = !r.passed;
        } else if (check == "relation") {
            ensure_graph();
            const ValidationReport r =
                check_relation_consistency(*cfg, *graph, RelationParams::canonical());
            report.add_outcome(check, r.passed, {{"violations", violations_to_json(r)},
                                                 {"pairs", graph->n * (graph->n - 1) / 2}});
            failed = !r.passed;
        } else if (check == "bases") {
            ensure_graph();
            double worst = 0.0;
            for (const auto& basis : cfg->designated_bases)
                for (std::size_t a = 0; a < basis.size(); ++a)
                    for (std::size_t b = a; b < basis.size(); ++b) {
                        const cplx ip = inner_product_factored(ps, cfg->bases, cfg->coeffs,
                                                               cfg->labels[basis[a]],
                                                               cfg->labels[basis[b]]);
                        const cplx expect = (a == b) ? cplx{1.0} : cplx{0.0};
                        worst = std::max(worst, std::abs(ip - expect));
                    }
            const bool pass = worst < 1e-9;
            report.add_outcome(check, pass, {{"worst_deviation", worst}});
            failed = !pass;
        } else {
            throw InvalidInput("unknown check: " + check);
        }
    }
    if (graph)
        report.digest = digest_hex(configuration_digest(*cfg, *graph));
    else
        report.digest = digest_hex(fnv1a64(read_file(opt.params_path)));
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    if (!opt.out.empty()) write_file(opt.out, report.to_json().dump(2) + "\n");
    return report.all_passed() ? kExitOk : kExitChecksFailed;
}

struct ColorOpts {
    std::string params_path;
    std::string mode = "backtracking";
    std::uint64_t limit = 10000000000ULL;
    std::string out;
    int threads = 1;
};

int run_color(const ColorOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "color";
    report.inputs = {{"params", opt.params_path}, {"mode", opt.mode}, {"limit", opt.limit}};

    auto [ps, params] = load_params(opt.params_path);
    const Configuration cfg = build_configuration(ps, params);
    const OrthogonalityGraph graph = orthogonality_graph(cfg, 1e-9, DenseCheck::Auto, opt.threads);
    report.digest = digest_hex(configuration_digest(cfg, graph));

    SearchMode mode;
    if (opt.mode == "exhaustive")
        mode = SearchMode::Exhaustive;
    else if (opt.mode == "backtracking")
        mode = SearchMode::Backtracking;
    else
        throw InvalidInput("mode must be exhaustive or backtracking");

    const Certificate cert = search_bicoloring(graph, cfg.designated_bases, mode, opt.limit);
    const json cert_json = certificate_to_json(cert);
    if (const auto* found = std::get_if<ColoringFound>(&cert)) {
        if (!verify_coloring(graph, cfg.designated_bases, found->coloring))
            throw std::logic_error("search returned an invalid coloring");
        report.add_outcome("bicoloring-search", true,
                           {{"kind", "ColoringFound"},
                            {"nodes_visited", found->stats.nodes_visited}});
    } else {
        const auto& exhausted = std::get<ExhaustedNoColoring>(cert);
        report.add_outcome("bicoloring-search", true,
                           {{"kind", "ExhaustedNoColoring"},
                            {"nodes_visited", exhausted.stats.nodes_visited}});
    }
    if (!opt.out.empty()) write_file(opt.out, cert_json.dump(2) + "\n");
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    return kExitOk;
}

struct CertifyOpts {
    int n = 0;
    std::vector<int> p = {1, 0, 0, 0};
    std::string out;
    bool allow_non_4n = false;
};

int run_certify(const CertifyOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "certify";
    report.inputs = {{"n", opt.n}, {"p", opt.p}};

    if (opt.p.size() != 4) throw InvalidInput("--p needs four bits p0,p1,p2,p3");
    for (int b : opt.p)
        if (b != 0 && b != 1) throw InvalidInput("--p entries must be 0 or 1");
    const PointSet ps = make_point_set(opt.n, opt.allow_non_4n);
    const RelationParams rp{opt.p[0], opt.p[1], opt.p[2], opt.p[3]};

    const Gf2System sys = build_gf2_system(ps, rp);
    const Certificate cert = gf2_certify(sys);
    json cert_json = certificate_to_json(cert);
    cert_json["system"] = gf2_system_to_json(sys);
    if (const auto* infeasible = std::get_if<Gf2Infeasible>(&cert)) {
        if (!verify_gf2_trace(sys, infeasible->trace))
            throw std::logic_error("elimination produced an unverifiable trace");
        report.add_outcome("gf2-certificate", true,
                           {{"kind", "Gf2Infeasible"},
                            {"trace_rows", infeasible->trace.size()},
                            {"rows", sys.rows.size()},
                            {"vars", sys.n_vars}});
    } else {
        const auto& feasible = std::get<Gf2Feasible>(cert);
        if (!verify_gf2_witness(sys, feasible.witness))
            throw std::logic_error("elimination produced an unverifiable witness");
        report.add_outcome("gf2-certificate", true,
                           {{"kind", "Gf2Feasible"}, {"rows", sys.rows.size()}, {"vars", sys.n_vars}});
    }
    report.digest = digest_hex(fnv1a64(gf2_system_to_json(sys).dump()));
    if (!opt.out.empty()) write_file(opt.out, cert_json.dump(2) + "\n");
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    return kExitOk;
}

struct DeformOpts {
    std::vector<std::string> params_paths;
    bool any = false;
    int threads = 1;
};

int run_deform(const DeformOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "deform";
    report.inputs = {{"params_a", opt.params_paths[0]}, {"params_b", opt.params_paths[1]},
                     {"any", opt.any}};

    auto [ps_a, params_a] = load_params(opt.params_paths[0]);
    auto [ps_b, params_b] = load_params(opt.params_paths[1]);
    if (ps_a.n_points != ps_b.n_points)
        throw InvalidInput("size mismatch: N=" + std::to_string(ps_a.n_points) + " vs N=" +
                           std::to_string(ps_b.n_points));
    if (!opt.any && (params_a.mu_pow.v != params_b.mu_pow.v || params_a.kappa.v != params_b.kappa.v))
        throw InvalidInput("mu/kappa differ; pass --any to compare arbitrary configurations");

    const Configuration cfg_a = build_configuration(ps_a, params_a);
    const Configuration cfg_b = build_configuration(ps_b, params_b);
    const OrthogonalityGraph graph_a = orthogonality_graph(cfg_a, 1e-9, DenseCheck::Auto, opt.threads);
    const OrthogonalityGraph graph_b = orthogonality_graph(cfg_b, 1e-9, DenseCheck::Auto, opt.threads);
    const DeformationWitness witness = verify_deformation(graph_a, graph_b);
    report.add_outcome("deformation", witness.verified,
                       {{"bijection", "label-identity"},
                        {"edges_a", graph_a.edge_count()},
                        {"edges_b", graph_b.edge_count()}});
    report.digest = digest_hex(configuration_digest(cfg_a, graph_a));
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    return witness.verified ? kExitOk : kExitChecksFailed;
}

struct ExportOpts {
    std::string params_path;
    std::string format;
    std::string out;
    std::string bases_path;
    std::string dump_rays;
    int threads = 1;
};

int run_export(const ExportOpts& opt) {
    Stopwatch watch;
    RunReport report;
    report.command = "export";
    report.inputs = {{"params", opt.params_path}, {"format", opt.format}, {"out", opt.out}};

    ExportFormat format;
    if (opt.format == "json")
        format = ExportFormat::Json;
    else if (opt.format == "dimacs-clique")
        format = ExportFormat::DimacsClique;
    else if (opt.format == "edge-list")
        format = ExportFormat::EdgeList;
    else
        throw InvalidInput("unknown format: " + opt.format);

    auto [ps, params] = load_params(opt.params_path);
    std::vector<BasisPair> phi;
    if (!opt.bases_path.empty()) phi = load_basis_family(ps, opt.bases_path);
    const Configuration cfg = build_configuration(ps, params, phi);
    const OrthogonalityGraph graph = orthogonality_graph(cfg, 1e-9, DenseCheck::Auto, opt.threads);
    write_file(opt.out, export_graph(graph, cfg, format));

    if (!opt.dump_rays.empty()) {
        json rays = json::array();
        for (const DenseRay& ray : build_dense_rays(cfg)) {
            json amp = json::array();
            for (const cplx& a : ray.amp) amp.push_back({a.real(), a.imag()});
            rays.push_back({{"label", label_string(ps, ray.label)}, {"amplitudes", std::move(amp)}});
        }
        write_file(opt.dump_rays, rays.dump() + "\n");
    }
    report.add_outcome("export", true,
                       {{"nodes", graph.n}, {"edges", graph.edge_count()}});
    report.digest = digest_hex(configuration_digest(cfg, graph));
    report.timings = {{"total_ms", watch.ms()}};
    print_report(report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generator and verifier for a family of non-bicolorable ray configurations"};
    app.set_version_flag("--version", rayconfig::kVersion);
    app.require_subcommand(1);

    GenerateOpts gen;
    CLI::App* cmd_gen = app.add_subcommand("generate", "Write a validated parameter file");
    cmd_gen->add_option("--n", gen.n, "Number of points N (divisible by 4)")->required();
    cmd_gen->add_option("--seed", gen.seed, "Random seed; omit for the all-ones parameters");
    cmd_gen->add_option("--out", gen.out, "Output parameter file")->required();
    cmd_gen->add_flag("--allow-non-4n", gen.allow_non_4n, "Admit even N not divisible by 4");

    VerifyOpts ver;
    CLI::App* cmd_ver = app.add_subcommand("verify", "Run validators against a parameter file");
    cmd_ver->add_option("--params", ver.params_path, "Parameter file")->required();
    cmd_ver->add_option("--checks", ver.checks,
                        "Subset of params,unitarity,reduced-system,relation,bases")
        ->delimiter(',');
    cmd_ver->add_option("--bases", ver.bases_path, "Optional basis file");
    cmd_ver->add_option("--out", ver.out, "Write the report JSON here too");
    cmd_ver->add_option("--threads", ver.threads, "Worker threads for the pair scan");

    ColorOpts col;
    CLI::App* cmd_col = app.add_subcommand("color", "Search for a bicoloring of the configuration");
    cmd_col->add_option("--params", col.params_path, "Parameter file")->required();
    cmd_col->add_option("--mode", col.mode, "exhaustive or backtracking");
    cmd_col->add_option("--limit", col.limit, "Node budget for backtracking");
    cmd_col->add_option("--out", col.out, "Write the certificate JSON here");
    cmd_col->add_option("--threads", col.threads, "Worker threads for the pair scan");

    CertifyOpts cert;
    CLI::App* cmd_cert = app.add_subcommand("certify", "GF(2) certificate (no rays built)");
    cmd_cert->add_option("--n", cert.n, "Number of points N")->required();
    cmd_cert->add_option("--p", cert.p, "Relation parameters p0,p1,p2,p3")->delimiter(',');
    cmd_cert->add_option("--out", cert.out, "Write the certificate JSON here");
    cmd_cert->add_flag("--allow-non-4n", cert.allow_non_4n, "Admit even N not divisible by 4");

    DeformOpts def;
    CLI::App* cmd_def = app.add_subcommand("deform", "Compare two configurations as a deformation");
    cmd_def->add_option("--params", def.params_paths, "Two parameter files")
        ->expected(2)
        ->required();
    cmd_def->add_flag("--any", def.any, "Allow differing mu/kappa");
    cmd_def->add_option("--threads", def.threads, "Worker threads for the pair scan");

    ExportOpts exp;
    CLI::App* cmd_exp = app.add_subcommand("export", "Write the orthogonality graph to a file");
    cmd_exp->add_option("--params", exp.params_path, "Parameter file")->required();
    cmd_exp->add_option("--format", exp.format, "json, dimacs-clique, or edge-list")->required();
    cmd_exp->add_option("--out", exp.out, "Output path")->required();
    cmd_exp->add_option("--bases", exp.bases_path, "Optional basis file");
    cmd_exp->add_option("--dump-rays", exp.dump_rays, "Also write dense amplitudes as JSON");
    cmd_exp->add_option("--threads", exp.threads, "Worker threads for the pair scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (app.got_subcommand(cmd_gen)) return run_generate(gen);
        if (app.got_subcommand(cmd_ver)) return run_verify(ver);
        if (app.got_subcommand(cmd_col)) return run_color(col);
        if (app.got_subcommand(cmd_cert)) return run_certify(cert);
        if (app.got_subcommand(cmd_def)) return run_deform(def);
        if (app.got_subcommand(cmd_exp)) return run_export(exp);
    } catch (const rayconfig::SearchBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const rayconfig::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
