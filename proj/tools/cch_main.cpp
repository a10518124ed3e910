// cch command line: flat norms, filling volumes, modulus and capacity
// solves, cochain verification, and the experiment runners.
//
// Exit codes: 0 success / all verdicts pass, 1 a verdict failed,
// 2 usage or input errors.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cch/experiments.hpp"
#include "cch/fixtures.hpp"
#include "cch/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<cch::Chain> load_chain_dir(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::vector<cch::Chain> out;
    for (const auto& f : files) out.push_back(cch::load_chain(f));
    return out;
}

void emit(const json& j, const std::string& out_path) {
    std::cout << j.dump(2) << "\n";
    if (!out_path.empty()) cch::save_json(j, out_path);
}

int cmd_flatnorm(const std::string& chain_path, const std::vector<std::string>& weights,
                 double tol, const std::string& out_path) {
    cch::Chain T = cch::load_chain(chain_path);
    cch::FlatDecomposition fd;
    if (weights.empty()) {
        fd = cch::flat_norm(T, tol);
    } else {
        if (weights.size() != 2)
            throw CLI::ValidationError("--weights needs the h and g density files");
        fd = cch::weighted_flat_norm(T, cch::load_density(weights[0]),
                                     cch::load_density(weights[1]), tol);
    }
    json j;
    j["value"] = fd.value;
    j["mass_R"] = fd.R.mass();
    j["mass_V"] = fd.V.mass();
    j["residual"] = fd.residual;
    j["duality_gap"] = fd.duality_gap;
    emit(j, out_path);
    return 0;
}

int cmd_fillvol(const std::string& chain_path, double tol, const std::string& out_path,
                const std::string& filling_out) {
    cch::Chain T = cch::load_chain(chain_path);
    cch::FillResult fr = cch::fill_volume(T, tol);
    json j;
    j["value"] = fr.feasible ? json(fr.value) : json("inf");
    j["feasible"] = fr.feasible;
    j["residual"] = fr.residual;
    j["duality_gap"] = fr.duality_gap;
    emit(j, out_path);
    if (!filling_out.empty() && fr.S) cch::save_chain(*fr.S, filling_out);
    return 0;
}

json duals_json(const cch::ModulusSolution& sol) {
    json j;
    j["value"] = sol.feasible ? json(sol.value) : json("inf");
    j["kkt_residual"] = sol.kkt_residual;
    j["duals"] = sol.duals;
    j["iterations"] = sol.iterations;
    return j;
}

// "uniform" keeps the default h^n weights; anything else is a density
// file whose values override per cell.
cch::MeasureWeights make_weights(const cch::GridDomain& domain, const std::string& mu_spec) {
    cch::MeasureWeights mu(domain);
    if (mu_spec.empty() || mu_spec == "uniform") return mu;
    cch::Density d = cch::load_density(mu_spec);
    for (const auto& [q, v] : d.values()) mu.set(q, v);
    return mu;
}

int cmd_modulus(const std::string& dir, double p, const std::string& mu_spec, double tol,
                const std::string& out_path, const std::string& density_out) {
    auto family = load_chain_dir(dir);
    if (family.empty()) throw CLI::ValidationError("no chain files in " + dir);
    cch::MeasureWeights mu = make_weights(family.front().domain(), mu_spec);
    cch::ModulusSolution sol = cch::modulus(family, p, mu, tol);
    emit(duals_json(sol), out_path);
    if (!density_out.empty()) cch::save_density(sol.density, density_out);
    return 0;
}

int cmd_capacity(const std::string& lambda_dir, const std::string& fillings_dir, double p,
                 const std::string& mu_spec, double tol, const std::string& out_path) {
    auto lambda = load_chain_dir(lambda_dir);
    auto fillings = load_chain_dir(fillings_dir);
    if (lambda.empty()) throw CLI::ValidationError("no chain files in " + lambda_dir);
    cch::MeasureWeights mu = make_weights(lambda.front().domain(), mu_spec);
    cch::ModulusSolution sol = cch::capacity_lower(lambda, fillings, p, mu, tol);
    emit(duals_json(sol), out_path);
    return 0;
}

int cmd_verify(const std::string& form_path, const std::string& check,
               const std::string& density_path, const std::string& family_dir,
               const std::string& fillings_dir, double tol, const std::string& out_path) {
    cch::DiscreteForm w = cch::form_from_json(cch::load_json(form_path));
    cch::Cochain omega = cch::form_cochain(w);
    cch::Density d = cch::load_density(density_path);
    cch::CheckReport rep;
    if (check == "upper-norm") {
        rep = cch::check_upper_norm(omega, d, load_chain_dir(family_dir), tol);
    } else if (check == "upper-gradient") {
        std::vector<std::pair<cch::Chain, cch::Chain>> pairs;
        for (auto& S : load_chain_dir(fillings_dir.empty() ? family_dir : fillings_dir))
            pairs.emplace_back(cch::boundary(S), S);
        rep = cch::check_upper_gradient(omega, d, pairs, tol);
    } else {
        throw CLI::ValidationError("--check must be upper-norm or upper-gradient");
    }
    emit(cch::report_to_json(rep), out_path);
    return rep.all_pass ? 0 : 1;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_csv, const std::string& summary_path,
                   long seed_override) {
    cch::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = cch::ExperimentConfig::from_json(cch::load_json(config_path));
    cfg.name = name;
    if (seed_override >= 0) cfg.seed = static_cast<unsigned>(seed_override);
    cch::ExperimentReport rep = cch::run_experiment(cfg);
    if (!out_csv.empty()) rep.write_csv(out_csv);
    emit(rep.summary_json(), summary_path);
    return rep.all_pass() ? 0 : 1;
}

int cmd_convert(const std::string& chain_path, const std::string& csv_path) {
    cch::Chain T = cch::load_chain(chain_path);
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    const int n = T.domain().n();
    for (int i = 0; i < n; ++i) out << "base" << i << ",";
    out << "axes,coeff\n";
    char buf[64];
    for (const auto& [c, w] : T.coeffs()) {
        for (int i = 0; i < n; ++i) out << c.base[i] << ",";
        for (size_t k = 0; k < c.axes.size(); ++k) out << (k ? " " : "") << c.axes[k];
        std::snprintf(buf, sizeof buf, "%.17g", w);
        out << "," << buf << "\n";
    }
    return 0;
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
    CLI::App app{"cubical chains, flat norms, modulus, and cochain experiments"};
    app.require_subcommand(1);

    std::string chain_path, out_path, filling_out, density_out;
    std::vector<std::string> weights;
    double tol = 1e-9;

    auto* flat = app.add_subcommand("flatnorm", "flat norm of a chain file");
    flat->add_option("--chain", chain_path)->required();
    flat->add_option("--weights", weights)->expected(2);
    flat->add_option("--tol", tol);
    flat->add_option("--out", out_path);

    auto* fill = app.add_subcommand("fillvol", "filling volume of a chain file");
    fill->add_option("--chain", chain_path)->required();
    fill->add_option("--tol", tol);
    fill->add_option("--out", out_path);
    fill->add_option("--filling-out", filling_out);

    std::string family_dir, lambda_dir, fillings_dir, mu_spec = "uniform";
    double p = 2.0;
    double mtol = 1e-8;
    auto* mod = app.add_subcommand("modulus", "p-modulus of a family of chain files");
    mod->add_option("--family", family_dir)->required();
    mod->add_option("--p", p)->required();
    mod->add_option("--mu", mu_spec, "uniform or a weight-density file");
    mod->add_option("--tol", mtol);
    mod->add_option("--out", out_path);
    mod->add_option("--density-out", density_out);

    auto* cap = app.add_subcommand("capacity", "capacity lower bound from fillings");
    cap->add_option("--lambda", lambda_dir)->required();
    cap->add_option("--fillings", fillings_dir)->required();
    cap->add_option("--p", p)->required();
    cap->add_option("--mu", mu_spec, "uniform or a weight-density file");
    cap->add_option("--tol", mtol);
    cap->add_option("--out", out_path);

    std::string form_path, check_kind, density_path;
    auto* ver = app.add_subcommand("verify-cochain", "upper norm / gradient checks");
    ver->add_option("--form", form_path)->required();
    ver->add_option("--check", check_kind)->required();
    ver->add_option("--density", density_path)->required();
    ver->add_option("--family", family_dir);
    ver->add_option("--fillings", fillings_dir);
    ver->add_option("--tol", mtol);
    ver->add_option("--out", out_path);

    std::string exp_name, config_path, summary_path, out_csv;
    long seed = -1;
    auto* exp = app.add_subcommand("experiment", "run a named experiment");
    exp->add_option("name", exp_name)->required();
    exp->add_option("--config", config_path);
    exp->add_option("--out", out_csv);
    exp->add_option("--summary", summary_path);
    exp->add_option("--seed", seed);

    std::string csv_path;
    auto* conv = app.add_subcommand("convert", "chain JSON to CSV");
    conv->add_option("--chain", chain_path)->required();
    conv->add_option("--csv", csv_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (flat->parsed()) return cmd_flatnorm(chain_path, weights, tol, out_path);
        if (fill->parsed()) return cmd_fillvol(chain_path, tol, out_path, filling_out);
        if (mod->parsed()) return cmd_modulus(family_dir, p, mu_spec, mtol, out_path, density_out);
        if (cap->parsed())
            return cmd_capacity(lambda_dir, fillings_dir, p, mu_spec, mtol, out_path);
        if (ver->parsed())
            return cmd_verify(form_path, check_kind, density_path, family_dir,
                              fillings_dir, mtol, out_path);
        if (exp->parsed())
            return cmd_experiment(exp_name, config_path, out_csv, summary_path, seed);
        if (conv->parsed()) return cmd_convert(chain_path, csv_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int main(int argc, char** argv) { return cli_dispatch(argc, argv); }
