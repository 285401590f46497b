#include "rarecount/cli/commands.hpp"

#include "rarecount/grid.hpp"
#include "rarecount/lod.hpp"
#include "rarecount/poisson.hpp"
#include "rarecount/quant.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <optional>
#include <ostream>

namespace rarecount::cli {

using Json = nlohmann::ordered_json;

namespace {

Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_printed(v);
}

Json number(const std::optional<double>& v) {
    return v ? number(*v) : Json(nullptr);
}

void write_json(const Json& doc, std::ostream& out) {
    out << doc.dump(2) << '\n';
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
        out_ << '\n';
    }

    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_number(cells[i]);
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

}  // namespace

std::string format_number(double value) {
    return fmt::format("{:.6g}", value);
}

double round_printed(double value) {
    if (!std::isfinite(value)) return value;
    return std::stod(format_number(value));
}

ProtocolConstants protocol_preset(std::string_view name) {
    ProtocolConstants p;
    if (name == "research") return p;
    if (name == "diagnostic") {
        p.thick_film_wbc_count = kDiagnosticWbcCount;
        return p;
    }
    if (name == "peru") {
        p.wbc_per_ul = kPeruWbcPerUl;
        return p;
    }
    throw std::invalid_argument("unknown protocol preset '" + std::string(name) + "'");
}

void write_poisson_table(const PoissonTableOptions& opts, std::ostream& out) {
    if (!(opts.parasitemia >= 0.0)) throw std::domain_error("parasitemia must be >= 0");
    if (opts.kmax < 0) throw std::domain_error("kmax must be >= 0");

    std::vector<std::string> names{"k"};
    std::vector<PoissonParam> params;
    for (double v : opts.volumes_ul) {
        const VolumeSpec vol(v, opts.clinical_ul);
        params.emplace_back(opts.parasitemia * vol.ratio());
        names.push_back("pmf_v" + format_number(v));
    }
    CsvWriter csv(out);
    csv.header(names);
    for (std::int64_t k = 0; k <= opts.kmax; ++k) {
        std::vector<double> cells{static_cast<double>(k)};
        for (const auto& lam : params) cells.push_back(pmf(k, lam));
        csv.row(cells);
    }
}

void write_lod_report(const LodOptions& opts, std::ostream& out) {
    LodQuery query;
    query.target_lod = opts.target_lod;
    query.confidence = opts.confidence;
    query.volume_grid_ul = opts.grid_ul;
    query.clinical_ul = opts.clinical_ul;
    const LodResult res = min_volume_for_lod(opts.profile, query);

    Json doc;
    doc["target_lod"] = number(opts.target_lod);
    doc["confidence"] = number(opts.confidence);
    doc["clinical_volume_ul"] = number(opts.clinical_ul);
    doc["feasible"] = res.feasible;
    doc["min_volume_ul"] = number(res.min_volume_ul);
    doc["threshold_t"] = number(res.threshold_t);
    doc["required_true_parasites"] = number(res.required_true_parasites);
    doc["asymptotically_infeasible"] = res.asymptotically_infeasible;
    doc["asymptotic_lod_floor"] = number(asymptotic_lod_floor(opts.profile, opts.confidence));
    Json grid = Json::array();
    for (const auto& pt : res.sweep) {
        Json row;
        row["volume_ul"] = number(pt.volume_ul);
        row["required_true_parasites"] = number(pt.required_true_parasites);
        row["threshold_t"] = number(pt.threshold_t);
        row["lambda"] = number(pt.lambda);
        row["tail_prob"] = number(pt.tail_prob);
        row["feasible"] = pt.feasible;
        grid.push_back(std::move(row));
    }
    doc["grid"] = std::move(grid);
    write_json(doc, out);
}

void write_quant_terms(const QuantTermsOptions& opts, std::ostream& out) {
    const VolumeSpec volume(opts.volume_ul, opts.clinical_ul);
    if (!is_positive_increasing(opts.p_grid) || opts.p_grid.empty()) {
        throw std::domain_error("parasitemia grid must be non-empty, increasing and positive");
    }
    CsvWriter csv(out);
    csv.header({"p", "vse_term", "sigma_s_term", "poisson_term", "cross_term", "mu_f_term", "sigma_f_term", "total"});
    for (double p : opts.p_grid) {
        const auto b = std_error_breakdown(opts.profile, p, volume);
        csv.row({p, b.vse_term, b.sigma_s_term, b.poisson_term, b.poisson_sigma_s_cross_term, b.mu_f_term,
                 b.sigma_f_term, b.total});
    }
}

void write_quant_compare(const QuantCompareOptions& opts, std::ostream& out) {
    opts.protocol.validate();
    const ErrorCurve human = human_protocol_curve(opts.p_grid, 0.0, opts.protocol, opts.clinical_ul);
    const ErrorCurve human_vse = human_protocol_curve(opts.p_grid, opts.human_vse, opts.protocol, opts.clinical_ul);

    std::vector<std::string> names{"p", "human_protocol", "human_protocol_plus_vse"};
    std::vector<ErrorCurve> machines;
    for (double v : opts.volumes_ul) {
        machines.push_back(machine_curve(opts.profile, opts.p_grid, VolumeSpec(v, opts.clinical_ul)));
        names.push_back("machine_v" + format_number(v));
    }
    CsvWriter csv(out);
    csv.header(names);
    for (std::size_t i = 0; i < opts.p_grid.size(); ++i) {
        std::vector<double> cells{opts.p_grid[i], human.std_errors[i], human_vse.std_errors[i]};
        for (const auto& m : machines) cells.push_back(m.std_errors[i]);
        csv.row(cells);
    }
}

void write_simulation(const SimulateOptions& opts, std::ostream& out) {
    const SimConfig& cfg = opts.config;
    const BracketReport rep = bracket_check(cfg, opts.tolerance);
    const SimOutcome& sim = rep.outcome;

    Json doc;
    doc["p"] = number(cfg.parasitemia);
    doc["volume_ul"] = number(cfg.volume.examined_ul());
    doc["clinical_volume_ul"] = number(cfg.volume.clinical_ul());
    doc["n_draws"] = cfg.n_draws;
    doc["seed"] = cfg.seed;
    doc["tp_model"] = std::string(to_string(cfg.tp_model));
    doc["empirical_mean_phat"] = number(sim.empirical_mean_phat);
    doc["empirical_std_error"] = number(sim.empirical_std_error);
    doc["n_truncated_draws"] = sim.n_truncated_draws;

    Json bracket;
    bracket["empirical"] = number(rep.empirical);
    bracket["analytic_linear"] = number(rep.analytic_linear);
    bracket["quadrature_bound"] = number(rep.quadrature_bound);
    bracket["mc_std_error"] = number(rep.mc_std_error);
    bracket["tolerance"] = number(rep.tolerance);
    bracket["status"] = std::string(to_string(rep.status));
    if (rep.status == BracketStatus::skipped) {
        bracket["pass"] = nullptr;
    } else {
        bracket["pass"] = rep.status == BracketStatus::pass;
    }
    doc["bracket"] = std::move(bracket);
    write_json(doc, out);
}

void write_estimate(const EstimateOptions& opts, std::ostream& out) {
    const auto est = estimate_parasitemia(SuspectCount{opts.suspects, opts.volume_estimate_ul}, opts.profile,
                                          opts.clinical_ul);
    Json doc;
    doc["p_hat"] = number(est.p_hat);
    doc["clamped_p_hat"] = number(est.clamped());
    doc["below_expected_fp"] = est.below_expected_fp;
    write_json(doc, out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson vs. classifier error budgets for rare-object counting", "rarecount"};
    app.require_subcommand(1);

    std::string config_path;
    std::string volumes_text;
    std::string grid_text;
    std::string p_grid_text;
    std::string protocol_name = "research";
    std::string tp_model_text = "expected_value";
    double clinical_ul = 1.0;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "classifier profile file (key = value)")->required();
    };
    const auto add_clinical = [&](CLI::App* sub) {
        sub->add_option("--clinical-volume", clinical_ul, "clinical reference volume cV in uL")
            ->capture_default_str();
    };

    PoissonTableOptions table;
    auto* cmd_table = app.add_subcommand("poisson-table", "Poisson pmf of the count in each examined volume");
    cmd_table->add_option("--parasitemia", table.parasitemia, "objects per cV")->required();
    cmd_table->add_option("--volumes", volumes_text, "comma-separated volumes in uL")->required();
    cmd_table->add_option("--kmax", table.kmax, "largest count row")->capture_default_str();
    add_clinical(cmd_table);

    LodOptions lod;
    auto* cmd_lod = app.add_subcommand("lod", "minimum examined volume for a target limit of detection");
    add_config(cmd_lod);
    cmd_lod->add_option("--target-lod", lod.target_lod, "target LoD, objects per cV")->required();
    cmd_lod->add_option("--grid", grid_text, "volume grid, start:stop:step[,...] in uL")->required();
    cmd_lod->add_option("--confidence", lod.confidence, "detection confidence")->capture_default_str();
    add_clinical(cmd_lod);

    QuantTermsOptions terms;
    auto* cmd_terms = app.add_subcommand("quant-terms", "per-term standard error of quantitation");
    add_config(cmd_terms);
    cmd_terms->add_option("--volume", terms.volume_ul, "examined volume in uL")->required();
    cmd_terms->add_option("--p-grid", p_grid_text, "parasitemia grid, start:stop:step[,...]");
    add_clinical(cmd_terms);

    QuantCompareOptions compare;
    auto* cmd_compare = app.add_subcommand("quant-compare", "machine vs. protocol-reader standard error curves");
    add_config(cmd_compare);
    cmd_compare->add_option("--volumes", volumes_text, "comma-separated machine volumes in uL (may be empty)");
    cmd_compare->add_option("--human-vse", compare.human_vse, "human volume-estimation error")
        ->capture_default_str();
    cmd_compare->add_option("--p-grid", p_grid_text, "parasitemia grid, start:stop:step[,...]");
    cmd_compare->add_option("--protocol", protocol_name, "research | diagnostic | peru")->capture_default_str();
    add_clinical(cmd_compare);

    SimulateOptions simulate;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 0;
    double sim_p = 0.0;
    double sim_volume = 0.0;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo check of the analytic error budget");
    add_config(cmd_sim);
    cmd_sim->add_option("--p", sim_p, "true parasitemia per cV")->required();
    cmd_sim->add_option("--volume", sim_volume, "examined volume in uL")->required();
    cmd_sim->add_option("--draws", draws, "number of simulated samples")->capture_default_str();
    cmd_sim->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    cmd_sim->add_option("--tp-model", tp_model_text, "expected_value | binomial")->capture_default_str();
    cmd_sim->add_option("--tolerance", simulate.tolerance, "relative bracket tolerance")->capture_default_str();

    EstimateOptions estimate;
    auto* cmd_est = app.add_subcommand("estimate", "parasitemia estimate from a suspect count");
    add_config(cmd_est);
    cmd_est->add_option("--suspects", estimate.suspects, "suspect count (tp + fp)")->required();
    cmd_est->add_option("--volume-estimate", estimate.volume_estimate_ul, "estimated examined volume in uL")
        ->required();
    add_clinical(cmd_est);

    std::vector<const char*> argv{"rarecount"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitUsage;
    }

    try {
        const auto profile = [&] { return load_profile_config(config_path); };
        const auto p_grid = [&] {
            return p_grid_text.empty() ? default_parasitemia_grid() : parse_grid_spec(p_grid_text);
        };

        if (cmd_table->parsed()) {
            table.volumes_ul = parse_number_list(volumes_text);
            table.clinical_ul = clinical_ul;
            write_poisson_table(table, out);
        } else if (cmd_lod->parsed()) {
            lod.profile = profile().profile;
            lod.grid_ul = parse_grid_spec(grid_text);
            lod.clinical_ul = clinical_ul;
            write_lod_report(lod, out);
        } else if (cmd_terms->parsed()) {
            terms.profile = profile().profile;
            terms.p_grid = p_grid();
            terms.clinical_ul = clinical_ul;
            write_quant_terms(terms, out);
        } else if (cmd_compare->parsed()) {
            const ProfileConfig cfg = profile();
            compare.profile = cfg.profile;
            compare.protocol = cfg.apply_to(protocol_preset(protocol_name));
            compare.volumes_ul = parse_number_list(volumes_text);
            compare.p_grid = p_grid();
            compare.clinical_ul = clinical_ul;
            write_quant_compare(compare, out);
        } else if (cmd_sim->parsed()) {
            SimConfig& c = simulate.config;
            c.profile = profile().profile;
            c.parasitemia = sim_p;
            c.volume = VolumeSpec(sim_volume);
            c.n_draws = draws;
            c.seed = seed;
            c.tp_model = parse_tp_model(tp_model_text);
            write_simulation(simulate, out);
        } else if (cmd_est->parsed()) {
            estimate.profile = profile().profile;
            estimate.clinical_ul = clinical_ul;
            write_estimate(estimate, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    out.flush();
    return kExitOk;
}

}  // namespace rarecount::cli
