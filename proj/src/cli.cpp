#include "seedbank/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedbank/age_distribution.hpp"
#include "seedbank/ancestry.hpp"
#include "seedbank/errors.hpp"
#include "seedbank/forward.hpp"
#include "seedbank/io.hpp"
#include "seedbank/kernels.hpp"
#include "seedbank/renewal.hpp"
#include "seedbank/stats.hpp"
#include "seedbank/urn.hpp"

namespace seedbank::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* const kKnownFields[] = {"distribution", "N",     "n",     "H",          "T",
                                    "B",            "p",     "lags",  "replicates", "seed",
                                    "out",          "times", "states"};

struct Config {
    std::optional<AgeDistribution> distribution;
    std::optional<std::uint64_t> population;   // N
    std::optional<std::uint64_t> sample_size;  // n
    std::optional<std::uint64_t> horizon;      // H
    std::optional<std::uint32_t> window;       // T
    std::optional<std::uint32_t> burn_in;      // B
    std::optional<double> p;
    std::optional<std::vector<std::uint64_t>> lags;
    std::optional<std::uint64_t> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::vector<double>> times;
    std::optional<std::vector<std::vector<std::uint64_t>>> states;
    json raw;
};

struct Options {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 1;
    std::string isa = "auto";
    bool dump_window = false;
};

template <typename T>
T field_as(const json& j, const char* name) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("field \"") + name + "\" has the wrong type");
    }
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file: " + path);
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!raw.is_object()) throw config_error("config must be a JSON object");
    for (const auto& [key, value] : raw.items()) {
        (void)value;
        if (std::find_if(std::begin(kKnownFields), std::end(kKnownFields),
                         [&](const char* k) { return key == k; }) == std::end(kKnownFields))
            throw config_error("unknown config field: \"" + key + "\"");
    }
    Config c;
    c.raw = raw;
    if (raw.contains("distribution")) {
        try {
            c.distribution = AgeDistribution::from_json(raw["distribution"]);
        } catch (const invalid_parameter_error& e) {
            throw config_error(std::string("field \"distribution\": ") + e.what());
        }
    }
    if (raw.contains("N")) c.population = field_as<std::uint64_t>(raw["N"], "N");
    if (raw.contains("n")) c.sample_size = field_as<std::uint64_t>(raw["n"], "n");
    if (raw.contains("H")) c.horizon = field_as<std::uint64_t>(raw["H"], "H");
    if (raw.contains("T")) c.window = field_as<std::uint32_t>(raw["T"], "T");
    if (raw.contains("B")) c.burn_in = field_as<std::uint32_t>(raw["B"], "B");
    if (raw.contains("p")) c.p = field_as<double>(raw["p"], "p");
    if (raw.contains("lags")) c.lags = field_as<std::vector<std::uint64_t>>(raw["lags"], "lags");
    if (raw.contains("replicates"))
        c.replicates = field_as<std::uint64_t>(raw["replicates"], "replicates");
    if (raw.contains("seed")) c.seed = field_as<std::uint64_t>(raw["seed"], "seed");
    if (raw.contains("out")) c.out = field_as<std::string>(raw["out"], "out");
    if (raw.contains("times")) c.times = field_as<std::vector<double>>(raw["times"], "times");
    if (raw.contains("states"))
        c.states = field_as<std::vector<std::vector<std::uint64_t>>>(raw["states"], "states");

    if (c.p && !(*c.p >= 0.0 && *c.p <= 1.0))
        throw config_error("field \"p\" must lie in [0,1]");
    for (const char* positive : {"N", "n", "T", "replicates"}) {
        if (raw.contains(positive) && raw[positive].is_number() &&
            field_as<std::uint64_t>(raw[positive], positive) == 0)
            throw config_error(std::string("field \"") + positive + "\" must be positive");
    }
    return c;
}

std::uint64_t resolve_seed(const Config& config, const Options& opt) {
    if (opt.seed_override) return *opt.seed_override;
    if (config.seed) return *config.seed;
    throw config_error("no seed given: reproducibility is mandatory, set \"seed\" in the "
                       "config or pass --seed");
}

std::filesystem::path resolve_out(const Config& config, const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (config.out) return *config.out;
    throw config_error("no output directory given: set \"out\" in the config or pass --out");
}

template <typename T>
const T& require(const std::optional<T>& field, const char* name, const char* subcommand) {
    if (!field)
        throw config_error(std::string(subcommand) + " requires config field \"" + name + "\"");
    return *field;
}

// Resolved-config echo embedded in every output. Thread count and ISA are
// speed knobs, not part of the experiment, and stay out of it.
ordered_json config_echo(const std::string& subcommand, const Config& config,
                         std::uint64_t seed) {
    ordered_json echo;
    echo["subcommand"] = subcommand;
    for (const char* key : kKnownFields) {
        const std::string k = key;
        if (k == "seed" || k == "out") continue;
        if (config.raw.contains(k)) echo[k] = config.raw[k];
    }
    echo["seed"] = seed;
    return echo;
}

std::vector<std::string> csv_header(const ordered_json& echo) {
    return {"config: " + echo.dump()};
}

void apply_isa(const std::string& isa) {
    if (isa == "auto") return;
    if (isa == "scalar") {
        kernels::force_isa(kernels::Isa::scalar);
    } else if (isa == "avx2") {
        kernels::force_isa(kernels::Isa::avx2);
    } else {
        throw config_error("--isa must be auto, scalar or avx2");
    }
}

ordered_json tail_sum_json(const TailSum& sum) {
    ordered_json j;
    j["value"] = sum.value;
    j["trailing_tenth_increment"] = sum.tail_increment;
    j["trailing_tenth_fraction"] = sum.tail_fraction();
    j["converged_1e-4"] = sum.converged();
    return j;
}

// ---------------------------------------------------------------- renewal-seq

int run_renewal_seq(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "renewal-seq");
    const std::uint64_t horizon = require(config.horizon, "H", "renewal-seq");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("renewal-seq", config, seed);

    const RenewalSequence seq = compute_renewal_sequence(dist, horizon);
    std::vector<McEstimate> mc;
    if (config.replicates)
        mc = mc_renewal_profile(dist, horizon, *config.replicates, seed, opt.threads);

    std::vector<std::string> columns = {"n", "q_n"};
    if (!mc.empty()) {
        columns.push_back("mc_estimate");
        columns.push_back("mc_std_error");
    }
    CsvWriter csv(out / "renewal_seq.csv", csv_header(echo), columns);
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        std::vector<std::string> cells = {format_number(n), format_number(seq.q[n])};
        if (!mc.empty()) {
            cells.push_back(format_number(mc[n].estimate));
            cells.push_back(format_number(mc[n].std_error));
        }
        csv.row(cells);
    }

    ordered_json summary;
    summary["config"] = echo;
    summary["sum_q_squared"] = tail_sum_json(sum_q_squared(seq));
    if (dist.finite_mean()) {
        summary["renewal_limit"] = 1.0 / dist.mean();
        summary["q_at_horizon"] = seq.q[horizon];
    }
    write_json_file(out / "renewal_seq.json", summary);
    return 0;
}

// ---------------------------------------------------------------------- tmrca

int run_tmrca(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "tmrca");
    const std::uint64_t population = require(config.population, "N", "tmrca");
    const std::uint64_t horizon = require(config.horizon, "H", "tmrca");
    const std::uint64_t replicates = require(config.replicates, "replicates", "tmrca");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("tmrca", config, seed);

    const TmrcaBatch batch =
        simulate_tmrca_batch(population, dist, horizon, replicates, seed, opt.threads);

    CsvWriter csv(out / "tmrca_replicates.csv", csv_header(echo),
                  {"replicate", "outcome", "tau_or_horizon"});
    for (std::uint64_t rep = 0; rep < replicates; ++rep) {
        const PairOutcome& o = batch.outcomes[rep];
        csv.row({format_number(rep), o.merged ? "merged" : "censored",
                 format_number(o.generation)});
    }

    ordered_json summary;
    summary["config"] = echo;
    summary["merged"] = batch.merged;
    summary["censored"] = batch.censored;
    summary["censored_fraction"] = batch.censored_fraction();
    const Interval met = wilson_interval(batch.merged, replicates, 1.959963984540054);
    summary["met_fraction_wilson95"] = ordered_json{{"lo", met.lo}, {"hi", met.hi}};
    if (batch.merged > 0) {
        summary["conditional_mean_tau"] = batch.conditional_mean_tau.mean;
        summary["conditional_mean_tau_std_error"] = batch.conditional_mean_tau.std_error;
        summary["conditional_mean_tau_over_N"] =
            batch.conditional_mean_tau.mean / static_cast<double>(population);
    }
    if (dist.finite_mean()) {
        const double beta = dist.beta();
        summary["kingman_expected_tau_over_N"] = expected_kingman_tmrca(2, beta);
    }
    write_json_file(out / "tmrca_summary.json", summary);
    return 0;
}

// ----------------------------------------------------------- kingman-survival

int run_kingman_survival(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "kingman-survival");
    const std::uint64_t population = require(config.population, "N", "kingman-survival");
    const std::uint64_t replicates = require(config.replicates, "replicates", "kingman-survival");
    const auto& times = require(config.times, "times", "kingman-survival");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("kingman-survival", config, seed);

    if (!dist.finite_mean())
        throw regime_error("kingman-survival requires a finite-mean age distribution "
                           "(the time-changed Kingman limit needs E[eta] < infinity)");
    const double beta = dist.beta();

    const auto curve = pairwise_no_coalescence_curve(population, dist, times, replicates,
                                                     seed, opt.threads);
    CsvWriter csv(out / "survival.csv", csv_header(echo),
                  {"t", "survival", "wilson_lo", "wilson_hi", "reference"});
    for (const SurvivalPoint& pt : curve)
        csv.row({format_number(pt.t), format_number(pt.survival), format_number(pt.wilson.lo),
                 format_number(pt.wilson.hi), format_number(pt.reference)});

    // KS of tau/N against the exponential limit
    double t_max = 1.0;
    for (double t : times) t_max = std::max(t_max, t);
    const auto horizon = static_cast<std::uint64_t>(
        static_cast<double>(population) * (t_max + 64.0 / (beta * beta)));
    const TmrcaBatch batch =
        simulate_tmrca_batch(population, dist, horizon, replicates, seed, opt.threads);
    std::vector<double> scaled;
    scaled.reserve(batch.outcomes.size());
    for (const PairOutcome& o : batch.outcomes)
        if (o.merged)
            scaled.push_back(static_cast<double>(o.generation) /
                             static_cast<double>(population));
    std::sort(scaled.begin(), scaled.end());
    const double rate = beta * beta;
    const KsResult ks =
        ks_statistic(scaled, [rate](double t) { return 1.0 - std::exp(-rate * t); });

    ordered_json summary;
    summary["config"] = echo;
    summary["beta"] = beta;
    summary["rate"] = rate;
    summary["censored"] = batch.censored;
    summary["ks_statistic"] = ks.statistic;
    summary["ks_p_value"] = ks.p_value;
    write_json_file(out / "kingman_summary.json", summary);
    return 0;
}

// ------------------------------------------------------------ urn-stationarity

int run_urn_stationarity(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "urn-stationarity");
    const std::uint64_t n = require(config.sample_size, "n", "urn-stationarity");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("urn-stationarity", config, seed);

    ordered_json summary;
    summary["config"] = echo;

    if (dist.support_max() != 0) {
        summary["exact_max_residual"] = verify_stationarity_exact(n, dist);
    } else {
        summary["exact_max_residual"] = nullptr;
        summary["note"] = "exact check needs a finitely supported age law; "
                          "use truncation for power laws";
    }

    if (config.replicates) {
        // chi-square of the first-urn marginal against Binomial(n, beta_1),
        // chains started from (and remaining in) the stationary law
        const std::uint64_t reps = *config.replicates;
        RngStream rng(seed, 0);
        const double beta1 = 1.0 / dist.mean();
        std::vector<std::uint64_t> observed(n + 1, 0);
        for (std::uint64_t r = 0; r < reps; ++r) {
            UrnState state = sample_stationary(n, dist, rng);
            state = step_urn(state, dist, rng);
            observed[state.first_urn_count()] += 1;
        }
        std::vector<double> expected(n + 1);
        for (std::uint64_t k = 0; k <= n; ++k) {
            double logp = std::lgamma(static_cast<double>(n) + 1.0) -
                          std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                          static_cast<double>(k) * std::log(beta1) +
                          static_cast<double>(n - k) * std::log1p(-beta1);
            expected[k] = std::exp(logp);
        }
        const ChiSquareResult chi = chi_square_gof(observed, expected);
        summary["first_urn_chi_square"] =
            ordered_json{{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    }

    // sectioned-chain trajectory when a section count and step budget are given
    if (config.population && config.horizon) {
        RngStream rng(seed, 1);
        UrnState start = sample_stationary(n, dist, rng);
        SectionedUrnState chain = SectionedUrnState::start(
            start.dense(std::max<std::uint64_t>(start.max_occupied_urn(), 1)),
            *config.population, rng);
        CsvWriter csv(out / "urn_trajectory.csv", csv_header(echo),
                      {"step", "first_urn_count", "ball_count", "mergers"});
        for (std::uint64_t step = 1; step <= *config.horizon && chain.ball_count() > 1; ++step) {
            const std::uint64_t mergers = chain.step(dist, rng);
            csv.row({format_number(step), format_number(chain.first_urn_count()),
                     format_number(chain.ball_count()), format_number(mergers)});
        }
    }

    write_json_file(out / "urn_stationarity.json", summary);
    return 0;
}

// ------------------------------------------------------------------ merger-rate

int run_merger_rate(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "merger-rate");
    const std::uint64_t population = require(config.population, "N", "merger-rate");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("merger-rate", config, seed);

    ordered_json summary;
    summary["config"] = echo;

    std::vector<std::vector<std::uint64_t>> states;
    if (config.states)
        states = *config.states;
    else
        states = {{2}, {1, 1}};
    ordered_json state_rows = ordered_json::array();
    for (const auto& counts : states) {
        const UrnState state = UrnState::from_counts(counts);
        ordered_json row;
        row["state"] = counts;
        row["leading_term"] = single_merger_probability_leading(state, dist, population);
        if (dist.support_max() != 0) {
            const double exact = exact_single_merger_probability(state, dist, population);
            row["exact_enumeration"] = exact;
            row["residual"] = exact - row["leading_term"].get<double>();
        }
        state_rows.push_back(row);
    }
    summary["states"] = state_rows;

    if (config.sample_size && config.replicates) {
        const std::uint64_t n = *config.sample_size;
        const std::uint64_t reps = *config.replicates;
        RngStream rng(seed, 0);
        std::vector<double> draws;
        draws.reserve(reps);
        for (std::uint64_t r = 0; r < reps; ++r) {
            const UrnState state = sample_stationary(n, dist, rng);
            draws.push_back(single_merger_probability_leading(state, dist, population));
        }
        const SummaryEstimate est = summarize(draws);
        summary["stationary_average"] =
            ordered_json{{"mean", est.mean}, {"std_error", est.std_error}};
        summary["stationary_rate_formula"] = stationary_merger_rate(n, dist, population);
    }

    write_json_file(out / "merger_rate.json", summary);
    return 0;
}

// ----------------------------------------------------------------- forward-corr

int run_forward_corr(const Config& config, const Options& opt) {
    CorrelationRequest request;
    request.dist = require(config.distribution, "distribution", "forward-corr");
    request.population = require(config.population, "N", "forward-corr");
    request.window_depth = require(config.window, "T", "forward-corr");
    request.burn_in = config.burn_in.value_or(0);
    request.p = require(config.p, "p", "forward-corr");
    request.lags = require(config.lags, "lags", "forward-corr");
    request.replicates = require(config.replicates, "replicates", "forward-corr");
    request.master_seed = resolve_seed(config, opt);
    request.threads = opt.threads;
    request.exact_horizon = config.horizon.value_or(0);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("forward-corr", config, request.master_seed);

    const CorrelationReport report = estimate_correlation_mc(request);

    ordered_json summary;
    summary["config"] = echo;
    summary["replicates"] = report.replicates;
    summary["measurement_generation"] = report.measurement_generation;
    summary["mean_y"] = report.mean_y;
    summary["mean_y_std_error"] = report.mean_y_std_error;
    summary["var_y"] = report.var_y;
    summary["var_y_std_error"] = report.var_y_std_error;
    if (std::isfinite(report.exact_var)) summary["exact_var"] = report.exact_var;
    summary["external_parent_fraction"] = report.external_parent_fraction;
    ordered_json lag_rows = ordered_json::array();
    for (const LagStat& stat : report.lags) {
        ordered_json row;
        row["lag"] = stat.lag;
        row["cov"] = stat.cov;
        row["cov_std_error"] = stat.cov_std_error;
        row["corr"] = stat.corr;
        if (std::isfinite(stat.exact_cov)) {
            row["exact_cov"] = stat.exact_cov;
            row["bias_bound"] = stat.bias_bound;
        }
        lag_rows.push_back(row);
    }
    summary["lags"] = lag_rows;
    write_json_file(out / "forward_corr.json", summary);

    // frequency series + optional debug dump from replicate 0
    {
        RngStream rng = replicate_stream(request.master_seed, 0);
        const GenealogyWindow window = build_genealogy(
            static_cast<std::uint32_t>(request.population), request.window_depth,
            request.burn_in, request.dist, rng);
        const ComponentLabeling labeling = label_components(window);
        const TypeField types = assign_types(labeling, request.p, rng);
        const std::int64_t from = -static_cast<std::int64_t>(request.window_depth);
        const auto series = frequency_series(types, from, 0);
        CsvWriter csv(out / "freq_series.csv", csv_header(echo), {"generation", "Y"});
        for (std::size_t i = 0; i < series.size(); ++i)
            csv.row({format_number(from + static_cast<std::int64_t>(i)),
                     format_number(series[i])});

        if (opt.dump_window) {
            CsvWriter dump(out / "window_debug.csv", csv_header(echo),
                           {"generation", "label", "parent_generation", "parent_label",
                            "component", "type"});
            for (std::int64_t gen = window.bottom_generation(); gen <= 0; ++gen) {
                for (std::uint32_t label = 1; label <= window.population; ++label) {
                    const std::size_t v = window.vertex(gen, label);
                    dump.row({format_number(gen), format_number(std::uint64_t{label}),
                              format_number(window.parent_generation[v]),
                              format_number(std::uint64_t{window.parent_label[v]}),
                              format_number(std::int64_t{labeling.component[v]}),
                              types.type_a[v] ? "a" : "A"});
                }
            }
        }
    }
    return 0;
}

// -------------------------------------------------------------------- tauberian

int run_tauberian(const Config& config, const Options& opt) {
    const auto& dist = require(config.distribution, "distribution", "tauberian");
    const std::uint64_t horizon = require(config.horizon, "H", "tauberian");
    const auto& lags = require(config.lags, "lags", "tauberian");
    const std::uint64_t seed = resolve_seed(config, opt);
    const auto out = resolve_out(config, opt);
    const auto echo = config_echo("tauberian", config, seed);

    if (dist.kind() != AgeKind::power_law)
        throw regime_error("tauberian ratio tables require a power-law age distribution");
    const double alpha = dist.alpha();
    if (!(alpha < 1.0))
        throw regime_error("tauberian partial-sum asymptote requires alpha in (0,1)");

    const RenewalSequence seq = compute_renewal_sequence(dist, horizon);
    const bool cross_ok = alpha < 0.5;

    std::vector<std::string> columns = {"i", "partial_sum", "partial_asymptote", "partial_ratio"};
    if (cross_ok) {
        for (const char* c : {"cross_sum", "cross_asymptote", "cross_ratio",
                              "cross_asymptote_adjusted", "cross_ratio_adjusted"})
            columns.push_back(c);
    }
    CsvWriter csv(out / "tauberian.csv", csv_header(echo), columns);
    for (const std::uint64_t i : lags) {
        if (i > horizon) throw config_error("tauberian index exceeds the horizon");
        std::vector<std::string> cells;
        const double part = partial_sum(seq, i);
        const double part_asym = tauberian_partial_sum_asymptote(alpha, i);
        cells = {format_number(i), format_number(part), format_number(part_asym),
                 format_number(part / part_asym)};
        if (cross_ok) {
            const double cross = cross_sum(seq, i).value;
            const double asym = tauberian_cross_sum_asymptote(alpha, i);
            const double adjusted = tauberian_cross_sum_asymptote_adjusted(alpha, i);
            cells.push_back(format_number(cross));
            cells.push_back(format_number(asym));
            cells.push_back(format_number(cross / asym));
            cells.push_back(format_number(adjusted));
            cells.push_back(format_number(cross / adjusted));
        }
        csv.row(cells);
    }

    ordered_json summary;
    summary["config"] = echo;
    summary["sum_q_squared"] = tail_sum_json(sum_q_squared(seq));
    write_json_file(out / "tauberian.json", summary);
    return 0;
}

// --------------------------------------------------------------------- validate

int run_validate(const Config& config, const std::string& for_subcommand) {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    if (!config.distribution) errors.push_back("missing field: distribution");
    if (!config.seed) errors.push_back("missing field: seed (no wall-clock default)");

    if (config.distribution && config.distribution->kind() == AgeKind::power_law) {
        const double alpha = config.distribution->alpha();
        if (alpha == 0.5 || alpha == 1.0)
            warnings.push_back("alpha is exactly at a boundary case (1/2 or 1) where the "
                               "behavior depends on the slowly varying factor; no regime "
                               "result applies");
        else if (std::abs(alpha - 0.5) < 0.01 || std::abs(alpha - 1.0) < 0.01)
            warnings.push_back("alpha lies within 0.01 of a regime boundary; asymptotic "
                               "hypotheses are close to violated");
    }

    static const std::map<std::string, std::vector<std::string>> required = {
        {"renewal-seq", {"distribution", "H"}},
        {"tmrca", {"distribution", "N", "H", "replicates"}},
        {"kingman-survival", {"distribution", "N", "replicates", "times"}},
        {"urn-stationarity", {"distribution", "n"}},
        {"merger-rate", {"distribution", "N"}},
        {"forward-corr", {"distribution", "N", "T", "p", "lags", "replicates"}},
        {"tauberian", {"distribution", "H", "lags"}},
    };
    if (!for_subcommand.empty()) {
        const auto it = required.find(for_subcommand);
        if (it == required.end()) {
            errors.push_back("unknown subcommand for --for: " + for_subcommand);
        } else {
            for (const std::string& field : it->second)
                if (!config.raw.contains(field))
                    errors.push_back("missing field for " + for_subcommand + ": " + field);
        }
    }

    for (const std::string& e : errors) std::cout << "error: " << e << "\n";
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
    if (errors.empty() && warnings.empty()) std::cout << "config is valid\n";
    return errors.empty() ? 0 : 2;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"seedbank: simulation and exact computation for Wright-Fisher models "
                 "with general ancestor age distributions"};
    app.require_subcommand(1);

    Options opt;
    std::string validate_for;

    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", opt.config_path, "JSON config file")->required();
        if (needs_out)
            sub->add_option("--out", opt.out_dir, "output directory (overrides config \"out\")");
        sub->add_option("--seed", opt.seed_override, "master seed (overrides config \"seed\")");
        sub->add_option("--threads", opt.threads,
                        "worker threads (speed only; outputs are thread-count invariant)");
        sub->add_option("--isa", opt.isa, "kernel variant: auto|scalar|avx2");
    };

    CLI::App* renewal_seq = app.add_subcommand(
        "renewal-seq",
        "Renewal sequence q_n.\nWrites renewal_seq.csv (n,q_n[,mc_estimate,mc_std_error]) "
        "and renewal_seq.json (q-square sum diagnostics).\nConfig: distribution, H "
        "[, replicates for the Monte-Carlo columns].");
    add_common(renewal_seq, true);

    CLI::App* tmrca = app.add_subcommand(
        "tmrca",
        "Pairwise time to the most recent common ancestor.\nWrites tmrca_replicates.csv "
        "(replicate,outcome,tau_or_horizon) and tmrca_summary.json (censored fraction, "
        "conditional means).\nConfig: distribution, N, H, replicates.");
    add_common(tmrca, true);

    CLI::App* kingman = app.add_subcommand(
        "kingman-survival",
        "Survival curve P(tau > N t) against the exponential limit exp(-beta^2 t), with a "
        "KS test of tau/N.\nWrites survival.csv (t,survival,wilson_lo,wilson_hi,reference) "
        "and kingman_summary.json.\nConfig: distribution (finite mean), N, replicates, times.");
    add_common(kingman, true);

    CLI::App* urn = app.add_subcommand(
        "urn-stationarity",
        "Urn chain stationarity.\nWrites urn_stationarity.json (exact one-step residual for "
        "finitely supported laws; optional chi-square of the first-urn marginal) and, when N "
        "and H are set, urn_trajectory.csv (step,first_urn_count,ball_count,mergers).\n"
        "Config: distribution, n [, replicates, N, H].");
    add_common(urn, true);

    CLI::App* merger = app.add_subcommand(
        "merger-rate",
        "Single-merger probabilities and the stationary merger rate.\nWrites "
        "merger_rate.json (leading term vs exact enumeration per state; stationary average "
        "vs beta_1^2 C(n,2)/N).\nConfig: distribution, N [, states, n, replicates].");
    add_common(merger, true);

    CLI::App* forward = app.add_subcommand(
        "forward-corr",
        "Forward-in-time type correlations.\nWrites forward_corr.json (per-lag covariance "
        "estimate/stderr/exact/bias bound), freq_series.csv (generation,Y) and, with "
        "--dump-window, window_debug.csv (generation,label,parent_generation,parent_label,"
        "component,type).\nConfig: distribution, N, T, p, lags, replicates [, B, H].");
    add_common(forward, true);
    forward->add_flag("--dump-window", opt.dump_window,
                      "write the replicate-0 window as window_debug.csv");

    CLI::App* tauberian = app.add_subcommand(
        "tauberian",
        "Tauberian ratio tables for power-law tails.\nWrites tauberian.csv "
        "(i,partial_sum,partial_asymptote,partial_ratio[,cross_* columns for alpha<1/2]) "
        "and tauberian.json (q-square sum diagnostics).\nConfig: distribution (power_law), "
        "H, lags (the i grid).");
    add_common(tauberian, true);

    CLI::App* validate = app.add_subcommand(
        "validate", "Validate a config file; warns on regime-boundary parameters.");
    validate->add_option("--config", opt.config_path, "JSON config file")->required();
    validate->add_option("--for", validate_for, "check required fields for a subcommand");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_isa(opt.isa);
        const Config config = load_config(opt.config_path);
        if (renewal_seq->parsed()) return run_renewal_seq(config, opt);
        if (tmrca->parsed()) return run_tmrca(config, opt);
        if (kingman->parsed()) return run_kingman_survival(config, opt);
        if (urn->parsed()) return run_urn_stationarity(config, opt);
        if (merger->parsed()) return run_merger_rate(config, opt);
        if (forward->parsed()) return run_forward_corr(config, opt);
        if (tauberian->parsed()) return run_tauberian(config, opt);
        if (validate->parsed()) return run_validate(config, validate_for);
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_parameter_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const regime_error& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace seedbank::cli
