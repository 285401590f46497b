#include "rarecount/sim.hpp"

#include "rarecount/quant.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace rarecount {

std::string_view to_string(TpModel model) noexcept {
    return model == TpModel::binomial ? "binomial" : "expected_value";
}

TpModel parse_tp_model(std::string_view name) {
    if (name == "expected_value" || name == "expected-value") return TpModel::expected_value;
    if (name == "binomial") return TpModel::binomial;
    throw std::invalid_argument("unknown tp model '" + std::string(name) + "'");
}

std::string_view to_string(BracketStatus status) noexcept {
    switch (status) {
        case BracketStatus::pass: return "pass";
        case BracketStatus::fail: return "fail";
        case BracketStatus::skipped: return "skipped";
    }
    return "skipped";
}

void SimConfig::validate() const {
    profile.validate();
    if (!(parasitemia >= 0.0) || !std::isfinite(parasitemia)) {
        throw std::domain_error("parasitemia must be finite and >= 0");
    }
    if (n_draws == 0) {
        throw std::domain_error("n_draws must be >= 1");
    }
    if (tp_model == TpModel::binomial && !poisson_sampling) {
        throw std::domain_error("the binomial tp model needs Poisson-sampled object counts");
    }
}

SampleDrawer::SampleDrawer(const SimConfig& config)
    : config_(config), true_count_(PoissonParam(config.parasitemia * config.volume.ratio())) {
    config_.validate();
}

DrawnSample SampleDrawer::operator()(SimEngine& engine) const {
    const ClassifierProfile& prof = config_.profile;
    const bool binomial = config_.tp_model == TpModel::binomial;
    DrawnSample d;

    d.sensitivity = prof.mu_s;
    if (prof.sigma_s > 0.0) {
        d.sensitivity = std::normal_distribution<double>(prof.mu_s, prof.sigma_s)(engine);
    }
    // tp = p_V S is plain algebra in the expected-value model, so only the
    // binomial model needs S to be a probability.
    const double s_max = binomial ? 1.0 : std::numeric_limits<double>::infinity();
    if (d.sensitivity < 0.0 || d.sensitivity > s_max) {
        d.sensitivity = std::clamp(d.sensitivity, 0.0, s_max);
        d.truncated = true;
    }

    d.fp_rate = prof.mu_f;
    if (prof.sigma_f > 0.0) {
        d.fp_rate = std::normal_distribution<double>(prof.mu_f, prof.sigma_f)(engine);
    }
    if (d.fp_rate < 0.0) {
        d.fp_rate = 0.0;
        d.truncated = true;
    }

    const double v = config_.volume.examined_ul();
    d.estimated_volume_ul = v;
    if (prof.v_se > 0.0) {
        std::normal_distribution<double> rel(0.0, prof.v_se);
        double ve = v * (1.0 + rel(engine));
        while (!(ve > 0.0)) {
            d.truncated = true;
            ve = v * (1.0 + rel(engine));
        }
        d.estimated_volume_ul = ve;
    }

    const double ratio = config_.volume.ratio();
    if (config_.poisson_sampling) {
        d.true_count = static_cast<double>(true_count_(engine));
    } else {
        d.true_count = true_count_.lambda();
    }

    if (binomial) {
        const auto n = static_cast<std::int64_t>(d.true_count);
        d.tp = n > 0 ? static_cast<double>(std::binomial_distribution<std::int64_t>(n, d.sensitivity)(engine)) : 0.0;
        d.fp = static_cast<double>(PoissonSampler(PoissonParam(d.fp_rate * ratio))(engine));
    } else {
        d.tp = d.true_count * d.sensitivity;
        d.fp = d.fp_rate * ratio;
    }
    d.suspects = d.tp + d.fp;
    return d;
}

DrawnSample draw_sample(const SimConfig& config, SimEngine& engine) {
    return SampleDrawer(config)(engine);
}

SimEngine block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return SimEngine(seq);
}

double SimOutcome::std_error_uncertainty() const noexcept {
    return n_draws == 0 ? 0.0 : empirical_std_error / std::sqrt(2.0 * static_cast<double>(n_draws));
}

double SimOutcome::relative_mean_uncertainty() const noexcept {
    return n_draws == 0 ? 0.0 : empirical_std_error / std::sqrt(static_cast<double>(n_draws));
}

SimOutcome run_simulation(const SimConfig& config) {
    config.validate();
    if (!(config.parasitemia > 0.0)) {
        throw std::domain_error("run_simulation needs parasitemia > 0");
    }
    const SampleDrawer drawer(config);
    const double p = config.parasitemia;
    const double cv = config.volume.clinical_ul();
    const std::uint64_t n = config.n_draws;
    const std::uint64_t n_blocks = (n + kSimBlockSize - 1) / kSimBlockSize;

    std::vector<double> estimates(n);
    std::vector<std::uint64_t> block_truncated(n_blocks, 0);
    std::atomic<std::uint64_t> next_block{0};

    auto worker = [&] {
        for (std::uint64_t b = next_block++; b < n_blocks; b = next_block++) {
            SimEngine engine = block_engine(config.seed, b);
            const std::uint64_t end = std::min(n, (b + 1) * kSimBlockSize);
            for (std::uint64_t i = b * kSimBlockSize; i < end; ++i) {
                const DrawnSample d = drawer(engine);
                block_truncated[b] += d.truncated ? 1 : 0;
                estimates[i] = estimate_parasitemia(d.suspects, d.estimated_volume_ul, config.profile, cv).p_hat;
            }
        }
    };

    unsigned workers = config.workers != 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    // Sums run in draw order so the result is bit-identical for any worker count.
    SimOutcome out;
    out.n_draws = n;
    for (auto t : block_truncated) out.n_truncated_draws += t;

    double sum = 0.0;
    for (double e : estimates) sum += e;
    out.empirical_mean_phat = sum / static_cast<double>(n);

    double rel_sum = 0.0;
    for (double e : estimates) rel_sum += (e - p) / p;
    const double rel_mean = rel_sum / static_cast<double>(n);
    double ss = 0.0;
    for (double e : estimates) {
        const double dev = (e - p) / p - rel_mean;
        ss += dev * dev;
    }
    out.empirical_std_error = std::sqrt(ss / static_cast<double>(n));

    if (config.keep_draws) {
        out.per_draw_estimates = std::move(estimates);
    }
    return out;
}

BracketReport bracket_check(const SimConfig& config, double tolerance) {
    if (!(tolerance >= 0.0)) {
        throw std::domain_error("tolerance must be >= 0");
    }
    BracketReport report;
    report.tolerance = tolerance;
    report.outcome = run_simulation(config);
    report.empirical = report.outcome.empirical_std_error;
    report.mc_std_error = report.outcome.std_error_uncertainty();

    SourceErrorTerms terms = source_error_terms(config.profile, config.parasitemia, config.volume);
    if (!config.poisson_sampling) {
        terms.poisson = 0.0;
        terms.poisson_x_sensitivity = 0.0;
    }
    report.analytic_linear = terms.linear_sum();
    report.quadrature_bound = terms.quadrature_sum();

    if (report.outcome.n_draws < 2) {
        report.status = BracketStatus::skipped;
    } else {
        const bool ok = report.quadrature_bound * (1.0 - tolerance) <= report.empirical &&
                        report.empirical <= report.analytic_linear * (1.0 + tolerance);
        report.status = ok ? BracketStatus::pass : BracketStatus::fail;
    }
    return report;
}

}  // namespace rarecount
