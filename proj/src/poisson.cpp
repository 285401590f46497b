#include "rarecount/poisson.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rarecount {

namespace {

void require_count(std::int64_t k) {
    if (k < 0) {
        throw std::domain_error("Poisson count must be non-negative, got " + std::to_string(k));
    }
}

// boost's lgamma does not touch the global signgam, unlike ::lgamma.
double log_factorial(std::int64_t k) {
    return boost::math::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

PoissonParam::PoissonParam(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw std::domain_error("Poisson lambda must be finite and >= 0");
    }
}

double log_pmf(std::int64_t k, PoissonParam lam) {
    require_count(k);
    const double l = lam.lambda();
    if (l == 0.0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(k) * std::log(l) - l - log_factorial(k);
}

double pmf(std::int64_t k, PoissonParam lam) {
    return std::exp(log_pmf(k, lam));
}

double cdf(std::int64_t k, PoissonParam lam) {
    require_count(k);
    const double l = lam.lambda();
    if (l == 0.0) {
        return 1.0;
    }
    // Neumaier-compensated ascending sum.
    double sum = 0.0;
    double carry = 0.0;
    for (std::int64_t j = 0; j <= k; ++j) {
        const double term = std::exp(log_pmf(j, lam));
        if (term == 0.0 && static_cast<double>(j) > l) {
            break;  // upper tail underflowed; every later term is zero too
        }
        const double t = sum + term;
        if (std::abs(sum) >= term) {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    const double total = sum + carry;
    return total > 1.0 ? 1.0 : total;
}

double prob_at_least_one(PoissonParam lam) {
    return -std::expm1(-lam.lambda());
}

PoissonSampler::PoissonSampler(PoissonParam lam) : lambda_(lam.lambda()) {
    if (lambda_ >= kModeSearchThreshold) {
        mode_ = static_cast<std::int64_t>(std::floor(lambda_));
        pmf_mode_ = pmf(mode_, lam);
        cdf_mode_ = cdf(mode_, lam);
    }
}

std::int64_t PoissonSampler::invert(double u) const {
    if (lambda_ == 0.0) {
        return 0;
    }
    if (lambda_ < kModeSearchThreshold) {
        std::int64_t k = 0;
        double term = std::exp(-lambda_);
        double acc = term;
        while (u > acc) {
            ++k;
            term *= lambda_ / static_cast<double>(k);
            if (acc + term == acc) {
                break;
            }
            acc += term;
        }
        return k;
    }

    std::int64_t k = mode_;
    double term = pmf_mode_;
    double acc = cdf_mode_;
    if (u <= acc) {
        // walk down while u still lies at or below cdf(k - 1)
        while (k > 0) {
            const double below = acc - term;
            if (u > below) {
                return k;
            }
            acc = below;
            term *= static_cast<double>(k) / lambda_;
            --k;
        }
        return 0;
    }
    while (u > acc) {
        ++k;
        term *= lambda_ / static_cast<double>(k);
        if (acc + term == acc) {
            break;
        }
        acc += term;
    }
    return k;
}

}  // namespace rarecount
