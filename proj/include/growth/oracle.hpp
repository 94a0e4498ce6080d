#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "growth/partition.hpp"
#include "growth/stats.hpp"

namespace growth::oracle {

enum class KLaw { exponential, point_mass };

// Scale-mixture specification: the mixing law of K and the conditional
// Gaussian Normal(0, sigma^2 * K^psi).
struct MixtureSpec {
    KLaw k_law = KLaw::exponential;
    double lambda = 1.0; // rate when k_law == exponential
    double k0 = 1.0;     // atom when k_law == point_mass
    double psi = 0.0;
    double sigma = 1.0;
};

void validate(const MixtureSpec& spec);

// Adaptive quadrature over (a, b) with an absolute error target; throws
// numeric_error when the refinement stalls above the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

// Mixture density evaluated pointwise by quadrature over the K law.
double mixture_density_point(const MixtureSpec& spec, double g);

// Mixture CDF, E_K[Phi(g / (sigma K^(psi/2)))], by the same quadrature.
double mixture_cdf(const MixtureSpec& spec, double g);

// Density on a strictly increasing grid.
stats::DensityCurve mixture_density_numeric(const MixtureSpec& spec,
                                            const std::vector<double>& g_grid);

// Total probability mass of the numeric density over the whole line;
// checks quadrature consistency (analytically this is exactly 1).
double mixture_total_mass(const MixtureSpec& spec);

// Known closed forms for the exponential mixture (derived independently and
// confirmed against quadrature in the test suite).
double closed_form_density_psi_minus1(double lambda, double sigma, double g);
double closed_form_cdf_psi_minus1(double lambda, double sigma, double g);
double closed_form_density_psi_plus1(double lambda, double sigma, double g);
double laplace_scale_for_psi1(double lambda, double sigma); // sigma/sqrt(2 lambda)

// All partitions of `total` exactly once, in descending lexicographic order.
// Bounded at 60 (966,467 partitions) to stay at desk scale.
std::vector<randkit::Partition> enumerate_partitions(std::uint32_t total);

// KS distance of samples against the Laplace law the psi = 1 mixture implies.
double laplace_scale_mixture_check(const std::vector<double>& samples,
                                   double lambda, double sigma);

// Scale of the stable limit of centred replication sums: with the
// replication law P(n) = n^-(1+mu)/zeta(mu) for n >= 1 and mean one, the
// rescaled one-period growth K^((mu-1)/mu) * r converges to a maximally
// skewed stable law with index mu, zero location and this scale (type-1
// parameterization).
double fas_stable_scale(double mu);

// One named closed-form exponent prediction.
struct ExponentPrediction {
    std::string name;
    double value = 0.0;
    bool at_regime_boundary = false;
};

struct ScalingParams {
    std::optional<double> mu;    // unit-size / replication tail exponent
    std::optional<double> alpha; // unit-count tail exponent
    std::optional<double> b;     // founding probability
};

// Every scaling-law exponent the models predict, as pure formula
// evaluations of the supplied parameters.
std::vector<ExponentPrediction> scaling_exponent_table(const ScalingParams& p);

} // namespace growth::oracle
