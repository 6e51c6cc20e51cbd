#include "tpdicke/effective.hpp"

#include <cmath>

namespace tpdicke {

NormalPhaseResult normal_phase(const ModelParams& params) {
    params.validate();
    const double gc = params.g_critical();
    const double g = params.g;
    if (g >= gc)
        throw DomainError("normal_phase: requires g < g_c = sqrt(omega*omega1)/2; "
                          "epsilon1 is imaginary for g >= g_c");
    const double gp2 = (g * g) / (gc * gc);
    const double root = std::sqrt(1.0 - gp2);
    const double n = params.n_atoms;
    const double w = params.omega;
    const double w1 = params.omega1;

    NormalPhaseResult out;
    out.epsilon1 = w1 * root / n;
    // 4g^2/(N omega Delta) = g^2/g_c^2
    out.zeta = -std::log(1.0 - gp2) / 4.0;
    out.eg1 = -w1 / 2.0 + w1 / (2.0 * n) * (root - 1.0) -
              (g * g) / (n * n) *
                  (w1 / (2.0 * w * w) + (g * g * gc * gc) / (w * w * w * (gc * gc - g * g)));
    return out;
}

double displacement_beta(const ModelParams& params) {
    params.validate();
    const double gc = params.g_critical();
    const double g = params.g;
    const double w = params.omega;
    const double w1 = params.omega1;
    if (!(w1 < w))
        throw DomainError("displacement_beta: requires omega1 < omega so that the "
                          "transition precedes the spectral collapse");
    if (g <= gc)
        throw DomainError("displacement_beta: requires g > g_c (normal phase has beta = 0)");

    const double collapse_rad = 1.0 - 4.0 * g * g / (w * w);
    if (collapse_rad < 0.0)
        throw DomainError("displacement_beta: collapse condition violated, "
                          "1 - 4g^2/omega^2 < 0 (g >= g_collapse = omega/2)");
    const double denom = 16.0 * std::pow(g, 4) / (w * w * w1 * w1) - 4.0 * g * g / (w * w);
    const double inner = 1.0 - std::sqrt(collapse_rad / denom);
    if (inner < 0.0)
        throw DomainError("displacement_beta: criticality condition violated, the outer "
                          "radicand 1 - sqrt((1-4g^2/w^2)/(16g^4/(w w1)^2 - 4g^2/w^2)) is negative "
                          "(g <= g_c)");
    return std::sqrt(inner / 2.0);
}

SuperradiantConstants superradiant_constants(const ModelParams& params) {
    SuperradiantConstants c;
    c.beta = displacement_beta(params);
    const double g = params.g;
    const double w = params.omega;
    const double b2 = c.beta * c.beta;
    c.beta1 = std::sqrt(1.0 - b2);
    c.beta2 = 1.0 - b2 / (1.0 - b2);
    c.beta0 = params.omega1 * b2 - (params.omega1 + w) / 2.0;
    c.lambda_beta = 4.0 * g * c.beta * c.beta1;
    if (c.lambda_beta >= w)
        throw DomainError("superradiant_constants: lambda_beta = 4 g beta beta1 >= omega; "
                          "sqrt(omega^2 - lambda_beta^2) undefined");
    c.r = 0.25 * std::log((w - c.lambda_beta) / (w + c.lambda_beta));
    const double ch = std::cosh(2.0 * c.r), sh = std::sinh(2.0 * c.r);
    c.lambda1 = 2.0 * g * c.beta1 * c.beta2 * ch;
    c.lambda2 = g * c.beta * ch / c.beta1;
    c.lambda3 = 2.0 * g * c.beta * sh / c.beta1;

    // r1 = -(1/4) ln[1 - (2 l1^2/(2 sqrt(w^2-lb^2) + l3/N) + l3)/(w1 - l3/2)]
    const double root = std::sqrt(w * w - c.lambda_beta * c.lambda_beta);
    const double arg = 1.0 - (2.0 * c.lambda1 * c.lambda1 /
                                  (2.0 * root + c.lambda3 / params.n_atoms) +
                              c.lambda3) /
                                 (params.omega1 - c.lambda3 / 2.0);
    if (arg <= 0.0)
        throw DomainError("superradiant_constants: r1 logarithm argument non-positive");
    c.r1 = -0.25 * std::log(arg);
    return c;
}

SuperradiantResult superradiant_phase(const ModelParams& params, bool drop_1overN_in_root) {
    const SuperradiantConstants c = superradiant_constants(params);
    const double w = params.omega;
    const double w1 = params.omega1;
    const double n = params.n_atoms;
    const double root = std::sqrt(w * w - c.lambda_beta * c.lambda_beta);
    const double denom = 2.0 * root + (drop_1overN_in_root ? 0.0 : c.lambda3 / n);
    const double rad =
        1.0 - (2.0 * c.lambda1 * c.lambda1 / denom + c.lambda3) / (w1 - c.lambda3 / 2.0);
    if (rad < 0.0)
        throw DomainError("superradiant_phase: negative radicand in the excitation energy");

    SuperradiantResult out;
    out.epsilon2 = (2.0 * w1 - c.lambda3) / (2.0 * n) * std::sqrt(rad);
    out.eg2 = 0.5 * out.epsilon2 - (w1 - c.lambda3) / (2.0 * n) + root / 2.0 + c.beta0;
    return out;
}

double jz_thermo(const ModelParams& params) {
    params.validate();
    if (params.g >= params.g_collapse())
        throw DomainError("jz_thermo: g must be below the collapse point omega/2");
    if (params.g <= params.g_critical()) return -0.5;
    const double beta = displacement_beta(params);
    return beta * beta - 0.5;
}

double gap_asymptote(const ModelParams& params, double g) {
    params.validate();
    const double gc = params.g_critical();
    return params.omega1 / params.n_atoms * std::sqrt(2.0 / gc) * std::sqrt(std::max(0.0, gc - g));
}

}  // namespace tpdicke
