#pragma once

// Self-checks run by `qfractal check`: each compares two independent
// computations over random samples and reports the worst deviation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfractal/ifs.hpp"
#include "qfractal/metrics.hpp"
#include "qfractal/mobius.hpp"
#include "qfractal/pauli.hpp"
#include "qfractal/sampling.hpp"

namespace qfractal {

struct CheckResult {
    std::string name;
    std::uint64_t samples = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed() const { return max_deviation < tolerance; }
};

/// Replaceable implementations, so tests can inject a fault and confirm the
/// checks catch it.
struct CheckHooks {
    std::function<UnitVec3(const Vec3&, const UnitVec3&)> mobius = [](const Vec3& q, const UnitVec3& p) {
        return mobius_apply(q, p);
    };
    std::function<LorentzMat4(const ComplexMinkowski4&)> lorentz = [](const ComplexMinkowski4& a) {
        return lorentz_closed_form(a);
    };
};

struct CheckOptions {
    /// Overrides every per-check sample count when set.
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 1;
    CheckHooks hooks;
};

namespace detail {

inline std::uint64_t count_or(const CheckOptions& o, std::uint64_t fallback) { return o.samples.value_or(fallback); }

} // namespace detail

inline CheckResult check_mobius_oracle(const CheckOptions& o)
{
    CheckResult r{"mobius_closed_form_vs_matrix", detail::count_or(o, 1'000'000), 0.0, 1e-12};
    Sampler s(o.seed);
    for (std::uint64_t i = 0; i < r.samples; ++i) {
        const Vec3 q = s.boost(0.0, 0.95);
        const UnitVec3 x = s.unit();
        const MatrixRouteImage m = mobius_apply_matrix(q, x);
        const double dp = norm(o.hooks.mobius(q, x).vec() - m.point.vec());
        const double dl = std::abs(lambda_factor(q, x) - m.lambda);
        r.max_deviation = std::max({r.max_deviation, dp, dl});
    }
    return r;
}

inline CheckResult check_conformality(const CheckOptions& o)
{
    CheckResult r{"conformality_defect", detail::count_or(o, 1000), 0.0, 1e-4};
    Sampler s(o.seed + 1);
    for (std::uint64_t i = 0; i < r.samples; ++i) {
        const Vec3 q = s.boost(0.0, 0.95);
        const UnitVec3 x = s.unit();
        const Vec3 u = s.tangent(x), v = s.tangent(x);
        r.max_deviation = std::max(r.max_deviation, conformality_defect(q, x, u, v, 1e-6));
    }
    return r;
}

/// Σp = 1 and general vs symmetric formula, for both presets.
inline CheckResult check_probabilities(const CheckOptions& o)
{
    CheckResult r{"probability_normalization", detail::count_or(o, 10'000), 0.0, 1e-12};
    Sampler s(o.seed + 2);
    for (std::uint64_t i = 0; i < r.samples; ++i) {
        const double alpha = s.uniform(0.01, 0.99);
        const UnitVec3 x = s.unit();
        for (Preset preset : {Preset::cube8, Preset::octa6}) {
            const GeneratorSystem sys = preset_generators(preset, alpha);
            std::vector<double> pg(sys.size()), ps(sys.size());
            probabilities_general(sys, x, pg);
            probabilities_symmetric(sys, x, ps);
            double sum = 0.0;
            for (std::size_t k = 0; k < sys.size(); ++k) {
                sum += pg[k];
                r.max_deviation = std::max(r.max_deviation, std::abs(pg[k] - ps[k]));
            }
            r.max_deviation = std::max(r.max_deviation, std::abs(sum - 1.0));
        }
    }
    return r;
}

inline CheckResult check_lorentz_closed_form(const CheckOptions& o)
{
    CheckResult r{"lorentz_closed_form_vs_trace", detail::count_or(o, 10'000), 0.0, 1e-10};
    Sampler s(o.seed + 3);
    for (std::uint64_t i = 0; i < r.samples; ++i) {
        const ComplexMinkowski4 a = s.unit_complex4();
        const SL2C m = SL2C::from_coordinates(a);
        r.max_deviation = std::max(r.max_deviation, max_abs_diff(o.hooks.lorentz(a), lorentz_from_sl2c(m)));
    }
    return r;
}

inline CheckResult check_lorentz_metric(const CheckOptions& o)
{
    CheckResult r{"lorentz_preserves_metric", detail::count_or(o, 10'000), 0.0, 1e-10};
    Sampler s(o.seed + 4);
    for (std::uint64_t i = 0; i < r.samples; ++i)
        r.max_deviation = std::max(r.max_deviation, metric_defect(lorentz_from_sl2c(s.sl2c())));
    return r;
}

/// Exhaustive over all index combinations; the sample count is fixed.
inline CheckResult check_pauli_identities(const CheckOptions&)
{
    const PauliIdentityReport rep = pauli_identity_suite();
    return {"pauli_trace_identities", 1, rep.max_deviation(), 1e-14};
}

inline std::vector<CheckResult> run_checks(const CheckOptions& o = {})
{
    return {check_mobius_oracle(o),       check_conformality(o),   check_probabilities(o),
            check_lorentz_closed_form(o), check_lorentz_metric(o), check_pauli_identities(o)};
}

} // namespace qfractal
