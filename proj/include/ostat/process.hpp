#ifndef OSTAT_PROCESS_HPP
#define OSTAT_PROCESS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ostat/distribution.hpp"
#include "ostat/extended_real.hpp"
#include "ostat/law.hpp"
#include "ostat/rng.hpp"

namespace ostat {

struct ProcessSpec;

namespace spec {

/// i.i.d. draws from dist.
struct Iid {
    Distribution dist;
};

/// X_n = phi X_{n-1} + e_n. Normal innovations start from the exact
/// stationary marginal; other innovations are warmed up for burn_in steps
/// (default: enough for |phi|^burn_in < 1e-16).
struct Ar1 {
    double phi = 0.0;
    Distribution innovation;
    std::optional<std::uint64_t> burn_in;
};

/// Finite-window linear process X_n = sum_j coeffs[j] e_{n-j}.
struct MovingAverage {
    std::vector<double> coeffs;
    Distribution innovation;
};

/// X_n = X for all n, with X ~ dist.
struct Identical {
    Distribution dist;
};

/// One component drawn with the given weights at time zero, then run forever.
struct Mixture {
    std::vector<double> weights;
    std::vector<ProcessSpec> components;
};

/// X_n + U with U ~ shift drawn once per stream.
struct Shift {
    std::shared_ptr<const ProcessSpec> base;
    Distribution shift;
};

/// V X_n with V ~ scale >= 0 drawn once per stream.
struct Scale {
    std::shared_ptr<const ProcessSpec> base;
    Distribution scale;
};

}  // namespace spec

/// Declarative description of a strictly stationary sequence.
struct ProcessSpec {
    using Node = std::variant<spec::Iid, spec::Ar1, spec::MovingAverage, spec::Identical, spec::Mixture, spec::Shift,
                              spec::Scale>;
    Node node;

    static ProcessSpec iid(Distribution d) { return {spec::Iid{d}}; }
    static ProcessSpec ar1(double phi, Distribution innovation, std::optional<std::uint64_t> burn_in = {}) {
        return {spec::Ar1{phi, innovation, burn_in}};
    }
    static ProcessSpec moving_average(std::vector<double> coeffs, Distribution innovation) {
        return {spec::MovingAverage{std::move(coeffs), innovation}};
    }
    static ProcessSpec identical(Distribution d) { return {spec::Identical{d}}; }
    static ProcessSpec mixture(std::vector<double> weights, std::vector<ProcessSpec> components) {
        return {spec::Mixture{std::move(weights), std::move(components)}};
    }
    static ProcessSpec shift(ProcessSpec base, Distribution u) {
        return {spec::Shift{std::make_shared<const ProcessSpec>(std::move(base)), u}};
    }
    static ProcessSpec scale(ProcessSpec base, Distribution v) {
        return {spec::Scale{std::make_shared<const ProcessSpec>(std::move(base)), v}};
    }

    std::string kind() const {
        static const char* names[] = {"iid", "ar1", "ma", "identical", "mixture", "shift", "scale"};
        return names[node.index()];
    }

    /// Ergodic families: the realized limit is the same constant for every seed.
    bool is_ergodic() const {
        return std::holds_alternative<spec::Iid>(node) || std::holds_alternative<spec::Ar1>(node) ||
               std::holds_alternative<spec::MovingAverage>(node);
    }
};

/// Throws std::invalid_argument on the first violated invariant.
inline void validate(const ProcessSpec& s) {
    auto bad = [](const std::string& m) { throw std::invalid_argument("ProcessSpec: " + m); };
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, spec::Ar1>) {
                if (!(std::abs(n.phi) < 1.0)) bad("ar1 needs |phi| < 1");
            } else if constexpr (std::is_same_v<N, spec::MovingAverage>) {
                if (n.coeffs.empty()) bad("ma needs at least one coefficient");
                for (double c : n.coeffs) {
                    if (!std::isfinite(c)) bad("ma coefficients must be finite");
                }
            } else if constexpr (std::is_same_v<N, spec::Mixture>) {
                if (n.components.empty()) bad("mixture needs at least one component");
                if (n.weights.size() != n.components.size()) bad("mixture weights and components differ in count");
                double sum = 0.0;
                for (double w : n.weights) {
                    if (!(w > 0.0) || !std::isfinite(w)) bad("mixture weights must be positive");
                    sum += w;
                }
                if (std::abs(sum - 1.0) > 1e-9) bad("mixture weights must sum to 1");
                for (const auto& c : n.components) validate(c);
            } else if constexpr (std::is_same_v<N, spec::Shift>) {
                if (!n.base) bad("shift needs a base process");
                validate(*n.base);
            } else if constexpr (std::is_same_v<N, spec::Scale>) {
                if (!n.base) bad("scale needs a base process");
                if (n.scale.left_endpoint() < ExtendedReal(0.0)) bad("scale distribution must be supported on [0, inf)");
                validate(*n.base);
            }
        },
        s.node);
}

/// Support endpoint of sum_j c_j e_j for independent e_j ~ innovation, given
/// the sums of positive and of negative coefficients.
inline ExtendedReal linear_endpoint(double positive, double negative, const Distribution& innovation, int lambda) {
    const ExtendedReal lo = innovation.left_endpoint();
    const ExtendedReal hi = innovation.right_endpoint();
    if (lambda == 0) return ExtendedReal(positive) * lo + ExtendedReal(negative) * hi;
    return ExtendedReal(positive) * hi + ExtendedReal(negative) * lo;
}

/// Realized hidden variables of a stream (outermost occurrence of each).
struct HiddenState {
    std::optional<std::size_t> regime;
    std::optional<double> shift;
    std::optional<double> scale;
    std::optional<double> value;
};

namespace detail {

class StreamImpl {
public:
    virtual ~StreamImpl() = default;
    virtual double next() = 0;
    virtual ExtendedReal limit(int lambda) const = 0;
    virtual void hidden(HiddenState& h) const { (void)h; }
};

std::unique_ptr<StreamImpl> make_impl(const ProcessSpec& s, std::uint64_t seed);

class IidStream final : public StreamImpl {
public:
    IidStream(const spec::Iid& s, std::uint64_t seed) : dist_(s.dist), rng_(derive_seed(seed, "innovations")) {}
    double next() override { return dist_.sample(rng_); }
    ExtendedReal limit(int lambda) const override { return dist_.endpoint(lambda); }

private:
    Distribution dist_;
    Rng rng_;
};

class Ar1Stream final : public StreamImpl {
public:
    Ar1Stream(const spec::Ar1& s, std::uint64_t seed)
        : phi_(s.phi), innovation_(s.innovation), rng_(derive_seed(seed, "innovations")) {
        if (const auto* nrm = std::get_if<Normal>(&innovation_.family()); nrm && !s.burn_in) {
            const double mean = nrm->mu / (1.0 - phi_);
            const double sd = nrm->sigma / std::sqrt(1.0 - phi_ * phi_);
            x_ = mean + sd * rng_.standard_normal();
        } else {
            std::uint64_t warm = 0;
            if (s.burn_in) {
                warm = *s.burn_in;
            } else if (phi_ != 0.0) {
                warm = static_cast<std::uint64_t>(std::ceil(std::log(1e-16) / std::log(std::abs(phi_))));
            }
            x_ = 0.0;
            for (std::uint64_t i = 0; i < warm; ++i) x_ = phi_ * x_ + innovation_.sample(rng_);
        }
    }

    double next() override {
        x_ = phi_ * x_ + innovation_.sample(rng_);
        return x_;
    }

    ExtendedReal limit(int lambda) const override {
        // Coefficients phi^i, i >= 0.
        double pos;
        double neg;
        if (phi_ >= 0.0) {
            pos = 1.0 / (1.0 - phi_);
            neg = 0.0;
        } else {
            pos = 1.0 / (1.0 - phi_ * phi_);
            neg = phi_ / (1.0 - phi_ * phi_);
        }
        return linear_endpoint(pos, neg, innovation_, lambda);
    }

private:
    double phi_;
    Distribution innovation_;
    Rng rng_;
    double x_ = 0.0;
};

class MovingAverageStream final : public StreamImpl {
public:
    MovingAverageStream(const spec::MovingAverage& s, std::uint64_t seed)
        : coeffs_(s.coeffs), innovation_(s.innovation), rng_(derive_seed(seed, "innovations")),
          ring_(s.coeffs.size(), 0.0) {
        for (std::size_t i = 0; i + 1 < ring_.size(); ++i) push(innovation_.sample(rng_));
    }

    double next() override {
        push(innovation_.sample(rng_));
        // ring_[head_] is the newest innovation; coefficient j multiplies e_{n-j}.
        const std::size_t m = ring_.size();
        double x = 0.0;
        std::size_t idx = head_;
        for (std::size_t j = 0; j < m; ++j) {
            x += coeffs_[j] * ring_[idx];
            idx = idx == 0 ? m - 1 : idx - 1;
        }
        return x;
    }

    ExtendedReal limit(int lambda) const override {
        double pos = 0.0;
        double neg = 0.0;
        for (double c : coeffs_) (c > 0.0 ? pos : neg) += c;
        return linear_endpoint(pos, neg, innovation_, lambda);
    }

private:
    void push(double e) {
        head_ = head_ + 1 == ring_.size() ? 0 : head_ + 1;
        ring_[head_] = e;
    }

    std::vector<double> coeffs_;
    Distribution innovation_;
    Rng rng_;
    std::vector<double> ring_;
    std::size_t head_ = 0;
};

class IdenticalStream final : public StreamImpl {
public:
    IdenticalStream(const spec::Identical& s, std::uint64_t seed) {
        Rng hidden(derive_seed(seed, "hidden"));
        value_ = s.dist.sample(hidden);
    }
    double next() override { return value_; }
    ExtendedReal limit(int) const override { return value_; }
    void hidden(HiddenState& h) const override {
        if (!h.value) h.value = value_;
    }

private:
    double value_ = 0.0;
};

class MixtureStream final : public StreamImpl {
public:
    MixtureStream(const spec::Mixture& s, std::uint64_t seed) {
        Rng hidden(derive_seed(seed, "hidden"));
        const double u = hidden.uniform01();
        double acc = 0.0;
        regime_ = s.weights.size() - 1;
        for (std::size_t i = 0; i < s.weights.size(); ++i) {
            acc += s.weights[i];
            if (u < acc) {
                regime_ = i;
                break;
            }
        }
        child_ = make_impl(s.components[regime_], derive_seed(seed, role_id("component") + regime_));
    }
    double next() override { return child_->next(); }
    ExtendedReal limit(int lambda) const override { return child_->limit(lambda); }
    void hidden(HiddenState& h) const override {
        if (!h.regime) h.regime = regime_;
        child_->hidden(h);
    }

private:
    std::size_t regime_ = 0;
    std::unique_ptr<StreamImpl> child_;
};

class ShiftStream final : public StreamImpl {
public:
    ShiftStream(const spec::Shift& s, std::uint64_t seed) {
        Rng hidden(derive_seed(seed, "hidden"));
        shift_ = s.shift.sample(hidden);
        child_ = make_impl(*s.base, derive_seed(seed, "base"));
    }
    double next() override { return child_->next() + shift_; }
    ExtendedReal limit(int lambda) const override { return child_->limit(lambda) + shift_; }
    void hidden(HiddenState& h) const override {
        if (!h.shift) h.shift = shift_;
        child_->hidden(h);
    }

private:
    double shift_ = 0.0;
    std::unique_ptr<StreamImpl> child_;
};

class ScaleStream final : public StreamImpl {
public:
    ScaleStream(const spec::Scale& s, std::uint64_t seed) {
        Rng hidden(derive_seed(seed, "hidden"));
        scale_ = s.scale.sample(hidden);
        child_ = make_impl(*s.base, derive_seed(seed, "base"));
    }
    double next() override { return scale_ * child_->next(); }
    ExtendedReal limit(int lambda) const override { return ExtendedReal(scale_) * child_->limit(lambda); }
    void hidden(HiddenState& h) const override {
        if (!h.scale) h.scale = scale_;
        child_->hidden(h);
    }

private:
    double scale_ = 1.0;
    std::unique_ptr<StreamImpl> child_;
};

inline std::unique_ptr<StreamImpl> make_impl(const ProcessSpec& s, std::uint64_t seed) {
    return std::visit(
        [&](const auto& n) -> std::unique_ptr<StreamImpl> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, spec::Iid>) return std::make_unique<IidStream>(n, seed);
            else if constexpr (std::is_same_v<N, spec::Ar1>) return std::make_unique<Ar1Stream>(n, seed);
            else if constexpr (std::is_same_v<N, spec::MovingAverage>) return std::make_unique<MovingAverageStream>(n, seed);
            else if constexpr (std::is_same_v<N, spec::Identical>) return std::make_unique<IdenticalStream>(n, seed);
            else if constexpr (std::is_same_v<N, spec::Mixture>) return std::make_unique<MixtureStream>(n, seed);
            else if constexpr (std::is_same_v<N, spec::Shift>) return std::make_unique<ShiftStream>(n, seed);
            else return std::make_unique<ScaleStream>(n, seed);
        },
        s.node);
}

}  // namespace detail

/// A seeded realization of a ProcessSpec. Hidden variables (regime, shift,
/// scale, identical value) are drawn at construction; the same (spec, seed)
/// always yields the same sample path.
class ProcessStream {
public:
    double next() { return impl_->next(); }

    /// Realized almost-sure limit of X_{k_n:n} for lambda in {0, 1}.
    ExtendedReal theoretical_limit(int lambda) const {
        if (lambda != 0 && lambda != 1) throw std::invalid_argument("theoretical_limit: lambda must be 0 or 1");
        return impl_->limit(lambda);
    }

    HiddenState hidden() const {
        HiddenState h;
        impl_->hidden(h);
        return h;
    }

    const ProcessSpec& spec() const noexcept { return spec_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    friend ProcessStream make_stream(const ProcessSpec& spec, std::uint64_t seed);
    ProcessStream(ProcessSpec s, std::uint64_t seed) : spec_(std::move(s)), seed_(seed) {}

    ProcessSpec spec_;
    std::uint64_t seed_;
    std::unique_ptr<detail::StreamImpl> impl_;
};

inline ProcessStream make_stream(const ProcessSpec& spec, std::uint64_t seed) {
    validate(spec);
    ProcessStream s(spec, seed);
    s.impl_ = detail::make_impl(s.spec_, seed);
    return s;
}

/// Law of the realized limit across seeds, when it has a closed form.
inline std::optional<Law> limit_law(const ProcessSpec& s, int lambda) {
    return std::visit(
        [&](const auto& n) -> std::optional<Law> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, spec::Iid> || std::is_same_v<N, spec::Ar1> ||
                          std::is_same_v<N, spec::MovingAverage>) {
                return Law::point(make_stream(s, 0).theoretical_limit(lambda));
            } else if constexpr (std::is_same_v<N, spec::Identical>) {
                return Law::of(n.dist);
            } else if constexpr (std::is_same_v<N, spec::Mixture>) {
                std::vector<Law> parts;
                for (const auto& c : n.components) {
                    auto l = limit_law(c, lambda);
                    if (!l) return std::nullopt;
                    parts.push_back(std::move(*l));
                }
                return Law::mixture(n.weights, parts);
            } else if constexpr (std::is_same_v<N, spec::Shift>) {
                auto base = limit_law(*n.base, lambda);
                if (!base || !base->atom()) return std::nullopt;
                const ExtendedReal c = *base->atom();
                if (!c.is_finite()) return Law::point(c);
                const Distribution u = n.shift;
                const double cv = c.value();
                return Law([u, cv](double x) { return u.cdf(x - cv); }, [u, cv](double x) { return u.cdf_left(x - cv); });
            } else {
                auto base = limit_law(*n.base, lambda);
                if (!base || !base->atom()) return std::nullopt;
                const ExtendedReal c = *base->atom();
                const Distribution v = n.scale;
                if (c == ExtendedReal(0.0)) return Law::point(0.0);
                if (!c.is_finite()) {
                    // V * (+/-inf) is 0 where V = 0, +/-inf elsewhere.
                    const double p0 = v.cdf(0.0) - v.cdf_left(0.0);
                    const ExtendedReal inf = c;
                    auto F = [p0, inf](double x) { return inf.is_pos_inf() ? (x >= 0.0 ? p0 : 0.0) : (x >= 0.0 ? 1.0 : 1.0 - p0); };
                    auto G = [p0, inf](double x) { return inf.is_pos_inf() ? (x > 0.0 ? p0 : 0.0) : (x > 0.0 ? 1.0 : 1.0 - p0); };
                    return Law(F, G);
                }
                const double cv = c.value();
                if (cv > 0.0) {
                    return Law([v, cv](double x) { return v.cdf(x / cv); }, [v, cv](double x) { return v.cdf_left(x / cv); });
                }
                // P(V c <= x) = P(V >= x / c) for c < 0.
                return Law([v, cv](double x) { return 1.0 - v.cdf_left(x / cv); },
                           [v, cv](double x) { return 1.0 - v.cdf(x / cv); });
            }
        },
        s.node);
}

/// Marginal law of X_1, when it has a closed form.
inline std::optional<Law> marginal_law(const ProcessSpec& s) {
    return std::visit(
        [&](const auto& n) -> std::optional<Law> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, spec::Iid> || std::is_same_v<N, spec::Identical>) {
                return Law::of(n.dist);
            } else if constexpr (std::is_same_v<N, spec::Ar1>) {
                const auto* nrm = std::get_if<Normal>(&n.innovation.family());
                if (!nrm) return std::nullopt;
                return Law::of(Distribution::normal(nrm->mu / (1.0 - n.phi),
                                                    nrm->sigma / std::sqrt(1.0 - n.phi * n.phi)));
            } else if constexpr (std::is_same_v<N, spec::MovingAverage>) {
                const auto* nrm = std::get_if<Normal>(&n.innovation.family());
                if (!nrm) return std::nullopt;
                double sum = 0.0;
                double sq = 0.0;
                for (double c : n.coeffs) {
                    sum += c;
                    sq += c * c;
                }
                if (!(sq > 0.0)) return Law::point(0.0);
                return Law::of(Distribution::normal(nrm->mu * sum, nrm->sigma * std::sqrt(sq)));
            } else if constexpr (std::is_same_v<N, spec::Mixture>) {
                std::vector<Law> parts;
                for (const auto& c : n.components) {
                    auto l = marginal_law(c);
                    if (!l) return std::nullopt;
                    parts.push_back(std::move(*l));
                }
                return Law::mixture(n.weights, parts);
            } else {
                return std::nullopt;
            }
        },
        s.node);
}

}  // namespace ostat

#endif  // OSTAT_PROCESS_HPP
