#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exh/measure.hpp"
#include "exh/rational.hpp"
#include "exh/setspec.hpp"

namespace exh {

/// Column structure of a submeasure that is a pointwise supremum of measures.
/// Representation builders only need the columns through this interface, so
/// rule-generated column families (one per block, say) work the same way as
/// explicit lists.
struct ColumnAccess {
    /// (k, mu_k({n})) for every column whose support contains n.
    std::function<std::vector<std::pair<std::uint64_t, Rational>>(std::uint64_t)> columns_at;
    /// Number of columns when the family is an explicit finite list.
    std::optional<std::uint64_t> column_count;
    /// The explicit list itself, when available.
    std::shared_ptr<const std::vector<FiniteSupportMeasure>> columns;
};

struct Provenance {
    enum class Kind { Raw, Preset, SupOfMeasures, GeneralizedDensity, Induced };
    Kind kind = Kind::Raw;
    std::string detail;
    std::shared_ptr<const ColumnAccess> column_access;
};

/// An evaluator on finite sets plus structural metadata. Values are exact;
/// instances are immutable and safe to share across threads.
class Submeasure {
public:
    using Evaluator = std::function<Rational(std::span<const std::uint64_t>)>;
    /// Upper bound for phi(A minus [0, from)), covering the full infinite
    /// tail; attached by presets whose mass admits a closed form.
    using TailCertificate =
        std::function<std::optional<Rational>(const SetSpec&, std::uint64_t from)>;

    Submeasure(std::string name, Evaluator eval, Provenance prov = {}, TailCertificate cert = {})
        : name_(std::move(name)), eval_(std::move(eval)), prov_(std::move(prov)),
          cert_(std::move(cert)) {}

    const std::string& name() const { return name_; }
    const Provenance& provenance() const { return prov_; }

    Rational eval_sorted(std::span<const std::uint64_t> f) const { return eval_(f); }

    Rational eval_sorted(const std::vector<std::uint64_t>& f) const {
        return eval_(std::span<const std::uint64_t>(f));
    }

    /// phi(F) for a finite SetSpec; rejects rules without a finite bound.
    Rational eval_set(const SetSpec& f, std::uint64_t budget = kDefaultEnumBudget) const {
        if (!f.is_finite())
            throw std::invalid_argument("eval_on_finite: non-finite SetSpec without horizon");
        auto en = f.enumerate_below(f.finite_bound(), budget);
        if (!en.complete) throw BudgetExceeded("eval_on_finite: enumeration budget exceeded");
        return eval_(en.elems);
    }

    std::optional<Rational> tail_bound(const SetSpec& a, std::uint64_t from) const {
        if (!cert_) return std::nullopt;
        return cert_(a, from);
    }

    bool has_tail_certificate() const { return static_cast<bool>(cert_); }

private:
    std::string name_;
    Evaluator eval_;
    Provenance prov_;
    TailCertificate cert_;
};

/// d_phi(A, B) = phi(A symmetric-difference B) for finite A, B.
inline Rational symmetric_difference_metric(const Submeasure& phi, const SetSpec& a,
                                            const SetSpec& b) {
    auto ea = a.enumerate_below(a.finite_bound());
    auto eb = b.enumerate_below(b.finite_bound());
    std::vector<std::uint64_t> diff;
    std::set_symmetric_difference(ea.elems.begin(), ea.elems.end(), eb.elems.begin(),
                                  eb.elems.end(), std::back_inserter(diff));
    return phi.eval_sorted(diff);
}

struct AxiomCheckReport {
    bool ok = true;
    std::string failed_axiom;  // "empty-set", "monotonicity" or "subadditivity"
    std::vector<std::uint64_t> x, y;
    Rational phi_x, phi_y, phi_union;
    std::size_t pairs_checked = 0;
};

/// Asserts phi(empty) = 0, monotonicity and subadditivity on every sampled
/// pair; reports the first violation with its witness pair.
inline AxiomCheckReport check_axioms(
    const Submeasure& phi,
    std::span<const std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> samples) {
    AxiomCheckReport rep;
    if (!phi.eval_sorted(std::vector<std::uint64_t>{}).is_zero()) {
        rep.ok = false;
        rep.failed_axiom = "empty-set";
        return rep;
    }
    std::vector<std::uint64_t> u;
    for (const auto& [x, y] : samples) {
        u.clear();
        std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
        Rational fx = phi.eval_sorted(x);
        Rational fy = phi.eval_sorted(y);
        Rational fu = phi.eval_sorted(u);
        ++rep.pairs_checked;
        if (fu < fx || fu < fy) {
            rep.ok = false;
            rep.failed_axiom = "monotonicity";
            rep.x = x;
            rep.y = y;
            rep.phi_x = fx;
            rep.phi_y = fy;
            rep.phi_union = fu;
            return rep;
        }
        if (fx + fy < fu) {
            rep.ok = false;
            rep.failed_axiom = "subadditivity";
            rep.x = x;
            rep.y = y;
            rep.phi_x = fx;
            rep.phi_y = fy;
            rep.phi_union = fu;
            return rep;
        }
    }
    return rep;
}

/// Pointwise supremum of finitely many finite-support measures. The column
/// family stays accessible through the provenance for representation builders.
inline Submeasure sup_of_measures(std::vector<FiniteSupportMeasure> measures) {
    if (measures.empty())
        throw std::invalid_argument("sup_of_measures: empty measure list");
    auto cols = std::make_shared<const std::vector<FiniteSupportMeasure>>(std::move(measures));

    auto access = std::make_shared<ColumnAccess>();
    access->column_count = cols->size();
    access->columns = cols;
    access->columns_at = [cols](std::uint64_t n) {
        std::vector<std::pair<std::uint64_t, Rational>> out;
        for (std::uint64_t k = 0; k < cols->size(); ++k) {
            Rational w = (*cols)[k].at(n);
            if (!w.is_zero()) out.emplace_back(k, w);
        }
        return out;
    };

    Provenance prov{Provenance::Kind::SupOfMeasures, "sup-of-measures", access};
    auto eval = [cols](std::span<const std::uint64_t> f) {
        Rational best(0);
        for (const auto& mu : *cols) best = max(best, mu.value(f));
        return best;
    };
    return Submeasure("sup-of-measures", eval, prov);
}

struct TallnessReport {
    std::vector<Rational> singleton_values;           // phi({n}) for n < horizon
    std::vector<Rational> tail_max;                   // max of singleton values from n on
    std::vector<std::pair<Rational, std::optional<std::uint64_t>>> thresholds;
    std::uint64_t margin = 0;                         // trailing window excluded from the flag
    bool consistent_with_tall = false;
};

/// Emits phi({n}) below the horizon with its running maximum-of-tail and
/// flags whether the profile is consistent with a tall ideal: the tail max
/// must drop below each tested epsilon. Drops inside the trailing margin do
/// not count; every finite profile ends small, so only a drop with a
/// nonempty observation window after it is evidence.
inline TallnessReport tallness_diagnostic(const Submeasure& phi, std::uint64_t horizon,
                                          std::vector<Rational> epsilons = {
                                              Rational(1, 2), Rational(1, 4), Rational(1, 8),
                                              Rational(1, 16)}) {
    TallnessReport rep;
    rep.singleton_values.reserve(horizon);
    std::uint64_t point[1];
    for (std::uint64_t n = 0; n < horizon; ++n) {
        point[0] = n;
        rep.singleton_values.push_back(phi.eval_sorted(std::span<const std::uint64_t>(point, 1)));
    }
    rep.tail_max.assign(rep.singleton_values.size(), Rational(0));
    for (std::size_t i = rep.singleton_values.size(); i-- > 0;) {
        rep.tail_max[i] = rep.singleton_values[i];
        if (i + 1 < rep.tail_max.size()) rep.tail_max[i] = max(rep.tail_max[i], rep.tail_max[i + 1]);
    }
    rep.margin = std::max<std::uint64_t>(1, horizon / 8);
    rep.consistent_with_tall = true;
    for (const auto& eps : epsilons) {
        std::optional<std::uint64_t> first;
        for (std::size_t i = 0; i < rep.tail_max.size(); ++i)
            if (rep.tail_max[i] < eps) {
                first = i;
                break;
            }
        if (!first || *first + rep.margin > horizon) rep.consistent_with_tall = false;
        rep.thresholds.emplace_back(eps, first);
    }
    return rep;
}

} // namespace exh
