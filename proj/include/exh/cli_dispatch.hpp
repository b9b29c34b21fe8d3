#pragma once

#include <chrono>

#include "exh/cli.hpp"

namespace exh::cli {

namespace detail {

inline std::string entries_display(const Vector& v) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, val] : v.entries()) {
        if (!first) out << " ";
        out << k << ":" << val.str();
        first = false;
    }
    return first ? "0" : out.str();
}

inline json verdict_json(const MembershipVerdict& v) {
    json j;
    j["status"] = v.status_name();
    j["value"] = v.value.str();
    if (v.status == MembershipVerdict::Status::TailBelow) {
        j["from-cutoff"] = v.from_cutoff;
        j["certified"] = v.certified;
        if (v.remainder_bound) j["remainder-bound"] = v.remainder_bound->str();
    }
    return j;
}

inline void tail_matrix_rows(const TailMatrix& tm, ResultRecord& r) {
    r.table_header = {"cutoff", "value"};
    for (std::size_t i = 0; i < tm.cutoffs.size(); ++i)
        r.table_rows.push_back({std::to_string(tm.cutoffs[i]), tm.values[i].str()});
}

inline SetSpec require_set(const RunConfig& c) {
    if (c.set.is_null()) throw ConfigError("/set", "this operation needs a set");
    return build_set(c.set, "/set");
}

inline Submeasure require_submeasure(const RunConfig& c) {
    if (c.submeasure.is_null())
        throw ConfigError("/submeasure", "this operation needs a submeasure");
    return build_submeasure(c.submeasure, "/submeasure");
}

inline VectorSequence require_sequence(const RunConfig& c, Prng& rng) {
    if (c.sequence.is_null()) throw ConfigError("/sequence", "this operation needs a sequence");
    return build_sequence(c.sequence, "/sequence", rng);
}

} // namespace detail

/// Runs exactly one library operation for a validated config. Deterministic:
/// equal config and seed give equal records.
inline ResultRecord dispatch(const RunConfig& c) {
    ResultRecord r;
    r.op = c.op;
    r.target = c.target;
    r.echo = c.canonical();
    r.seed = c.seed;
    Prng rng(c.seed);
    const auto t0 = std::chrono::steady_clock::now();

    const std::string key = c.target.empty() ? c.op : c.op + "/" + c.target;

    if (key == "eval") {
        auto phi = detail::require_submeasure(c);
        auto f = detail::require_set(c);
        r.values["value"] = phi.eval_set(f, c.budget).str();
        r.verdict = "ok";
    } else if (key == "axioms") {
        std::uint64_t window = detail::get_u64(c.params, "/params", "window", 12);
        std::uint64_t pairs = detail::get_u64(c.params, "/params", "pairs", 1000);
        std::vector<PresetSweepSpec> presets;
        if (!c.submeasure.is_null()) {
            presets.push_back({detail::require_submeasure(c), std::uint64_t{1} << 10, 24});
        } else {
            presets = axiom_sweep_presets();
        }
        r.table_header = {"preset", "ok", "failed-axiom", "exhaustive-pairs", "seeded-pairs"};
        bool all_ok = true;
        for (auto& spec : presets) {
            std::vector<std::uint64_t> win(window);
            for (std::uint64_t i = 0; i < window; ++i) win[i] = i;
            auto rep = axiom_pair_sweep(spec.phi, win, pairs, spec.seeded_below,
                                        spec.seeded_max_size, rng);
            all_ok = all_ok && rep.ok;
            r.table_rows.push_back({rep.preset, rep.ok ? "true" : "false", rep.failed_axiom,
                                    std::to_string(rep.exhaustive_pairs),
                                    std::to_string(rep.seeded_pairs)});
        }
        r.values["all-ok"] = all_ok;
        r.values["window"] = window;
        r.values["pairs"] = pairs;
        r.verdict = all_ok ? "pass" : "violation";
        r.exit_hint = all_ok ? 0 : 4;
    } else if (key == "tallness") {
        auto phi = detail::require_submeasure(c);
        auto rep = tallness_diagnostic(phi, c.horizon);
        r.values["consistent-with-tall"] = rep.consistent_with_tall;
        r.values["margin"] = rep.margin;
        r.table_header = {"n", "singleton", "tail-max"};
        for (std::size_t n = 0; n < rep.singleton_values.size(); ++n)
            r.table_rows.push_back({std::to_string(n), rep.singleton_values[n].str(),
                                    rep.tail_max[n].str()});
        json th = json::array();
        for (const auto& [eps, at] : rep.thresholds) {
            json e;
            e["epsilon"] = eps.str();
            if (at) e["reached-at"] = *at;
            th.push_back(e);
        }
        r.values["thresholds"] = th;
        r.verdict = rep.consistent_with_tall ? "consistent-with-tall" : "not-vanishing";
    } else if (key == "tails") {
        auto phi = detail::require_submeasure(c);
        auto a = detail::require_set(c);
        std::vector<std::uint64_t> cutoffs;
        if (c.params.contains("cutoffs"))
            for (const auto& e : c.params.at("cutoffs")) cutoffs.push_back(e.get<std::uint64_t>());
        if (cutoffs.empty()) cutoffs = default_cutoff_ladder(c.horizon);
        auto tm = tail_matrix(phi, a, cutoffs, c.horizon, c.budget);
        r.values["horizon"] = tm.horizon;
        r.values["complete"] = tm.enumeration_complete;
        detail::tail_matrix_rows(tm, r);
        r.verdict = tm.enumeration_complete ? "ok" : "inconclusive";
    } else if (key == "member") {
        auto phi = detail::require_submeasure(c);
        auto a = detail::require_set(c);
        VerdictOptions opts;
        opts.budget = c.budget;
        opts.divergence_bar =
            detail::get_rational(c.params, "/params", "bar", kDefaultDivergenceBar);
        if (c.params.contains("cutoffs"))
            for (const auto& e : c.params.at("cutoffs"))
                opts.cutoffs.push_back(e.get<std::uint64_t>());
        Rational eps = detail::get_rational(c.params, "/params", "epsilon");
        auto v = exh_verdict(phi, a, eps, c.horizon, opts);
        r.values = detail::verdict_json(v);
        detail::tail_matrix_rows(v.evidence, r);
        r.verdict = v.status_name();
    } else if (key == "metric") {
        auto phi = detail::require_submeasure(c);
        if (c.sets.size() != 2) throw ConfigError("/sets", "metric needs exactly two sets");
        auto a = detail::build_set(c.sets[0], "/sets/0");
        auto b = detail::build_set(c.sets[1], "/sets/1");
        r.values["value"] = symmetric_difference_metric(phi, a, b).str();
        r.verdict = "ok";
    } else if (key == "series-sum") {
        auto h = detail::require_sequence(c, rng);
        auto f = detail::require_set(c);
        Vector s = partial_sum(h, f);
        r.values["norm"] = s.norm().str();
        r.values["norm-tag"] = norm_name(s.tag());
        r.table_header = {"coordinate", "value"};
        for (const auto& [k, v] : s.entries())
            r.table_rows.push_back({std::to_string(k), v.str()});
        r.verdict = "ok";
    } else if (key == "modulus") {
        auto h = detail::require_sequence(c, rng);
        auto a = detail::require_set(c);
        std::uint64_t lo = detail::get_u64(c.params, "/params", "lo", 0);
        std::uint64_t hi = detail::get_u64(c.params, "/params", "hi", c.horizon);
        std::string mode = detail::get_string(c.params, "/params", "mode", "brute");
        if (mode != "brute" && mode != "closed-form")
            throw ConfigError("/params/mode", "catalog: brute, closed-form");
        r.values["value"] = cauchy_modulus(h, a, lo, hi,
                                           mode == "brute" ? ModulusMode::Brute
                                                           : ModulusMode::ClosedForm,
                                           c.budget)
                                .str();
        r.values["mode"] = mode;
        r.verdict = "ok";
    } else if (key == "modulus/absval-sweep") {
        auto rep = absval_sweep(detail::get_u64(c.params, "/params", "sequences", 1000), rng);
        r.values["sequences"] = rep.sequences;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "represent/ellinf") {
        auto phi = detail::require_submeasure(c);
        auto h = ellinf_representation(phi);
        std::uint64_t count = detail::get_u64(c.params, "/params", "count", 16);
        r.table_header = {"n", "entries"};
        bool identity_ok = true;
        std::vector<std::uint64_t> f;
        for (std::uint64_t n = 0; n < count; ++n) {
            r.table_rows.push_back({std::to_string(n), detail::entries_display(h.at(n))});
            f.push_back(n);
            identity_ok = identity_ok &&
                          partial_sum(h, std::span<const std::uint64_t>(f)).norm() ==
                              phi.eval_sorted(f);
        }
        r.values["identity-ok"] = identity_ok;
        r.verdict = identity_ok ? "pass" : "violation";
        r.exit_hint = identity_ok ? 0 : 4;
    } else if (key == "represent/ellinf-sweep") {
        auto rep = representation_identity_sweep(
            detail::get_u64(c.params, "/params", "submeasures", 50),
            detail::get_u64(c.params, "/params", "sets", 1000), rng);
        r.values["submeasures"] = rep.submeasures;
        r.values["sets-checked"] = rep.sets_checked;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "represent/c0-normal") {
        auto h = detail::require_sequence(c, rng);
        auto nf = c0_normal_form(h);
        std::uint64_t count = detail::get_u64(c.params, "/params", "count", 16);
        r.table_header = {"n", "entries", "normal-form"};
        for (std::uint64_t n = 0; n < count; ++n)
            r.table_rows.push_back({std::to_string(n), detail::entries_display(h.at(n)),
                                    detail::entries_display(nf.at(n))});
        r.verdict = "ok";
    } else if (key == "represent/gdensity") {
        auto measures = detail::build_measures(c.measures, "/measures");
        auto res = bounded_columns_to_gdensity(std::move(measures));
        json cuts = json::array();
        for (auto cut : res.cuts) cuts.push_back(cut);
        r.values["cuts"] = cuts;
        r.table_header = {"interval-lo", "interval-hi"};
        for (auto [lo, hi] : res.intervals)
            r.table_rows.push_back({std::to_string(lo), std::to_string(hi)});
        r.verdict = "ok";
    } else if (key == "represent/gdensity-sweep") {
        auto rep = bounded_columns_sweep(detail::get_u64(c.params, "/params", "lists", 100),
                                         detail::get_u64(c.params, "/params", "sets-per-list", 10),
                                         rng);
        r.values["lists"] = rep.lists;
        r.values["sets-checked"] = rep.sets_checked;
        r.values["structure-ok"] = rep.structure_ok;
        r.values["domination-ok"] = rep.domination_ok;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "represent/envelope") {
        auto h = detail::require_sequence(c, rng);
        if (c.sets.empty()) throw ConfigError("/sets", "envelope needs a universe of sets");
        std::vector<std::vector<std::uint64_t>> universe;
        for (std::size_t i = 0; i < c.sets.size(); ++i) {
            auto s = detail::build_set(c.sets[i], "/sets/" + std::to_string(i));
            auto en = s.enumerate_below(s.finite_bound(), c.budget);
            universe.push_back(en.elems);
        }
        auto psi = nonpathological_envelope(h, universe);
        auto phi = induced_submeasure(h, ModulusMode::Brute);
        bool sandwich = true;
        r.table_header = {"set", "induced", "envelope"};
        for (const auto& f : universe) {
            Rational tilde = phi.eval_sorted(f);
            Rational env = psi.eval_sorted(f);
            sandwich = sandwich && tilde <= env && env <= Rational(2) * tilde;
            std::ostringstream name;
            for (std::size_t i = 0; i < f.size(); ++i) name << (i ? " " : "") << f[i];
            r.table_rows.push_back({name.str(), tilde.str(), env.str()});
        }
        r.values["sandwich-ok"] = sandwich;
        r.verdict = sandwich ? "pass" : "violation";
        r.exit_hint = sandwich ? 0 : 4;
    } else if (key == "represent/envelope-sweep") {
        auto rep = envelope_sweep(detail::get_u64(c.params, "/params", "sequences", 200), rng);
        r.values["sequences"] = rep.sequences;
        r.values["sets-checked"] = rep.sets_checked;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "rademacher/vectors") {
        std::uint64_t count = detail::get_u64(c.params, "/params", "count", 10);
        r.table_header = {"i", "entries"};
        for (std::uint64_t i = 0; i < count; ++i)
            r.table_rows.push_back({std::to_string(i),
                                    detail::entries_display(rademacher_vector(i))});
        r.verdict = "ok";
    } else if (key == "rademacher/phi") {
        std::uint64_t blocks = detail::get_u64(c.params, "/params", "blocks", 12);
        auto phi = jr_submeasure(blocks);
        auto f = detail::require_set(c);
        r.values["value"] = phi.eval_set(f, c.budget).str();
        r.verdict = "ok";
    } else if (key == "rademacher/checks") {
        auto rep = rademacher_suite(detail::get_u64(c.params, "/params", "tuples", 500), rng);
        r.values["table-ok"] = rep.table_ok;
        r.values["orthogonality-ok"] = rep.orthogonality_ok;
        r.values["norms-ok"] = rep.norms_ok;
        r.values["sign-sweep-ok"] = rep.sign_sweep_ok;
        r.values["khintchine-ok"] = rep.khintchine_ok;
        r.values["khintchine-tuples"] = rep.khintchine_tuples;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "witness/summable-like") {
        auto phi = detail::require_submeasure(c);
        if (c.family.is_null()) throw ConfigError("/family", "this operation needs a family");
        auto fam = detail::build_family(c.family, "/family");
        auto rep = summable_like_check(phi, fam, c.budget);
        r.values["pass"] = rep.pass;
        r.values["route"] = rep.route;
        r.values["failure"] = rep.failure;
        r.values["combinations-checked"] = rep.combinations_checked;
        if (!rep.per_set_values.empty()) {
            r.table_header = {"n", "phi(A_n)"};
            for (std::size_t n = 0; n < rep.per_set_values.size(); ++n)
                r.table_rows.push_back({std::to_string(n), rep.per_set_values[n].str()});
        }
        r.values["min-union-value"] = rep.min_union_value.str();
        r.verdict = rep.pass ? "pass" : "violation";
        r.exit_hint = rep.pass ? 0 : 4;
    } else if (key == "witness/density-like") {
        auto phi = detail::require_submeasure(c);
        if (c.family.is_null()) throw ConfigError("/family", "this operation needs a family");
        auto fam = detail::build_family(c.family, "/family");
        Rational eps = detail::get_rational(c.params, "/params", "epsilon", fam.epsilon());
        auto rep = density_like_search(phi, eps, fam, c.budget);
        json xs = json::array();
        for (auto x : rep.best_x) xs.push_back(x);
        r.values["best-x"] = xs;
        r.values["best-value"] = rep.best_value.str();
        r.values["exhaustive"] = rep.exhaustive;
        r.values["note"] = rep.note;
        r.verdict = "heuristic";
    } else if (key == "witness/trace-family") {
        auto rep = trace_family_suite(
            static_cast<std::uint32_t>(detail::get_u64(c.params, "/params", "m", 3)));
        r.values["m"] = rep.m;
        r.values["sets-checked"] = rep.sets_checked;
        r.values["unions-checked"] = rep.unions_checked;
        r.values["per-set-ok"] = rep.per_set_ok;
        r.values["unions-ok"] = rep.unions_ok;
        r.values["evaluator-union-ok"] = rep.evaluator_union_ok;
        r.values["summable-like-pass"] = rep.summable_like_pass;
        r.values["full-union-value"] = rep.full_union_value.str();
        bool ok = rep.per_set_ok && rep.unions_ok && rep.evaluator_union_ok &&
                  rep.summable_like_pass;
        r.verdict = ok ? "pass" : "violation";
        r.exit_hint = ok ? 0 : 4;
    } else if (key == "witness/covering") {
        auto phi = detail::require_submeasure(c);
        if (c.mass.is_null()) throw ConfigError("/mass", "this operation needs a mass rule");
        auto h = detail::build_mass(c.mass, "/mass");
        if (c.sets.empty()) throw ConfigError("/sets", "this operation needs samples");
        std::vector<SetSpec> samples;
        for (std::size_t i = 0; i < c.sets.size(); ++i)
            samples.push_back(detail::build_set(c.sets[i], "/sets/" + std::to_string(i)));
        VerdictOptions opts;
        opts.budget = c.budget;
        opts.divergence_bar =
            detail::get_rational(c.params, "/params", "bar", kDefaultDivergenceBar);
        Rational eps = detail::get_rational(c.params, "/params", "epsilon");
        auto rep = covering_sample_check(phi, h, samples, eps, c.horizon, opts);
        r.table_header = {"sample", "phi-status", "mass-status", "refutation"};
        for (std::size_t i = 0; i < rep.samples.size(); ++i)
            r.table_rows.push_back({std::to_string(i),
                                    rep.samples[i].phi_verdict.status_name(),
                                    rep.samples[i].mass_verdict.status_name(),
                                    rep.samples[i].refutation ? "true" : "false"});
        r.values["any-refutation"] = rep.any_refutation;
        r.verdict = rep.any_refutation ? "refutation-found" : "no-refutation";
        r.exit_hint = rep.any_refutation ? 4 : 0;
    } else if (key == "witness/heavy-branch") {
        if (c.mass.is_null()) throw ConfigError("/mass", "this operation needs a tree mass");
        auto h = detail::build_tree_mass(c.mass, "/mass");
        std::uint32_t depth =
            static_cast<std::uint32_t>(detail::get_u64(c.params, "/params", "depth", 12));
        Rational target = detail::get_rational(c.params, "/params", "target-sum", Rational(1));
        auto rep = heavy_branch_search(h, depth, target);
        std::string branch;
        for (bool b : rep.branch) branch.push_back(b ? '1' : '0');
        r.values["branch"] = branch;
        r.values["achieved"] = rep.achieved;
        r.values["exhausted"] = rep.exhausted;
        r.table_header = {"n", "nodes", "sum", "tail-exact", "tail-bound"};
        for (std::size_t i = 0; i < rep.families.size(); ++i)
            r.table_rows.push_back({std::to_string(rep.families[i].n),
                                    std::to_string(rep.families[i].nodes.size()),
                                    rep.families[i].sum.str(),
                                    rep.tail_profile[i].first.str(),
                                    rep.tail_profile[i].second.str()});
        r.verdict = rep.exhausted ? "exhausted" : "ok";
    } else if (key == "witness/bm") {
        if (c.mass.is_null() || c.mass_b.is_null())
            throw ConfigError("/mass", "this operation needs mass and mass-b");
        auto a = detail::build_mass(c.mass, "/mass");
        auto b = detail::build_mass(c.mass_b, "/mass-b");
        std::uint32_t m = static_cast<std::uint32_t>(detail::get_u64(c.params, "/params", "m", 0));
        auto rep = bm_sets(a, b, m, c.horizon);
        auto en = rep.bm.enumerate_below(c.horizon, c.budget);
        r.values["count"] = en.elems.size();
        json first = json::array();
        for (std::size_t i = 0; i < en.elems.size() && i < 32; ++i) first.push_back(en.elems[i]);
        r.values["first-elements"] = first;
        r.values["a-sum"] = rep.a_tails.values[0].str();
        r.values["b-sum"] = rep.b_tails.values[0].str();
        r.verdict = "ok";
    } else if (key == "phi-family/cross-sweep") {
        auto rep = phi_family_crosscheck(detail::get_u64(c.params, "/params", "count", 500), rng);
        r.values["all-finite-ok"] = rep.all_finite_ok;
        r.values["blocks-ok"] = rep.blocks_ok;
        r.values["antichains-exhaustive-ok"] = rep.antichains_exhaustive_ok;
        r.values["antichains-seeded-ok"] = rep.antichains_seeded_ok;
        r.values["capped-ok"] = rep.capped_ok;
        r.values["ok"] = rep.ok;
        r.verdict = rep.ok ? "pass" : "violation";
        r.exit_hint = rep.ok ? 0 : 4;
    } else if (key == "phi-family") {
        // Evaluate a family-generated submeasure on a set: the submeasure
        // spec carries the family.
        auto phi = detail::require_submeasure(c);
        auto f = detail::require_set(c);
        r.values["value"] = phi.eval_set(f, c.budget).str();
        r.verdict = "ok";
    } else {
        throw ConfigError("/op", "unknown operation \"" + key + "\"");
    }

    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace exh::cli
