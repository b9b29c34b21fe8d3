#pragma once

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exh/errors.hpp"
#include "exh/prng.hpp"
#include "exh/rademacher.hpp"
#include "exh/sampling.hpp"
#include "exh/series.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"
#include "exh/sweeps.hpp"
#include "exh/tails.hpp"
#include "exh/witness.hpp"
#include "exh/zoo.hpp"

namespace exh::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

struct RunConfig {
    std::string op;
    std::string target;
    json submeasure;
    json set;
    json sets = json::array();
    json sequence;
    json family;
    json mass;
    json mass_b;
    json measures = json::array();
    json params = json::object();
    std::string output = "json";
    std::uint64_t seed = 0;
    std::uint64_t horizon = std::uint64_t{1} << 14;
    std::uint64_t budget = kDefaultEnumBudget;

    json canonical() const {
        json j;
        j["op"] = op;
        if (!target.empty()) j["target"] = target;
        if (!submeasure.is_null()) j["submeasure"] = submeasure;
        if (!set.is_null()) j["set"] = set;
        if (!sets.empty()) j["sets"] = sets;
        if (!sequence.is_null()) j["sequence"] = sequence;
        if (!family.is_null()) j["family"] = family;
        if (!mass.is_null()) j["mass"] = mass;
        if (!mass_b.is_null()) j["mass-b"] = mass_b;
        if (!measures.empty()) j["measures"] = measures;
        j["params"] = params;
        j["output"] = output;
        j["seed"] = seed;
        j["horizon"] = horizon;
        j["budget"] = budget;
        return j;
    }
};

namespace detail {

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown(const json& j, const std::string& path,
                           std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) throw ConfigError(path + "/" + key, "unknown field");
    }
}

inline std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                             std::optional<std::uint64_t> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(path + "/" + key, "missing field");
    }
    const json& v = j.at(key);
    if (!v.is_number_unsigned())
        throw ConfigError(path + "/" + key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

inline std::string get_string(const json& j, const std::string& path, const char* key,
                              std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(path + "/" + key, "missing field");
    }
    if (!j.at(key).is_string()) throw ConfigError(path + "/" + key, "expected a string");
    return j.at(key).get<std::string>();
}

inline Rational get_rational(const json& j, const std::string& path, const char* key,
                             std::optional<Rational> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(path + "/" + key, "missing field");
    }
    if (!j.at(key).is_string())
        throw ConfigError(path + "/" + key, "rationals are \"p/q\" strings");
    try {
        return Rational::parse(j.at(key).get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + "/" + key, e.what());
    }
}

} // namespace detail

/// Parses and validates a config document; unknown fields are rejected with
/// the offending path.
inline RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", std::string("invalid json: ") + e.what());
    }
    detail::require_object(j, "/");
    detail::reject_unknown(j, "", {"op", "target", "submeasure", "set", "sets", "sequence",
                                   "family", "mass", "mass-b", "measures", "params", "output",
                                   "seed", "horizon", "budget"});
    RunConfig c;
    c.op = detail::get_string(j, "", "op");
    c.target = detail::get_string(j, "", "target", "");
    if (j.contains("submeasure")) c.submeasure = j["submeasure"];
    if (j.contains("set")) c.set = j["set"];
    if (j.contains("sets")) c.sets = j["sets"];
    if (j.contains("sequence")) c.sequence = j["sequence"];
    if (j.contains("family")) c.family = j["family"];
    if (j.contains("mass")) c.mass = j["mass"];
    if (j.contains("mass-b")) c.mass_b = j["mass-b"];
    if (j.contains("measures")) c.measures = j["measures"];
    if (j.contains("params")) {
        detail::require_object(j["params"], "/params");
        detail::reject_unknown(j["params"], "/params",
                               {"epsilon", "delta", "k", "m", "count", "cutoffs", "bar", "depth",
                                "target-sum", "lo", "hi", "mode", "blocks", "window", "pairs",
                                "submeasures", "sets", "sequences", "tuples", "lists",
                                "sets-per-list", "width", "scale", "cap"});
        c.params = j["params"];
    }
    c.output = detail::get_string(j, "", "output", "json");
    if (c.output != "json" && c.output != "csv" && c.output != "table")
        throw ConfigError("/output", "expected json, csv or table");
    c.seed = detail::get_u64(j, "", "seed", 0);
    c.horizon = detail::get_u64(j, "", "horizon", std::uint64_t{1} << 14);
    c.budget = detail::get_u64(j, "", "budget", kDefaultEnumBudget);
    return c;
}

// ---------------------------------------------------------------------------
// Spec builders

namespace detail {

inline FiniteSupportMeasure build_measure(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"atoms"});
    if (!j.contains("atoms") || !j.at("atoms").is_object())
        throw ConfigError(path + "/atoms", "expected an object of point -> \"p/q\"");
    std::vector<std::pair<std::uint64_t, Rational>> atoms;
    for (const auto& [key, value] : j.at("atoms").items()) {
        std::uint64_t n = 0;
        try {
            n = std::stoull(key);
        } catch (...) {
            throw ConfigError(path + "/atoms/" + key, "atom keys are naturals");
        }
        if (!value.is_string()) throw ConfigError(path + "/atoms/" + key, "weights are \"p/q\"");
        Rational w = Rational::parse(value.get<std::string>());
        if (!(w > Rational(0)))
            throw ConfigError(path + "/atoms/" + key, "weights must be positive");
        atoms.emplace_back(n, w);
    }
    try {
        return FiniteSupportMeasure(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

inline std::vector<FiniteSupportMeasure> build_measures(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of measures");
    std::vector<FiniteSupportMeasure> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(build_measure(j[i], path + "/" + std::to_string(i)));
    return out;
}

inline CountRule build_count_rule(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"kind", "constant"});
    std::string kind = get_string(j, path, "kind");
    CountRule c;
    if (kind == "full") c.kind = CountRule::Kind::Full;
    else if (kind == "constant") {
        c.kind = CountRule::Kind::Constant;
        c.constant = get_u64(j, path, "constant");
    } else if (kind == "isqrt") c.kind = CountRule::Kind::Isqrt;
    else if (kind == "linear") c.kind = CountRule::Kind::Linear;
    else throw ConfigError(path + "/kind", "catalog: full, constant, isqrt, linear");
    return c;
}

inline Partition build_partition(const std::string& name, const std::string& path) {
    if (name == "dyadic") return Partition::Dyadic;
    if (name == "triangle") return Partition::Triangle;
    if (name == "pow2") return Partition::Pow2;
    throw ConfigError(path, "catalog: dyadic, triangle, pow2");
}

inline MassRule build_mass(const json& j, const std::string& path) {
    require_object(j, path);
    std::string rule = get_string(j, path, "rule");
    if (rule == "harmonic") {
        reject_unknown(j, path, {"rule"});
        return MassRule::Harmonic{};
    }
    if (rule == "geometric") {
        reject_unknown(j, path, {"rule", "scale", "ratio"});
        return MassRule::Geometric{get_rational(j, path, "scale", Rational(1)),
                                   get_rational(j, path, "ratio", Rational(1, 2))};
    }
    if (rule == "dyadic-block-const" || rule == "dyadic-block-prefix") {
        reject_unknown(j, path, {"rule", "value", "count"});
        std::string value = get_string(j, path, "value", "pow2-inv");
        auto v = MassRule::BlockConstDyadic::Value::Pow2Inv;
        if (value == "inv-linear") v = MassRule::BlockConstDyadic::Value::InvLinear;
        else if (value != "pow2-inv")
            throw ConfigError(path + "/value", "catalog: pow2-inv, inv-linear");
        if (rule == "dyadic-block-const") return MassRule::BlockConstDyadic{v};
        CountRule c = j.contains("count") ? build_count_rule(j["count"], path + "/count")
                                          : CountRule{CountRule::Kind::Linear};
        return MassRule::BlockPrefixDyadic{c, v};
    }
    if (rule == "explicit") {
        reject_unknown(j, path, {"rule", "values"});
        if (!j.contains("values") || !j.at("values").is_array())
            throw ConfigError(path + "/values", "expected an array of \"p/q\"");
        std::vector<Rational> values;
        for (const auto& v : j.at("values")) {
            if (!v.is_string()) throw ConfigError(path + "/values", "values are \"p/q\"");
            values.push_back(Rational::parse(v.get<std::string>()));
        }
        try {
            return MassRule::ExplicitPrefix{std::move(values)};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path + "/values", e.what());
        }
    }
    if (rule == "residue-harmonic") {
        reject_unknown(j, path, {"rule", "k"});
        return MassRule::ResidueHarmonic{static_cast<std::uint32_t>(get_u64(j, path, "k"))};
    }
    if (rule == "level-weight") {
        reject_unknown(j, path, {"rule"});
        return MassRule::LevelWeight{};
    }
    throw ConfigError(path + "/rule",
                      "catalog: harmonic, geometric, dyadic-block-const, dyadic-block-prefix, "
                      "explicit, residue-harmonic, level-weight");
}

inline TreeMassRule build_tree_mass(const json& j, const std::string& path) {
    require_object(j, path);
    std::string rule = get_string(j, path, "rule");
    if (rule == "level-pow2-inv") {
        reject_unknown(j, path, {"rule"});
        return TreeMassRule(TreeMassRule::Kind::LevelPow2Inv);
    }
    if (rule == "level-inv-square") {
        reject_unknown(j, path, {"rule"});
        return TreeMassRule(TreeMassRule::Kind::LevelInvSquare);
    }
    if (rule == "level-const") {
        reject_unknown(j, path, {"rule", "c"});
        return TreeMassRule(TreeMassRule::Kind::LevelConst, get_rational(j, path, "c", Rational(1)));
    }
    if (rule == "spine-const") {
        reject_unknown(j, path, {"rule", "c"});
        return TreeMassRule(TreeMassRule::Kind::SpineConst, get_rational(j, path, "c", Rational(1)));
    }
    if (rule == "zero") {
        reject_unknown(j, path, {"rule"});
        return TreeMassRule(TreeMassRule::Kind::Zero);
    }
    if (rule == "explicit") {
        reject_unknown(j, path, {"rule", "table"});
        if (!j.contains("table") || !j.at("table").is_object())
            throw ConfigError(path + "/table", "expected node-index -> \"p/q\"");
        std::map<std::uint64_t, Rational> table;
        for (const auto& [key, value] : j.at("table").items()) {
            if (!value.is_string()) throw ConfigError(path + "/table/" + key, "masses are \"p/q\"");
            table[std::stoull(key)] = Rational::parse(value.get<std::string>());
        }
        return TreeMassRule::explicit_table(std::move(table));
    }
    throw ConfigError(path + "/rule",
                      "catalog: level-pow2-inv, level-inv-square, level-const, spine-const, "
                      "zero, explicit");
}

inline SetSpec build_set(const json& j, const std::string& path) {
    require_object(j, path);
    std::string kind = get_string(j, path, "kind");
    try {
        if (kind == "explicit") {
            reject_unknown(j, path, {"kind", "elements"});
            if (!j.contains("elements") || !j.at("elements").is_array())
                throw ConfigError(path + "/elements", "expected an array of naturals");
            std::vector<std::uint64_t> elems;
            for (const auto& e : j.at("elements")) {
                if (!e.is_number_unsigned())
                    throw ConfigError(path + "/elements", "elements are naturals");
                elems.push_back(e.get<std::uint64_t>());
            }
            return SetSpec::explicit_set(std::move(elems));
        }
        if (kind == "intervals") {
            reject_unknown(j, path, {"kind", "intervals"});
            if (!j.contains("intervals") || !j.at("intervals").is_array())
                throw ConfigError(path + "/intervals", "expected an array of [a, b) pairs");
            std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
            for (const auto& iv : j.at("intervals")) {
                if (!iv.is_array() || iv.size() != 2)
                    throw ConfigError(path + "/intervals", "each interval is [a, b]");
                blocks.emplace_back(iv[0].get<std::uint64_t>(), iv[1].get<std::uint64_t>());
            }
            return SetSpec::intervals(std::move(blocks));
        }
        if (kind == "arithmetic") {
            reject_unknown(j, path, {"kind", "first", "step"});
            return SetSpec::arithmetic(get_u64(j, path, "first"), get_u64(j, path, "step"));
        }
        if (kind == "geometric") {
            reject_unknown(j, path, {"kind", "base", "offset", "first-exponent"});
            std::int64_t offset = 0;
            if (j.contains("offset")) {
                if (!j.at("offset").is_number_integer())
                    throw ConfigError(path + "/offset", "expected an integer");
                offset = j.at("offset").get<std::int64_t>();
            }
            return SetSpec::geometric(get_u64(j, path, "base", 2), offset,
                                      static_cast<std::uint32_t>(
                                          get_u64(j, path, "first-exponent", 0)));
        }
        if (kind == "block-select") {
            reject_unknown(j, path, {"kind", "partition", "count"});
            Partition p = build_partition(get_string(j, path, "partition", "dyadic"),
                                          path + "/partition");
            CountRule c = j.contains("count") ? build_count_rule(j["count"], path + "/count")
                                              : CountRule{};
            return SetSpec::block_select(p, c);
        }
        if (kind == "tree") {
            reject_unknown(j, path, {"kind", "rule", "lo", "hi", "prefix", "m", "n", "nodes"});
            std::string rule = get_string(j, path, "rule");
            TreeSetRule r;
            if (rule == "full-levels") {
                r.kind = TreeSetRule::Kind::FullLevels;
                r.lo = static_cast<std::uint32_t>(get_u64(j, path, "lo", 0));
                r.hi = static_cast<std::uint32_t>(get_u64(j, path, "hi"));
            } else if (rule == "subtree") {
                r.kind = TreeSetRule::Kind::SubtreeLevels;
                r.prefix = node_from_string(get_string(j, path, "prefix", ""));
                r.lo = static_cast<std::uint32_t>(get_u64(j, path, "lo", 0));
                r.hi = static_cast<std::uint32_t>(get_u64(j, path, "hi"));
            } else if (rule == "window-zero") {
                r.kind = TreeSetRule::Kind::WindowZero;
                r.m = static_cast<std::uint32_t>(get_u64(j, path, "m"));
                r.n = static_cast<std::uint32_t>(get_u64(j, path, "n"));
            } else if (rule == "spine") {
                r.kind = TreeSetRule::Kind::Spine;
                r.lo = static_cast<std::uint32_t>(get_u64(j, path, "lo", 0));
                r.hi = static_cast<std::uint32_t>(get_u64(j, path, "hi"));
            } else if (rule == "explicit-nodes") {
                r.kind = TreeSetRule::Kind::ExplicitNodes;
                if (!j.contains("nodes") || !j.at("nodes").is_array())
                    throw ConfigError(path + "/nodes", "expected an array of node indices");
                for (const auto& e : j.at("nodes")) r.nodes.push_back(e.get<std::uint64_t>());
            } else {
                throw ConfigError(path + "/rule",
                                  "catalog: full-levels, subtree, window-zero, spine, "
                                  "explicit-nodes");
            }
            return SetSpec::tree(std::move(r));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/kind",
                      "catalog: explicit, intervals, arithmetic, geometric, block-select, tree");
}

inline Submeasure build_submeasure(const json& j, const std::string& path) {
    require_object(j, path);
    std::string preset = get_string(j, path, "preset");
    try {
        if (preset == "summable") {
            reject_unknown(j, path, {"preset", "mass"});
            if (!j.contains("mass")) throw ConfigError(path + "/mass", "missing mass rule");
            return summable_submeasure(build_mass(j["mass"], path + "/mass"));
        }
        if (preset == "Z") {
            reject_unknown(j, path, {"preset"});
            return z_preset();
        }
        if (preset == "empty-otimes-fin") {
            reject_unknown(j, path, {"preset"});
            return empty_otimes_fin_submeasure();
        }
        if (preset == "farah") {
            reject_unknown(j, path, {"preset"});
            return farah_submeasure();
        }
        if (preset == "trace-null") {
            reject_unknown(j, path, {"preset"});
            return trace_null_submeasure();
        }
        if (preset == "tree-summable") {
            reject_unknown(j, path, {"preset"});
            return tree_summable_submeasure();
        }
        if (preset == "tree-density") {
            reject_unknown(j, path, {"preset"});
            return tree_density_submeasure();
        }
        if (preset == "gdensity-uniform") {
            reject_unknown(j, path, {"preset", "width", "scale", "cap"});
            return gdensity_uniform_width(get_u64(j, path, "width", 2),
                                          get_rational(j, path, "scale", Rational(1, 2)),
                                          get_rational(j, path, "cap", Rational(1)));
        }
        if (preset == "density" || preset == "sup-of-measures") {
            reject_unknown(j, path, {"preset", "measures"});
            if (!j.contains("measures"))
                throw ConfigError(path + "/measures", "missing measure list");
            auto ms = build_measures(j["measures"], path + "/measures");
            return preset == "density" ? density_submeasure(std::move(ms))
                                       : sup_of_measures(std::move(ms));
        }
        if (preset == "jr") {
            reject_unknown(j, path, {"preset", "blocks"});
            return jr_submeasure(get_u64(j, path, "blocks", 12));
        }
        if (preset == "phi-family-omega" || preset == "phi-family-tree") {
            reject_unknown(j, path, {"preset", "mass", "family-kind", "partition"});
            std::string fk = get_string(j, path, "family-kind");
            FamilySpec spec;
            if (fk == "all-finite") spec.kind = FamilySpec::Kind::AllFinite;
            else if (fk == "blocks") spec.kind = FamilySpec::Kind::OmegaBlocks;
            else if (fk == "levels") spec.kind = FamilySpec::Kind::TreeLevels;
            else if (fk == "antichains") spec.kind = FamilySpec::Kind::Antichains;
            else if (fk == "capped-levels") spec.kind = FamilySpec::Kind::CappedLevels;
            else
                throw ConfigError(path + "/family-kind",
                                  "catalog: all-finite, blocks, levels, antichains, capped-levels");
            if (j.contains("partition"))
                spec.partition = build_partition(j["partition"].get<std::string>(),
                                                 path + "/partition");
            if (!j.contains("mass")) throw ConfigError(path + "/mass", "missing mass rule");
            if (preset == "phi-family-omega")
                return phi_family_omega(build_mass(j["mass"], path + "/mass"), spec);
            return phi_family_tree(build_tree_mass(j["mass"], path + "/mass"), spec);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/preset",
                      "catalog: summable, Z, empty-otimes-fin, farah, trace-null, tree-summable, "
                      "tree-density, gdensity-uniform, density, sup-of-measures, jr, "
                      "phi-family-omega, phi-family-tree");
}

inline VectorSequence build_sequence(const json& j, const std::string& path, Prng& rng) {
    require_object(j, path);
    std::string rule = get_string(j, path, "rule");
    if (rule == "zinc0") {
        reject_unknown(j, path, {"rule"});
        return zinc0_sequence();
    }
    if (rule == "dense-tail") {
        reject_unknown(j, path, {"rule", "width"});
        return dense_tail_sequence(static_cast<std::uint32_t>(get_u64(j, path, "width", 8)));
    }
    if (rule == "x-seq") {
        reject_unknown(j, path, {"rule"});
        return x_sequence();
    }
    if (rule == "explicit") {
        reject_unknown(j, path, {"rule", "norm", "vectors"});
        std::string norm = get_string(j, path, "norm");
        NormTag tag = norm == "ell1" ? NormTag::Ell1 : NormTag::Sup;
        if (norm != "ell1" && norm != "sup")
            throw ConfigError(path + "/norm", "catalog: ell1, sup");
        if (!j.contains("vectors") || !j.at("vectors").is_array())
            throw ConfigError(path + "/vectors", "expected an array of coordinate maps");
        std::vector<Vector> terms;
        for (const auto& vj : j.at("vectors")) {
            if (!vj.is_object()) throw ConfigError(path + "/vectors", "each term is an object");
            std::vector<std::pair<std::uint64_t, Rational>> es;
            for (const auto& [key, value] : vj.items())
                es.emplace_back(std::stoull(key), Rational::parse(value.get<std::string>()));
            terms.emplace_back(tag, std::move(es));
        }
        return explicit_sequence(tag, std::move(terms));
    }
    if (rule == "seeded-signed") {
        reject_unknown(j, path, {"rule", "indices", "coords", "norm"});
        std::string norm = get_string(j, path, "norm", "sup");
        return random_signed_sequence(rng, get_u64(j, path, "indices", 8),
                                      get_u64(j, path, "coords", 3),
                                      norm == "ell1" ? NormTag::Ell1 : NormTag::Sup);
    }
    if (rule == "ellinf-of") {
        reject_unknown(j, path, {"rule", "submeasure"});
        if (!j.contains("submeasure"))
            throw ConfigError(path + "/submeasure", "missing submeasure spec");
        return ellinf_representation(build_submeasure(j["submeasure"], path + "/submeasure"));
    }
    if (rule == "abs-of" || rule == "c0-normal-of") {
        reject_unknown(j, path, {"rule", "sequence"});
        if (!j.contains("sequence"))
            throw ConfigError(path + "/sequence", "missing inner sequence");
        auto inner = build_sequence(j["sequence"], path + "/sequence", rng);
        try {
            return rule == "abs-of" ? absolute_value_sequence(inner) : c0_normal_form(inner);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(path + "/rule",
                      "catalog: zinc0, dense-tail, x-seq, explicit, seeded-signed, ellinf-of, "
                      "abs-of, c0-normal-of");
}

inline WitnessFamily build_family(const json& j, const std::string& path) {
    require_object(j, path);
    std::string kind = get_string(j, path, "kind");
    try {
        if (kind == "trace") {
            reject_unknown(j, path, {"kind", "m", "size"});
            return trace_null_witness_family(static_cast<std::uint32_t>(get_u64(j, path, "m")),
                                             get_u64(j, path, "size", 0));
        }
        if (kind == "explicit") {
            reject_unknown(j, path, {"kind", "sets", "epsilon", "delta", "k"});
            if (!j.contains("sets") || !j.at("sets").is_array())
                throw ConfigError(path + "/sets", "expected an array of element arrays");
            std::vector<std::vector<std::uint64_t>> sets;
            for (const auto& sj : j.at("sets")) {
                std::vector<std::uint64_t> s;
                for (const auto& e : sj) s.push_back(e.get<std::uint64_t>());
                sets.push_back(std::move(s));
            }
            return WitnessFamily::explicit_sets(std::move(sets), get_rational(j, path, "epsilon"),
                                                get_rational(j, path, "delta"),
                                                get_u64(j, path, "k"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/kind", "catalog: trace, explicit");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Records and emitters

struct ResultRecord {
    std::string op;
    std::string target;
    json echo;
    json values = json::object();
    std::string verdict;  // "ok", "pass", "fail", "violation", ...
    std::vector<std::string> table_header;
    std::vector<std::vector<std::string>> table_rows;
    std::uint64_t seed = 0;
    int exit_hint = 0;
    double elapsed_seconds = 0;  // table output only; machine formats omit it
};

inline json record_json(const ResultRecord& r) {
    json j;
    j["op"] = r.op;
    if (!r.target.empty()) j["target"] = r.target;
    j["echo"] = r.echo;
    j["seed"] = r.seed;
    j["values"] = r.values;
    j["verdict"] = r.verdict;
    if (!r.table_rows.empty()) {
        json t;
        t["header"] = r.table_header;
        t["rows"] = r.table_rows;
        j["table"] = t;
    }
    return j;
}

inline std::string elapsed_display(double seconds) {
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << seconds << "s";
    return out.str();
}

/// json: one object per line; csv: header plus rows; table: human-readable
/// with decimal approximations clearly marked.
inline std::string emit(const ResultRecord& r, const std::string& format) {
    if (format == "json") {
        return record_json(r).dump() + "\n";
    }
    if (format == "csv") {
        std::ostringstream out;
        if (!r.table_rows.empty()) {
            for (std::size_t i = 0; i < r.table_header.size(); ++i)
                out << (i ? "," : "") << r.table_header[i];
            out << "\n";
            for (const auto& row : r.table_rows) {
                for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
                out << "\n";
            }
        } else {
            out << "key,value\n";
            for (const auto& [k, v] : r.values.items())
                out << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
        return out.str();
    }
    // table
    std::ostringstream out;
    out << r.op;
    if (!r.target.empty()) out << " " << r.target;
    out << "  [" << r.verdict << "]  seed=" << r.seed << "\n";
    for (const auto& [k, v] : r.values.items()) {
        out << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump());
        if (v.is_string()) {
            // Mark the decimal approximation of rational-looking values.
            const std::string s = v.get<std::string>();
            if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) {
                try {
                    out << "  (~" << Rational::parse(s).approx() << ")";
                } catch (const std::invalid_argument&) {
                }
            }
        }
        out << "\n";
    }
    if (!r.table_rows.empty()) {
        for (std::size_t i = 0; i < r.table_header.size(); ++i)
            out << (i ? "\t" : "  ") << r.table_header[i];
        out << "\n";
        for (const auto& row : r.table_rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "  ") << row[i];
            out << "\n";
        }
    }
    out << "  elapsed ~" << elapsed_display(r.elapsed_seconds) << "\n";
    return out.str();
}

} // namespace exh::cli
