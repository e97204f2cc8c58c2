#include "mflow/report.hpp"

namespace mflow {

json to_json(const GridSpec& g) {
    return json{{"dim", g.dim}, {"npts", g.npts}, {"length", g.length}, {"dealias", g.dealias}};
}

json to_json(const MorreyEstimate& e) {
    json profile = json::array();
    for (const auto& [R, v] : e.profile) profile.push_back(json::array({R, v}));
    json wc = json::array();
    for (double c : e.witness_center) wc.push_back(c);
    return json{{"value", e.value},
                {"witness_center", wc},
                {"witness_radius", e.witness_radius},
                {"profile", profile}};
}

json to_json(const DecayReport& r) {
    json profile = json::array();
    for (const auto& row : r.profile)
        profile.push_back(json{{"radius", row.radius},
                               {"ratio_u", row.ratio_u},
                               {"ratio_gradv", row.ratio_gradv}});
    return json{{"pass", r.pass}, {"worst_ratio", r.worst_ratio}, {"tol", r.tol},
                {"profile", profile}};
}

json to_json(const HolderFit& f) {
    return json{{"defined", f.defined},
                {"beta", f.beta},
                {"constant", f.constant},
                {"bins_used", f.bins_used}};
}

json to_json(const ResidualReport& r) {
    return json{{"momentum", r.momentum},
                {"director", r.director},
                {"divergence", r.divergence},
                {"bank_size", r.bank_size}};
}

json to_json(const IdentityReport& r) {
    return json{{"u_morrey", r.u_morrey},
                {"u_sup", r.u_sup},
                {"v_morrey", r.v_morrey},
                {"v_sup", r.v_sup}};
}

json to_json(const BootstrapReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back(json{{"alpha", to_string(e.alpha)},
                               {"order", e.alpha.order()},
                               {"morrey_u", e.morrey_u},
                               {"morrey_p", e.morrey_p},
                               {"morrey_v", e.morrey_v},
                               {"identity_mismatch_u", e.identity_mismatch_u},
                               {"identity_mismatch_v", e.identity_mismatch_v},
                               {"holder_u", to_json(e.holder_u)},
                               {"holder_p", to_json(e.holder_p)},
                               {"holder_v", to_json(e.holder_v)}});
    return json{{"max_order", r.max_order}, {"entries", entries}};
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::regular: return "regular";
        case Verdict::not_regular: return "not_regular";
        case Verdict::hypotheses_not_met: return "hypotheses_not_met";
    }
    return "unknown";
}

json to_json(const RegularityReport& r) {
    return json{{"p", r.p},
                {"decay", to_json(r.decay)},
                {"residuals", to_json(r.residuals)},
                {"decay_ok", r.decay_ok},
                {"solution_ok", r.solution_ok},
                {"hypotheses_met", r.hypotheses_met},
                {"morrey_u", r.morrey_u},
                {"morrey_gradv", r.morrey_gradv},
                {"pressure_recovered", r.pressure_recovered},
                {"bootstrap", to_json(r.bootstrap)},
                {"identity", to_json(r.identity)},
                {"holder_u0", to_json(r.holder_u0)},
                {"holder_p0", to_json(r.holder_p0)},
                {"holder_v0", to_json(r.holder_v0)},
                {"holder_floor", r.holder_floor},
                {"min_defined_beta", r.min_defined_beta},
                {"holder_pass", r.holder_pass},
                {"verdict", to_string(r.verdict)}};
}

json to_json(const MhdReport& r) {
    return json{{"momentum", r.momentum},
                {"induction", r.induction},
                {"induction_nonlinear", r.induction_nonlinear},
                {"divergence_u", r.divergence_u},
                {"divergence_b", r.divergence_b},
                {"decay_u", to_json(r.decay_u)},
                {"decay_b", to_json(r.decay_b)},
                {"bank_size", r.bank_size}};
}

json to_json(const ContractionFit& f) {
    json rows = json::array();
    for (const auto& row : f.rows)
        rows.push_back(json{{"horizon", row.horizon},
                            {"norm_b12", row.norm_b12},
                            {"norm_b34", row.norm_b34}});
    return json{{"slope_b12", f.slope_b12},
                {"constant_b12", f.constant_b12},
                {"slope_b34", f.slope_b34},
                {"constant_b34", f.constant_b34},
                {"rows", rows}};
}

json to_json(const UniquenessResult& r) {
    return json{{"max_divergence", r.max_divergence},
                {"common_times", r.common_times},
                {"iterations_a", r.iterations_a},
                {"iterations_b", r.iterations_b}};
}

json to_json(const SmoothingCheck& c) {
    json rows = json::array();
    for (const auto& row : c.rows)
        rows.push_back(json{{"t", row.t}, {"sup_norm", row.sup_norm}, {"weighted", row.weighted}});
    return json{{"sup_weighted", c.sup_weighted},
                {"slope", c.slope},
                {"slope_defined", c.slope_defined},
                {"rows", rows}};
}

json picard_summary(const PicardResult& r) {
    return json{{"converged", r.converged},
                {"diverged", r.diverged},
                {"iterations", r.iterations},
                {"residual", r.residual},
                {"et_norms", r.et_norms},
                {"increments", r.increments}};
}

}  // namespace mflow
