#include "mgq/serialize.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace mgq {

std::string format_real(Real v) {
    if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

} // namespace

void Json::write(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::null: out += "null"; return;
        case Kind::boolean: out += bool_ ? "true" : "false"; return;
        case Kind::integer: out += std::to_string(int_); return;
        case Kind::number: out += format_real(num_); return;
        case Kind::string: write_escaped(out, str_); return;
        case Kind::array: {
            out += '[';
            for (std::size_t i = 0; i < arr_.size(); ++i) {
                if (i) out += ',';
                newline_indent(out, indent, depth + 1);
                arr_[i].write(out, indent, depth + 1);
            }
            if (!arr_.empty()) newline_indent(out, indent, depth);
            out += ']';
            return;
        }
        case Kind::object: {
            out += '{';
            for (std::size_t i = 0; i < obj_.size(); ++i) {
                if (i) out += ',';
                newline_indent(out, indent, depth + 1);
                write_escaped(out, obj_[i].first);
                out += indent < 0 ? ":" : ": ";
                obj_[i].second.write(out, indent, depth + 1);
            }
            if (!obj_.empty()) newline_indent(out, indent, depth);
            out += '}';
            return;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    return out;
}

Json to_json(const HorizonSpec& h) {
    Json j = Json::object();
    if (h.is_discounted()) {
        j.set("type", "discounted");
        j.set("beta", h.beta);
    } else {
        j.set("type", "finite-horizon");
        j.set("T", h.horizon);
    }
    return j;
}

Json to_json(const Provenance& p) {
    Json j = Json::object();
    j.set("source_game", p.source_game);
    j.set("delta", p.delta);
    j.set("action_delta", p.action_delta);
    j.set("quad_resolution", p.quad_resolution);
    j.set("max_row_defect", p.max_row_defect);
    return j;
}

Json to_json(const FiniteGame& g) {
    const long J = g.joint_count();
    Json j = Json::object();
    j.set("k", g.num_states);
    j.set("action_counts", Json::array_of(g.action_counts.begin(), g.action_counts.end()));
    Json costs = Json::array();
    for (int i = 0; i < g.num_players(); ++i) {
        Json per_state = Json::array();
        for (int x = 0; x < g.num_states; ++x) {
            Json row = Json::array();
            for (long a = 0; a < J; ++a) row.push(g.cost(i, x, a));
            per_state.push(std::move(row));
        }
        costs.push(std::move(per_state));
    }
    j.set("costs", std::move(costs));
    Json trans = Json::array();
    for (int x = 0; x < g.num_states; ++x) {
        Json per_action = Json::array();
        for (long a = 0; a < J; ++a) {
            Json row = Json::array();
            const Real* r = g.row(x, a);
            for (int y = 0; y < g.num_states; ++y) row.push(r[y]);
            per_action.push(std::move(row));
        }
        trans.push(std::move(per_action));
    }
    j.set("transitions", std::move(trans));
    j.set("beta_or_T", to_json(g.horizon));
    j.set("provenance", to_json(g.provenance));
    return j;
}

Json to_json(const MixedProfile& p) {
    Json j = Json::array();
    for (const auto& probs : p.probs) j.push(Json::reals(probs));
    return j;
}

Json to_json(const StationaryPolicyProfile& p) {
    Json j = Json::array();
    for (const auto& mix : p.states) j.push(to_json(mix));
    return j;
}

Json to_json(const MarkovPolicyProfile& p) {
    Json j = Json::array();
    for (const auto& slice : p.times) j.push(to_json(slice));
    return j;
}

Json to_json(const SolveReport& r) {
    Json j = Json::object();
    j.set("method", r.method);
    j.set("converged", r.converged);
    j.set("iterations", r.iterations);
    j.set("residual", r.residual);
    Json values = Json::array();
    for (const auto& row : r.values.values) values.push(Json::reals(row));
    j.set("values", std::move(values));
    if (!r.values.by_time.empty()) {
        Json by_time = Json::array();
        for (const auto& slice : r.values.by_time) {
            Json per_player = Json::array();
            for (const auto& row : slice) per_player.push(Json::reals(row));
            by_time.push(std::move(per_player));
        }
        j.set("values_by_time", std::move(by_time));
    }
    j.set("profile", r.finite_horizon ? to_json(r.markov) : to_json(r.stationary));
    Json stage_gaps = Json::array();
    for (const auto& row : r.stage_gaps) stage_gaps.push(Json::reals(row));
    j.set("stage_gaps", std::move(stage_gaps));
    j.set("dynamic_gaps", Json::reals(r.dynamic_gaps));
    Json per_state = Json::array();
    for (const auto& row : r.dynamic_gap_by_state) per_state.push(Json::reals(row));
    j.set("dynamic_gap_by_state", std::move(per_state));
    j.set("residual_history", Json::reals(r.residual_history));
    return j;
}

Json to_json(const EpsCertificate& c) {
    Json j = Json::object();
    j.set("delta", c.delta);
    j.set("refine", c.refine);
    j.set("eps", Json::reals(c.eps));
    j.set("operator_residual", c.operator_residual);
    j.set("omega_hat", c.omega_hat);
    j.set("refined_states", c.refined_states);
    j.set("quad_defect", c.quad_defect);
    j.set("build_seconds", c.build_seconds);
    j.set("certify_seconds", c.certify_seconds);
    j.set("note", c.note);
    return j;
}

Json to_json(const ValidationReport& r) {
    Json j = Json::object();
    j.set("samples", r.samples);
    j.set("max_normalization_defect", r.max_normalization_defect);
    j.set("max_abs_cost", r.max_abs_cost);
    j.set("cost_bound_exceeded", r.cost_bound_exceeded);
    j.set("tv_continuity_proxy", r.tv_continuity_proxy);
    j.set("probe_radius", r.probe_radius);
    return j;
}

FiniteGame finite_game_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    FiniteGame g;
    g.num_states = doc.at("k").get<int>();
    g.action_counts = doc.at("action_counts").get<std::vector<int>>();
    const long J = g.joint_count();
    const auto& costs = doc.at("costs");
    g.costs.assign(costs.size(), std::vector<Real>(static_cast<long>(g.num_states) * J));
    for (std::size_t i = 0; i < costs.size(); ++i)
        for (int x = 0; x < g.num_states; ++x)
            for (long a = 0; a < J; ++a)
                g.costs[i][x * J + a] = costs[i][x][a].get<Real>();
    g.transitions.assign(static_cast<long>(g.num_states) * J * g.num_states, 0.0);
    const auto& trans = doc.at("transitions");
    for (int x = 0; x < g.num_states; ++x)
        for (long a = 0; a < J; ++a)
            for (int y = 0; y < g.num_states; ++y)
                g.transitions[(static_cast<long>(x) * J + a) * g.num_states + y] =
                    trans[x][a][y].get<Real>();
    const auto& h = doc.at("beta_or_T");
    if (h.at("type") == "discounted")
        g.horizon = HorizonSpec::discounted(h.at("beta").get<Real>());
    else
        g.horizon = HorizonSpec::finite(h.at("T").get<int>());
    if (doc.contains("provenance")) {
        const auto& p = doc.at("provenance");
        g.provenance.source_game = p.value("source_game", std::string{});
        g.provenance.delta = p.value("delta", 0.0);
        g.provenance.action_delta = p.value("action_delta", 0.0);
        g.provenance.quad_resolution = p.value("quad_resolution", 0);
        g.provenance.max_row_defect = p.value("max_row_defect", 0.0);
    }
    return g;
}

} // namespace mgq
