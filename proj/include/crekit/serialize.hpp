#pragma once

// JSON forms of verdicts and reports. Every CLI response is one envelope:
//   {"verdict": bool, "witness": [symbol, ...] | null,
//    "error": {"code": string, "message": string} | null, "report": {...} | null}

#include <optional>
#include <string>

#include "json.hpp"

#include "crekit/decision.hpp"
#include "crekit/engine.hpp"
#include "crekit/error.hpp"
#include "crekit/partition.hpp"
#include "crekit/unambiguity.hpp"

namespace crekit {

using Json = nlohmann::ordered_json;

inline Json word_json(const std::optional<Word>& w) {
    if (!w)
        return nullptr;
    return Json(*w);
}

inline Json envelope(bool verdict, const std::optional<Word>& witness = std::nullopt,
                     Json report = nullptr) {
    return Json{{"verdict", verdict},
                {"witness", word_json(witness)},
                {"error", nullptr},
                {"report", std::move(report)}};
}

inline Json error_envelope(std::string_view code, const std::string& message) {
    return Json{{"verdict", false},
                {"witness", nullptr},
                {"error", {{"code", std::string(code)}, {"message", message}}},
                {"report", nullptr}};
}

inline Json to_json(const LengthSet& l) {
    return Json{{"cutoff", l.cutoff}, {"members", l.members}, {"saturated", l.saturated}};
}

inline Json to_json(const AmbiguityConflict& c) {
    return Json{{"symbol", c.symbol},
                {"positions", {c.first_position, c.second_position}},
                {"locus", c.follow_of ? "follow" : "first"},
                {"follow_of", c.follow_of ? Json(*c.follow_of) : Json(nullptr)}};
}

inline Json to_json(const UnambiguityVerdict& v) {
    return Json{{"unambiguous", v.unambiguous},
                {"conflict", v.conflict ? to_json(*v.conflict) : Json(nullptr)}};
}

inline Json to_json(const TheoremReport& r) {
    return Json{
        {"weights", r.instance.weights()},
        {"k", r.instance.k()},
        {"total", r.instance.total()},
        {"n", r.n},
        {"e1", render_expr(r.e1)},
        {"e2", render_expr(r.e2)},
        {"partition_exists", r.partition.exists},
        {"subset", r.partition.subset ? Json(*r.partition.subset) : Json(nullptr)},
        {"inclusion_holds", r.inclusion.holds},
        {"witness", word_json(r.inclusion.witness)},
        {"unambiguity", {{"e1", r.e1_unambiguous}, {"e2", r.e2_unambiguous}}},
        {"e1_lengths_ok", r.e1_lengths_ok},
        {"e2_lengths_ok", r.e2_lengths_ok},
        {"length_laws_ok", r.length_laws_ok()},
        {"witness_ok", r.witness_ok},
        {"iff_ok", r.iff_ok()},
        {"all_ok", r.all_ok()},
    };
}

} // namespace crekit
