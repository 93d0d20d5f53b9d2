#pragma once

#include <utility>

#include "mgq/quantize.hpp"
#include "mgq/solve.hpp"
#include "mgq/verify.hpp"

namespace mgq {

/// Minimal ordered JSON document: keys keep insertion order and reals are
/// printed with 17 significant digits, so serialized artifacts are
/// reproducible byte for byte.
class Json {
public:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;

    Json() : kind_(Kind::null) {}
    Json(bool b) : kind_(Kind::boolean), bool_(b) {}
    Json(int v) : kind_(Kind::integer), int_(v) {}
    Json(long v) : kind_(Kind::integer), int_(v) {}
    Json(std::size_t v) : kind_(Kind::integer), int_(static_cast<long long>(v)) {}
    Json(Real v) : kind_(Kind::number), num_(v) {}
    Json(const char* s) : kind_(Kind::string), str_(s) {}
    Json(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

    static Json object() {
        Json j;
        j.kind_ = Kind::object;
        return j;
    }
    static Json array() {
        Json j;
        j.kind_ = Kind::array;
        return j;
    }
    template <typename It>
    static Json array_of(It begin, It end) {
        Json j = array();
        for (It it = begin; it != end; ++it) j.push(Json(*it));
        return j;
    }
    static Json reals(const std::vector<Real>& v) { return array_of(v.begin(), v.end()); }

    Json& set(const std::string& key, Json val) {
        obj_.emplace_back(key, std::move(val));
        return *this;
    }
    Json& push(Json val) {
        arr_.push_back(std::move(val));
        return *this;
    }

    bool is_object() const { return kind_ == Kind::object; }
    const Object& items() const { return obj_; }
    const Array& elements() const { return arr_; }

    std::string dump(int indent = -1) const;

private:
    enum class Kind { null, boolean, integer, number, string, array, object };
    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    Real num_ = 0.0;
    std::string str_;
    Array arr_;
    Object obj_;

    void write(std::string& out, int indent, int depth) const;
};

/// IEEE-754 double with 17 significant digits (round-trip exact).
std::string format_real(Real v);

Json to_json(const HorizonSpec& h);
Json to_json(const Provenance& p);
Json to_json(const FiniteGame& g);
Json to_json(const MixedProfile& p);
Json to_json(const StationaryPolicyProfile& p);
Json to_json(const MarkovPolicyProfile& p);
Json to_json(const SolveReport& r);
Json to_json(const EpsCertificate& c);
Json to_json(const ValidationReport& r);

/// Parses a FiniteGame back from its JSON document (schema as produced by
/// to_json). Throws invalid_argument on malformed documents.
FiniteGame finite_game_from_json(const std::string& text);

} // namespace mgq
