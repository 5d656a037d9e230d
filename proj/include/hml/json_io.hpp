#pragma once

// Serialization. Emission goes through a small ordered JSON value with a
// deterministic dump (keys in insertion order, doubles printed %.17g so
// exports are byte-stable and round-trip exactly); parsing uses nlohmann.

#include "hml/immersion.hpp"
#include "hml/params.hpp"
#include "hml/profile.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hml {

class Json {
public:
    enum class Type { Null, Bool, Int, Real, Str, Arr, Obj };

    Json() : type_(Type::Null) {}
    Json(bool b) : type_(Type::Bool), bool_(b) {}
    Json(std::int64_t i) : type_(Type::Int), int_(i) {}
    Json(int i) : type_(Type::Int), int_(i) {}
    Json(std::uint64_t u) : type_(Type::Int), int_(static_cast<std::int64_t>(u)) {}
    Json(double d) : type_(Type::Real), real_(d) {}
    Json(const char* s) : type_(Type::Str), str_(s) {}
    Json(std::string s) : type_(Type::Str), str_(std::move(s)) {}

    static Json array() { Json j; j.type_ = Type::Arr; return j; }
    static Json object() { Json j; j.type_ = Type::Obj; return j; }

    Json& push(Json v) {
        arr_.push_back(std::move(v));
        return *this;
    }
    Json& set(const std::string& key, Json v) {
        obj_.emplace_back(key, std::move(v));
        return *this;
    }

    Type type() const { return type_; }
    std::string dump(int indent = -1) const;

private:
    void dump_to(std::string& out, int indent, int depth) const;

    Type type_;
    bool bool_ = false;
    std::int64_t int_ = 0;
    double real_ = 0;
    std::string str_;
    std::vector<Json> arr_;
    std::vector<std::pair<std::string, Json>> obj_;
};

std::string format_double(double v); // %.17g
std::string escape_json(const std::string& s);

Json rational_to_json(const Rational& r);
Json moduli_to_json(const ModuliParams& p);
Json spectral_to_json(const SpectralData& s);
Json profile_to_json(const ProfileSolution& sol);
Json immersion_to_json(const ImmersionData& d);

// FNV-1a over the serialized moduli; report provenance field
std::string moduli_hash(const ModuliParams& p);

// parsing (throws ConfigError with context on malformed input)
Rational parse_rational_text(const std::string& text); // "p/q", "p", or decimal
ModuliParams moduli_from_json_text(const std::string& text);
ImmersionData immersion_from_json_text(const std::string& text, int n_samples = 0);
ProfileSolution profile_from_json_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace hml
