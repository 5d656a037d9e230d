#include "hml/json_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hml {

namespace {

using nlohmann::json;

Rational rational_from_json(const json& j, const char* what) {
    if (j.is_object()) {
        if (!j.contains("num") || !j.contains("den"))
            throw ConfigError(std::string(what) + ": rational object needs num and den");
        return Rational(int128(j["num"].get<std::int64_t>()), int128(j["den"].get<std::int64_t>()));
    }
    if (j.is_string()) return parse_rational_text(j.get<std::string>());
    if (j.is_number_integer()) return Rational(int128(j.get<std::int64_t>()));
    if (j.is_number_float()) return Rational::from_double_exact(j.get<double>());
    throw ConfigError(std::string(what) + ": expected rational as {num,den}, \"p/q\", or number");
}

} // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) throw IoError("refusing to serialize non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
    auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent) * d, ' ');
        }
    };
    switch (type_) {
        case Type::Null: out += "null"; break;
        case Type::Bool: out += bool_ ? "true" : "false"; break;
        case Type::Int: out += std::to_string(int_); break;
        case Type::Real: out += format_double(real_); break;
        case Type::Str:
            out += '"';
            out += escape_json(str_);
            out += '"';
            break;
        case Type::Arr: {
            out += '[';
            for (std::size_t i = 0; i < arr_.size(); ++i) {
                if (i) out += ',';
                newline(depth + 1);
                arr_[i].dump_to(out, indent, depth + 1);
            }
            if (!arr_.empty()) newline(depth);
            out += ']';
            break;
        }
        case Type::Obj: {
            out += '{';
            for (std::size_t i = 0; i < obj_.size(); ++i) {
                if (i) out += ',';
                newline(depth + 1);
                out += '"';
                out += escape_json(obj_[i].first);
                out += "\":";
                if (indent >= 0) out += ' ';
                obj_[i].second.dump_to(out, indent, depth + 1);
            }
            if (!obj_.empty()) newline(depth);
            out += '}';
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

Json rational_to_json(const Rational& r) {
    Json j = Json::object();
    j.set("num", r.num_i64());
    j.set("den", r.den_i64());
    return j;
}

Json moduli_to_json(const ModuliParams& p) {
    Json j = Json::object();
    const char* names[5] = {"a", "b", "c1", "c2", "c3"};
    const double vals[5] = {p.a, p.b, p.c1, p.c2, p.c3};
    for (int i = 0; i < 5; ++i) {
        if (p.exact)
            j.set(names[i], rational_to_json((*p.exact)[i]));
        else
            j.set(names[i], Json(vals[i]));
    }
    return j;
}

Json spectral_to_json(const SpectralData& s) {
    Json j = Json::object();
    Json alphas = Json::array(), betas = Json::array(), gammas = Json::array();
    Json ralpha = Json::array(), rbeta = Json::array();
    for (int i = 0; i < 3; ++i) {
        alphas.push(Json(s.alphas[i]));
        betas.push(Json(s.betas[i]));
        ralpha.push(s.alpha_exact[i] ? rational_to_json(*s.alpha_exact[i]) : Json());
        rbeta.push(s.beta_exact[i] ? rational_to_json(*s.beta_exact[i]) : Json());
    }
    for (int i = 0; i < 4; ++i) gammas.push(Json(s.gammas[i]));
    j.set("alphas", std::move(alphas));
    j.set("betas", std::move(betas));
    j.set("gammas", std::move(gammas));
    j.set("rational_roots", std::move(ralpha));
    j.set("rational_betas", std::move(rbeta));
    return j;
}

Json profile_to_json(const ProfileSolution& sol) {
    Json j = Json::object();
    j.set("frakC", Json(sol.frak_c()));
    j.set("c3", Json(sol.c3()));
    j.set("s_min", Json(sol.turning().s_min));
    j.set("s_max", Json(sol.turning().s_max));
    j.set("tau", Json(sol.tau()));
    Json samples = Json::array();
    for (const auto& s : sol.samples()) {
        Json row = Json::array();
        row.push(Json(s.z)).push(Json(s.u)).push(Json(s.du));
        samples.push(std::move(row));
    }
    j.set("samples", std::move(samples));
    return j;
}

Json immersion_to_json(const ImmersionData& d) {
    Json j = Json::object();
    j.set("moduli", moduli_to_json(d.moduli));
    Json derived = Json::object();
    derived.set("frakC", Json(d.derived.frak_c));
    derived.set("frakB", Json(d.derived.frak_b));
    j.set("derived", std::move(derived));
    j.set("spectral", spectral_to_json(d.spectral));
    j.set("profile", profile_to_json(d.profile()));
    Json ph = Json::object();
    ph.set("theta_P", Json(d.phases.theta_p));
    ph.set("theta_G", Json(d.phases.theta_g));
    ph.set("theta_rel", Json(d.phases.theta_rel));
    j.set("phases", std::move(ph));
    j.set("provenance", Json(moduli_hash(d.moduli)));
    return j;
}

std::string moduli_hash(const ModuliParams& p) {
    const std::string text = moduli_to_json(p).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Rational parse_rational_text(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            const long long num = std::stoll(text.substr(0, slash));
            const long long den = std::stoll(text.substr(slash + 1));
            return Rational(int128(num), int128(den));
        }
        if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
            text.find('E') != std::string::npos)
            return Rational::from_double_exact(std::stod(text));
        return Rational(int128(std::stoll(text)));
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse rational from '" + text + "'");
    }
}

ModuliParams moduli_from_json_text(const std::string& text) {
    json root = json::parse(text, nullptr, true, true);
    const json& m = root.contains("moduli") ? root["moduli"] : root;
    const char* names[5] = {"a", "b", "c1", "c2", "c3"};
    std::array<Rational, 5> vals;
    for (int i = 0; i < 5; ++i) {
        if (!m.contains(names[i])) throw ConfigError(std::string("moduli missing field ") + names[i]);
        vals[i] = rational_from_json(m[names[i]], names[i]);
    }
    return ModuliParams::from_rationals(vals[0], vals[1], vals[2], vals[3], vals[4]);
}

ProfileSolution profile_from_json_text(const std::string& text) {
    json root = json::parse(text, nullptr, true, true);
    const json& p = root.contains("profile") ? root["profile"] : root;
    TurningPoints t;
    t.s_min = p.at("s_min").get<double>();
    t.s_max = p.at("s_max").get<double>();
    std::vector<ProfileSample> samples;
    for (const auto& row : p.at("samples")) {
        if (!row.is_array() || row.size() != 3) throw ConfigError("profile sample rows must be [z, u, u']");
        samples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    return ProfileSolution::from_parts(p.at("frakC").get<double>(), p.at("c3").get<double>(), t,
                                       p.at("tau").get<double>(), std::move(samples));
}

ImmersionData immersion_from_json_text(const std::string& text, int n_samples) {
    json root = json::parse(text, nullptr, true, true);
    ModuliParams moduli = moduli_from_json_text(text);
    if (root.contains("profile") && n_samples <= 0) {
        // exact reconstruction from the stored samples
        ImmersionData d;
        d.moduli = moduli;
        d.derived = derive_constants(moduli);
        if (!d.derived.admits_periodic_profile()) throw NonPositiveCError("stored bundle has frakC <= 0");
        d.spectral = build_spectral_data(moduli, d.derived);
        d.phases = windings(profile_from_json_text(text));
        return d;
    }
    return ImmersionData::build(moduli, n_samples > 0 ? n_samples : 512);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << contents;
    if (!out.good()) throw IoError("write failed for " + path);
}

} // namespace hml
