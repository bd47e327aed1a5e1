#include "dml/params.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace dml {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("parameter ") + name +
                                    " is not finite");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (v <= 0.0)
        throw std::invalid_argument(std::string("parameter ") + name +
                                    " must be > 0, got " + std::to_string(v));
}

}  // namespace

void OriginalParams::validate() const {
    require_positive(A, "A");
    require_positive(alpha, "alpha");
    require_positive(gamma, "gamma");
    require_finite(I, "I");
}

void ImprovedParams::validate() const {
    require_positive(A, "A");
    require_positive(alpha, "alpha");
    require_positive(gamma, "gamma");
    require_positive(omega, "omega");
    require_finite(I0, "I0");
    require_finite(k, "k");
    require_finite(k1, "k1");
    require_finite(k2, "k2");
    require_finite(alpha1, "alpha1");
    require_finite(beta, "beta");
    require_finite(phi_ext, "phi_ext");
}

std::string to_json(const OriginalParams& p) {
    nlohmann::ordered_json j;
    j["A"] = p.A;
    j["alpha"] = p.alpha;
    j["gamma"] = p.gamma;
    j["I"] = p.I;
    return j.dump(2);
}

std::string to_json(const ImprovedParams& p) {
    nlohmann::ordered_json j;
    j["A"] = p.A;
    j["alpha"] = p.alpha;
    j["gamma"] = p.gamma;
    j["I0"] = p.I0;
    j["omega"] = p.omega;
    j["k"] = p.k;
    j["k1"] = p.k1;
    j["k2"] = p.k2;
    j["alpha1"] = p.alpha1;
    j["beta"] = p.beta;
    j["phi_ext"] = p.phi_ext;
    return j.dump(2);
}

namespace {

// Applies every (key -> field) setter once; any key outside the map is an
// error, as is a non-numeric value.
template <class Setter>
void parse_strict(const std::string& text, const Setter& set) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number())
            throw std::invalid_argument("value of \"" + it.key() +
                                        "\" is not a number");
        if (!set(it.key(), it.value().template get<double>()))
            throw std::invalid_argument("unknown parameter key \"" + it.key() +
                                        "\"");
    }
}

}  // namespace

OriginalParams original_params_from_json(const std::string& text) {
    OriginalParams p;
    parse_strict(text, [&](const std::string& k, double v) {
        if (k == "A") p.A = v;
        else if (k == "alpha") p.alpha = v;
        else if (k == "gamma") p.gamma = v;
        else if (k == "I") p.I = v;
        else return false;
        return true;
    });
    p.validate();
    return p;
}

ImprovedParams improved_params_from_json(const std::string& text) {
    ImprovedParams p;
    parse_strict(text, [&](const std::string& k, double v) {
        if (k == "A") p.A = v;
        else if (k == "alpha") p.alpha = v;
        else if (k == "gamma") p.gamma = v;
        else if (k == "I0") p.I0 = v;
        else if (k == "omega") p.omega = v;
        else if (k == "k") p.k = v;
        else if (k == "k1") p.k1 = v;
        else if (k == "k2") p.k2 = v;
        else if (k == "alpha1") p.alpha1 = v;
        else if (k == "beta") p.beta = v;
        else if (k == "phi_ext") p.phi_ext = v;
        else return false;
        return true;
    });
    p.validate();
    return p;
}

}  // namespace dml
