#include "kr/params.hpp"

#include <cmath>

#include "json.hpp"

namespace kr {

ValidatedParams validate(const SimParams& p) {
    if (!(p.K >= 0.0)) throw OutOfRange("K", ">= 0");
    if (!(p.kbar > 0.0)) throw OutOfRange("kbar", "> 0");
    if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) throw OutOfRange("epsilon", "[0,1)");
    if (!(p.beta_qm >= 0.0 && p.beta_qm < 1.0)) throw OutOfRange("beta_qm", "[0,1)");
    if (p.basis_half_width < 1) throw OutOfRange("basis_half_width", "2M+1 >= 3");
    if (p.n_kicks < 0) throw OutOfRange("n_kicks", ">= 0");
    if (p.omegas.size() != p.phis.size())
        throw IncompatibleDimensions("omegas and phis must have equal length");
    ValidatedParams v;
    v.p = p;
    v.kappa = p.K / p.kbar;
    v.fgp_applicable = v.kappa * (1.0 + p.epsilon) < M_PI;
    return v;
}

std::string to_json(const SimParams& p, const EnsembleSpec& e) {
    nlohmann::json j;
    j["K"] = p.K;
    j["kbar"] = p.kbar;
    j["epsilon"] = p.epsilon;
    j["omegas"] = p.omegas;
    j["phis"] = p.phis;
    j["beta_qm"] = p.beta_qm;
    j["n_kicks"] = p.n_kicks;
    j["basis_half_width"] = p.basis_half_width;
    j["seed"] = p.seed;
    j["n_members"] = e.n_members;
    return j.dump(2);
}

void from_json(const std::string& text, SimParams& p, EnsembleSpec& e) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ValidationError(std::string("config parse error: ") + err.what());
    }
    try {
        p.K = j.at("K").get<double>();
        p.kbar = j.at("kbar").get<double>();
        p.epsilon = j.value("epsilon", 0.0);
        p.omegas = j.value("omegas", std::vector<double>{});
        p.phis = j.value("phis", std::vector<double>{});
        p.beta_qm = j.value("beta_qm", 0.0);
        p.n_kicks = j.at("n_kicks").get<long>();
        p.basis_half_width = j.value("basis_half_width", 512);
        p.seed = j.value("seed", uint64_t{0});
        e.n_members = j.value("n_members", 1);
    } catch (const nlohmann::json::exception& err) {
        throw ValidationError(std::string("config field error: ") + err.what());
    }
}

std::vector<double> default_omegas3() {
    return {2.0 * M_PI * std::sqrt(5.0), 2.0 * M_PI * std::sqrt(13.0)};
}

}  // namespace kr
