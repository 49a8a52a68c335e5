#include "co2cast/model_json.hpp"

#include <fmt/format.h>

#include "co2cast/error.hpp"

namespace co2cast {

using nlohmann::ordered_json;

namespace {

ordered_json arima_json(const ArimaOrder& o) { return {{"p", o.p}, {"d", o.d}, {"q", o.q}}; }

}  // namespace

ordered_json spec_to_json(const ModelSpec& spec) {
    if (const auto* a = std::get_if<ArimaOrder>(&spec)) return arima_json(*a);
    if (const auto* s = std::get_if<SarimaOrder>(&spec)) {
        auto j = arima_json(s->base);
        j["P"] = s->P;
        j["D"] = s->D;
        j["Q"] = s->Q;
        j["s"] = s->s;
        return j;
    }
    const auto& h = std::get<HoltParams>(spec);
    return {{"alpha", h.alpha},
            {"beta", h.beta},
            {"phi", h.phi},
            {"gamma", h.gamma},
            {"seasonal_period", h.seasonal_period}};
}

ordered_json model_to_json(const FittedModel& m) {
    ordered_json j;
    j["family"] = std::string(to_string(m.family));
    j[m.family == ModelFamily::HoltWinters ? "params" : "order"] = spec_to_json(m.spec);
    if (m.family == ModelFamily::HoltWinters) {
        j["coefficients"] = {{"level", m.state.level}, {"trend", m.state.trend}, {"seasonal", m.state.seasonal}};
    } else {
        j["coefficients"] = {{"ar", m.arma.ar},
                             {"ma", m.arma.ma},
                             {"seasonal_ar", m.arma.seasonal_ar},
                             {"seasonal_ma", m.arma.seasonal_ma}};
        j["mean"] = m.mean;
    }
    j["sigma2"] = m.sigma2;
    j["n_obs"] = m.n_obs;
    j["loglik"] = m.loglik;
    j["aic"] = m.aic;
    j["converged"] = m.converged;
    j["start_year"] = m.start_year;
    j["history"] = m.history;
    j["residuals"] = m.residuals;
    return j;
}

FittedModel model_from_json(const ordered_json& j) {
    try {
        FittedModel m;
        m.family = parse_model_family(j.at("family").get<std::string>());
        if (m.family == ModelFamily::HoltWinters) {
            const auto& p = j.at("params");
            HoltParams h;
            h.alpha = p.at("alpha").get<double>();
            h.beta = p.at("beta").get<double>();
            h.phi = p.at("phi").get<double>();
            h.gamma = p.at("gamma").get<double>();
            h.seasonal_period = p.at("seasonal_period").get<int>();
            h.validate();
            m.spec = h;
            const auto& c = j.at("coefficients");
            m.state.level = c.at("level").get<double>();
            m.state.trend = c.at("trend").get<double>();
            m.state.seasonal = c.at("seasonal").get<std::vector<double>>();
        } else {
            const auto& o = j.at("order");
            ArimaOrder base{o.at("p").get<int>(), o.at("d").get<int>(), o.at("q").get<int>()};
            if (m.family == ModelFamily::Arima) {
                base.validate();
                m.spec = base;
            } else {
                SarimaOrder s{base, o.at("P").get<int>(), o.at("D").get<int>(), o.at("Q").get<int>(),
                              o.at("s").get<int>()};
                s.validate();
                m.spec = s;
            }
            const auto& c = j.at("coefficients");
            m.arma.ar = c.at("ar").get<std::vector<double>>();
            m.arma.ma = c.at("ma").get<std::vector<double>>();
            m.arma.seasonal_ar = c.at("seasonal_ar").get<std::vector<double>>();
            m.arma.seasonal_ma = c.at("seasonal_ma").get<std::vector<double>>();
            m.mean = j.at("mean").get<double>();
        }
        m.sigma2 = j.at("sigma2").get<double>();
        m.n_obs = j.at("n_obs").get<int>();
        m.loglik = j.at("loglik").get<double>();
        m.aic = j.at("aic").get<double>();
        m.converged = j.at("converged").get<bool>();
        m.start_year = j.at("start_year").get<int>();
        m.history = j.at("history").get<std::vector<double>>();
        m.residuals = j.at("residuals").get<std::vector<double>>();
        if (!(m.sigma2 > 0.0)) throw Error(ErrorKind::Parse, "model sigma2 must be positive");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, fmt::format("malformed model document: {}", e.what()));
    }
}

}  // namespace co2cast
