#include <fstream>
#include <nlohmann/json.hpp>

#include "phasespace/ansatz.hpp"

namespace phasespace {

using nlohmann::json;

std::string ansatz_to_json(const Ansatz& a) {
    json j;
    j["format"] = "ansatz-v1";
    j["kind"] = a.kind();
    j["n_modes"] = a.n_modes();
    if (const auto* g = dynamic_cast<const GaussianMixture*>(&a))
        j["n_components"] = g->n_components();
    else if (const auto* r = dynamic_cast<const Rbm*>(&a))
        j["hidden_per_unit"] = r->hidden_per_unit();
    else
        throw IoError("unknown ansatz kind for serialization: " + a.kind());
    j["theta"] = std::vector<double>(a.theta().data(), a.theta().data() + a.n_params());
    return j.dump(2);
}

std::unique_ptr<Ansatz> ansatz_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("bad ansatz json: ") + e.what());
    }
    if (j.value("format", "") != "ansatz-v1")
        throw IoError("unknown ansatz format tag '" + j.value("format", "") + "'");
    std::string kind = j.at("kind").get<std::string>();
    int n_modes = j.at("n_modes").get<int>();
    std::vector<double> th = j.at("theta").get<std::vector<double>>();
    Eigen::VectorXd tv = Eigen::Map<Eigen::VectorXd>(th.data(), th.size());

    std::unique_ptr<Ansatz> out;
    if (kind == "gaussian-mixture") {
        out = std::make_unique<GaussianMixture>(n_modes, j.at("n_components").get<int>());
    } else if (kind == "rbm") {
        out = std::make_unique<Rbm>(n_modes, j.at("hidden_per_unit").get<int>());
    } else {
        throw IoError("unknown ansatz kind '" + kind + "'");
    }
    if (tv.size() != out->n_params())
        throw IoError("theta length " + std::to_string(tv.size()) + " does not match " +
                      std::to_string(out->n_params()));
    out->set_theta(tv);
    return out;
}

void save_ansatz(const Ansatz& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << ansatz_to_json(a) << "\n";
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::unique_ptr<Ansatz> load_ansatz(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return ansatz_from_json(text);
}

}  // namespace phasespace
