#include "ekin/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ekin {

namespace {

constexpr double validate_tol = 1e-12;
constexpr double renorm_tol = 1e-6;

std::string tuple_label(const StateSpace& space, int m, std::size_t flat) {
    std::vector<int> coords(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
        coords[static_cast<std::size_t>(i)] = static_cast<int>(flat % space.S());
        flat /= static_cast<std::size_t>(space.S());
    }
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i)
        os << (i ? "," : "") << coords[i];
    os << ")";
    return os.str();
}

} // namespace

ValidationReport validate(const InteractionModel& model) {
    const int s = model.space.S();
    if (model.m_max < 1)
        return {false, "m_max must be >= 1"};
    if (!(model.epsilon > 0.0))
        return {false, "epsilon must be positive"};
    for (int m = 1; m <= model.m_max; ++m) {
        auto rit = model.rates.find(m);
        if (rit == model.rates.end())
            return {false, "missing rate table for order " + std::to_string(m)};
        auto kit = model.kernels.find(m);
        if (kit == model.kernels.end())
            return {false, "missing kernel table for order " + std::to_string(m)};
        const std::size_t tuples = model.tuple_count(m);
        if (rit->second.size() != tuples)
            return {false, "rate table for order " + std::to_string(m) + " has length " +
                        std::to_string(rit->second.size()) + ", expected " +
                        std::to_string(tuples)};
        if (kit->second.size() != tuples * static_cast<std::size_t>(s))
            return {false, "kernel table for order " + std::to_string(m) + " has length " +
                        std::to_string(kit->second.size()) + ", expected " +
                        std::to_string(tuples * static_cast<std::size_t>(s))};
        double bound;
        if (auto bit = model.rate_bounds.find(m); bit != model.rate_bounds.end()) {
            bound = bit->second;
        } else {
            bound = 0.0;
            for (double v : rit->second) bound = std::max(bound, v);
        }
        for (std::size_t i = 0; i < tuples; ++i) {
            const double a = rit->second[i];
            if (!(a >= 0.0))
                return {false, "negative rate: order " + std::to_string(m) + ", tuple " +
                            tuple_label(model.space, m, i) + ", value " + std::to_string(a)};
            if (a > bound + validate_tol)
                return {false, "rate above bound: order " + std::to_string(m) + ", tuple " +
                            tuple_label(model.space, m, i) + ", value " + std::to_string(a) +
                            " > " + std::to_string(bound)};
        }
        for (std::size_t i = 0; i < tuples; ++i) {
            const double* row = kit->second.data() + i * static_cast<std::size_t>(s);
            double sum = 0.0;
            for (int v = 0; v < s; ++v) {
                if (!(row[v] >= 0.0))
                    return {false, "negative kernel entry: order " + std::to_string(m) +
                                ", tuple " + tuple_label(model.space, m, i) + ", v=" +
                                std::to_string(v)};
                sum += row[v];
            }
            if (std::abs(sum - 1.0) > validate_tol)
                return {false, "kernel row not normalized: order " + std::to_string(m) +
                            ", tuple " + tuple_label(model.space, m, i) + ", sum " +
                            std::to_string(sum)};
        }
    }
    return {true, ""};
}

void renormalize_kernels(InteractionModel& model) {
    const int s = model.space.S();
    for (auto& [m, table] : model.kernels) {
        const std::size_t tuples = table.size() / static_cast<std::size_t>(s);
        for (std::size_t i = 0; i < tuples; ++i) {
            double* row = table.data() + i * static_cast<std::size_t>(s);
            double sum = 0.0;
            for (int v = 0; v < s; ++v) sum += row[v];
            if (std::abs(sum - 1.0) > renorm_tol)
                throw ValidationError("kernel row sum " + std::to_string(sum) +
                                      " too far from 1 to renormalize (order " +
                                      std::to_string(m) + ", tuple " +
                                      tuple_label(model.space, m, i) + ")");
            for (int v = 0; v < s; ++v) row[v] /= sum;
        }
    }
}

InteractionModel builtin_model(const std::string& name, const StateSpace& space,
                               double epsilon) {
    InteractionModel model;
    model.space = space;
    model.epsilon = epsilon;
    const int s = space.S();

    // Order 1 (shared by all builtins): unit rate, jump to a uniform state.
    model.rates[1].assign(static_cast<std::size_t>(s), 1.0);
    model.kernels[1].assign(static_cast<std::size_t>(s) * static_cast<std::size_t>(s),
                            1.0 / s);
    model.rate_bounds[1] = 1.0;

    if (name == "uniform-drift") {
        model.m_max = 1;
        return model;
    }
    if (name != "imitation" && name != "mixed")
        throw ValidationError("unknown builtin model: " + name);

    model.m_max = 2;
    const std::size_t pairs = space.pow_dim(2);
    model.rates[2].assign(pairs, 1.0);
    if (name == "mixed") {
        for (int x1 = 0; x1 < s; ++x1)
            for (int x2 = 0; x2 < s; ++x2) {
                const int j1 = space.unflatten(x1).j;
                const int j2 = space.unflatten(x2).j;
                model.rates[2][static_cast<std::size_t>(x1) * s + x2] =
                    (j1 != j2) ? 1.0 : 0.5;
            }
    }
    model.rate_bounds[2] = 1.0;
    // The first entity of the pair adopts its partner's state.
    model.kernels[2].assign(pairs * static_cast<std::size_t>(s), 0.0);
    for (int x1 = 0; x1 < s; ++x1)
        for (int x2 = 0; x2 < s; ++x2) {
            const std::size_t row = static_cast<std::size_t>(x1) * s + x2;
            model.kernels[2][row * static_cast<std::size_t>(s) + x2] = 1.0;
        }
    return model;
}

namespace {

InteractionModel model_from_json(const nlohmann::json& j) {
    InteractionModel model;
    try {
        model.space = StateSpace(j.at("M").get<int>(), j.at("K").get<int>());
        model.m_max = j.value("m_max", model.space.M());
        model.epsilon = j.at("epsilon").get<double>();
        for (const auto& [key, value] : j.at("rates").items())
            model.rates[std::stoi(key)] = value.get<std::vector<double>>();
        for (const auto& [key, value] : j.at("kernels").items())
            model.kernels[std::stoi(key)] = value.get<std::vector<double>>();
        if (j.contains("rate_bounds"))
            for (const auto& [key, value] : j.at("rate_bounds").items())
                model.rate_bounds[std::stoi(key)] = value.get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ValidationError("malformed model file: non-integer order key");
    }
    return model;
}

nlohmann::json model_to_json(const InteractionModel& model) {
    nlohmann::json j;
    j["M"] = model.space.M();
    j["K"] = model.space.K();
    j["m_max"] = model.m_max;
    j["epsilon"] = model.epsilon;
    for (const auto& [m, table] : model.rates) j["rates"][std::to_string(m)] = table;
    for (const auto& [m, table] : model.kernels) j["kernels"][std::to_string(m)] = table;
    for (const auto& [m, b] : model.rate_bounds) j["rate_bounds"][std::to_string(m)] = b;
    return j;
}

InteractionModel finish_load(InteractionModel model) {
    // Structural and rate problems are fatal as-is; kernel rows slightly off
    // 1 are renormalized, anything worse is rejected.
    ValidationReport report = validate(model);
    if (!report.ok && report.message.find("kernel row not normalized") == std::string::npos)
        throw ValidationError(report.message);
    renormalize_kernels(model);
    report = validate(model);
    if (!report.ok) throw ValidationError(report.message);
    return model;
}

} // namespace

InteractionModel model_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
    return finish_load(model_from_json(j));
}

InteractionModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json_text(buf.str());
}

std::string model_to_json_text(const InteractionModel& model) {
    return model_to_json(model).dump(2);
}

void save_model(const InteractionModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write model file: " + path);
    out << model_to_json_text(model) << "\n";
}

InteractionModel with_epsilon(const InteractionModel& model, double epsilon) {
    InteractionModel copy = model;
    copy.epsilon = epsilon;
    return copy;
}

ScalingConfig::ScalingConfig(std::vector<double> eps) : epsilons(std::move(eps)) {
    if (epsilons.empty()) throw ValidationError("empty epsilon sequence");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0))
            throw ValidationError("epsilon sequence entries must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw ValidationError("epsilon sequence must be strictly decreasing");
    }
}

int ScalingConfig::N_of_epsilon(double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    return static_cast<int>(std::lround(1.0 / epsilon));
}

} // namespace ekin
