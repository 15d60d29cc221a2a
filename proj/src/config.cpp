#include "polarsim/config.hpp"

#include "polarsim/errors.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace polarsim {

namespace {

using nlohmann::json;

constexpr std::array model_names{"bks1d",      "rescaled1d",    "exchange1d", "interval1d",
                                 "range1d",    "transversal2d", "potential2d"};

double number(const json& v, const std::string& key)
{
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
    return x;
}

double positive(const json& v, const std::string& key)
{
    const double x = number(v, key);
    if (!(x > 0.0)) throw ConfigError(key, "must be positive");
    return x;
}

int cells(const json& v, const std::string& key)
{
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    const long long n = v.get<long long>();
    if (n < 4 || n > 1'000'000) throw ConfigError(key, "must lie in [4, 1000000]");
    return static_cast<int>(n);
}

void parse_initial(const json& block, RunConfig& c)
{
    if (!block.is_object()) throw ConfigError("initial", "expected an object");
    for (const auto& [key, v] : block.items()) {
        const std::string name = "initial." + key;
        if (key == "kind") {
            if (!v.is_string()) throw ConfigError(name, "expected a string");
            try {
                c.initial.kind = parse_initial_kind(v.get<std::string>());
            } catch (const InvalidArgument& e) {
                throw ConfigError(name, e.what());
            }
        } else if (key == "alpha") c.initial.alpha = positive(v, name);
        else if (key == "sigma") c.initial.sigma = positive(v, name);
        else if (key == "shift") c.initial.shift = number(v, name);
        else if (key == "width") c.initial.width = positive(v, name);
        else if (key == "path") {
            if (!v.is_string()) throw ConfigError(name, "expected a string");
            c.initial.path = v.get<std::string>();
        } else if (key == "y_center") c.y_center = number(v, name);
        else if (key == "y_sigma") c.y_sigma = positive(v, name);
        else throw ConfigError(name, "unknown key");
    }
    if (c.initial.kind == InitialKind::table && c.initial.path.empty())
        throw ConfigError("initial.path", "table initial data needs a path");
}

// Keys that only make sense for some models.
void require_model(const RunConfig& c, const std::string& key, std::initializer_list<ModelKind> allowed)
{
    for (ModelKind m : allowed)
        if (c.model == m) return;
    throw ConfigError(key, "not used by model " + to_string(c.model));
}

RunConfig from_json(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    if (!doc.contains("model")) throw ConfigError("model", "missing");
    if (!doc["model"].is_string()) throw ConfigError("model", "expected a string");

    RunConfig c;
    try {
        c.model = parse_model_kind(doc["model"].get<std::string>());
    } catch (const InvalidArgument& e) {
        throw ConfigError("model", e.what());
    }
    if (!doc.contains("mass")) throw ConfigError("mass", "missing");
    if (!doc.contains("t_end")) throw ConfigError("t_end", "missing");

    bool has_L = false;
    for (const auto& [key, v] : doc.items()) {
        if (key == "model") continue;
        else if (key == "mass") c.mass = positive(v, key);
        else if (key == "gamma") {
            require_model(c, key, {ModelKind::exchange1d});
            c.gamma = positive(v, key);
        } else if (key == "mu0") {
            require_model(c, key, {ModelKind::exchange1d});
            c.mu0 = number(v, key);
            if (c.mu0 < 0.0) throw ConfigError(key, "must be nonnegative");
        } else if (key == "alpha") {
            require_model(c, key, {ModelKind::range1d});
            c.alpha = positive(v, key);
        } else if (key == "L") {
            require_model(c, key, {ModelKind::interval1d});
            c.L = positive(v, key);
            has_L = true;
        } else if (key == "C_2d") {
            require_model(c, key, {ModelKind::transversal2d, ModelKind::potential2d});
            c.C_2d = positive(v, key);
        } else if (key == "j0_scale") c.j0_scale = positive(v, key);
        else if (key == "z_max") {
            if (c.model == ModelKind::interval1d) throw ConfigError(key, "interval1d takes its length from L");
            c.z_max = positive(v, key);
        } else if (key == "n_cells") c.n_cells = cells(v, key);
        else if (key == "y_min") {
            require_model(c, key, {ModelKind::transversal2d, ModelKind::potential2d});
            c.y_min = number(v, key);
        } else if (key == "y_max") {
            require_model(c, key, {ModelKind::transversal2d, ModelKind::potential2d});
            c.y_max = number(v, key);
        } else if (key == "ny") c.ny = cells(v, key);
        else if (key == "nz") c.nz = cells(v, key);
        else if (key == "initial") parse_initial(v, c);
        else if (key == "t_end") c.t_end = positive(v, key);
        else if (key == "cfl") c.cfl = positive(v, key);
        else if (key == "dt_floor") c.dt_floor = positive(v, key);
        else if (key == "output_every") c.output_every = positive(v, key);
        else if (key == "density_cap") c.density_cap = positive(v, key);
        else if (key == "trace_cap") c.trace_cap = positive(v, key);
        else if (key == "seed") {
            if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
            c.seed = v.get<long long>();
        } else throw ConfigError(key, "unknown key");
    }
    if (c.model == ModelKind::interval1d && !has_L) throw ConfigError("L", "interval1d requires L");
    validate(c);
    return c;
}

json to_json(const RunConfig& c)
{
    json j;
    j["model"] = to_string(c.model);
    j["mass"] = c.mass;
    switch (c.model) {
    case ModelKind::exchange1d:
        j["gamma"] = c.gamma;
        j["mu0"] = c.mu0;
        break;
    case ModelKind::range1d: j["alpha"] = c.alpha; break;
    case ModelKind::interval1d: j["L"] = c.L; break;
    case ModelKind::transversal2d:
    case ModelKind::potential2d:
        j["C_2d"] = c.C_2d;
        j["y_min"] = c.y_min;
        j["y_max"] = c.y_max;
        j["ny"] = c.ny;
        j["nz"] = c.nz;
        break;
    default: break;
    }
    if (c.model != ModelKind::interval1d) j["z_max"] = c.effective_z_max();
    if (!is_2d(c.model)) j["n_cells"] = c.n_cells;
    j["j0_scale"] = c.j0_scale;

    json ini;
    ini["kind"] = to_string(c.initial.kind);
    switch (c.initial.kind) {
    case InitialKind::exponential: ini["alpha"] = c.initial.alpha; break;
    case InitialKind::half_gaussian:
        ini["sigma"] = c.initial.sigma;
        ini["shift"] = c.initial.shift;
        break;
    case InitialKind::step: ini["width"] = c.initial.width; break;
    case InitialKind::table: ini["path"] = c.initial.path; break;
    }
    if (is_2d(c.model)) {
        ini["y_center"] = c.y_center;
        ini["y_sigma"] = c.y_sigma;
    }
    j["initial"] = ini;

    j["t_end"] = c.t_end;
    j["cfl"] = c.cfl;
    j["dt_floor"] = c.dt_floor;
    j["output_every"] = c.effective_output_every();
    j["density_cap"] = c.effective_density_cap();
    if (c.trace_cap) j["trace_cap"] = *c.trace_cap;
    j["seed"] = c.seed;
    return j;
}

} // namespace

ModelKind parse_model_kind(const std::string& name)
{
    for (std::size_t i = 0; i < model_names.size(); ++i)
        if (name == model_names[i]) return static_cast<ModelKind>(i);
    throw InvalidArgument("unknown model '" + name + "'");
}

std::string to_string(ModelKind kind)
{
    return model_names[static_cast<std::size_t>(kind)];
}

bool is_2d(ModelKind kind)
{
    return kind == ModelKind::transversal2d || kind == ModelKind::potential2d;
}

double RunConfig::effective_z_max() const
{
    if (model == ModelKind::interval1d) return L;
    if (z_max) return *z_max;
    if (model == ModelKind::rescaled1d) return 8.0;
    if (is_2d(model)) return 8.0;
    return 30.0 / mass;
}

double RunConfig::effective_output_every() const
{
    return output_every ? *output_every : t_end / 200.0;
}

double RunConfig::effective_density_cap() const
{
    if (density_cap) return *density_cap;
    const double extent = is_2d(model) ? (y_max - y_min) * effective_z_max() : effective_z_max();
    return 1e6 * mass / extent;
}

RunControls RunConfig::controls() const
{
    RunControls rc;
    rc.t_end = t_end;
    rc.cfl = cfl;
    rc.dt_floor = dt_floor;
    rc.output_every = effective_output_every();
    rc.density_cap = effective_density_cap();
    rc.trace_cap = trace_cap.value_or(0.0);
    return rc;
}

void validate(const RunConfig& c)
{
    if (!(c.mass > 0.0)) throw ConfigError("mass", "must be positive");
    if (!(c.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
    // one direction keeps positivity up to 1; two directions with signed speeds need 0.5
    const double cfl_max = is_2d(c.model) ? 0.5 : 1.0;
    if (!(c.cfl > 0.0) || c.cfl > cfl_max) throw ConfigError("cfl", "out of range");
    if (c.model == ModelKind::rescaled1d && !(c.mass < 1.0))
        throw ConfigError("mass", "rescaled1d needs mass < 1");
    if (c.model == ModelKind::interval1d && !(c.L > 0.0)) throw ConfigError("L", "interval1d requires L > 0");
    if (c.model == ModelKind::exchange1d && !(c.mu0 < c.mass))
        throw ConfigError("mu0", "must be below mass");
    if (is_2d(c.model) && !(c.y_max > c.y_min)) throw ConfigError("y_max", "must exceed y_min");
    if (c.output_every && *c.output_every > c.t_end) throw ConfigError("output_every", "exceeds t_end");
}

RunConfig parse_config_text(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return from_json(doc);
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string config_echo(const RunConfig& config)
{
    return to_json(config).dump(2);
}

} // namespace polarsim
