#include "bmlab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bmlab/errors.hpp"
#include "bmlab/green.hpp"
#include "bmlab/sampler.hpp"

namespace bmlab::experiment {

using nlohmann::json;

namespace {

json model_to_json(const ModelSpec& m) {
    json j;
    j["kind"] = m.kind;
    if (m.kind == "finite_support") j["entries"] = m.entries;
    if (m.kind == "power_law") {
        j["amplitude"] = m.amplitude;
        j["exponent"] = m.exponent;
        j["rho0"] = m.rho0;
    }
    return j;
}

ModelSpec model_from_json(const json& j) {
    ModelSpec m;
    m.kind = j.at("kind").get<std::string>();
    if (m.kind == "finite_support")
        m.entries = j.at("entries").get<std::vector<std::vector<double>>>();
    if (m.kind == "power_law") {
        m.amplitude = j.at("amplitude").get<double>();
        m.exponent = j.at("exponent").get<double>();
        m.rho0 = j.value("rho0", 1.0);
    }
    return m;
}

json observable_to_json(const ObservableSpec& o) {
    json j;
    j["kind"] = o.kind;
    if (o.kind == "power") j["p"] = o.p;
    if (o.kind == "polynomial") j["coeffs"] = o.poly;
    if (o.kind == "hermite") {
        j["h0"] = o.h0;
        auto arr = json::array();
        for (const auto& [q, c] : o.coeffs) arr.push_back(json::array({q, c}));
        j["coeffs"] = arr;
    }
    return j;
}

ObservableSpec observable_from_json(const json& j) {
    ObservableSpec o;
    o.kind = j.at("kind").get<std::string>();
    if (o.kind == "power") o.p = j.at("p").get<int>();
    if (o.kind == "polynomial") o.poly = j.at("coeffs").get<std::vector<double>>();
    if (o.kind == "hermite") {
        o.h0 = j.value("h0", 0.0);
        for (const auto& pair : j.at("coeffs"))
            o.coeffs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<double>());
    }
    return o;
}

json tf_to_json(const TestFunctionSpec& t) {
    json j;
    j["kind"] = t.kind;
    if (t.kind == "box_indicator") {
        j["lo"] = t.lo;
        j["hi"] = t.hi;
        j["normalized"] = t.normalized;
    }
    if (t.kind == "eigenfunction") j["k"] = t.k;
    return j;
}

TestFunctionSpec tf_from_json(const json& j) {
    TestFunctionSpec t;
    t.kind = j.at("kind").get<std::string>();
    if (t.kind == "box_indicator") {
        t.lo = j.at("lo").get<std::vector<double>>();
        t.hi = j.at("hi").get<std::vector<double>>();
        t.normalized = j.value("normalized", true);
    }
    if (t.kind == "eigenfunction") t.k = j.at("k").get<std::vector<int>>();
    return t;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw validation_error(std::string("config: malformed JSON: ") + e.what());
    }
    try {
        ExperimentConfig c;
        c.schema = j.value("schema", 1);
        if (c.schema != 1)
            throw validation_error("config: unsupported schema version");
        c.title = j.value("title", std::string{});
        c.dimension = j.at("dimension").get<int>();
        c.model = model_from_json(j.at("model"));
        c.observable = observable_from_json(j.at("observable"));
        c.variance_base = j.value("variance_base", 0.0);
        for (const auto& t : j.at("test_functions")) c.test_functions.push_back(tf_from_json(t));
        c.N_list = j.at("N_list").get<std::vector<int>>();
        if (j.contains("field")) {
            const auto& f = j.at("field");
            c.field.kind = f.value("kind", std::string("torus"));
            c.field.M = f.value("M", 0);
            c.field.gradient_axis = f.value("gradient_axis", -1);
        }
        c.replicas = j.at("replicas").get<long>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.alpha = j.value("alpha", 0.0);
        c.sobolev_kmax = j.value("sobolev_kmax", 8);
        c.q_max = j.value("q_max", 8);
        c.lattice_radius = j.value("lattice_radius", 48);
        c.se_rule = j.value("se_rule", 3.0);
        return c;
    } catch (const json::exception& e) {
        throw validation_error(std::string("config: ") + e.what());
    }
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["schema"] = schema;
    j["title"] = title;
    j["dimension"] = dimension;
    j["model"] = model_to_json(model);
    j["observable"] = observable_to_json(observable);
    j["variance_base"] = variance_base;
    auto tfs = json::array();
    for (const auto& t : test_functions) tfs.push_back(tf_to_json(t));
    j["test_functions"] = tfs;
    j["N_list"] = N_list;
    j["field"] = {{"kind", field.kind}, {"M", field.M},
                  {"gradient_axis", field.gradient_axis}};
    j["replicas"] = replicas;
    j["seed"] = seed;
    j["alpha"] = alpha;
    j["sobolev_kmax"] = sobolev_kmax;
    j["q_max"] = q_max;
    j["lattice_radius"] = lattice_radius;
    j["se_rule"] = se_rule;
    return j.dump(2);
}

void ExperimentConfig::validate(bool require_replicas) const {
    if (dimension < 1) throw validation_error("config: dimension must be >= 1");
    if (field.kind != "torus" && field.kind != "gff_box")
        throw validation_error("config: field.kind must be torus or gff_box");
    if (field.kind == "gff_box" && dimension < 3)
        throw validation_error("config: the GFF box requires dimension >= 3");
    if (field.kind == "gff_box" && model.kind != "gff_green")
        throw validation_error("config: gff_box sampling requires the gff_green model");
    if (model.kind == "gff_green" && field.kind != "gff_box")
        throw validation_error("config: the gff_green model is sampled on the gff_box");
    if (field.kind == "gff_box" && field.M < 8)
        throw validation_error("config: gff_box requires an explicit M >= 8");
    if (field.M != 0 && field.M % 2 != 0)
        throw validation_error("config: M must be even");
    if (N_list.empty()) throw validation_error("config: N_list must be nonempty");
    for (int N : N_list) {
        if (N < 2) throw validation_error("config: every N must be >= 2");
        if (field.M != 0 && field.kind == "torus" && field.M < 2 * N)
            throw validation_error("config: M must be at least 2N");
    }
    if (require_replicas && replicas < 1)
        throw validation_error("config: replicas must be >= 1");
    if (replicas < 0) throw validation_error("config: replicas must be >= 0");
    if (test_functions.empty())
        throw validation_error("config: test_functions must be nonempty");
    if (alpha < 0.0) throw validation_error("config: alpha must be >= 0");
    if (alpha > 0.0 && alpha <= 0.5 * dimension)
        throw validation_error("config: alpha must exceed d/2 for Sobolev accounting");
    if (q_max < 1) throw validation_error("config: q_max must be >= 1");
    if (sobolev_kmax < 1) throw validation_error("config: sobolev_kmax must be >= 1");
    if (lattice_radius < 1) throw validation_error("config: lattice_radius must be >= 1");
    if (se_rule <= 0.0) throw validation_error("config: se_rule must be > 0");
    if (field.gradient_axis >= dimension)
        throw validation_error("config: gradient_axis out of range");
    if (observable.kind == "power" && observable.p < 1)
        throw validation_error("config: observable power p must be >= 1");
    if (observable.kind == "polynomial" && observable.poly.empty())
        throw validation_error("config: polynomial observable needs coefficients");
    if (observable.kind == "hermite" && observable.coeffs.empty())
        throw validation_error("config: hermite observable needs coefficients");
    if (observable.kind != "power" && observable.kind != "polynomial" &&
        observable.kind != "hermite")
        throw validation_error("config: unknown observable kind");
    // build paths throw their own validation messages
    for (std::size_t i = 0; i < test_functions.size(); ++i) (void)build_test_function(i);
    (void)build_model();
}

cov::CovarianceModel ExperimentConfig::build_model() const {
    if (model.kind == "delta") return cov::CovarianceModel::delta(dimension);
    if (model.kind == "finite_support") {
        cov::CovarianceModel::Table table;
        for (const auto& row : model.entries) {
            if (static_cast<int>(row.size()) != dimension + 1)
                throw validation_error(
                    "config: finite_support entries must be [u_1..u_d, rho]");
            std::vector<int> u(static_cast<std::size_t>(dimension));
            for (int i = 0; i < dimension; ++i) {
                const double v = row[static_cast<std::size_t>(i)];
                if (v != std::floor(v))
                    throw validation_error("config: finite_support lags must be integers");
                u[static_cast<std::size_t>(i)] = static_cast<int>(v);
            }
            table[u] = row.back();
        }
        return cov::CovarianceModel::finite_support(dimension, table);
    }
    if (model.kind == "power_law")
        return cov::CovarianceModel::power_law(dimension, model.amplitude,
                                               model.exponent, model.rho0);
    if (model.kind == "gff_green") return cov::CovarianceModel::gff_green(dimension);
    throw validation_error("config: unknown model kind " + model.kind);
}

cov::CovarianceModel ExperimentConfig::build_effective_model() const {
    auto base = build_model();
    if (field.gradient_axis >= 0)
        return cov::gradient_model(base, field.gradient_axis);
    return base;
}

double ExperimentConfig::effective_variance_base() const {
    if (variance_base > 0.0) return variance_base;
    return build_effective_model().variance();
}

hermite::HermiteExpansion ExperimentConfig::build_expansion() const {
    const double g = effective_variance_base();
    if (observable.kind == "power") {
        std::vector<double> poly(static_cast<std::size_t>(observable.p) + 1, 0.0);
        poly.back() = 1.0;
        return hermite::expand_polynomial(poly, g, std::max(q_max, observable.p));
    }
    if (observable.kind == "polynomial")
        return hermite::expand_polynomial(observable.poly, g, q_max);
    hermite::HermiteExpansion e;
    e.variance_base = g;
    e.h0 = observable.h0;
    int qmax = 1;
    for (const auto& [q, c] : observable.coeffs) {
        (void)c;
        if (q < 1) throw validation_error("config: hermite coefficient with q < 1");
        qmax = std::max(qmax, q);
    }
    e.c.assign(static_cast<std::size_t>(qmax) + 1, 0.0);
    for (const auto& [q, c] : observable.coeffs) e.c[static_cast<std::size_t>(q)] = c;
    return e;
}

chaos::TestFunction ExperimentConfig::build_test_function(std::size_t index) const {
    const auto& t = test_functions.at(index);
    if (t.kind == "constant_one") return chaos::TestFunction::constant_one();
    if (t.kind == "box_indicator") {
        if (static_cast<int>(t.lo.size()) != dimension ||
            static_cast<int>(t.hi.size()) != dimension)
            throw validation_error("config: box_indicator arity != dimension");
        return chaos::TestFunction::box_indicator(t.lo, t.hi, t.normalized);
    }
    if (t.kind == "eigenfunction") {
        if (static_cast<int>(t.k.size()) != dimension)
            throw validation_error("config: eigenfunction arity != dimension");
        return chaos::TestFunction::eigenfunction(t.k);
    }
    throw validation_error("config: unknown test function kind " + t.kind);
}

int ExperimentConfig::torus_size_for(int N) const {
    if (field.M > 0) return field.M;
    return sampler::default_torus_size(build_model(), N);
}

std::string ExperimentConfig::run_id() const {
    // FNV-1a over the canonical JSON and the seed
    const std::string text = to_json_text();
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](unsigned char b) {
        h ^= b;
        h *= 1099511628211ull;
    };
    for (unsigned char ch : text) mix(ch);
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bmlab::experiment
