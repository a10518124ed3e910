#include "cch/io.hpp"

#include <fstream>

namespace cch {

using nlohmann::json;

namespace {

json domain_envelope(const GridDomain& D) {
    json j;
    j["n"] = D.n();
    j["h"] = D.spacing();
    j["lo"] = D.lo();
    j["hi"] = D.hi();
    return j;
}

GridDomain domain_from_envelope(const json& j) {
    return GridDomain(j.at("n").get<int>(), j.at("h").get<double>(),
                      j.at("lo").get<IVec>(), j.at("hi").get<IVec>());
}

}  // namespace

json chain_to_json(const Chain& T) {
    json j = domain_envelope(T.domain());
    j["dim"] = T.dim();
    json cells = json::array();
    for (const auto& [c, w] : T.coeffs()) {
        json cell;
        cell["base"] = c.base;
        cell["axes"] = c.axes;
        cell["coeff"] = w;
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

Chain chain_from_json(const json& j) {
    GridDomain D = domain_from_envelope(j);
    Chain T(D, j.at("dim").get<int>());
    for (const auto& cell : j.at("cells")) {
        CellId c{cell.at("base").get<IVec>(), cell.at("axes").get<IVec>()};
        T.add(c, cell.at("coeff").get<double>());
    }
    return T;
}

json density_to_json(const Density& f) {
    const int n = f.domain().n();
    json j = domain_envelope(f.domain());
    j["dim"] = n;
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    json cells = json::array();
    for (const auto& [q, v] : f.values()) {
        json cell;
        cell["base"] = q;
        cell["axes"] = all_axes;
        cell["coeff"] = v;
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

Density density_from_json(const json& j) {
    GridDomain D = domain_from_envelope(j);
    if (j.at("dim").get<int>() != D.n())
        throw std::invalid_argument("density file: dim must equal n");
    Density f(D);
    for (const auto& cell : j.at("cells"))
        f.add(cell.at("base").get<IVec>(), cell.at("coeff").get<double>());
    return f;
}

json form_to_json(const DiscreteForm& w) {
    json j = domain_envelope(w.domain());
    j["dim"] = w.degree();
    json cells = json::array();
    for (const auto& [c, v] : w.coeffs()) {
        json cell;
        cell["base"] = c.base;
        cell["axes"] = c.axes;
        cell["coeff"] = v;
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

DiscreteForm form_from_json(const json& j) {
    GridDomain D = domain_from_envelope(j);
    DiscreteForm w(D, j.at("dim").get<int>());
    for (const auto& cell : j.at("cells")) {
        CellId c{cell.at("base").get<IVec>(), cell.at("axes").get<IVec>()};
        w.add(c, cell.at("coeff").get<double>());
    }
    return w;
}

json field_to_json(const ScalarField& f) {
    json j;
    j["lo"] = f.lo();
    j["hi"] = f.hi();
    j["values"] = f.raw();
    return j;
}

ScalarField field_from_json(const json& j) {
    ScalarField f(j.at("lo").get<IVec>(), j.at("hi").get<IVec>());
    auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != f.size())
        throw std::invalid_argument("field file: wrong number of values");
    f.raw() = std::move(vals);
    return f;
}

json report_to_json(const CheckReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["member"] = r.member;
        row["lhs"] = r.lhs;
        row["rhs"] = r.rhs;
        row["margin"] = r.margin;
        row["pass"] = r.pass;
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

Chain load_chain(const std::string& path) { return chain_from_json(load_json(path)); }
void save_chain(const Chain& T, const std::string& path) { save_json(chain_to_json(T), path); }
Density load_density(const std::string& path) { return density_from_json(load_json(path)); }
void save_density(const Density& f, const std::string& path) {
    save_json(density_to_json(f), path);
}

}  // namespace cch
