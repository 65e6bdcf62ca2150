#include "novbar/io.hpp"

#include <json.hpp>

#include <sstream>

namespace novbar {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* schema_tag = "novbar/1";

json rational_json(const rational& q) {
    return json::array({q.get_num().get_str(), q.get_den().get_str()});
}

rational rational_from(const json& j) {
    if (j.is_array()) {
        bigint num(j.at(0).is_string() ? j.at(0).get<std::string>() : j.at(0).dump());
        bigint den(j.at(1).is_string() ? j.at(1).get<std::string>() : j.at(1).dump());
        rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    return parse_rational(j.dump());
}

json gamma_json(const exponent_group& g) {
    json out = json::array();
    for (const auto& gen : g.generators()) out.push_back(rational_to_string(gen));
    return out;
}

exponent_group gamma_from(const json& j) {
    std::vector<rational> gens;
    for (const auto& g : j) gens.push_back(parse_rational(g.get<std::string>()));
    return exponent_group(std::move(gens));
}

json scalar_json(const novikov_scalar& s) {
    json terms = json::array();
    for (const auto& t : s.terms()) {
        json coords = json::array();
        for (const auto& c : t.coeff.coords()) coords.push_back(rational_to_string(c));
        json num = t.exponent.get_num().fits_slong_p()
                       ? json(t.exponent.get_num().get_si())
                       : json(t.exponent.get_num().get_str());
        json den = t.exponent.get_den().fits_slong_p()
                       ? json(t.exponent.get_den().get_si())
                       : json(t.exponent.get_den().get_str());
        terms.push_back(json::array({num, den, coords}));
    }
    json out;
    out["terms"] = std::move(terms);
    out["truncation"] = s.truncation() ? rational_json(*s.truncation()) : json(nullptr);
    return out;
}

novikov_scalar scalar_from(const json& j, unsigned prime, const exponent_group& gamma) {
    std::vector<novikov_scalar::term> terms;
    for (const auto& t : j.at("terms")) {
        bigint num(t.at(0).is_string() ? t.at(0).get<std::string>() : t.at(0).dump());
        bigint den(t.at(1).is_string() ? t.at(1).get<std::string>() : t.at(1).dump());
        rational e(num, den);
        e.canonicalize();
        std::vector<rational> coords;
        for (const auto& c : t.at(2)) coords.push_back(parse_rational(c.get<std::string>()));
        terms.push_back({e, cyclotomic(prime, std::move(coords))});
    }
    std::optional<rational> trunc;
    if (!j.at("truncation").is_null()) trunc = rational_from(j.at("truncation"));
    return novikov_scalar::from_terms(prime, gamma, std::move(terms), std::move(trunc));
}

json space_json(const filtered_space& sp) {
    json out;
    out["labels"] = sp.labels;
    json f = json::array();
    for (const auto& q : sp.filtrations) f.push_back(rational_to_string(q));
    out["filtrations"] = std::move(f);
    return out;
}

filtered_space space_from(const json& j, unsigned prime, const exponent_group& gamma) {
    filtered_space sp;
    sp.prime = prime;
    sp.gamma = gamma;
    for (const auto& l : j.at("labels")) sp.labels.push_back(l.get<std::string>());
    for (const auto& q : j.at("filtrations")) sp.filtrations.push_back(parse_rational(q.get<std::string>()));
    sp.validate();
    return sp;
}

json entries_json(const filtered_map& m) {
    json out = json::array();
    for (std::size_t j = 0; j < m.columns().size(); ++j)
        for (const auto& [i, v] : m.column(j).entries)
            out.push_back(json::array({i, j, scalar_json(v)}));
    return out;
}

void entries_from(const json& j, filtered_map& m, unsigned prime, const exponent_group& gamma) {
    for (const auto& e : j)
        m.set_entry(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(),
                    scalar_from(e.at(2), prime, gamma));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json vec_json(const sparse_vec& v) {
    json out = json::array();
    for (const auto& [i, s] : v.entries) out.push_back(json::array({i, scalar_json(s)}));
    return out;
}

json bar_json_rows(const barcode& bc) {
    barcode sorted = bc;
    sorted.sort_canonical();
    json rows = json::array();
    std::size_t i = 0;
    while (i < sorted.bars.size()) {
        std::size_t j = i;
        while (j < sorted.bars.size() && sorted.bars[j] == sorted.bars[i]) ++j;
        const bar& b = sorted.bars[i];
        json row;
        row["degree"] = b.degree;
        row["endpoint"] = rational_json(b.endpoint);
        row["length"] = b.length.is_pos_infinity() ? json("inf") : rational_json(b.length.finite());
        row["multiplicity"] = j - i;
        rows.push_back(std::move(row));
        i = j;
    }
    return rows;
}

} // namespace

std::string complex_to_json(const filtered_chain_complex& c) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "complex";
    out["prime"] = c.prime();
    out["gamma"] = gamma_json(c.gamma());
    out["strictness"] = rational_to_string(c.strictness());
    out["degrees"] = json::array({c.min_degree(), c.max_degree()});
    json spaces;
    for (int k = c.min_degree(); k <= c.max_degree(); ++k)
        spaces[std::to_string(k)] = space_json(c.space(k));
    out["spaces"] = std::move(spaces);
    json boundaries;
    for (int k = c.min_degree() + 1; k <= c.max_degree(); ++k) {
        filtered_map b = c.boundary(k);
        if (!b.is_zero()) boundaries[std::to_string(k)] = entries_json(b);
    }
    out["boundaries"] = std::move(boundaries);
    return dump(out);
}

filtered_chain_complex complex_from_json(const std::string& text) {
    json j = json::parse(text);
    const unsigned prime = j.at("prime").get<unsigned>();
    exponent_group gamma = gamma_from(j.at("gamma"));
    filtered_chain_complex c(prime, gamma, parse_rational(j.at("strictness").get<std::string>()));
    const int lo = j.at("degrees").at(0).get<int>();
    const int hi = j.at("degrees").at(1).get<int>();
    for (int k = lo; k <= hi; ++k)
        c.set_space(k, space_from(j.at("spaces").at(std::to_string(k)), prime, gamma));
    for (int k = lo + 1; k <= hi; ++k) {
        const std::string key = std::to_string(k);
        if (!j.at("boundaries").contains(key)) continue;
        filtered_map b(c.space(k), c.space(k - 1));
        entries_from(j.at("boundaries").at(key), b, prime, gamma);
        c.set_boundary(k, std::move(b));
    }
    return c;
}

std::string map_to_json(const filtered_map& m) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "map";
    out["prime"] = m.domain().prime;
    out["gamma"] = gamma_json(m.domain().gamma);
    out["domain"] = space_json(m.domain());
    out["codomain"] = space_json(m.codomain());
    out["entries"] = entries_json(m);
    return dump(out);
}

filtered_map map_from_json(const std::string& text) {
    json j = json::parse(text);
    const unsigned prime = j.at("prime").get<unsigned>();
    exponent_group gamma = gamma_from(j.at("gamma"));
    filtered_map m(space_from(j.at("domain"), prime, gamma),
                   space_from(j.at("codomain"), prime, gamma));
    entries_from(j.at("entries"), m, prime, gamma);
    return m;
}

std::string barcode_to_json(const barcode& bc) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "barcode";
    out["kind"] = bc.kind == barcode_kind::concise ? "concise" : "verbose";
    out["gamma"] = gamma_json(bc.gamma);
    out["bars"] = bar_json_rows(bc);
    return dump(out);
}

barcode barcode_from_json(const std::string& text) {
    json j = json::parse(text);
    barcode bc;
    bc.kind = j.at("kind").get<std::string>() == "concise" ? barcode_kind::concise
                                                           : barcode_kind::verbose;
    bc.gamma = gamma_from(j.at("gamma"));
    for (const auto& row : j.at("bars")) {
        bar b;
        b.degree = row.at("degree").get<int>();
        b.endpoint = rational_from(row.at("endpoint"));
        if (row.at("length").is_string() && row.at("length").get<std::string>() == "inf")
            b.length = ext_rational::infinity();
        else
            b.length = ext_rational(rational_from(row.at("length")));
        const std::size_t mult = row.at("multiplicity").get<std::size_t>();
        for (std::size_t i = 0; i < mult; ++i) bc.bars.push_back(b);
    }
    return bc;
}

std::string barcode_to_csv(const barcode& bc) {
    std::ostringstream out;
    out << "degree,endpoint_num,endpoint_den,length,multiplicity\n";
    for (const auto& row : bar_json_rows(bc)) {
        out << row.at("degree").get<int>() << ",";
        out << row.at("endpoint").at(0).get<std::string>() << ","
            << row.at("endpoint").at(1).get<std::string>() << ",";
        if (row.at("length").is_string()) out << "inf";
        else {
            const std::string num = row.at("length").at(0).get<std::string>();
            const std::string den = row.at("length").at(1).get<std::string>();
            out << num;
            if (den != "1") out << "/" << den;
        }
        out << "," << row.at("multiplicity").get<std::size_t>() << "\n";
    }
    return out.str();
}

std::string svd_to_json(const filtered_map& m, const svd_result& dec) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "svd";
    out["rank"] = dec.rank;
    json dom = json::array(), cod = json::array(), shifts = json::array(), pivots = json::array();
    for (const auto& v : dec.domain_basis) dom.push_back(vec_json(v));
    for (const auto& v : dec.codomain_basis) cod.push_back(vec_json(v));
    for (std::size_t i = 0; i < dec.rank; ++i) shifts.push_back(rational_to_string(dec.shift(i)));
    for (const auto& [r, c] : dec.pivots) pivots.push_back(json::array({r, c}));
    out["domain_basis"] = std::move(dom);
    out["codomain_basis"] = std::move(cod);
    out["shifts"] = std::move(shifts);
    out["pivots"] = std::move(pivots);
    out["domain"] = space_json(m.domain());
    out["codomain"] = space_json(m.codomain());
    return dump(out);
}

std::string egg_report_to_json(const egg_report& report) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "egg-report";
    out["p"] = report.p;
    out["xi_power"] = report.xi_power;
    out["lambda"] = rational_to_string(report.lambda);
    out["seed"] = report.seed;
    out["perturbed"] = report.perturbed;
    json per = json::array();
    for (const auto& row : report.per_degree) {
        json r;
        r["k"] = row.degree;
        r["verbose"] = row.verbose;
        r["concise"] = row.concise;
        r["zero_length"] = row.zero_length;
        r["min_positive_length"] =
            row.min_positive_length ? json(rational_to_string(*row.min_positive_length))
                                    : json(nullptr);
        per.push_back(std::move(r));
    }
    out["per_degree"] = std::move(per);
    json totals;
    totals["verbose"] = report.verbose_total;
    totals["concise"] = report.concise_total;
    totals["zero_length"] = report.zero_length_total;
    totals["min_positive_length"] =
        report.min_positive_length ? json(rational_to_string(*report.min_positive_length))
                                   : json(nullptr);
    out["totals"] = std::move(totals);
    out["nondivisible_degrees"] = report.nondivisible_degrees;
    return dump(out);
}

std::string fixture_to_json(const cyclic_action_data& data, std::size_t size,
                            std::uint64_t seed) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "fixture";
    out["p"] = data.p;
    out["size"] = size;
    out["seed"] = seed;
    out["hbar"] = rational_to_string(data.hbar);
    out["cone"] = json::parse(complex_to_json(data.cone.complex));
    json rot;
    for (const auto& [k, perm] : data.rotation) rot[std::to_string(k)] = perm;
    out["rotation"] = std::move(rot);
    if (data.root_rotation) {
        json rrot;
        for (const auto& [k, perm] : *data.root_rotation) rrot[std::to_string(k)] = perm;
        out["root_rotation"] = std::move(rrot);
    }
    json t;
    for (const auto& [k, m] : data.t_action) t[std::to_string(k)] = entries_json(m);
    out["t_action"] = std::move(t);
    if (data.s_action) {
        json s;
        for (const auto& [k, m] : *data.s_action) s[std::to_string(k)] = entries_json(m);
        out["s_action"] = std::move(s);
    }
    return dump(out);
}

std::string p_tuple_to_json(const p_tuple_svd& dec) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "p-tuple-svd";
    out["p"] = dec.p;
    out["degree"] = dec.degree;
    out["rank"] = dec.decomposition.rank;
    json blocks = json::array();
    for (const auto& blk : dec.blocks) {
        json b;
        b["eigen_index"] = blk.eigen_index;
        b["kernel"] = blk.kernel;
        b["zero_length"] = blk.zero_length;
        b["members"] = blk.members;
        blocks.push_back(std::move(b));
    }
    out["blocks"] = std::move(blocks);
    json shifts = json::array();
    for (std::size_t i = 0; i < dec.decomposition.rank; ++i)
        shifts.push_back(rational_to_string(dec.decomposition.shift(i)));
    out["shifts"] = std::move(shifts);
    return dump(out);
}

std::string verify_report_to_json(const complex_report& report) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "verify-report";
    out["ok"] = report.ok();
    json v = json::array();
    for (const auto& violation : report.violations)
        v.push_back(json{{"degree", violation.degree},
                         {"column", violation.column},
                         {"what", violation.what}});
    out["violations"] = std::move(v);
    return dump(out);
}

std::string product_report_to_json(unsigned p, const std::vector<long>& betti,
                                   unsigned chern_number,
                                   const product_multiplicity_result& result) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "product";
    out["p"] = p;
    out["betti"] = betti;
    out["chern"] = chern_number;
    out["m1"] = result.m1.get_str();
    out["residue"] = result.residue;
    out["divisible"] = result.divisible;
    return dump(out);
}

std::string crosscheck_to_json(const crosscheck_result& result) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "product-crosscheck";
    out["agree"] = result.agree;
    out["direct_m1"] = result.direct_m1;
    out["tensor_rule_m1"] = result.tensor_rule_m1;
    out["formula_m1"] = result.formula_m1.get_str();
    out["direct_min_length"] = result.direct_min_length
                                   ? json(rational_to_string(*result.direct_min_length))
                                   : json(nullptr);
    out["egg_min_length"] = result.egg_min_length
                                ? json(rational_to_string(*result.egg_min_length))
                                : json(nullptr);
    out["mismatched_degrees"] = result.mismatched_degrees;
    return dump(out);
}

std::string stability_to_json(const stability_report& report) {
    json out;
    out["schema"] = schema_tag;
    out["type"] = "stability";
    out["bound"] = rational_to_string(report.bound);
    out["max_deviation"] = rational_to_string(report.max_deviation);
    out["seeds_run"] = report.seeds_run;
    out["seeds_skipped"] = report.seeds_skipped;
    out["within_bound"] = report.within_bound;
    return dump(out);
}

} // namespace novbar
