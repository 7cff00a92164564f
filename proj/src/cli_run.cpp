#include "fde/cli_run.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

#include "fde/io.hpp"

namespace fde {

namespace {

struct Config {
    long long q = 2;
    int p = 0, s = 0;  // override q when set
    std::string v = "0,1";
    int prec_t = 8;
    std::string prec_u = "4";
    long long max_denom = 4096;
    int max_field_deg = 64;
    std::string branch = "max-val";
    unsigned long long seed = 0;
    std::string format = "json";
};

void add_common(CLI::App& app, Config& cfg) {
    app.add_option("--q", cfg.q, "field size q = p^s")->configurable();
    app.add_option("--p", cfg.p)->configurable();
    app.add_option("--s", cfg.s)->configurable();
    app.add_option("--v", cfg.v, "place polynomial, little-endian coefficient list")
        ->configurable();
    app.add_option("--prec-t", cfg.prec_t)->configurable();
    app.add_option("--prec-u", cfg.prec_u)->configurable();
    app.add_option("--max-denom", cfg.max_denom)->configurable();
    app.add_option("--max-field-deg", cfg.max_field_deg)->configurable();
    app.add_option("--branch", cfg.branch)->configurable();
    app.add_option("--seed", cfg.seed)->configurable();
    app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "table"}))
        ->configurable();
}

Session make_session(const Config& cfg) {
    int p = cfg.p, s = cfg.s;
    if (p == 0) {
        long long q = cfg.q;
        if (q < 2) throw FieldError("q must be a prime power >= 2");
        p = 2;
        while (q % p != 0) ++p;
        s = 0;
        while (q > 1) {
            if (q % p != 0) throw FieldError("q is not a prime power");
            q /= p;
            ++s;
        }
    }
    auto S = Session::create(p, s);
    S.max_denom = cfg.max_denom;
    S.max_field_deg = cfg.max_field_deg;
    S.prec_t = cfg.prec_t;
    S.prec_u = parse_rat(cfg.prec_u);
    S.branch = cfg.branch;
    S.seed = cfg.seed;
    return S;
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        auto tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stoll(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw FieldError("empty coefficient list");
    return out;
}

PlacePtr place_from_config(Session& S, const Config& cfg) {
    std::vector<FieldElement> v;
    for (long long c : parse_ll_list(cfg.v))
        v.push_back(element_at(S.qfield, (unsigned long long)c));
    return make_place(S, v);
}

// alpha tokens: an integer, "theta", or "theta^k"
RatTheta parse_alpha(const FieldSpecPtr& spec, const std::string& tok) {
    if (tok.rfind("theta", 0) == 0) {
        long long k = 1;
        if (tok.size() > 5) {
            if (tok[5] != '^') throw FieldError("bad alpha token: " + tok);
            k = std::stoll(tok.substr(6));
        }
        ThetaPoly f((size_t)k + 1, fe_zero(spec));
        f[(size_t)k] = fe_one(spec);
        return rt_poly(spec, f);
    }
    return rt_int(spec, std::stoll(tok));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        auto at = s.find(sep, pos);
        out.push_back(s.substr(pos, at == std::string::npos ? std::string::npos : at - pos));
        if (at == std::string::npos) break;
        pos = at + 1;
    }
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldError("cannot open " + path);
    return json::parse(in);
}

void emit(std::ostream& out, const Config& cfg, const json& j) {
    if (cfg.format == "table" && j.is_array()) {
        for (auto& row : j) {
            bool first = true;
            for (auto& [k, val] : row.items()) {
                out << (first ? "" : "  ") << k << "="
                    << (val.is_string() ? val.get<std::string>() : val.dump());
                first = false;
            }
            out << "\n";
        }
        return;
    }
    out << j.dump(1) << "\n";
}

void emit_log(std::ostream& log, const Session& S) {
    log << json{{"log", S.events}}.dump(1) << "\n";
}

int run_omega(const Config& cfg, std::ostream& out, std::ostream& log) {
    auto S = make_session(cfg);
    auto place = place_from_config(S, cfg);
    auto om = solve_omega(S, place, S.prec_t, S.prec_u);
    auto rep = valuation_report(om.table);
    json j{{"omega", ve_to_json(om.omega)},
           {"table", valuation_table_json(om.table)},
           {"branch_record", om.branch_record},
           {"ok", rep.ok}};
    emit(out, cfg, cfg.format == "table" ? valuation_table_json(om.table) : j);
    emit_log(log, S);
    return rep.ok ? 0 : 1;
}

int run_polylog(const Config& cfg, const std::string& alpha, long long n, std::ostream& out,
                std::ostream& log) {
    auto S = make_session(cfg);
    auto place = place_from_config(S, cfg);
    auto results = solve_polylog(S, place, parse_alpha(S.qfield, alpha), n, S.prec_t, S.prec_u,
                                 parse_branch(S.branch));
    bool ok = true;
    json branches = json::array();
    for (auto& r : results) {
        auto rep = valuation_report(r.table);
        ok = ok && rep.ok;
        branches.push_back(json{{"L", ve_to_json(r.L)},
                                {"table", valuation_table_json(r.table)},
                                {"branch_record", r.branch_record},
                                {"ok", rep.ok}});
    }
    emit(out, cfg, json{{"branches", branches}, {"ok", ok}});
    emit_log(log, S);
    return ok ? 0 : 1;
}

int run_motive(const Config& cfg, const std::string& alphas, long long n, std::ostream& out,
               std::ostream& log) {
    auto S = make_session(cfg);
    auto place = place_from_config(S, cfg);
    std::vector<RatTheta> al;
    for (auto& tok : split(alphas, ','))
        if (!tok.empty()) al.push_back(parse_alpha(S.qfield, tok));
    auto mot = build_polylog_motive(S, place, n, al, S.prec_t, S.prec_u, parse_branch(S.branch));
    emit(out, cfg,
         json{{"phi", phi_to_json(mot.pair.phi)},
              {"psi", psi_to_json(mot.pair.psi)},
              {"verified_cap", rat_to_json(mot.pair.verified_cap)},
              {"branch_records", mot.branch_records}});
    emit_log(log, S);
    return 0;
}

int run_verify(const Config& cfg, const std::string& phi_path, const std::string& psi_path,
               std::ostream& out, std::ostream& log) {
    auto S = make_session(cfg);
    auto phi = phi_from_json(load_json(phi_path));
    auto psi = psi_from_json(S, load_json(psi_path));
    auto rep = verify_fundamental(S, phi, psi);
    json j{{"ok", rep.ok}, {"verified_cap", rat_to_json(rep.verified_cap)}, {"worst", rep.worst}};
    if (rep.min_residual) j["min_residual"] = rat_to_json(*rep.min_residual);
    emit(out, cfg, j);
    emit_log(log, S);
    return rep.ok ? 0 : 1;
}

int run_abp(const Config& cfg, long long nu_max, std::ostream& out, std::ostream& log) {
    auto S = make_session(cfg);
    auto place = place_from_config(S, cfg);
    auto mot = carlitz_motive(S, place, S.prec_t, S.prec_u);
    long long q = S.q();
    int d = place->d;
    auto rep = abp_chain_check(S, mot.omega.omega, rt_one(S.qfield), 1, nu_max,
                               [q, d](long long i) { return omega_val_formula(q, d, 0, i); });
    emit(out, cfg, chain_report_json(rep));
    emit_log(log, S);
    return rep.ok ? 0 : 1;
}

int run_relations(const Config& cfg, const std::string& values, long long D,
                  const std::string& cutoff, int cdeg, std::ostream& out, std::ostream& log) {
    auto S = make_session(cfg);
    auto place = place_from_config(S, cfg);
    std::vector<HahnSeries> vals;
    for (auto& path : split(values, ',')) vals.push_back(hs_from_json(load_json(path)));
    auto cert = kernel_search(S, place, vals, D, parse_rat(cutoff), cdeg);
    emit(out, cfg, certificate_to_json(cert));
    emit_log(log, S);
    return 0;
}

json lp_to_json(const LinPoly& f) {
    json coef = json::array();
    for (auto& c : f.coef) coef.push_back(es_to_json(c));
    return json{{"coef", coef}, {"cst", es_to_json(f.cst)}};
}

int run_galois(const Config& cfg, const std::string& forms_path, const std::string& gamma_path,
               const std::string& xi_path, std::ostream& out, std::ostream& log) {
    auto S = make_session(cfg);
    auto spec = S.qfield;
    std::vector<std::vector<ExactScalar>> c;
    for (auto& row : load_json(forms_path)) {
        std::vector<ExactScalar> r;
        for (auto& x : row) r.push_back(es_from_json(x, spec));
        c.push_back(std::move(r));
    }
    std::vector<ExactScalar> b, xi;
    for (auto& x : load_json(gamma_path)) b.push_back(es_from_json(x, spec));
    for (auto& x : load_json(xi_path)) xi.push_back(es_from_json(x, spec));
    auto G = gamma_polys(c, b);
    auto H = z_polys(G, xi);
    bool ok = true;
    json gj = json::array(), hj = json::array();
    for (auto& g : G) gj.push_back(lp_to_json(g));
    for (auto& h : H) {
        hj.push_back(lp_to_json(h));
        ok = ok && lp_eval(h, xi).is_zero();
    }
    emit(out, cfg, json{{"G", gj}, {"H", hj}, {"vanishes_at_xi", ok}});
    emit_log(log, S);
    return ok ? 0 : 1;
}

int run_pf(const Config& cfg, const std::string& input, const std::string& mdeg,
           const std::string& shape, std::ostream& out, std::ostream& log) {
    ProductFieldMatrix D;
    if (!input.empty()) {
        D = pf_from_json(load_json(input));
    } else {
        auto dims = parse_ll_list(shape);
        if (dims.size() != 2) throw FieldError("--shape wants rows,cols");
        std::vector<int> md;
        for (long long x : parse_ll_list(mdeg)) md.push_back((int)x);
        auto S = make_session(cfg);
        D = pf_random(S.p, S.s, cfg.max_field_deg >= 2 ? 2 : 1, md, (int)dims[0], (int)dims[1],
                      cfg.seed);
    }
    auto red = pf_reduce(D, cfg.seed);
    emit(out, cfg, pf_reduction_json(red));
    log << json{{"log", json::array()}}.dump(1) << "\n";
    return 0;
}

int run_valuations(const Config& cfg, long long m_max, long long i_max, std::ostream& out,
                   std::ostream& log) {
    auto S = make_session(cfg);
    int d = (int)parse_ll_list(cfg.v).size() - 1;
    json rows = json::array();
    for (long long m = 0; m <= m_max; ++m)
        for (long long i = 0; i <= i_max; ++i)
            rows.push_back(json{{"m", m},
                                {"i", i},
                                {"val", rat_to_json(omega_val_formula(S.q(), d, m, i))},
                                {"formula", rat_to_json(omega_val_formula(S.q(), d, m, i))},
                                {"verdict", "formula"}});
    emit(out, cfg, rows);
    emit_log(log, S);
    return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
    Config cfg;
    CLI::App app{"exact v-adic Frobenius difference equation tool"};
    app.set_config("--config", "", "key = value configuration file")->envname("FDEQ_CONFIG");
    add_common(app, cfg);
    app.fallthrough();  // session options may follow the subcommand
    app.require_subcommand(1);

    auto* omega = app.add_subcommand("omega", "solve the period equation");

    std::string alpha = "1";
    long long n = 1;
    auto* polylog = app.add_subcommand("polylog", "solve a polylogarithm equation");
    polylog->add_option("--alpha", alpha);
    polylog->add_option("--n", n);

    std::string alphas = "1";
    auto* motive = app.add_subcommand("motive", "module constructions");
    auto* motive_polylog = motive->add_subcommand("polylog", "polylogarithm module");
    motive_polylog->add_option("--alphas", alphas);
    motive_polylog->add_option("--n", n);

    std::string phi_path, psi_path;
    auto* verify = app.add_subcommand("verify", "verification");
    auto* verify_fund = verify->add_subcommand("fundamental", "check sigma Psi = Phi Psi");
    verify_fund->add_option("--phi", phi_path)->required();
    verify_fund->add_option("--psi", psi_path)->required();

    long long nu_max = 1;
    auto* abp = app.add_subcommand("abp", "evaluation chains");
    auto* abp_check = abp->add_subcommand("check", "rank-1 evaluation chain");
    abp_check->add_option("--nu-max", nu_max);

    std::string values, cutoff = "2";
    long long D = 0;
    int cdeg = 1;
    auto* relations = app.add_subcommand("relations", "linear relations");
    auto* rel_search = relations->add_subcommand("search", "bounded-degree kernel search");
    rel_search->add_option("--values", values)->required();
    rel_search->add_option("--deg-theta", D);
    rel_search->add_option("--cutoff", cutoff);
    rel_search->add_option("--cdeg", cdeg);

    std::string forms_path, gamma_path, xi_path;
    auto* galois = app.add_subcommand("galois", "Galois-polynomial pipeline");
    auto* galois_polys = galois->add_subcommand("polys", "gamma / Z polynomials");
    galois_polys->add_option("--forms", forms_path)->required();
    galois_polys->add_option("--gamma", gamma_path)->required();
    galois_polys->add_option("--xi", xi_path)->required();

    std::string pf_input, pf_mdeg = "1", pf_shape = "2,2";
    auto* pf = app.add_subcommand("pf-reduce", "product-of-fields normal form");
    pf->add_option("--input", pf_input);
    pf->add_option("--mdeg", pf_mdeg);
    pf->add_option("--shape", pf_shape);

    long long m_max = 1, i_max = 6;
    auto* valuations = app.add_subcommand("valuations", "expected valuation tables");
    valuations->add_option("--m-max", m_max);
    valuations->add_option("--i-max", i_max);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        log << json{{"error", e.what()}}.dump(1) << "\n";
        return 2;
    }

    try {
        if (*omega) return run_omega(cfg, out, log);
        if (*polylog) return run_polylog(cfg, alpha, n, out, log);
        if (*motive_polylog) return run_motive(cfg, alphas, n, out, log);
        if (*verify_fund) return run_verify(cfg, phi_path, psi_path, out, log);
        if (*abp_check) return run_abp(cfg, nu_max, out, log);
        if (*rel_search) return run_relations(cfg, values, D, cutoff, cdeg, out, log);
        if (*galois_polys) return run_galois(cfg, forms_path, gamma_path, xi_path, out, log);
        if (*pf) return run_pf(cfg, pf_input, pf_mdeg, pf_shape, out, log);
        if (*valuations) return run_valuations(cfg, m_max, i_max, out, log);
        log << json{{"error", "missing subcommand"}}.dump(1) << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << json{{"error", e.what()}}.dump(1) << "\n";
        return 2;
    }
}

}  // namespace fde
