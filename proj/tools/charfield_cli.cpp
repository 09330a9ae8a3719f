// Command-line front end: group reports, oracle comparison, unipotent
// verification, and simplex dumps. Exit codes: 0 success/pass, 1 usage
// error, 2 resource cap exceeded, 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "charfield/charparam.hpp"
#include "charfield/cyclofield.hpp"
#include "charfield/fieldthm.hpp"
#include "charfield/matgrp.hpp"
#include "charfield/numth.hpp"
#include "charfield/oracle.hpp"
#include "charfield/torus.hpp"
#include "charfield/unipotent.hpp"

using json = nlohmann::json;
using namespace charfield;

namespace {

struct CommonOpts {
    int64_t n = 0, q = 0;
    int eps = 1;
    std::string format = "text";
    std::string out;
    uint64_t seed = 0;
    int workers = 1;
    int64_t max_enum = torus::kDefaultLevelCap;
    int64_t max_group_order = matgrp::kDefaultGroupCap;
    int64_t budget = 10'000'000;
    int64_t max_exhaustive = 1'000'000;
};

void write_output(const CommonOpts& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + opt.out);
        f << text;
    }
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

json params_json(const torus::GroupParams& gp) {
    return json{{"n", gp.n},   {"q", gp.q},     {"eps", gp.eps},
                {"p", gp.p},   {"f", gp.f},     {"eta", gp.eta},
                {"q_is_square", gp.q_is_square}};
}

json report_json(const fieldthm::GroupReport& rep) {
    json verdicts = json::array();
    for (const auto& v : rep.verdicts) {
        verdicts.push_back(json{{"lambda_key", v.lambda_key},
                                {"orbit_size", v.orbit_size},
                                {"num_constituents", v.num_constituents},
                                {"field_restriction", cyclofield::field_str(v.field_restriction)},
                                {"field_constituent", cyclofield::field_str(v.field_constituent)},
                                {"exceptional", v.exceptional},
                                {"real", v.real_constituent},
                                {"real_restriction", v.real_restriction}});
    }
    json totals{{"irr_count", rep.irr_count},
                {"field_multiset", rep.field_multiset},
                {"real_count", rep.real_count}};
    json ambient{{"irr_count", rep.ambient_irr_count},
                 {"field_multiset", rep.ambient_field_multiset},
                 {"real_count", rep.ambient_real_count}};
    return json{{"params", params_json(rep.params)},
                {"verdicts", verdicts},
                {"totals", totals},
                {"ambient_totals", ambient}};
}

std::string render_report(const fieldthm::GroupReport& rep, const std::string& format) {
    if (format == "json") return report_json(rep).dump(2) + "\n";
    std::ostringstream os;
    if (format == "csv") {
        os << "lambda_key,orbit_size,num_constituents,field_restriction,"
              "field_constituent,exceptional,real,real_restriction\n";
        for (const auto& v : rep.verdicts)
            os << csv_quote(v.lambda_key) << "," << v.orbit_size << ","
               << v.num_constituents << ","
               << csv_quote(cyclofield::field_str(v.field_restriction)) << ","
               << csv_quote(cyclofield::field_str(v.field_constituent)) << ","
               << (v.exceptional ? 1 : 0) << "," << (v.real_constituent ? 1 : 0) << ","
               << (v.real_restriction ? 1 : 0) << "\n";
        return os.str();
    }
    const auto& gp = rep.params;
    os << (gp.eps == 1 ? "SL_" : "SU_") << gp.n << "(" << gp.q << ")  [ambient "
       << (gp.eps == 1 ? "GL" : "GU") << "]\n";
    os << "T^1-orbits: " << rep.verdicts.size() << ", |Irr| = " << rep.irr_count
       << ", real irreducibles: " << rep.real_count << "\n";
    os << "fields over Irr:";
    for (const auto& [f, c] : rep.field_multiset) os << "  " << f << " x" << c;
    os << "\n";
    os << "ambient |Irr| = " << rep.ambient_irr_count
       << ", real: " << rep.ambient_real_count << ", fields:";
    for (const auto& [f, c] : rep.ambient_field_multiset) os << "  " << f << " x" << c;
    os << "\n\n";
    for (const auto& v : rep.verdicts)
        os << v.lambda_key << "  constituents=" << v.num_constituents
           << "  F_lambda=" << cyclofield::field_str(v.field_restriction)
           << "  Q(chi)=" << cyclofield::field_str(v.field_constituent)
           << (v.exceptional ? "  exceptional" : "") << (v.real_constituent ? "  real" : "")
           << "\n";
    return os.str();
}

int cmd_report(const CommonOpts& opt) {
    auto gp = torus::make_group_params(opt.n, opt.q, opt.eps);
    auto rep = fieldthm::group_report(gp, opt.max_enum, numth::kDefaultUnitsCap, opt.workers);
    write_output(opt, render_report(rep, opt.format));
    return 0;
}

int cmd_oracle_compare(const CommonOpts& opt, bool ambient) {
    auto gp = torus::make_group_params(opt.n, opt.q, opt.eps);
    auto rep = fieldthm::group_report(gp, opt.max_enum, numth::kDefaultUnitsCap, opt.workers);
    auto G = matgrp::build_group(gp, !ambient, matgrp::GramKind::none, opt.max_group_order);
    auto T = oracle::character_table(G);
    auto diff = oracle::compare_with_pipeline(T, rep, ambient);
    std::ostringstream os;
    std::string name = std::string(ambient ? (gp.eps == 1 ? "GL_" : "GU_")
                                           : (gp.eps == 1 ? "SL_" : "SU_")) +
                       std::to_string(gp.n) + "(" + std::to_string(gp.q) + ")";
    if (diff.pass()) {
        os << name << ": oracle and pipeline agree (" << T.k << " irreducibles, "
           << T.real_row_count() << " real)\n";
    } else {
        os << name << ": MISMATCH\n";
        for (const auto& m : diff.mismatches) os << "  " << m << "\n";
    }
    write_output(opt, os.str());
    return diff.pass() ? 0 : 3;
}

std::string claim_status_str(unipotent::ClaimStatus s) {
    switch (s) {
        case unipotent::ClaimStatus::pass: return "pass";
        case unipotent::ClaimStatus::fail: return "fail";
        case unipotent::ClaimStatus::inconclusive: return "inconclusive";
        default: return "n/a";
    }
}

int cmd_unipotent_verify(const CommonOpts& opt, const std::string& shapes_arg) {
    auto gp = torus::make_group_params(opt.n, opt.q, -1);
    std::vector<unipotent::UnipotentShape> shapes;
    if (shapes_arg.empty()) {
        for (const auto& p : numth::partitions_of(opt.n))
            shapes.push_back(unipotent::UnipotentShape::from_partition(p));
    } else {
        std::stringstream ss(shapes_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::vector<int64_t> parts;
            std::stringstream ps(tok);
            std::string part;
            while (std::getline(ps, part, '+')) parts.push_back(std::stoll(part));
            std::sort(parts.rbegin(), parts.rend());
            shapes.push_back(unipotent::UnipotentShape::from_partition(numth::Partition(parts)));
        }
    }
    unipotent::SearchConfig cfg;
    cfg.seed = opt.seed;
    cfg.sample_budget = opt.budget;
    cfg.exhaustive_cap = opt.max_exhaustive;
    auto verdicts = unipotent::verify_section4(gp, shapes, cfg);

    bool any_fail = false;
    std::ostringstream os;
    if (opt.format == "json") {
        matgrp::FiniteField F(gp.p, gp.f);
        auto mat_json = [](const matgrp::Mat& m) {
            json rows = json::array();
            for (int i = 0; i < m.n; ++i) {
                json row = json::array();
                for (int j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
                rows.push_back(row);
            }
            return rows;
        };
        json out;
        out["params"] = params_json(gp);
        out["b"] = numth::smallest_primitive_root(gp.p);
        out["seed"] = opt.seed;
        // entries below are indices in F_{q^2} = F_p[x]/(g): index = base-p
        // digits of the coefficient vector; g is monic with these non-leading
        // coefficients
        out["field"] = json{{"p", gp.p},
                            {"f", gp.f},
                            {"modulus_coeffs", F.modulus_coeffs()}};
        json jv = json::array();
        for (const auto& v : verdicts) {
            json claims = json::array();
            for (const auto& c : v.claims) {
                json jc{{"claim", c.claim},
                        {"status", claim_status_str(c.status)},
                        {"detail", c.detail}};
                if (c.witness) {
                    jc["witness"] = json{{"u", mat_json(c.witness->u)},
                                         {"x", mat_json(c.witness->x)},
                                         {"b", c.witness->b},
                                         {"det", c.witness->det_value},
                                         {"det_order", c.witness->det_order}};
                }
                claims.push_back(std::move(jc));
            }
            jv.push_back(json{{"shape", v.shape.str()}, {"claims", claims}});
            any_fail = any_fail || v.any_fail();
        }
        out["shapes"] = jv;
        os << out.dump(2) << "\n";
    } else {
        os << "GU_" << opt.n << "(" << opt.q
           << "), b = " << numth::smallest_primitive_root(gp.p) << "\n";
        for (const auto& v : verdicts) {
            os << "shape " << v.shape.str() << ":\n";
            for (const auto& c : v.claims) {
                os << "  [" << claim_status_str(c.status) << "] " << c.claim;
                if (!c.detail.empty()) os << " -- " << c.detail;
                os << "\n";
            }
            any_fail = any_fail || v.any_fail();
        }
    }
    write_output(opt, os.str());
    return any_fail ? 3 : 0;
}

int cmd_simplices(const CommonOpts& opt) {
    auto gp = torus::make_group_params(opt.n, opt.q, opt.eps);
    auto sims = torus::enumerate_simplices(gp, opt.n, opt.max_enum);
    std::ostringstream os;
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto& s : sims) {
            json orbit = json::array();
            for (int64_t j : s.orbit) orbit.push_back(j);
            arr.push_back(json{{"level", s.d},
                               {"modulus", s.modulus},
                               {"rep", s.rep},
                               {"char_order", torus::char_order(s)},
                               {"orbit", orbit}});
        }
        os << json{{"params", params_json(gp)}, {"simplices", arr}}.dump(2) << "\n";
    } else {
        std::map<int64_t, int64_t> by_level;
        for (const auto& s : sims) by_level[s.d]++;
        os << "simplices of size <= " << gp.n << " for q = " << gp.q
           << ", eps = " << gp.eps << "\n";
        for (auto [d, c] : by_level)
            os << "  size " << d << " (mod N_" << d << " = "
               << torus::torus_order_big(gp, d).str() << "): " << c << "\n";
        for (const auto& s : sims) {
            os << "  d" << s.d << " rep " << s.rep << " order " << torus::char_order(s)
               << " orbit {";
            for (size_t i = 0; i < s.orbit.size(); ++i)
                os << (i ? "," : "") << s.orbit[i];
            os << "}\n";
        }
    }
    write_output(opt, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact fields of character values for SL_n(q) and SU_n(q)"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string shapes_arg;
    bool ambient = false;

    auto add_common = [&](CLI::App* cmd, bool needs_eps) {
        cmd->add_option("--n", opt.n, "rank n")->required();
        cmd->add_option("--q", opt.q, "prime power q")->required();
        if (needs_eps)
            cmd->add_option("--eps", opt.eps, "+1 for SL/GL, -1 for SU/GU")->required();
        cmd->add_option("--format", opt.format, "output format: text|json|csv");
        cmd->add_option("--out", opt.out, "output file (default stdout)");
        cmd->add_option("--seed", opt.seed, "search seed");
        cmd->add_option("--workers", opt.workers, "worker threads for verdicts");
        cmd->add_option("--max-enum", opt.max_enum, "torus enumeration cap");
        cmd->add_option("--max-group-order", opt.max_group_order, "oracle group order cap");
        cmd->add_option("--budget", opt.budget, "sampling budget for searches");
        cmd->add_option("--max-exhaustive", opt.max_exhaustive,
                        "candidate cap for exhaustive searches");
    };

    auto* rep = app.add_subcommand("report", "fields of values of Irr(SL^eps_n(q))");
    add_common(rep, true);
    auto* cmp = app.add_subcommand("oracle-compare",
                                   "compare the pipeline with the character-table oracle");
    add_common(cmp, true);
    cmp->add_flag("--ambient", ambient, "compare the ambient GL/GU table instead");
    auto* uni = app.add_subcommand("unipotent-verify",
                                   "verify the unipotent determinant-order claims");
    add_common(uni, false);
    uni->add_option("--shapes", shapes_arg, "comma list of shapes like 2+2,4 (default: all)");
    auto* sim = app.add_subcommand("simplices", "dump the Frobenius orbits per level");
    add_common(sim, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) return cmd_report(opt);
        if (cmp->parsed()) return cmd_oracle_compare(opt, ambient);
        if (uni->parsed()) return cmd_unipotent_verify(opt, shapes_arg);
        if (sim->parsed()) return cmd_simplices(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::length_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
