#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ballspace/dsl.hpp"
#include "ballspace/parallel.hpp"
#include "ballspace/rng.hpp"

namespace bs = ballspace;
using bs::json;

namespace {

struct Ctx {
    uint64_t seed = 12345;
    int64_t budget = 20000;
    int grid_dirs = 0;
    std::vector<double> grid_radii;
    std::string format = "json";
    std::string out;
    bool quiet = false;
    int threads = 0;

    bs::GridOptions grid() const {
        bs::GridOptions g;
        g.dirs = grid_dirs;
        g.radii = grid_radii;
        return g;
    }
};

// 12 significant digits before serialization keeps report bodies stable
double sig12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json jn(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "infinite" : "-infinite";
    return sig12(x);
}

std::string csv_num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fn_id(const json& fj) {
    std::string s = fj.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "f-%010llx", (unsigned long long)(h & 0xFFFFFFFFFFull));
    return buf;
}

json estimate_json(const bs::NormEstimate& est) {
    json out;
    out["value"] = jn(est.value);
    out["std_error"] = jn(est.std_error);
    out["argmax"] = bs::point_to_json(est.argmax);
    if (est.argmax_delta > 0.0) out["argmax_delta"] = jn(est.argmax_delta);
    out["grid_size"] = est.grid_size;
    out["reliable"] = est.reliable;
    out["status"] = est.status;
    return out;
}

json payload(const std::string& arg, const std::string& what) {
    std::string text = arg;
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw bs::BallError("dsl-error", what + ": cannot open " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw bs::BallError("dsl-error", what + ": " + e.what());
    }
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void emit(const Ctx& ctx, const std::string& command, const json& config,
          const std::string& body) {
    std::ostringstream head;
    head << "# ballspace " << command << " seed=" << ctx.seed << " budget=" << ctx.budget
         << " format=" << ctx.format << "\n";
    head << "# config: " << config.dump() << "\n";
    head << "# generated: " << timestamp() << "\n";
    std::string text = head.str() + body + "\n";
    if (!ctx.out.empty()) {
        std::ofstream f(ctx.out);
        if (!f) throw bs::BallError("invalid-params", "cannot write " + ctx.out);
        f << text;
    }
    if (!ctx.quiet) std::cout << text;
}

std::string dump_body(const json& body) { return body.dump(1); }

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw bs::BallError("invalid-params", what + ": bad number '" + tok + "'");
        }
    }
    return out;
}

json grid_config(const Ctx& ctx) {
    json g;
    g["dirs"] = ctx.grid_dirs > 0 ? json(ctx.grid_dirs) : json("auto");
    if (ctx.grid_radii.empty()) {
        g["radii"] = "default";
    } else {
        json r = json::array();
        for (double v : ctx.grid_radii) r.push_back(jn(v));
        g["radii"] = r;
    }
    return g;
}

json base_config(const Ctx& ctx, const std::string& command) {
    json c;
    c["command"] = command;
    c["seed"] = ctx.seed;
    c["budget"] = ctx.budget;
    c["grid"] = grid_config(ctx);
    c["format"] = ctx.format;
    return c;
}

json dyadic_json(const bs::DyadicSum& d) {
    json out;
    json ks = json::array(), ts = json::array(), ratios = json::array();
    for (auto k : d.k) ks.push_back(k);
    for (auto t : d.t) ts.push_back(jn(t));
    for (std::size_t j = 0; j + 1 < d.k.size(); ++j)
        ratios.push_back(jn(std::exp((d.log_t[j + 1] - d.log_t[j]) / double(d.k[j + 1] - d.k[j]))));
    out["k"] = ks;
    out["terms"] = ts;
    out["ratio_trace"] = ratios;
    out["verdict"] = d.verdict;
    out["reason"] = d.reason;
    if (!d.note.empty()) out["note"] = d.note;
    return out;
}

// deterministic polynomial family for the equivalence table
bs::HoloFn random_poly(int n, int degree, uint64_t seed, int j) {
    std::vector<std::vector<int64_t>> etas;
    std::vector<int64_t> cur;
    std::function<void(int)> rec = [&](int left) {
        if (int(cur.size()) == n) {
            etas.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur.push_back(e);
            rec(left - e);
            cur.pop_back();
        }
    };
    rec(degree);
    bs::PolyCoeffs coeffs;
    bs::CounterRng rng(bs::CounterRng::mix(seed ^ 0xE9417A1ull) + uint64_t(j), 0);
    for (const auto& e : etas) {
        int64_t deg = 0;
        for (int64_t v : e) deg += v;
        double scale = std::ldexp(1.0, -int(deg));
        coeffs[bs::MultiIndex(e)] =
            bs::cplx(scale * (2.0 * rng.u01() - 1.0), scale * (2.0 * rng.u01() - 1.0));
    }
    return bs::HoloFn::polynomial(n, std::move(coeffs));
}

int run_norm(const Ctx& ctx, const std::string& farg, const std::string& sarg) {
    json fj = payload(farg, "--function");
    json sj = payload(sarg, "--space");
    bs::HoloFn f = bs::parse_function(fj);
    bs::SpaceSpec space = bs::parse_space(sj);
    bs::NormEstimate est = bs::norm(space, f, ctx.budget, ctx.seed, ctx.grid());

    json config = base_config(ctx, "norm");
    config["function"] = fj;
    config["space"] = sj;
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "space,function,value,std_error,argmax,reliable,status\n";
        os << space.name() << ',' << fn_id(fj) << ',' << csv_num(est.value) << ','
           << csv_num(est.std_error) << ",\"" << bs::point_to_json(est.argmax).dump() << "\","
           << (est.reliable ? "true" : "false") << ',' << est.status;
        body = os.str();
    } else {
        json b;
        b["space"] = space.name();
        b["function"] = fn_id(fj);
        b["estimate"] = estimate_json(est);
        body = dump_body(b);
    }
    emit(ctx, "norm", config, body);
    return est.reliable ? 0 : 3;
}

int run_membership(const Ctx& ctx, const std::string& farg, const std::string& sarg) {
    json fj = payload(farg, "--function");
    json sj = payload(sarg, "--space");
    bs::HoloFn f = bs::parse_function(fj);
    bs::SpaceSpec space = bs::parse_space(sj);
    bs::MembershipReport rep = bs::membership_report(space, f, ctx.budget, ctx.seed);

    json config = base_config(ctx, "membership");
    config["function"] = fj;
    config["space"] = sj;
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "rung,label,value,energy,std_error\n";
        for (std::size_t j = 0; j < rep.ladder.size(); ++j)
            os << j << ',' << rep.ladder[j].label << ',' << csv_num(rep.ladder[j].value) << ','
               << csv_num(rep.ladder[j].energy) << ',' << csv_num(rep.ladder[j].std_error) << '\n';
        os << "verdict," << rep.verdict << ",\"" << rep.reason << "\"";
        body = os.str();
    } else {
        json b;
        b["space"] = space.name();
        b["function"] = fn_id(fj);
        b["verdict"] = rep.verdict;
        b["reason"] = rep.reason;
        json ladder = json::array();
        for (const auto& r : rep.ladder) {
            json row;
            row["label"] = r.label;
            row["value"] = jn(r.value);
            row["energy"] = jn(r.energy);
            row["std_error"] = jn(r.std_error);
            ladder.push_back(row);
        }
        b["ladder"] = ladder;
        body = dump_body(b);
    }
    emit(ctx, "membership", config, body);
    return 0;
}

int run_gap(const Ctx& ctx, const std::string& farg, const std::string& sarg, bool hardy,
            double alpha, double beta, double exponent) {
    json fj = payload(farg, "--function");
    bs::HoloFn f = bs::parse_function(fj);
    const bs::LacunaryData* lac = f.as_lacunary();
    if (!lac) throw bs::BallError("dsl-error", "gap requires a lacunary function");

    json config = base_config(ctx, "gap");
    config["function"] = fj;
    json b;
    b["function"] = fn_id(fj);
    if (hardy) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw bs::BallError("invalid-params", "--hardy needs --alpha > 0 and --beta > 0");
        config["alpha"] = jn(alpha);
        config["beta"] = jn(beta);
        bs::GapSeries series = bs::gap_series(*lac, alpha);
        bs::GapVerdict v = bs::gap_verdict_hardy(series, alpha, beta);
        b["verdict"] = v.verdict;
        b["reason"] = v.reason;
    } else {
        json sj = payload(sarg, "--space");
        config["space"] = sj;
        bs::SpaceParams params = bs::parse_space_params(sj);
        double ex = exponent > 0.0 ? exponent : params.p;
        bs::GapSeries series = bs::gap_series(*lac, ex);
        bs::GapVerdict v = bs::gap_verdict_N(series, params);
        b["verdict"] = v.verdict;
        b["reason"] = v.reason;
        b["exact"] = v.exact;
        b["upper"] = dyadic_json(v.upper);
        b["lower"] = dyadic_json(v.lower);
    }
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        if (!hardy && b.contains("upper")) {
            os << "k,term\n";
            const json& up = b["upper"];
            for (std::size_t j = 0; j < up["k"].size(); ++j)
                os << up["k"][j].dump() << ',' << up["terms"][j].dump() << '\n';
        }
        os << "verdict," << b["verdict"].get<std::string>() << ",\""
           << b["reason"].get<std::string>() << "\"";
        body = os.str();
    } else {
        body = dump_body(b);
    }
    emit(ctx, "gap", config, body);
    return 0;
}

int run_lattice(const Ctx& ctx, int n, double r, double cap, int probes) {
    bs::Lattice lat = bs::generate_lattice(n, r, cap, ctx.seed);
    auto pts = bs::lattice_probes(n, cap, std::size_t(probes),
                                  bs::CounterRng::mix(ctx.seed ^ 0x9A0BEull));
    json config = base_config(ctx, "lattice");
    config["n"] = n;
    config["r"] = jn(r);
    config["radius_cap"] = jn(cap);
    config["probes"] = probes;

    json b;
    b["lattice"] = bs::lattice_to_json(lat);
    json stats;
    stats["count"] = lat.centers.size();
    stats["min_separation"] = jn(lat.min_pairwise_separation());
    stats["covering_radius"] = jn(bs::covering_radius(lat, pts));
    stats["max_overlap_4r"] = bs::max_overlap(lat, 4.0, pts);
    b["stats"] = stats;

    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "center\n";
        for (const auto& c : lat.centers) os << '"' << bs::point_to_json(c).dump() << "\"\n";
        os << "count," << lat.centers.size() << '\n';
        os << "min_separation," << csv_num(lat.min_pairwise_separation()) << '\n';
        os << "covering_radius," << csv_num(bs::covering_radius(lat, pts));
        body = os.str();
    } else {
        body = dump_body(b);
    }
    emit(ctx, "lattice", config, body);
    return 0;
}

int run_atomic(const Ctx& ctx, const std::string& darg, const std::string& sarg) {
    json dj = payload(darg, "--data");
    json sj = payload(sarg, "--space");
    bs::AtomicSumData data = bs::parse_atomic_data(dj);
    bs::SpaceParams params = bs::parse_space_params(sj);
    double threshold = bs::atomic_b_threshold(params);
    bs::NormEstimate est = bs::atomic_carleson_check(data, params, ctx.grid());

    json config = base_config(ctx, "atomic");
    config["data"] = dj;
    config["space"] = sj;
    json b;
    b["b"] = jn(data.b);
    b["b_threshold"] = jn(threshold);
    b["admissible"] = data.b > threshold;
    b["atoms"] = data.atoms.size();
    b["carleson"] = estimate_json(est);
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        os << "b," << csv_num(data.b) << '\n';
        os << "b_threshold," << csv_num(threshold) << '\n';
        os << "admissible," << (data.b > threshold ? "true" : "false") << '\n';
        os << "atoms," << data.atoms.size() << '\n';
        os << "carleson_value," << csv_num(est.value);
        body = os.str();
    } else {
        body = dump_body(b);
    }
    emit(ctx, "atomic", config, body);
    return est.reliable ? 0 : 3;
}

int run_carleson(const Ctx& ctx, const std::string& marg, double exponent,
                 const std::string& mode) {
    json mj = payload(marg, "--measure");
    bs::CarlesonMeasure mu = bs::parse_measure(mj);
    bs::CarlesonMode cm;
    if (mode == "tent_sup") cm = bs::CarlesonMode::TentSup;
    else if (mode == "moebius_sup") cm = bs::CarlesonMode::MoebiusSup;
    else throw bs::BallError("invalid-params", "--mode must be tent_sup or moebius_sup");
    bs::NormEstimate est = bs::carleson_norm(mu, exponent, cm, ctx.grid(), ctx.budget, ctx.seed);

    json config = base_config(ctx, "carleson");
    config["measure"] = mj;
    config["exponent"] = jn(exponent);
    config["mode"] = mode;
    json b;
    b["mode"] = mode;
    b["exponent"] = jn(exponent);
    b["estimate"] = estimate_json(est);
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "key,value\n";
        os << "mode," << mode << '\n';
        os << "exponent," << csv_num(exponent) << '\n';
        os << "value," << csv_num(est.value) << '\n';
        os << "std_error," << csv_num(est.std_error) << '\n';
        os << "reliable," << (est.reliable ? "true" : "false");
        body = os.str();
    } else {
        body = dump_body(b);
    }
    emit(ctx, "carleson", config, body);
    return est.reliable ? 0 : 3;
}

int run_distance(const Ctx& ctx, const std::string& farg, const std::string& sarg,
                 const std::string& which_name, const std::string& eps_arg) {
    json fj = payload(farg, "--function");
    json sj = payload(sarg, "--space");
    bs::HoloFn f = bs::parse_function(fj);
    bs::SpaceParams params = bs::parse_space_params(sj);
    bs::DistanceKind which = bs::parse_distance_kind(which_name);
    std::vector<double> eps;
    if (!eps_arg.empty()) eps = parse_list(eps_arg, "--eps");
    bs::DistanceResult res =
        bs::distance_estimate(f, params, which, eps, ctx.budget, ctx.seed, ctx.grid());

    json config = base_config(ctx, "distance");
    config["function"] = fj;
    config["space"] = sj;
    config["which"] = which_name;
    if (!eps_arg.empty()) config["eps"] = eps_arg;

    json b;
    b["which"] = which_name;
    json grid = json::array(), trace = json::array();
    for (double e : res.trace.eps) grid.push_back(jn(e));
    for (double v : res.trace.estimate) trace.push_back(jn(v));
    b["epsilon_grid"] = grid;
    b["carleson_trace"] = trace;
    b["cap"] = jn(res.trace.cap);
    b["level_norm"] = jn(res.trace.level_norm);
    b["transition_interval"] = json::array({jn(res.trace.lo), jn(res.trace.hi)});
    b["bracketed"] = res.trace.bracketed;
    b["value"] = jn(res.value);
    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "eps,estimate\n";
        for (std::size_t j = 0; j < res.trace.eps.size(); ++j)
            os << csv_num(res.trace.eps[j]) << ',' << csv_num(res.trace.estimate[j]) << '\n';
        os << "value," << csv_num(res.value) << '\n';
        os << "interval," << csv_num(res.trace.lo) << ',' << csv_num(res.trace.hi);
        body = os.str();
    } else {
        body = dump_body(b);
    }
    emit(ctx, "distance", config, body);
    return 0;
}

int run_profile(const Ctx& ctx, const std::string& farg, const std::string& sarg,
                const std::string& radii_arg, bool korenblum) {
    json fj = payload(farg, "--function");
    json sj = payload(sarg, "--space");
    bs::HoloFn f = bs::parse_function(fj);

    json config = base_config(ctx, "profile");
    config["function"] = fj;
    config["space"] = sj;
    config["korenblum"] = korenblum;
    if (!radii_arg.empty()) config["radii"] = radii_arg;

    std::string body;
    json b;
    if (korenblum) {
        bs::SpaceParams params = bs::parse_space_params(sj);
        std::vector<double> radii = radii_arg.empty()
                                        ? std::vector<double>{0.5, 0.7, 0.8, 0.9, 0.95}
                                        : parse_list(radii_arg, "--radii");
        bs::KorenblumFit fit = bs::korenblum_profile(params, f, radii, ctx.budget, ctx.seed);
        if (ctx.format == "csv") {
            std::ostringstream os;
            os << "r,norm_value,reliable\n";
            for (const auto& row : fit.rows)
                os << csv_num(row.r) << ',' << csv_num(row.norm_value) << ','
                   << (row.reliable ? "true" : "false") << '\n';
            os << "fit," << csv_num(fit.slope) << ',' << csv_num(fit.intercept) << ','
               << csv_num(fit.bound_exponent);
            body = os.str();
        } else {
            json rows = json::array();
            for (const auto& row : fit.rows) {
                json rj;
                rj["r"] = jn(row.r);
                rj["norm_value"] = jn(row.norm_value);
                rj["reliable"] = row.reliable;
                rows.push_back(rj);
            }
            b["rows"] = rows;
            b["slope"] = jn(fit.slope);
            b["intercept"] = jn(fit.intercept);
            b["bound_exponent"] = jn(fit.bound_exponent);
            b["reliable"] = fit.reliable;
            body = dump_body(b);
        }
    } else {
        bs::SpaceSpec space = bs::parse_space(sj);
        std::vector<double> radii = radii_arg.empty()
                                        ? std::vector<double>{0.0, 0.3, 0.6, 0.8, 0.9, 0.95, 0.99}
                                        : parse_list(radii_arg, "--radii");
        auto rows = bs::decay_profile(space, f, radii, ctx.budget, ctx.seed);
        if (ctx.format == "csv") {
            std::ostringstream os;
            os << "radius,value,std_error\n";
            for (std::size_t j = 0; j < rows.size(); ++j) {
                os << csv_num(rows[j].radius) << ',' << csv_num(rows[j].value) << ','
                   << csv_num(rows[j].std_error);
                if (j + 1 < rows.size()) os << '\n';
            }
            body = os.str();
        } else {
            json rj = json::array();
            for (const auto& row : rows) {
                json r;
                r["radius"] = jn(row.radius);
                r["value"] = jn(row.value);
                r["std_error"] = jn(row.std_error);
                rj.push_back(r);
            }
            b["rows"] = rj;
            body = dump_body(b);
        }
    }
    emit(ctx, "profile", config, body);
    return 0;
}

int run_equivalence(const Ctx& ctx, const std::string& sarg, const std::string& farg,
                    const std::string& forms_arg, int count, int degree) {
    json sj = payload(sarg, "--space");
    bs::SpaceParams params = bs::parse_space_params(sj);

    std::vector<bs::NForm> forms;
    std::string fa = forms_arg.empty() ? "I1,I2,I3,I4,I5" : forms_arg;
    {
        std::stringstream ss(fa);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.size() == 2 && tok[0] == 'I' && tok[1] >= '1' && tok[1] <= '5')
                forms.push_back(bs::NForm(tok[1] - '1'));
            else
                throw bs::BallError("invalid-params", "--forms: expected I1..I5, got '" + tok + "'");
        }
    }

    std::vector<std::pair<std::string, bs::HoloFn>> fns;
    json fj;
    if (!farg.empty()) {
        fj = payload(farg, "--function");
        fns.push_back({fn_id(fj), bs::parse_function(fj)});
    } else {
        for (int j = 0; j < count; ++j)
            fns.push_back({"poly-" + std::to_string(j), random_poly(params.n, degree, ctx.seed, j)});
    }

    json config = base_config(ctx, "equivalence");
    config["space"] = sj;
    config["forms"] = fa;
    if (!farg.empty()) config["function"] = fj;
    else {
        config["count"] = count;
        config["degree"] = degree;
    }

    struct Row {
        std::string fn, form;
        double value, ratio;
        bool reliable;
    };
    std::vector<Row> rows;
    bool any_reliable = false;
    for (const auto& [name, f] : fns) {
        double base = 0.0;
        for (std::size_t fi = 0; fi < forms.size(); ++fi) {
            bs::SpaceSpec space = bs::SpaceSpec::N_space(params, forms[fi]);
            bs::NormEstimate est = bs::norm(space, f, ctx.budget, ctx.seed, ctx.grid());
            if (fi == 0) base = est.value;
            double ratio = base > 0.0 ? est.value / base : 0.0;
            rows.push_back({name, "I" + std::to_string(int(forms[fi]) + 1), est.value, ratio,
                            est.reliable});
            any_reliable = any_reliable || est.reliable;
        }
    }

    std::string body;
    if (ctx.format == "csv") {
        std::ostringstream os;
        os << "function,form,value,ratio_to_first,reliable\n";
        for (std::size_t j = 0; j < rows.size(); ++j) {
            os << rows[j].fn << ',' << rows[j].form << ',' << csv_num(rows[j].value) << ','
               << csv_num(rows[j].ratio) << ',' << (rows[j].reliable ? "true" : "false");
            if (j + 1 < rows.size()) os << '\n';
        }
        body = os.str();
    } else {
        json b;
        json rj = json::array();
        for (const auto& row : rows) {
            json r;
            r["function"] = row.fn;
            r["form"] = row.form;
            r["value"] = jn(row.value);
            r["ratio_to_first"] = jn(row.ratio);
            r["reliable"] = row.reliable;
            rj.push_back(r);
        }
        b["rows"] = rj;
        body = dump_body(b);
    }
    emit(ctx, "equivalence", config, body);
    return any_reliable ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> known = {"norm",     "membership", "gap",
                                            "lattice",  "atomic",     "carleson",
                                            "distance", "profile",    "equivalence"};
    if (argc >= 2 && argv[1][0] != '-') {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == argv[1];
        if (!ok) {
            std::cerr << "unknown command '" << argv[1] << "'\nusage: ballspace <command> [options]\n"
                      << "commands: norm membership gap lattice atomic carleson distance profile equivalence\n";
            return 64;
        }
    }

    CLI::App app{"ball function-space calculator"};
    app.require_subcommand(1);
    Ctx ctx;
    std::string radii_opt;
    app.add_option("--seed", ctx.seed, "RNG seed (default 12345)");
    app.add_option("--budget", ctx.budget, "sample budget (default 20000)");
    app.add_option("--grid-dirs", ctx.grid_dirs, "sup-grid direction count (0 = auto)");
    app.add_option("--grid-radii", radii_opt, "comma-separated sup-grid radii");
    app.add_option("--format", ctx.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", ctx.out, "write the report to this file");
    app.add_flag("--quiet", ctx.quiet, "suppress stdout");
    app.add_option("--threads", ctx.threads, "worker thread cap");

    std::string farg, sarg, darg, marg, which = "d2", mode = "tent_sup", eps_arg, radii_arg,
                                       forms_arg;
    bool hardy = false, korenblum = false;
    double alpha = 0.0, beta = 0.0, exponent = 0.0, r = 0.5, cap = 0.995;
    int n = 1, probes = 2000, count = 10, degree = 4;

    auto* c_norm = app.add_subcommand("norm", "norm estimate");
    c_norm->add_option("--function", farg)->required();
    c_norm->add_option("--space", sarg)->required();

    auto* c_mem = app.add_subcommand("membership", "membership ladder");
    c_mem->add_option("--function", farg)->required();
    c_mem->add_option("--space", sarg)->required();

    auto* c_gap = app.add_subcommand("gap", "Hadamard gap verdicts");
    c_gap->add_option("--function", farg)->required();
    c_gap->add_option("--space", sarg);
    c_gap->add_flag("--hardy", hardy);
    c_gap->add_option("--alpha", alpha);
    c_gap->add_option("--beta", beta);
    c_gap->add_option("--exponent", exponent);

    auto* c_lat = app.add_subcommand("lattice", "Bergman-metric lattice");
    c_lat->add_option("--n", n);
    c_lat->add_option("--r", r)->required();
    c_lat->add_option("--radius-cap", cap);
    c_lat->add_option("--probes", probes);

    auto* c_atomic = app.add_subcommand("atomic", "atomic Carleson test");
    c_atomic->add_option("--data", darg)->required();
    c_atomic->add_option("--space", sarg)->required();

    auto* c_car = app.add_subcommand("carleson", "Carleson norm of a measure");
    c_car->add_option("--measure", marg)->required();
    c_car->add_option("--exponent", exponent)->required();
    c_car->add_option("--mode", mode);

    auto* c_dist = app.add_subcommand("distance", "distance-to-subspace estimate");
    c_dist->add_option("--function", farg)->required();
    c_dist->add_option("--space", sarg)->required();
    c_dist->add_option("--which", which);
    c_dist->add_option("--eps", eps_arg);

    auto* c_prof = app.add_subcommand("profile", "decay / dilation profile");
    c_prof->add_option("--function", farg)->required();
    c_prof->add_option("--space", sarg)->required();
    c_prof->add_option("--radii", radii_arg);
    c_prof->add_flag("--korenblum", korenblum);

    auto* c_eq = app.add_subcommand("equivalence", "norm-form ratio table");
    c_eq->add_option("--space", sarg)->required();
    c_eq->add_option("--function", farg);
    c_eq->add_option("--forms", forms_arg);
    c_eq->add_option("--count", count);
    c_eq->add_option("--degree", degree);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!radii_opt.empty()) ctx.grid_radii = parse_list(radii_opt, "--grid-radii");
        if (ctx.threads <= 0) {
            if (const char* env = std::getenv("BALLSPACE_THREADS")) ctx.threads = std::atoi(env);
        }
        if (ctx.threads > 0) bs::set_threads(ctx.threads);
        if (ctx.budget < 1) throw bs::BallError("invalid-params", "--budget must be >= 1");

        if (c_norm->parsed()) return run_norm(ctx, farg, sarg);
        if (c_mem->parsed()) return run_membership(ctx, farg, sarg);
        if (c_gap->parsed()) return run_gap(ctx, farg, sarg, hardy, alpha, beta, exponent);
        if (c_lat->parsed()) return run_lattice(ctx, n, r, cap, probes);
        if (c_atomic->parsed()) return run_atomic(ctx, darg, sarg);
        if (c_car->parsed()) return run_carleson(ctx, marg, exponent, mode);
        if (c_dist->parsed()) return run_distance(ctx, farg, sarg, which, eps_arg);
        if (c_prof->parsed()) return run_profile(ctx, farg, sarg, radii_arg, korenblum);
        if (c_eq->parsed()) return run_equivalence(ctx, sarg, farg, forms_arg, count, degree);
        std::cerr << "usage: ballspace <command> [options]\n";
        return 64;
    } catch (const bs::BallError& e) {
        std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
