#include "ballspace/dsl.hpp"

#include <cmath>

namespace ballspace {

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
    throw BallError("dsl-error", ctx + ": " + what);
}

const json& need(const json& j, const char* field, const std::string& ctx) {
    if (!j.is_object()) fail(ctx, "expected an object");
    auto it = j.find(field);
    if (it == j.end()) fail(ctx, std::string("missing field '") + field + "'");
    return *it;
}

double need_num(const json& j, const char* field, const std::string& ctx) {
    const json& v = need(j, field, ctx);
    if (!v.is_number()) fail(ctx + "." + field, "expected a number");
    return v.get<double>();
}

double opt_num(const json& j, const char* field, double dflt) {
    if (!j.is_object() || !j.contains(field)) return dflt;
    return j.at(field).get<double>();
}

int need_int(const json& j, const char* field, const std::string& ctx) {
    const json& v = need(j, field, ctx);
    if (!v.is_number_integer()) fail(ctx + "." + field, "expected an integer");
    return v.get<int>();
}

int opt_int(const json& j, const char* field, int dflt) {
    if (!j.is_object() || !j.contains(field)) return dflt;
    return j.at(field).get<int>();
}

cplx parse_cplx_pair(const json& v, const std::string& ctx) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    fail(ctx, "expected a number or an [re, im] pair");
}

HoloFn parse_poly(const json& spec, const std::string& ctx) {
    if (!spec.is_array()) fail(ctx, "expected an array of [[exponents], re, im] entries");
    PolyCoeffs coeffs;
    int n = -1;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        std::string ec = ctx + "[" + std::to_string(k) + "]";
        const json& entry = spec[k];
        if (!entry.is_array() || entry.size() != 3) fail(ec, "expected [[exponents], re, im]");
        const json& ej = entry[0];
        if (!ej.is_array() || ej.empty()) fail(ec, "exponents must be a nonempty array");
        std::vector<int64_t> e;
        for (const auto& v : ej) {
            if (!v.is_number_integer() || v.get<int64_t>() < 0)
                fail(ec, "exponents must be integers >= 0");
            e.push_back(v.get<int64_t>());
        }
        if (n < 0) n = int(e.size());
        if (int(e.size()) != n) fail(ec, "all exponent tuples must share one length");
        if (!entry[1].is_number() || !entry[2].is_number()) fail(ec, "re and im must be numbers");
        coeffs[MultiIndex(e)] += cplx(entry[1].get<double>(), entry[2].get<double>());
    }
    if (n < 0) fail(ctx, "empty polynomial needs at least one term");
    return HoloFn::polynomial(n, std::move(coeffs));
}

HoloFn parse_lacunary(const json& spec, const std::string& ctx) {
    int n = opt_int(spec, "n", 1);
    int axis = opt_int(spec, "axis", 0);
    if (axis < 0 || axis >= n) fail(ctx + ".axis", "axis out of range");

    std::vector<int64_t> freqs;
    const json& fj = need(spec, "freqs", ctx);
    if (fj.is_string()) {
        if (fj.get<std::string>() != "2^k")
            fail(ctx + ".freqs", "unknown generator '" + fj.get<std::string>() + "'");
        int kmax = need_int(spec, "kmax", ctx);
        if (kmax < 1 || kmax > 40) fail(ctx + ".kmax", "kmax must be in [1,40]");
        for (int k = 0; k < kmax; ++k) freqs.push_back(int64_t(1) << k);
    } else if (fj.is_array()) {
        for (const auto& v : fj) {
            if (!v.is_number_integer()) fail(ctx + ".freqs", "frequencies must be integers");
            freqs.push_back(v.get<int64_t>());
        }
    } else {
        fail(ctx + ".freqs", "expected \"2^k\" or an integer array");
    }

    std::vector<cplx> coeffs;
    const json& cj = need(spec, "coeffs", ctx);
    if (cj.is_string()) {
        if (cj.get<std::string>() != "2^(k*t)")
            fail(ctx + ".coeffs", "unknown generator '" + cj.get<std::string>() + "'");
        double t = need_num(spec, "t", ctx);
        for (std::size_t k = 0; k < freqs.size(); ++k)
            coeffs.push_back(std::exp2(double(k) * t));
    } else if (cj.is_array()) {
        for (std::size_t k = 0; k < cj.size(); ++k)
            coeffs.push_back(parse_cplx_pair(cj[k], ctx + ".coeffs[" + std::to_string(k) + "]"));
    } else {
        fail(ctx + ".coeffs", "expected \"2^(k*t)\" or an array");
    }
    if (coeffs.size() != freqs.size())
        fail(ctx, "coeffs and freqs must have matching length");

    LacunaryData data;
    data.n = n;
    data.freqs = std::move(freqs);
    for (const auto& c : coeffs) {
        LacunaryBlock b;
        b.axis = axis;
        b.coeff = c;
        data.blocks.push_back(std::move(b));
    }
    return HoloFn::lacunary(std::move(data));
}

HoloFn parse_kernel(const json& spec, const std::string& ctx) {
    const json& tj = need(spec, "type", ctx);
    if (!tj.is_string()) fail(ctx + ".type", "expected a string");
    std::string type = tj.get<std::string>();
    Point w = parse_point(need(spec, "w", ctx), ctx + ".w");
    if (type == "K") return HoloFn::kernel_K(w, need_num(spec, "p", ctx), need_num(spec, "q", ctx));
    if (type == "J")
        return HoloFn::kernel_J(w, need_num(spec, "p", ctx), need_num(spec, "alpha", ctx),
                                need_num(spec, "b", ctx));
    if (type == "L") return HoloFn::kernel_L(w, need_num(spec, "l", ctx));
    if (type == "atom") return HoloFn::atom(w, need_num(spec, "b", ctx));
    fail(ctx + ".type", "unknown kernel type '" + type + "'");
}

}  // namespace

Point parse_point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty()) fail(ctx, "expected a nonempty coordinate array");
    std::vector<cplx> z;
    if (j[0].is_number()) {
        for (const auto& v : j) {
            if (!v.is_number()) fail(ctx, "mixed coordinate styles");
            z.push_back(cplx(v.get<double>(), 0.0));
        }
    } else {
        for (std::size_t k = 0; k < j.size(); ++k) {
            const json& v = j[k];
            if (!v.is_array() || v.size() != 2)
                fail(ctx + "[" + std::to_string(k) + "]", "expected an [re, im] pair");
            z.push_back(cplx(v[0].get<double>(), v[1].get<double>()));
        }
    }
    return Point{std::move(z)};
}

HoloFn parse_function(const json& j) {
    if (!j.is_object()) fail("function", "expected an object");
    if (j.contains("poly")) return parse_poly(j.at("poly"), "function.poly");
    if (j.contains("lacunary")) return parse_lacunary(j.at("lacunary"), "function.lacunary");
    if (j.contains("kernel")) return parse_kernel(j.at("kernel"), "function.kernel");
    if (j.contains("atomic")) {
        AtomicSumData data = parse_atomic_data(j.at("atomic"));
        return atomic_synthesize(data);
    }
    if (j.contains("dilate")) {
        const json& d = j.at("dilate");
        double r = need_num(d, "r", "function.dilate");
        return dilate(parse_function(need(d, "of", "function.dilate")), r);
    }
    fail("function", "expected one of poly | lacunary | kernel | atomic | dilate");
}

SpaceParams parse_space_params(const json& j) {
    std::string ctx = "space";
    SpaceParams pr(need_int(j, "n", ctx), need_num(j, "p", ctx), need_num(j, "q", ctx),
                   need_num(j, "s", ctx));
    return pr;
}

SpaceSpec parse_space(const json& j) {
    std::string ctx = "space";
    const json& sj = need(j, "space", ctx);
    if (!sj.is_string()) fail(ctx + ".space", "expected a string");
    std::string name = sj.get<std::string>();
    if (name == "N") {
        NForm form = NForm::I1;
        if (j.contains("form")) {
            std::string fs = j.at("form").get<std::string>();
            if (fs.size() == 2 && fs[0] == 'I' && fs[1] >= '1' && fs[1] <= '5')
                form = NForm(fs[1] - '1');
            else
                fail(ctx + ".form", "expected I1..I5");
        }
        return SpaceSpec::N_space(parse_space_params(j), form);
    }
    if (name == "Nstar") return SpaceSpec::Nstar_space(parse_space_params(j));
    if (name == "BergmanType")
        return SpaceSpec::bergman_type(need_int(j, "n", ctx), need_num(j, "l", ctx));
    if (name == "Bergman")
        return SpaceSpec::bergman(need_int(j, "n", ctx), need_num(j, "p", ctx),
                                  need_num(j, "alpha", ctx));
    if (name == "Bloch") return SpaceSpec::bloch(need_int(j, "n", ctx), need_num(j, "alpha", ctx));
    if (name == "WeightedHardy")
        return SpaceSpec::weighted_hardy(need_int(j, "n", ctx), need_num(j, "alpha", ctx),
                                         need_num(j, "beta", ctx));
    if (name == "Tent")
        return SpaceSpec::tent_space(need_int(j, "n", ctx), need_num(j, "m", ctx),
                                     need_num(j, "l", ctx));
    fail(ctx + ".space", "unknown space '" + name + "'");
}

CarlesonMeasure parse_measure(const json& j) {
    std::string ctx = "measure";
    int n = need_int(j, "n", ctx);
    const json& aj = need(j, "atoms", ctx);
    if (!aj.is_array()) fail(ctx + ".atoms", "expected an array");
    std::vector<std::pair<Point, double>> atoms;
    for (std::size_t k = 0; k < aj.size(); ++k) {
        std::string ec = ctx + ".atoms[" + std::to_string(k) + "]";
        const json& entry = aj[k];
        if (!entry.is_array() || entry.size() != 2) fail(ec, "expected [point, weight]");
        Point a = parse_point(entry[0], ec);
        if (!entry[1].is_number()) fail(ec, "weight must be a number");
        atoms.push_back({std::move(a), entry[1].get<double>()});
    }
    return CarlesonMeasure::from_atoms(n, std::move(atoms));
}

AtomicSumData parse_atomic_data(const json& j) {
    std::string ctx = "atomic";
    AtomicSumData data;
    data.b = need_num(j, "b", ctx);
    const json& aj = need(j, "atoms", ctx);
    if (!aj.is_array()) fail(ctx + ".atoms", "expected an array");
    for (std::size_t k = 0; k < aj.size(); ++k) {
        std::string ec = ctx + ".atoms[" + std::to_string(k) + "]";
        const json& entry = aj[k];
        if (!entry.is_array() || entry.size() != 3) fail(ec, "expected [c_re, c_im, point]");
        if (!entry[0].is_number() || !entry[1].is_number())
            fail(ec, "coefficient parts must be numbers");
        AtomicAtom at;
        at.c = cplx(entry[0].get<double>(), entry[1].get<double>());
        at.a = parse_point(entry[2], ec);
        data.atoms.push_back(std::move(at));
    }
    return data;
}

Lattice parse_lattice(const json& j) {
    std::string ctx = "lattice";
    Lattice lat;
    lat.r = need_num(j, "r", ctx);
    lat.radius_cap = opt_num(j, "radius_cap", 0.995);
    const json& cj = need(j, "centers", ctx);
    if (!cj.is_array()) fail(ctx + ".centers", "expected an array of points");
    for (std::size_t k = 0; k < cj.size(); ++k)
        lat.centers.push_back(parse_point(cj[k], ctx + ".centers[" + std::to_string(k) + "]"));
    lat.n = lat.centers.empty() ? opt_int(j, "n", 1) : lat.centers.front().dim();
    for (const auto& c : lat.centers)
        if (c.dim() != lat.n) fail(ctx + ".centers", "mixed dimensions");
    return lat;
}

json point_to_json(const Point& z) {
    json out = json::array();
    for (const auto& v : z.z) out.push_back(json::array({v.real(), v.imag()}));
    return out;
}

json lattice_to_json(const Lattice& lat) {
    json out;
    out["n"] = lat.n;
    out["r"] = lat.r;
    out["radius_cap"] = lat.radius_cap;
    json centers = json::array();
    for (const auto& c : lat.centers) centers.push_back(point_to_json(c));
    out["centers"] = std::move(centers);
    return out;
}

}  // namespace ballspace
