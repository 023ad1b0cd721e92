#include "k3fg/cli.hpp"

#include "k3fg/charsum.hpp"
#include "k3fg/errors.hpp"
#include "k3fg/fgl.hpp"
#include "k3fg/weil.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

namespace k3fg::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config, hashing, cache.
// ---------------------------------------------------------------------------

void RunConfig::validate() const {
    if (precision < 2) throw std::domain_error("config: precision must be >= 2");
    if (cutoff < 8) throw std::domain_error("config: cutoff must be >= 8");
    if (s_max < 2) throw std::domain_error("config: s_max must be >= 2");
    if (mu_max < 1) throw std::domain_error("config: mu_max must be >= 1");
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config: cannot read " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            while (!s.empty() && isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "precision") precision = std::stol(value);
        else if (key == "cutoff") cutoff = std::stoi(value);
        else if (key == "s_max") s_max = std::stoi(value);
        else if (key == "mu_max") mu_max = std::stol(value);
        else if (key == "cache_dir") cache_dir = value;
        else if (key == "seed") seed = std::stoull(value, nullptr, 0);
        else if (key == "use_cache") use_cache = value == "1" || value == "true";
        else throw std::domain_error("config: unknown key '" + key + "'");
    }
}

void RunConfig::apply_env() {
    if (const char* dir = std::getenv("K3FG_CACHE_DIR")) cache_dir = dir;
}

json RunConfig::to_json() const {
    return json{{"precision", precision}, {"cutoff", cutoff},   {"s_max", s_max},
                {"mu_max", mu_max},       {"cache_dir", cache_dir}, {"seed", seed}};
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

ResultCache::ResultCache(const RunConfig& cfg) : dir(cfg.cache_dir), enabled(cfg.use_cache) {}

static std::string cache_path(const std::string& dir, const std::string& key) {
    std::ostringstream os;
    os << dir << "/" << std::hex << fnv1a(key) << ".json";
    return os.str();
}

bool ResultCache::lookup(const std::string& key, json& out) const {
    if (!enabled) return false;
    std::ifstream in(cache_path(dir, key));
    if (!in) return false;
    try {
        in >> out;
    } catch (...) {
        return false;
    }
    return true;
}

void ResultCache::store(const std::string& key, const json& doc) const {
    if (!enabled) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(cache_path(dir, key));
    if (out) out << doc.dump() << "\n";
}

// ---------------------------------------------------------------------------
// JSON views of domain values.
// ---------------------------------------------------------------------------

namespace {

json padic_json(const PadicInt& x) {
    return json{{"value", x.value().get_str()}, {"precision", x.precision()}, {"p", x.p()}};
}

json fp_poly_json(const FpPoly& f) {
    json coeffs = json::array();
    for (auto c : f.coeffs()) coeffs.push_back(c);
    return json{{"p", f.p()}, {"coeffs", coeffs}};
}

json fp_factorization_json(const FpFactorization& fac) {
    json factors = json::array();
    for (const auto& f : fac.factors)
        factors.push_back(json{{"poly", fp_poly_json(f.poly)},
                               {"degree", f.poly.degree()},
                               {"multiplicity", f.multiplicity}});
    return json{{"unit", fac.unit}, {"factors", factors}, {"seed", fac.seed}};
}

json height_report_json(const HeightReport& r) {
    json vals = json::array();
    for (const auto& v : r.valuations)
        vals.push_back(json{{"s", v.s},
                            {"v_lower", v.v_lower == LONG_MAX ? json("infinity") : json(v.v_lower)},
                            {"exact", v.exact},
                            {"required", v.required}});
    json evidence{{"a_p_mod_p", r.a_p_residue}, {"valuation_table", vals}};
    if (r.v2_residue) evidence["v2_quotient_mod_p"] = *r.v2_residue;
    json out{{"classification", height_class_name(r.cls)},
             {"p", r.p},
             {"provenance", r.provenance},
             {"evidence", evidence}};
    if (r.cls == HeightClass::SupersingularUpTo) out["bound"] = r.s_bound;
    return out;
}

json family_descriptor_json(const K3FamilySpec& spec) {
    json monomials = json::array();
    for (const auto& row : spec.monomials) monomials.push_back(row);
    json out{{"id", spec.name},
             {"stride", spec.stride},
             {"parameters", spec.param_names},
             {"exponent_matrix", monomials},
             {"generator", spec.generator},
             {"zero_mod", spec.zero_mod}};
    if (spec.has_lambda) {
        out["lambda_multiplier"] = spec.lambda_multiplier;
        out["lambda_monomial"] = spec.lambda_monomial;
    }
    return out;
}

json unit_root_json(const UnitRootReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses)
        witnesses.push_back(json{{"mu", w.mu}, {"s", w.s}, {"vacuous", w.vacuous}});
    return json{{"alpha", padic_json(r.alpha.element)},
                {"alpha_mod_p", r.alpha.witness},
                {"s_max", r.s_max},
                {"mu_max", r.mu_max},
                {"witnesses", witnesses}};
}

FamilyId parse_family(const std::string& name) {
    auto id = family_by_name(name);
    if (!id) throw std::domain_error("unknown family '" + name + "'");
    return *id;
}

FamilyInstance make_instance(FamilyId id, unsigned long p, const std::vector<long>& c, long lambda) {
    std::vector<BigInt> cc;
    for (long x : c) cc.emplace_back(x);
    return FamilyInstance::make(id, p, cc, BigInt(lambda));
}

void require_prime(unsigned long p) {
    if (!is_prime(p)) throw std::domain_error("p = " + std::to_string(p) + " is not prime");
}

void require_family_prime(FamilyId id, unsigned long p) {
    require_prime(p);
    const K3FamilySpec& spec = family_spec(id);
    unsigned long min_p = 5;                             // quartics assume p != 2, 3
    if (id == FamilyId::JacobiQuartic) min_p = 3;        // char p > 2
    if (spec.stride == 2) min_p = 5;                     // double sextics assume p > 3
    if (id == FamilyId::QuasiDiagonalSextic) min_p = 7;  // and this one p > 5
    if (p < min_p)
        throw std::domain_error("p = " + std::to_string(p) + " is outside the support of " +
                                spec.name);
}

std::uint64_t descriptor_hash(FamilyId id) {
    return fnv1a(family_descriptor_json(family_spec(id)).dump());
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::vector<BigInt> parse_int_coeffs(const std::vector<std::string>& raw) {
    std::vector<BigInt> out;
    for (const auto& s : raw) out.emplace_back(s);
    return out;
}

} // namespace

json envelope(const std::string& command, json params, const RunConfig& cfg, json result,
              json evidence, double elapsed_ms) {
    return json{{"schema", 1},
                {"command", command},
                {"params", std::move(params)},
                {"seed", cfg.seed},
                {"result", std::move(result)},
                {"evidence", std::move(evidence)},
                {"timing", json{{"elapsed_ms", elapsed_ms}}}};
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

json cmd_families(const RunConfig& cfg) {
    Timer t;
    json out = json::array();
    for (const auto& spec : family_catalog()) {
        json d = family_descriptor_json(spec);
        d["descriptor_hash"] = descriptor_hash(spec.id);
        d["smoothness_checked"] = false;
        out.push_back(d);
    }
    return envelope("families", json::object(), cfg, out, json::object(), t.ms());
}

json cmd_log_coeffs(const RunConfig& cfg, const std::string& family, unsigned long p,
                    const std::vector<long>& c, long lambda, unsigned long m_from,
                    unsigned long m_to) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    if (m_to < m_from || m_to - m_from > 5000) throw std::domain_error("bad m range");
    FamilyInstance inst = make_instance(id, p, c, lambda);
    json rows = json::array();
    for (unsigned long m = m_from; m <= m_to; ++m) {
        PadicInt v = family_log_coeff(inst, m, cfg.precision);
        rows.push_back(json{{"m", m},
                            {"tau_exponent", inst.spec->stride * m + 1},
                            {"value", v.value().get_str()}});
    }
    json params{{"family", family}, {"p", p},           {"c", c},
                {"lambda", lambda}, {"m_from", m_from}, {"m_to", m_to},
                {"precision", cfg.precision}};
    return envelope("log-coeffs", params, cfg, rows,
                    json{{"smoothness_checked", false}}, t.ms());
}

json cmd_group_law(const RunConfig& cfg, const std::string& family, unsigned long p,
                   const std::vector<long>& c, long lambda) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    FamilyInstance inst = make_instance(id, p, c, lambda);
    auto log = FormalGroupLogarithm::from_family(inst, cfg.precision);
    GroupLaw law = build_group_law(log, cfg.cutoff);
    bool assoc = group_law_associative(law);
    json coeffs = json::array();
    for (int i = 0; i <= law.cutoff; ++i)
        for (int j = i; i + j <= law.cutoff; ++j) {
            if (law.g.coeff(i, j).value() == 0) continue;
            coeffs.push_back(json{{"i", i}, {"j", j}, {"value", law.g.coeff(i, j).value().get_str()}});
        }
    json result{{"cutoff", law.cutoff},
                {"precision", law.precision},
                {"coefficients", coeffs},
                {"identity", group_law_identity_ok(law)},
                {"commutative", group_law_commutative(law)},
                {"associative", assoc}};
    json params{{"family", family}, {"p", p},      {"c", c},
                {"lambda", lambda}, {"cutoff", cfg.cutoff}, {"precision", cfg.precision}};
    return envelope("group-law", params, cfg, result, json{{"smoothness_checked", false}}, t.ms());
}

json cmd_height(const RunConfig& cfg, const std::string& family, unsigned long p,
                const std::vector<long>& c, long lambda) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    FamilyInstance inst = make_instance(id, p, c, lambda);
    auto log = FormalGroupLogarithm::from_family(inst, cfg.s_max + 1);
    int s_eff = cfg.s_max;
    bool lowered = false;
    while (s_eff > 2) { // keep the largest screened index near desk scale
        double idx = std::pow(static_cast<double>(p), s_eff);
        if (idx <= 2e7) break;
        --s_eff;
        lowered = true;
    }
    HeightReport rep = height_classify(log, s_eff);
    json result = height_report_json(rep);
    if (lowered) result["warning"] = "s_max lowered to " + std::to_string(s_eff) + " for this prime";
    json params{{"family", family}, {"p", p}, {"c", c}, {"lambda", lambda}, {"s_max", s_eff}};
    return envelope("height", params, cfg, result, result["evidence"], t.ms());
}

json cmd_v_polys(const RunConfig& cfg, const std::string& family, unsigned long p) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    VPolynomials v = v_polynomials(id, p);
    FpFactorization fac = fp_factor(v.v2, cfg.seed);
    FpPoly g = fp_gcd(v.v1.is_zero() ? FpPoly::constant(p, 1) : v.v1, v.v2);
    json result{{"v1", fp_poly_json(v.v1)},
                {"v2", fp_poly_json(v.v2)},
                {"v2_factorization", fp_factorization_json(fac)},
                {"gcd_degree", g.degree()},
                {"coprime", g.degree() == 0}};
    json params{{"family", family}, {"p", p}};
    return envelope("v-polys", params, cfg, result, json::object(), t.ms());
}

json cmd_unit_root(const RunConfig& cfg, const std::string& family, unsigned long p,
                   const std::vector<long>& c, long lambda) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    FamilyInstance inst = make_instance(id, p, c, lambda);
    auto log = FormalGroupLogarithm::from_family(inst, cfg.s_max + 2);
    UnitRootReport rep = unit_root_sb(log, cfg.s_max, cfg.mu_max);
    json params{{"family", family}, {"p", p},          {"c", c},
                {"lambda", lambda}, {"s_max", cfg.s_max}, {"mu_max", cfg.mu_max}};
    return envelope("unit-root", params, cfg, unit_root_json(rep), json::object(), t.ms());
}

json cmd_congruence_check(const RunConfig& cfg, const std::string& family, unsigned long p,
                          const std::vector<long>& c, long lambda) {
    json doc = cmd_unit_root(cfg, family, p, c, lambda);
    doc["command"] = "congruence-check";
    return doc;
}

json cmd_gamma_check(const RunConfig& cfg, unsigned long p, long precision) {
    Timer t;
    require_prime(p);
    if (p % 4 != 1) throw std::domain_error("gamma-check needs p = 1 mod 4");
    auto log = FormalGroupLogarithm::from_family(FamilyInstance::make(FamilyId::JacobiQuartic, p),
                                                 precision);
    UnitRootReport rep = unit_root_sb(log, static_cast<int>(precision) - 1, 1);
    PadicInt gamma_side = padic_gamma(BigRational(1) / 4, p, precision).pow(4) *
                          padic_gamma(BigRational(1) / 2, p, precision).pow(2).inverse();
    bool equal = rep.alpha.element == gamma_side;
    json result{{"alpha_chain", padic_json(rep.alpha.element)},
                {"gamma_value", padic_json(gamma_side)},
                {"equal", equal}};
    json params{{"p", p}, {"precision", precision}};
    if (!equal)
        throw identity_violation("gamma-check: pi^2 identity failed",
                                 rep.alpha.element.to_string(), gamma_side.to_string());
    return envelope("gamma-check", params, cfg, result, json::object(), t.ms());
}

json cmd_limit_identity(const RunConfig& cfg, const std::string& family, unsigned long p,
                        const std::vector<long>& c, long lambda, long precision) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    std::vector<unsigned long> cres;
    for (long x : c) cres.push_back(static_cast<unsigned long>(((x % static_cast<long>(p)) + p) % p));
    unsigned long lres = static_cast<unsigned long>(((lambda % static_cast<long>(p)) + p) % p);
    LimitIdentityReport rep = limit_identity_check(id, p, cres, lres, precision);
    json result{{"alpha", padic_json(rep.alpha)},
                {"closed_form", padic_json(rep.closed_form)},
                {"equal", rep.equal},
                {"identity", rep.description}};
    json params{{"family", family}, {"p", p}, {"c", c}, {"lambda", lambda}, {"precision", precision}};
    return envelope("limit-identity", params, cfg, result, json::object(), t.ms());
}

json cmd_ss_check(const RunConfig& cfg, const std::string& family, unsigned long p,
                  unsigned long m_bound) {
    Timer t;
    FamilyId id = parse_family(family);
    require_prime(p);
    FamilyInstance inst = make_instance(id, p, {}, 0);
    DivisibilityReport rep = supersingular_divisibility(inst, cfg.s_max, m_bound);
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back(json{{"m", r.m},
                            {"tau_index", r.j},
                            {"required", r.required},
                            {"valuation", r.valuation == LONG_MAX ? json("infinity") : json(r.valuation)}});
    json binom = json::array();
    for (const auto& [s, v] : rep.binomial_rows) binom.push_back(json{{"s", s}, {"valuation", v}});
    json result{{"checked", rep.checked}, {"rows", rows}, {"binomial_rows", binom}, {"all_hold", true}};
    json params{{"family", family}, {"p", p}, {"m_bound", m_bound}, {"s_max", cfg.s_max}};
    return envelope("ss-check", params, cfg, result, json::object(), t.ms());
}

json cmd_newton(const RunConfig& cfg, const std::vector<std::string>& coeffs, unsigned long p) {
    Timer t;
    require_prime(p);
    NewtonPolygonData np = newton_polygon(parse_int_coeffs(coeffs), p);
    json vertices = json::array();
    for (const auto& [i, v] : np.vertices) vertices.push_back(json{{"i", i}, {"v", v}});
    json slopes = json::array();
    for (const auto& [s, m] : np.slopes)
        slopes.push_back(json{{"slope", s.get_str()}, {"multiplicity", m}});
    json result{{"vertices", vertices}, {"slopes", slopes}};
    json params{{"coeffs", coeffs}, {"p", p}};
    return envelope("newton", params, cfg, result, json::object(), t.ms());
}

json cmd_slope_factor(const RunConfig& cfg, const std::vector<std::string>& coeffs, unsigned long p,
                      int a, long precision) {
    Timer t;
    require_prime(p);
    WeilPoly f(parse_int_coeffs(coeffs), p, a);
    SlopeFactorization sf = slope_factorize(f, precision);
    auto part = [](const std::vector<PadicInt>& v) {
        json out = json::array();
        for (const auto& x : v) out.push_back(x.value().get_str());
        return out;
    };
    json segments = json::array();
    for (const auto& seg : sf.segments) {
        json sc = json::array();
        for (const auto& x : seg.coeffs) sc.push_back(x.value().get_str());
        BigRational normalized = seg.slope / BigRational(a);
        segments.push_back(json{{"slope", seg.slope.get_str()},
                                {"normalized_slope", normalized.get_str()},
                                {"coeffs", sc}});
    }
    json result{{"p_lt", part(sf.p_lt)}, {"p_1", part(sf.p_1)},   {"p_gt", part(sf.p_gt)},
                {"h", sf.h},             {"segments", segments},  {"precision", sf.precision}};
    if (static_cast<int>(sf.p_gt.size()) - 1 == sf.h) {
        auto fe = functional_equation_check(sf);
        result["functional_equation"] = json{{"holds", fe.holds}, {"c", fe.c.value().get_str()}};
    }
    json params{{"coeffs", coeffs}, {"p", p}, {"a", a}, {"precision", precision}};
    return envelope("slope-factor", params, cfg, result, json::object(), t.ms());
}

json cmd_power_structure(const RunConfig& cfg, const std::vector<std::string>& coeffs) {
    Timer t;
    PowerStructure ps = power_structure(parse_int_coeffs(coeffs));
    json q = json::array();
    for (const auto& c : ps.q) q.push_back(c.get_str());
    json evidence = json::array();
    for (const auto& [ell, pattern] : ps.evidence)
        evidence.push_back(json{{"prime", ell}, {"factor_degrees", pattern}});
    json result{{"q", q}, {"r", ps.r}, {"irreducibility", ps.verdict}};
    json params{{"coeffs", coeffs}};
    return envelope("power-structure", params, cfg, result, evidence, t.ms());
}

json cmd_r_table(const RunConfig& cfg, unsigned tau, unsigned h) {
    Timer t;
    json result{{"r", possible_r(tau, h)}};
    json params{{"tau", tau}, {"h", h}};
    return envelope("r-table", params, cfg, result, json::object(), t.ms());
}

json cmd_point_count(const RunConfig& cfg, const std::string& family, unsigned long p, int ext,
                     const std::vector<long>& c, long lambda) {
    Timer t;
    FamilyId id = parse_family(family);
    require_prime(p);
    json params{{"family", family}, {"p", p}, {"ext", ext}, {"c", c}, {"lambda", lambda}};
    std::string key = "point-count|" + params.dump() + "|" + std::to_string(cfg.precision) + "|" +
                      std::to_string(cfg.seed) + "|" + std::to_string(descriptor_hash(id));
    ResultCache cache(cfg);
    json cached;
    if (cache.lookup(key, cached)) {
        cached["timing"] = json{{"elapsed_ms", t.ms()}, {"cached", true}};
        return cached;
    }
    FamilyInstance inst = make_instance(id, p, c, lambda);
    PointCountResult r = point_count(inst, ext);
    json result{{"count", r.count.get_str()}, {"q", r.q}, {"convention", r.convention}};
    json doc = envelope("point-count", params, cfg, result, json::object(), t.ms());
    cache.store(key, doc);
    return doc;
}

json cmd_jacobi_sum(const RunConfig& cfg, unsigned long p, unsigned long d, long a, long b) {
    Timer t;
    require_prime(p);
    MultiplicativeCharacter chi(p, d, 1);
    CyclotomicInt j = jacobi_sum(chi.power(a), chi.power(b));
    json coeffs = json::array();
    for (const auto& c : j.coeffs()) coeffs.push_back(c.get_str());
    json embeddings = json::array();
    for (const auto& e : padic_embeddings(j, p, cfg.precision))
        embeddings.push_back(padic_json(e));
    CyclotomicInt norm = j * j.conj();
    json result{{"zeta_order", d},
                {"coeffs", coeffs},
                {"norm", norm.integer_value().get_str()},
                {"padic_embeddings", embeddings}};
    json params{{"p", p}, {"d", d}, {"a", a}, {"b", b}};
    return envelope("jacobi-sum", params, cfg, result, json::object(), t.ms());
}

json cmd_height_scan(const RunConfig& cfg, const std::string& family, unsigned long p,
                     const std::vector<unsigned long>& lambdas) {
    Timer t;
    FamilyId id = parse_family(family);
    require_family_prime(id, p);
    const K3FamilySpec& spec = family_spec(id);
    if (!spec.has_lambda) throw std::domain_error("height-scan needs a pencil family");

    json params{{"family", family}, {"p", p}, {"lambdas", lambdas}, {"s_max", cfg.s_max}};
    std::string key = "height-scan|" + params.dump() + "|" + std::to_string(cfg.precision) + "|" +
                      std::to_string(cfg.seed) + "|" + std::to_string(descriptor_hash(id));
    ResultCache cache(cfg);
    json cached;
    if (cache.lookup(key, cached)) {
        cached["timing"] = json{{"elapsed_ms", t.ms()}, {"cached", true}};
        return cached;
    }

    std::vector<unsigned long> cells = lambdas;
    if (cells.empty())
        for (unsigned long l = 1; l < p; ++l) cells.push_back(l);

    bool quasi = id == FamilyId::QuasiDiagonalQuartic || id == FamilyId::QuasiDiagonalSextic;

    // independent lambda cells run concurrently; rows merged in lambda order
    auto run_cell = [&](unsigned long lambda) -> json {
        FamilyInstance inst = make_instance(id, p, {}, static_cast<long>(lambda));
        auto log = FormalGroupLogarithm::from_family(inst, cfg.s_max + 1);
        HeightReport rep = height_classify(log, cfg.s_max);
        json row{{"lambda", lambda}, {"classification", height_class_name(rep.cls)},
                 {"a_p_mod_p", rep.a_p_residue}};
        if (quasi) row["x_image"] = v_x_image(id, p, lambda);
        return row;
    };

    std::vector<std::future<json>> futures;
    for (unsigned long l : cells)
        futures.push_back(std::async(std::launch::async, run_cell, l));
    json rows = json::array();
    std::map<std::string, int> histogram;
    for (auto& f : futures) {
        json row = f.get();
        histogram[row["classification"].get<std::string>()]++;
        rows.push_back(std::move(row));
    }

    json result{{"rows", rows}, {"histogram", histogram}, {"smoothness_checked", false}};

    if (quasi) {
        VPolynomials v = v_polynomials(id, p);
        json xtable = json::array();
        for (unsigned long x = 1; x < p; ++x)
            xtable.push_back(json{{"x", x}, {"classification", height_class_name(classify_from_v(v, x))}});
        FpPoly g = fp_gcd(v.v1, v.v2);
        result["x_table"] = xtable;
        result["v1"] = fp_poly_json(v.v1);
        result["v2"] = fp_poly_json(v.v2);
        result["gcd_is_one"] = g.degree() == 0;
    }

    json doc = envelope("height-scan", params, cfg, result, json::object(), t.ms());
    cache.store(key, doc);
    return doc;
}

json cmd_q49_scan(const RunConfig& cfg, unsigned long p_max) {
    Timer t;
    if (p_max < 7) throw std::domain_error("q49-scan: p_max must be >= 7");
    json params{{"p_max", p_max}};
    std::string key = "q49-scan|" + params.dump() + "|" + std::to_string(cfg.precision) + "|" +
                      std::to_string(cfg.seed);
    ResultCache cache(cfg);
    json cached;
    if (cache.lookup(key, cached)) {
        cached["timing"] = json{{"elapsed_ms", t.ms()}, {"cached", true}};
        return cached;
    }

    struct Cell {
        FamilyId id;
        unsigned long p;
    };
    std::vector<Cell> cells;
    for (unsigned long p : primes_below(p_max)) {
        if (p >= 5) cells.push_back({FamilyId::QuasiDiagonalQuartic, p});
        if (p >= 7) cells.push_back({FamilyId::QuasiDiagonalSextic, p});
    }

    auto run_cell = [&](const Cell& cell) -> json {
        VPolynomials v = v_polynomials(cell.id, cell.p);
        FpPoly g = fp_gcd(v.v1, v.v2);
        return json{{"p", cell.p},
                    {"family", family_spec(cell.id).name},
                    {"v1_degree", v.v1.degree()},
                    {"v2_degree", v.v2.degree()},
                    {"gcd_degree", g.degree()},
                    {"gcd_is_one", g.degree() == 0}};
    };

    std::vector<std::future<json>> futures;
    for (const auto& cell : cells) futures.push_back(std::async(std::launch::async, run_cell, cell));
    json rows = json::array();
    bool all_one = true;
    for (auto& f : futures) {
        json row = f.get();
        all_one = all_one && row["gcd_is_one"].get<bool>();
        rows.push_back(std::move(row));
    }
    json result{{"rows", rows}, {"all_coprime", all_one}};
    json doc = envelope("q49-scan", params, cfg, result, json::object(), t.ms());
    cache.store(key, doc);
    return doc;
}

// ---------------------------------------------------------------------------
// Dispatch.
// ---------------------------------------------------------------------------

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"formal Brauer groups of hypergeometric K3 families: heights, unit roots, "
                 "Newton polygons"};
    app.require_subcommand(1);
    app.fallthrough(true); // global flags may follow the subcommand name

    RunConfig cfg;
    cfg.apply_env();
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--N,--precision", cfg.precision, "p-adic working precision");
    app.add_option("--D,--cutoff", cfg.cutoff, "group-law degree cutoff");
    app.add_option("--s-max", cfg.s_max, "supersingular screening bound");
    app.add_option("--mu-max", cfg.mu_max, "congruence witness bound");
    app.add_option("--seed", cfg.seed, "seed for randomized subroutines");
    app.add_option("--cache-dir", cfg.cache_dir, "results cache directory");
    bool no_cache = false;
    app.add_flag("--no-cache", no_cache, "disable the results cache");

    std::string family;
    unsigned long p = 0, d = 4, p_max = 150, m_from = 0, m_to = 10, m_bound = 200;
    std::vector<long> cvals;
    long lambda = 0, chi_a = 1, chi_b = 1;
    long n_override = -1;
    int ext = 1, weight_a = 1;
    unsigned tau = 2, hh = 1;
    std::vector<std::string> coeffs;
    std::vector<unsigned long> lambdas;

    auto add_family = [&](CLI::App* sub, bool with_params = true) {
        sub->add_option("--family", family, "catalog family id")->required();
        sub->add_option("--p", p, "prime")->required();
        if (with_params) {
            sub->add_option("--c", cvals, "c parameters (defaults to all 1)");
            sub->add_option("--lambda", lambda, "pencil parameter residue");
        }
    };

    CLI::App* s_families = app.add_subcommand("families", "catalog descriptors");
    CLI::App* s_log = app.add_subcommand("log-coeffs", "logarithm coefficients a(m) mod p^N");
    add_family(s_log);
    s_log->add_option("--m-from", m_from);
    s_log->add_option("--m-to", m_to);
    CLI::App* s_gl = app.add_subcommand("group-law", "G(t1,t2) mod degree cutoff");
    add_family(s_gl);
    CLI::App* s_h = app.add_subcommand("height", "height classification");
    add_family(s_h);
    CLI::App* s_v = app.add_subcommand("v-polys", "V1/V2 of a quasi-diagonal family");
    add_family(s_v, false);
    CLI::App* s_ur = app.add_subcommand("unit-root", "unit root via coefficient congruences");
    add_family(s_ur);
    CLI::App* s_cc = app.add_subcommand("congruence-check", "verify the (mu, s) congruence table");
    add_family(s_cc);
    CLI::App* s_gc = app.add_subcommand("gamma-check", "pi^2 = Gamma_p(1/4)^4 / Gamma_p(1/2)^2");
    s_gc->add_option("--p", p, "prime, 1 mod 4")->required();
    s_gc->add_option("--N", n_override, "precision for this check");
    CLI::App* s_li = app.add_subcommand("limit-identity", "unit root against the Dwork ratio");
    add_family(s_li);
    s_li->add_option("--N", n_override, "precision for this check");
    CLI::App* s_ss = app.add_subcommand("ss-check", "supersingular divisibility table");
    add_family(s_ss, false);
    s_ss->add_option("--m-bound", m_bound);
    CLI::App* s_np = app.add_subcommand("newton", "Newton polygon of an integer polynomial");
    s_np->add_option("--coeffs", coeffs, "constant-first integer coefficients")->required();
    s_np->add_option("--p", p)->required();
    CLI::App* s_sf = app.add_subcommand("slope-factor", "slope decomposition over Z_p");
    s_sf->add_option("--coeffs", coeffs)->required();
    s_sf->add_option("--p", p)->required();
    s_sf->add_option("--a", weight_a, "q = p^a context");
    s_sf->add_option("--N", n_override, "precision for this factorization");
    CLI::App* s_ps = app.add_subcommand("power-structure", "maximal R = Q^r");
    s_ps->add_option("--coeffs", coeffs)->required();
    CLI::App* s_rt = app.add_subcommand("r-table", "admissible exponents r for (tau, h)");
    s_rt->set_help_flag("--help", "print help"); // frees -h for the column index
    s_rt->add_option("--tau", tau)->required();
    s_rt->add_option("--h", hh)->required();
    CLI::App* s_pc = app.add_subcommand("point-count", "brute-force point count");
    add_family(s_pc);
    s_pc->add_option("--ext", ext, "count over F_{p^ext} (1 or 2)");
    CLI::App* s_js = app.add_subcommand("jacobi-sum", "J(chi^a, chi^b) in Z[zeta_d]");
    s_js->add_option("--p", p)->required();
    s_js->add_option("--d", d, "character order");
    s_js->add_option("--a", chi_a);
    s_js->add_option("--b", chi_b);
    CLI::App* s_hs = app.add_subcommand("height-scan", "per-lambda classification table");
    add_family(s_hs, false);
    s_hs->add_option("--lambdas", lambdas, "explicit lambda cells (default: all nonzero)");
    CLI::App* s_q49 = app.add_subcommand("q49-scan", "gcd(V1, V2) = 1 scan over primes");
    s_q49->add_option("--p-max", p_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) cfg.load_file(config_path);
        // flags win over the file: reparse
        if (!config_path.empty()) {
            app.clear();
            app.parse(argc, argv);
        }
        cfg.use_cache = !no_cache;
        cfg.validate();

        json doc;
        if (app.got_subcommand(s_families)) doc = cmd_families(cfg);
        else if (app.got_subcommand(s_log)) doc = cmd_log_coeffs(cfg, family, p, cvals, lambda, m_from, m_to);
        else if (app.got_subcommand(s_gl)) doc = cmd_group_law(cfg, family, p, cvals, lambda);
        else if (app.got_subcommand(s_h)) doc = cmd_height(cfg, family, p, cvals, lambda);
        else if (app.got_subcommand(s_v)) doc = cmd_v_polys(cfg, family, p);
        else if (app.got_subcommand(s_ur)) doc = cmd_unit_root(cfg, family, p, cvals, lambda);
        else if (app.got_subcommand(s_cc)) doc = cmd_congruence_check(cfg, family, p, cvals, lambda);
        else if (app.got_subcommand(s_gc))
            doc = cmd_gamma_check(cfg, p, n_override > 0 ? n_override : cfg.precision);
        else if (app.got_subcommand(s_li))
            doc = cmd_limit_identity(cfg, family, p, cvals, lambda,
                                     n_override > 0 ? n_override : cfg.precision);
        else if (app.got_subcommand(s_ss)) doc = cmd_ss_check(cfg, family, p, m_bound);
        else if (app.got_subcommand(s_np)) doc = cmd_newton(cfg, coeffs, p);
        else if (app.got_subcommand(s_sf))
            doc = cmd_slope_factor(cfg, coeffs, p, weight_a, n_override > 0 ? n_override : 6);
        else if (app.got_subcommand(s_ps)) doc = cmd_power_structure(cfg, coeffs);
        else if (app.got_subcommand(s_rt)) doc = cmd_r_table(cfg, tau, hh);
        else if (app.got_subcommand(s_pc)) doc = cmd_point_count(cfg, family, p, ext, cvals, lambda);
        else if (app.got_subcommand(s_js)) doc = cmd_jacobi_sum(cfg, p, d, chi_a, chi_b);
        else if (app.got_subcommand(s_hs)) doc = cmd_height_scan(cfg, family, p, lambdas);
        else if (app.got_subcommand(s_q49)) doc = cmd_q49_scan(cfg, p_max);

        std::cout << doc.dump() << "\n";
        return 0;
    } catch (const congruence_violation& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}, {"kind", "congruence-violation"},
                          {"mu", e.mu()}, {"s", e.s()}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const identity_violation& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}, {"kind", "identity-violation"},
                          {"lhs", e.lhs()}, {"rhs", e.rhs()}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const divisibility_violation& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}, {"kind", "divisibility-violation"},
                          {"index", e.index()}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << json{{"schema", 1}, {"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
        return 2;
    } catch (const unsupported_operation& e) {
        std::cerr << json{{"schema", 1}, {"error", e.what()}, {"kind", "unsupported"}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"schema", 1}, {"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
        return 1;
    }
}

} // namespace k3fg::cli
