#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace k3fg::cli {

using json = nlohmann::json;

// Runtime configuration.  Every key can come from a flat key = value file and
// be overridden by a command-line flag; the only environment hook is
// K3FG_CACHE_DIR.
struct RunConfig {
    long precision = 4;
    int cutoff = 12;
    int s_max = 3;
    long mu_max = 3;
    std::string cache_dir = ".k3fg-cache";
    std::uint64_t seed = 0x5eed;
    bool use_cache = true;

    void validate() const;
    void load_file(const std::string& path);
    void apply_env();
    json to_json() const;
};

// Stable 64-bit content hash for cache keys.
std::uint64_t fnv1a(const std::string& data);

// Cache of result documents keyed by content hash under cfg.cache_dir.
struct ResultCache {
    explicit ResultCache(const RunConfig& cfg);
    bool lookup(const std::string& key, json& out) const;
    void store(const std::string& key, const json& doc) const;

    std::string dir;
    bool enabled;
};

// The common output envelope: {schema, command, params, seed, result,
// evidence, timing}.  Timing is the only nondeterministic field.
json envelope(const std::string& command, json params, const RunConfig& cfg, json result,
              json evidence, double elapsed_ms);

// Individual commands; each returns a complete envelope document.
json cmd_families(const RunConfig& cfg);
json cmd_log_coeffs(const RunConfig& cfg, const std::string& family, unsigned long p,
                    const std::vector<long>& c, long lambda, unsigned long m_from,
                    unsigned long m_to);
json cmd_group_law(const RunConfig& cfg, const std::string& family, unsigned long p,
                   const std::vector<long>& c, long lambda);
json cmd_height(const RunConfig& cfg, const std::string& family, unsigned long p,
                const std::vector<long>& c, long lambda);
json cmd_v_polys(const RunConfig& cfg, const std::string& family, unsigned long p);
json cmd_unit_root(const RunConfig& cfg, const std::string& family, unsigned long p,
                   const std::vector<long>& c, long lambda);
json cmd_congruence_check(const RunConfig& cfg, const std::string& family, unsigned long p,
                          const std::vector<long>& c, long lambda);
json cmd_gamma_check(const RunConfig& cfg, unsigned long p, long precision);
json cmd_limit_identity(const RunConfig& cfg, const std::string& family, unsigned long p,
                        const std::vector<long>& c, long lambda, long precision);
json cmd_ss_check(const RunConfig& cfg, const std::string& family, unsigned long p,
                  unsigned long m_bound);
json cmd_newton(const RunConfig& cfg, const std::vector<std::string>& coeffs, unsigned long p);
json cmd_slope_factor(const RunConfig& cfg, const std::vector<std::string>& coeffs, unsigned long p,
                      int a, long precision);
json cmd_power_structure(const RunConfig& cfg, const std::vector<std::string>& coeffs);
json cmd_r_table(const RunConfig& cfg, unsigned tau, unsigned h);
json cmd_point_count(const RunConfig& cfg, const std::string& family, unsigned long p, int ext,
                     const std::vector<long>& c, long lambda);
json cmd_jacobi_sum(const RunConfig& cfg, unsigned long p, unsigned long d, long a, long b);
json cmd_height_scan(const RunConfig& cfg, const std::string& family, unsigned long p,
                     const std::vector<unsigned long>& lambdas); // empty = all nonzero
json cmd_q49_scan(const RunConfig& cfg, unsigned long p_max);

// Full command-line entry point (argument parsing, dispatch, exit codes:
// 0 success, 1 computational failure, 2 usage error).
int dispatch(int argc, const char* const* argv);

} // namespace k3fg::cli
