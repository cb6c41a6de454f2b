#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwb/errors.hpp"
#include "qwb/exact_enum.hpp"
#include "qwb/planar_map.hpp"
#include "qwb/pruning.hpp"
#include "qwb/rational.hpp"
#include "qwb/rng.hpp"
#include "qwb/sampler_suite.hpp"
#include "qwb/schaeffer.hpp"
#include "qwb/treed_bridge.hpp"

namespace {

using namespace qwb;

constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/guard refusal,
// 3 resource cap hit.
enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kResourceCap = 3 };

struct CommonOpts {
    std::uint64_t seed = 1;
    long samples = 1000;
    int workers = 1;
    std::string out;
    std::int64_t cap_nodes = std::int64_t(1) << 22;
    int cap_spine = 1 << 22;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool sampling = true) {
    cmd->add_option("--seed", o.seed, "master seed (per-draw streams are derived from it)");
    if (sampling) {
        cmd->add_option("--samples", o.samples, "number of draws");
        cmd->add_option("--workers", o.workers, "worker threads; output is identical to a serial run");
        cmd->add_option("--cap-nodes", o.cap_nodes, "guard: max materialized tree nodes per draw");
        cmd->add_option("--cap-spine", o.cap_spine, "guard: max materialized spine depth per draw");
    }
    cmd->add_option("--out", o.out, "directory for CSV output and the run manifest");
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (sgn(Rat(den)) == 0) throw FormatError("rational with zero denominator");
        return Rat(num) / Rat(den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        Int num(digits);
        return Rat(num) / Rat(ipow(Int(10), static_cast<unsigned>(s.size() - dot - 1)));
    }
    return Rat(Int(s));
}

// Deterministic ordered map over draw indices; any scheduling yields the same
// rows because draw i only ever touches streams derived from i.
std::vector<std::string> run_indexed(long n, int workers,
                                     const std::function<std::string(long)>& fn) {
    std::vector<std::string> rows(static_cast<std::size_t>(n));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) rows[i] = fn(i);
        return rows;
    }
    std::atomic<long> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto body = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                rows[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return rows;
}

struct RunOutput {
    const CommonOpts* opts;
    std::string command;
    nlohmann::json config;
    long long retries = 0;

    void write_csv(const std::string& name, const std::string& header,
                   const std::vector<std::string>& rows) const {
        if (opts->out.empty()) {
            std::cout << header << "\n";
            for (const auto& r : rows) std::cout << r << "\n";
            return;
        }
        std::filesystem::create_directories(opts->out);
        std::ofstream f(std::filesystem::path(opts->out) / name);
        f << header << "\n";
        for (const auto& r : rows) f << r << "\n";
    }

    void write_manifest() const {
        if (opts->out.empty()) return;
        std::filesystem::create_directories(opts->out);
        nlohmann::json j;
        j["command"] = command;
        j["seed"] = opts->seed;
        j["samples"] = opts->samples;
        j["workers"] = opts->workers;
        j["caps"] = {{"nodes", opts->cap_nodes}, {"spine", opts->cap_spine}};
        j["retries"] = retries;
        j["versions"] = {{"qwb", kVersion}, {"map_format", "PMAP v1"}};
        j["config"] = config;
        std::ofstream f(std::filesystem::path(opts->out) / "manifest.json");
        f << j.dump(2) << "\n";
    }
};

// Per-draw retry wrapper: attempt k of draw i uses stream i + k*samples, so
// the realized artifact for draw i never depends on other draws or on worker
// scheduling.
template <typename F>
auto with_retries(const CommonOpts& o, std::atomic<long long>& retries, long i, F&& f)
    -> decltype(f(std::declval<RandomSource&>())) {
    for (int attempt = 0;; ++attempt) {
        if (attempt > 64) throw ResourceCapError("draw kept hitting resource caps");
        RandomSource rng = RandomSource::stream(o.seed, static_cast<std::uint64_t>(i) +
                                                            static_cast<std::uint64_t>(attempt) *
                                                                static_cast<std::uint64_t>(o.samples));
        try {
            return f(rng);
        } catch (const ResourceCapError&) {
            ++retries;
        }
    }
}

int cmd_count(const std::string& kind, long n, long p) {
    Int v;
    if (kind == "general") v = count_general(n, p);
    else if (kind == "simple") v = count_simple(n, p);
    else if (kind == "cat") v = cat(n, p);
    else v = Int(n + p + 1) * count_general(n, p);
    std::cout << v.get_str() << "\n";
    return kOk;
}

int cmd_bijection(int n_max, int p_max, bool negative_control, const CommonOpts& o) {
    RunOutput run{&o, "bijection-check", {{"n_max", n_max}, {"p_max", p_max}}};
    int rc = kOk;
    std::vector<std::string> rows;
    for (int p = 1; p <= p_max; ++p)
        for (int n = 0; n <= n_max; ++n) {
            std::vector<TreedBridge> corpus = enumerate_treed_bridges(n, p);
            Int expected = Int(n + p + 1) * count_general(n, p);
            std::set<std::vector<long long>> codes;
            bool valid = true;
            for (const TreedBridge& tb : corpus) {
                PhiOutput ph = phi_finite(tb);
                MapClass cl = classify(ph.map);
                if (!cl.is_quadrangulation_with_boundary || cl.size != n || cl.perimeter != 2 * p)
                    valid = false;
                codes.insert(canonical_code_pointed(ph.map, ph.point));
            }
            if (negative_control && !codes.empty()) codes.erase(codes.begin());
            bool ok = valid && Int(static_cast<long>(corpus.size())) == expected &&
                      Int(static_cast<long>(codes.size())) == expected;
            std::ostringstream line;
            line << (ok ? "PASS" : "FAIL") << " bijection n=" << n << " p=" << p
                 << " treed_bridges=" << corpus.size() << " distinct_pointed_maps="
                 << codes.size() << " expected=" << expected.get_str();
            std::cout << line.str() << "\n";
            rows.push_back(line.str());
            if (!ok) rc = kCheckFailed;
        }
    run.write_csv("bijection_check.txt", "result", rows);
    run.write_manifest();
    return rc;
}

int cmd_core_law(int p, double tv_max, const CommonOpts& o) {
    RunOutput run{&o, "core-law", {{"p", p}, {"tv_max", tv_max}}};
    std::atomic<long long> retries{0};
    auto rows = run_indexed(o.samples, o.workers, [&](long i) {
        CoreStructure cs = with_retries(o, retries, i, [&](RandomSource& rng) {
            return sample_core_structure(p, rng, o.cap_nodes, o.cap_spine);
        });
        return std::to_string(cs.core_perimeter / 2);
    });
    std::vector<long long> hist(p + 1, 0);
    for (const auto& r : rows) hist[std::stoi(r)] += 1;

    Pmf law = core_perimeter_law(p, p);
    std::map<long long, Rat> exact;
    for (std::size_t k = 0; k < law.support.size(); ++k) exact[law.support[k]] = law.mass[k];
    double tv = 0.0;
    for (int q = 1; q <= p; ++q) {
        double e = exact.count(q) ? rat_to_double(exact[q]) : 0.0;
        tv += std::abs(e - double(hist[q]) / double(o.samples));
    }
    tv /= 2.0;

    std::vector<std::string> csv;
    for (int q = 1; q <= p; ++q) {
        std::ostringstream s;
        s << q << "," << (exact.count(q) ? rat_to_double(exact[q]) : 0.0) << ","
          << double(hist[q]) / double(o.samples) << "," << tv;
        csv.push_back(s.str());
    }
    run.retries = retries;
    run.write_csv("core_law.csv", "q,exact_mass,empirical_mass,tv_distance", csv);
    run.write_manifest();
    bool ok = tv <= tv_max;
    std::cout << (ok ? "PASS" : "FAIL") << " core-law p=" << p << " samples=" << o.samples
              << " tv=" << tv << " retries=" << retries << "\n";
    return ok ? kOk : kCheckFailed;
}

int cmd_aperture_finite(int n, int p, const CommonOpts& o) {
    RunOutput run{&o, "aperture finite", {{"n", n}, {"p", p}}};
    std::atomic<long long> lower_violations{0};
    auto rows = run_indexed(o.samples, o.workers, [&](long i) {
        RandomSource rng = RandomSource::stream(o.seed, static_cast<std::uint64_t>(i));
        TreedBridge tb = sample_uniform_treed_bridge(n, p, rng);
        int lo = *std::min_element(tb.bridge.values.begin(), tb.bridge.values.end());
        int hi = *std::max_element(tb.bridge.values.begin(), tb.bridge.values.end());
        int delta = hi - lo;
        int ap = aperture(phi_finite(tb).map);
        if (ap < delta) ++lower_violations;
        std::ostringstream s;
        s << i << "," << delta << "," << ap;
        return s.str();
    });
    std::vector<double> aps;
    for (const auto& r : rows) aps.push_back(std::stod(r.substr(r.rfind(',') + 1)));
    std::sort(aps.begin(), aps.end());
    double median = aps.empty() ? 0.0
                                : (aps.size() % 2 ? aps[aps.size() / 2]
                                                  : (aps[aps.size() / 2 - 1] + aps[aps.size() / 2]) / 2);
    run.write_csv("aperture_finite.csv", "index,delta_p,aperture", rows);
    run.write_manifest();
    bool ok = lower_violations == 0;
    std::cout << (ok ? "PASS" : "FAIL") << " aperture finite n=" << n << " p=" << p
              << " samples=" << o.samples << " median=" << median
              << " lower_bound_violations=" << lower_violations << "\n";
    return ok ? kOk : kCheckFailed;
}

int cmd_aperture_bounds(int p, const CommonOpts& o) {
    RunOutput run{&o, "aperture bounds", {{"p", p}}};
    std::atomic<long long> retries{0};
    std::atomic<long long> violations{0};
    auto rows = run_indexed(o.samples, o.workers, [&](long i) {
        ApertureBounds ab = with_retries(o, retries, i, [&](RandomSource& rng) {
            LazyTreedBridge tb = sample_infinite_treed_bridge(p, rng, o.cap_nodes, o.cap_spine);
            return aperture_bounds(tb);
        });
        if (ab.lower > ab.upper) ++violations;
        std::ostringstream s;
        s << i << "," << ab.delta_p << "," << ab.K << "," << ab.lower << "," << ab.upper;
        return s.str();
    });
    run.retries = retries;
    run.write_csv("aperture_bounds.csv", "index,delta_p,K,lower,upper", rows);
    run.write_manifest();
    bool ok = violations == 0;
    std::cout << (ok ? "PASS" : "FAIL") << " aperture bounds p=" << p << " samples=" << o.samples
              << " retries=" << retries << "\n";
    return ok ? kOk : kCheckFailed;
}

int cmd_boltzmann(const std::string& z_text, bool extra_rooted, const CommonOpts& o) {
    Rat z = parse_rat(z_text);
    RunOutput run{&o, "boltzmann", {{"z", z_text}, {"extra_rooted", extra_rooted}}};
    auto rows = run_indexed(o.samples, o.workers, [&](long i) {
        RandomSource rng = RandomSource::stream(o.seed, static_cast<std::uint64_t>(i));
        PlanarMap m = sample_boltzmann(z, extra_rooted, rng);
        long long size = 0;
        int half_perimeter = 0;
        if (!m.is_vertex_map()) {
            MapClass cl = classify(m);
            size = cl.size;
            half_perimeter = cl.perimeter / 2;
        }
        std::ostringstream s;
        s << i << "," << size << "," << half_perimeter;
        return s.str();
    });
    double mean_size = 0, mean_hp = 0, empty = 0;
    for (const auto& r : rows) {
        auto c1 = r.find(','), c2 = r.rfind(',');
        double sz = std::stod(r.substr(c1 + 1, c2 - c1 - 1));
        double hp = std::stod(r.substr(c2 + 1));
        mean_size += sz;
        mean_hp += hp;
        if (sz == 0 && hp == 0) empty += 1;
    }
    mean_size /= double(o.samples);
    mean_hp /= double(o.samples);
    empty /= double(o.samples);
    QuadQ norm = extra_rooted ? vecwc_value(z) : wc_value(z);
    RatInterval inv = norm.inv().enclosure();
    run.write_csv("boltzmann.csv", "index,size,half_perimeter", rows);
    run.write_manifest();
    std::cout << "boltzmann z=" << z_text << (extra_rooted ? " extra-rooted" : "")
              << " samples=" << o.samples << " mean_size=" << mean_size
              << " mean_half_perimeter=" << mean_hp << " empty_rate=" << empty
              << " exact_empty=" << rat_to_double((inv.lo + inv.hi) / 2) << "\n";
    return kOk;
}

int cmd_geodesic(int n, int p, int pairs, const CommonOpts& o) {
    RunOutput run{&o, "geodesic-check", {{"n", n}, {"p", p}, {"pairs", pairs}}};
    std::atomic<long long> bad_labels{0}, bad_bounds{0}, bad_merges{0};
    auto rows = run_indexed(o.samples, o.workers, [&](long i) {
        RandomSource rng = RandomSource::stream(o.seed, static_cast<std::uint64_t>(i));
        TreedBridge tb = sample_uniform_treed_bridge(n, p, rng);
        PhiOutput ph = phi_finite(tb);

        // Labels vs graph metric: l(x) - l(point) is the distance to the point.
        std::vector<int> dist = distances_from(ph.map, ph.point);
        for (int v = 0; v < ph.map.vertex_count(); ++v)
            if (dist[v] != ph.labels[v] - ph.labels[ph.point]) ++bad_labels;

        // Two-sided bound from a few random sources.
        for (int rep = 0; rep < 3; ++rep) {
            int u = static_cast<int>(rng.below(ph.map.vertex_count()));
            std::vector<int> du = distances_from(ph.map, u);
            for (int v = 0; v < ph.map.vertex_count(); ++v)
                if (du[v] < std::abs(ph.labels[u] - ph.labels[v])) ++bad_bounds;
        }

        // Chain merge rule on random corner pairs.
        CornerSequence cs = corner_order(tb);
        const long M = cs.size();
        int global_min = cs.at(0).label;
        for (long t = 1; t < M; ++t) global_min = std::min(global_min, cs.at(t).label);
        long checked = 0;
        for (int rep = 0; rep < pairs && M >= 2; ++rep) {
            long c1 = static_cast<long>(rng.below(M));
            long c2 = static_cast<long>(rng.below(M));
            if (c1 == c2) continue;
            int m1 = cs.at(c1).label, m2 = cs.at(c2).label;
            for (long t = c1; t != c2; t = (t + 1) % M) m1 = std::min(m1, cs.at(t).label);
            m1 = std::min(m1, cs.at(c2).label);
            for (long t = c2; t != c1; t = (t + 1) % M) m2 = std::min(m2, cs.at(t).label);
            m2 = std::min(m2, cs.at(c1).label);
            int want = std::max(m1, m2) - 1;

            std::vector<long> ch1 = successor_chain(cs, c1), ch2 = successor_chain(cs, c2);
            std::set<long> after2(ch2.begin() + 1, ch2.end());
            after2.insert(-1);
            long merge = -1;
            for (std::size_t k = 1; k < ch1.size(); ++k)
                if (after2.count(ch1[k])) {
                    merge = ch1[k];
                    break;
                }
            int got = merge == -1 ? global_min - 1 : cs.at(merge).label;
            if (got != want) ++bad_merges;
            ++checked;
        }
        std::ostringstream s;
        s << i << "," << ph.map.vertex_count() << "," << checked;
        return s.str();
    });
    run.write_csv("geodesic_check.csv", "index,vertices,merge_pairs_checked", rows);
    run.write_manifest();
    bool ok = bad_labels == 0 && bad_bounds == 0 && bad_merges == 0;
    std::cout << (ok ? "PASS" : "FAIL") << " geodesic-check n=" << n << " p=" << p
              << " samples=" << o.samples << " label_mismatches=" << bad_labels
              << " bound_violations=" << bad_bounds << " merge_mismatches=" << bad_merges << "\n";
    return ok ? kOk : kCheckFailed;
}

int cmd_series(const std::string& which, int order, const CommonOpts& o) {
    RunOutput run{&o, "series", {{"which", which}, {"order", order}}};
    std::vector<std::string> rows;
    SeriesQ s;
    if (which == "wc") s = series_Wc(order);
    else if (which == "vecwc") s = series_vecWc(order);
    else if (which == "half32") s = series_half32(order);
    else if (which == "sqrt") s = series_sqrt(order);
    else s = series_C(order);
    for (int k = 0; k <= s.order(); ++k) {
        std::ostringstream line;
        line << k << "," << s[k].get_num().get_str() << "," << s[k].get_den().get_str();
        rows.push_back(line.str());
    }
    run.write_csv("series_" + which + ".csv", "k,numerator,denominator", rows);
    run.write_manifest();
    return kOk;
}

int cmd_zipper(int n_max, int p_max, int rand_n, int rand_p, const CommonOpts& o) {
    RunOutput run{&o, "zipper-check",
                  {{"n_max", n_max}, {"p_max", p_max}, {"rand_n", rand_n}, {"rand_p", rand_p}}};
    long long prune_checked = 0, zip_checked = 0, star_checked = 0, failures = 0;

    auto check_map = [&](const PlanarMap& m) {
        MapClass cl = classify(m);
        PruneResult pr = prune(m);
        if (pr.R >= 1) {
            ++prune_checked;
            if (canonical_code(reassemble(pr)) != canonical_code(m)) {
                ++failures;
                return;
            }
        }
        if (cl.simple_boundary && cl.perimeter >= 2) {
            ++zip_checked;
            ZipResult z = zip_boundary(m);
            if (static_cast<int>(z.saw_half_edges.size()) != cl.perimeter / 2 ||
                canonical_code(unzip(z.map, z.saw_half_edges)) != canonical_code(m)) {
                ++failures;
                return;
            }
            ++star_checked;
            auto back = star_split(star_join(m), cl.perimeter / 2);
            if (!back || canonical_code(*back) != canonical_code(m)) ++failures;
        }
    };

    for (int p = 1; p <= p_max; ++p)
        for (int n = 0; n <= n_max; ++n) {
            std::set<std::vector<long long>> seen;
            for (const TreedBridge& tb : enumerate_treed_bridges(n, p)) {
                PlanarMap m = phi_finite(tb).map;
                if (seen.insert(canonical_code(m)).second) check_map(m);
            }
        }
    for (long i = 0; i < o.samples; ++i) {
        RandomSource rng = RandomSource::stream(o.seed, static_cast<std::uint64_t>(i));
        int n = 1 + static_cast<int>(rng.below(rand_n));
        int p = 1 + static_cast<int>(rng.below(rand_p));
        check_map(sample_uniform_quadrangulation(n, p, rng));
    }
    run.config["prune_round_trips"] = prune_checked;
    run.config["zip_round_trips"] = zip_checked;
    run.config["star_round_trips"] = star_checked;
    run.write_manifest();
    bool ok = failures == 0;
    std::cout << (ok ? "PASS" : "FAIL") << " zipper-check prune=" << prune_checked
              << " zip=" << zip_checked << " star=" << star_checked << " failures=" << failures
              << "\n";
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact enumeration, bijections and samplers for quadrangulations with boundary"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* c_count = app.add_subcommand("count", "exact counts");
    std::string count_kind = "general";
    long count_n = 0, count_p = 1;
    c_count->add_option("kind", count_kind, "general | simple | cat | pointed")
        ->check(CLI::IsMember({"general", "simple", "cat", "pointed"}));
    c_count->add_option("--n", count_n, "number of internal faces");
    c_count->add_option("--p", count_p, "half-perimeter");

    auto* c_bij = app.add_subcommand("bijection-check", "exhaustive corner-construction audit");
    CommonOpts bij_o;
    int bij_nmax = 3, bij_pmax = 2;
    bool bij_neg = false;
    c_bij->add_option("--n-max", bij_nmax, "max size");
    c_bij->add_option("--p-max", bij_pmax, "max half-perimeter");
    c_bij->add_flag("--negative-control", bij_neg, "drop one code to prove the audit can fail");
    add_common(c_bij, bij_o, false);

    auto* c_core = app.add_subcommand("core-law", "core half-perimeter law, exact vs sampled");
    CommonOpts core_o;
    int core_p = 2;
    double core_tv = 1.0;
    c_core->add_option("--p", core_p, "boundary half-perimeter");
    c_core->add_option("--tv-max", core_tv, "fail when total variation exceeds this");
    add_common(c_core, core_o);

    auto* c_ap = app.add_subcommand("aperture", "boundary diameter statistics");
    CommonOpts ap_o;
    std::string ap_mode = "finite";
    int ap_n = 100, ap_p = 4;
    c_ap->add_option("mode", ap_mode, "finite | bounds")->check(CLI::IsMember({"finite", "bounds"}));
    c_ap->add_option("--n", ap_n, "size (finite mode)");
    c_ap->add_option("--p", ap_p, "half-perimeter");
    add_common(c_ap, ap_o);

    auto* c_bz = app.add_subcommand("boltzmann", "critically weighted random maps");
    CommonOpts bz_o;
    std::string bz_z = "1/16";
    bool bz_extra = false;
    c_bz->add_option("--z", bz_z, "boundary weight, rational like 1/16, in (0, 1/8]");
    c_bz->add_flag("--extra-rooted", bz_extra, "weight each map by 2p+1");
    add_common(c_bz, bz_o);

    auto* c_geo = app.add_subcommand("geodesic-check", "label metric and chain merge audits");
    CommonOpts geo_o;
    int geo_n = 20, geo_p = 3, geo_pairs = 4;
    c_geo->add_option("--n", geo_n, "size");
    c_geo->add_option("--p", geo_p, "half-perimeter");
    c_geo->add_option("--pairs", geo_pairs, "corner pairs per draw");
    add_common(c_geo, geo_o);

    auto* c_ser = app.add_subcommand("series", "dump exact series coefficients");
    CommonOpts ser_o;
    std::string ser_which = "wc";
    int ser_order = 12;
    c_ser->add_option("--which", ser_which, "wc | vecwc | half32 | sqrt | c")
        ->check(CLI::IsMember({"wc", "vecwc", "half32", "sqrt", "c"}));
    c_ser->add_option("--order", ser_order, "truncation order");
    add_common(c_ser, ser_o, false);

    auto* c_zip = app.add_subcommand("zipper-check", "prune/zip/star round-trip audits");
    CommonOpts zip_o;
    int zip_nmax = 3, zip_pmax = 2, zip_rn = 30, zip_rp = 4;
    c_zip->add_option("--n-max", zip_nmax, "exhaustive corpus max size");
    c_zip->add_option("--p-max", zip_pmax, "exhaustive corpus max half-perimeter");
    c_zip->add_option("--rand-n", zip_rn, "random phase: sizes drawn in 1..rand-n");
    c_zip->add_option("--rand-p", zip_rp, "random phase: half-perimeters drawn in 1..rand-p");
    add_common(c_zip, zip_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c_count->parsed()) return cmd_count(count_kind, count_n, count_p);
        if (c_bij->parsed()) return cmd_bijection(bij_nmax, bij_pmax, bij_neg, bij_o);
        if (c_core->parsed()) return cmd_core_law(core_p, core_tv, core_o);
        if (c_ap->parsed())
            return ap_mode == "finite" ? cmd_aperture_finite(ap_n, ap_p, ap_o)
                                       : cmd_aperture_bounds(ap_p, ap_o);
        if (c_bz->parsed()) return cmd_boltzmann(bz_z, bz_extra, bz_o);
        if (c_geo->parsed()) return cmd_geodesic(geo_n, geo_p, geo_pairs, geo_o);
        if (c_ser->parsed()) return cmd_series(ser_which, ser_order, ser_o);
        if (c_zip->parsed()) return cmd_zipper(zip_nmax, zip_pmax, zip_rn, zip_rp, zip_o);
    } catch (const TooLargeError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const TailUnresolvedError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ZOutOfRangeError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}
