// Command-line laboratory for homogeneous affine iterated function systems
// T_j x = A^-1 x + u_j: classification into the tile/overlap dichotomy with
// machine-checkable certificates, Fourier singularity certification, dense
// parameter search near arbitrary targets, and attractor rendering.

#include "CLI11.hpp"

#include <cctype>
#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "selfaffine/density.hpp"
#include "selfaffine/errors.hpp"
#include "selfaffine/fourier.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/overlap.hpp"
#include "selfaffine/serialize.hpp"
#include "selfaffine/system.hpp"

namespace fs = std::filesystem;
using namespace selfaffine;
using serialize::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct RunConfig {
    std::string command;
    std::string input;
    std::string out = ".";
    int depth = 8;
    int resolution = 512;
    uint64_t samples = 0;
    uint64_t seed = 0;
    uint64_t budget = 0;  // 0 = module default
    std::string w_spec;
    double epsilon = 0.0;
    int wmax = 5;
    double precision = 1e-6;
    std::vector<std::string> annexes;
};

VecZ parse_w(const std::string& spec, int dim) {
    VecZ w;
    std::string cur;
    for (char c : spec + ",") {
        if (c == ',') {
            if (!cur.empty()) {
                try {
                    w.emplace_back(cur);
                } catch (const std::invalid_argument&) {
                    throw Error(ErrorCode::ParseError, "malformed --w component \"" + cur + "\"");
                }
                cur.clear();
            }
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (static_cast<int>(w.size()) != dim)
        throw Error(ErrorCode::InvalidArgument,
                    "--w must have " + std::to_string(dim) + " comma-separated components");
    return w;
}

// The resolved configuration that determines the artifacts; output location
// and timestamp live only in manifest.json.
json config_echo(const RunConfig& cfg) {
    json m{{"command", cfg.command}, {"input", cfg.input},
           {"depth", cfg.depth},     {"resolution", cfg.resolution},
           {"samples", cfg.samples}, {"seed", cfg.seed},     {"budget", cfg.budget},
           {"epsilon", cfg.epsilon}, {"wmax", cfg.wmax},     {"precision", cfg.precision},
           {"version", kVersion}};
    if (!cfg.w_spec.empty()) m["w"] = cfg.w_spec;
    if (!cfg.annexes.empty()) m["annexes"] = cfg.annexes;
    return m;
}

void write_manifest_file(const RunConfig& cfg) {
    json m = config_echo(cfg);
    m["out"] = cfg.out;
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    m["timestamp"] = buf;
    serialize::write_text_file((fs::path(cfg.out) / "manifest.json").string(), m.dump(2) + "\n");
}

void write_report(const RunConfig& cfg, json report) {
    report["manifest"] = config_echo(cfg);
    serialize::write_text_file((fs::path(cfg.out) / "report.json").string(),
                               report.dump(2) + "\n");
}

// Frequencies with inf-norm <= wmax, ordered by (norm, lex), zero excluded.
std::vector<VecZ> frequency_ball(int dim, int wmax) {
    std::vector<VecZ> out;
    VecZ w(dim, Int(-wmax));
    for (;;) {
        if (sgn(vec_inf_norm(w)) != 0) out.push_back(w);
        int i = dim - 1;
        while (i >= 0 && w[i] == wmax) {
            w[i] = -wmax;
            --i;
        }
        if (i < 0) break;
        w[i] += 1;
    }
    std::sort(out.begin(), out.end(), [](const VecZ& a, const VecZ& b) {
        int c = cmp(vec_inf_norm(a), vec_inf_norm(b));
        if (c != 0) return c < 0;
        return lex_less(a, b);
    });
    return out;
}

json geometry_annex(const system::AffineSystem& nsys, const RunConfig& cfg) {
    json annex;
    uint64_t budget = cfg.budget ? cfg.budget : system::kDefaultEnumerationBudget;
    annex["measure_estimate"] =
        geometry::measure_estimate(nsys, cfg.depth, cfg.resolution, budget);
    std::vector<int> depths;
    for (int n = std::max(2, cfg.depth - 6); n <= cfg.depth; n += 2) depths.push_back(n);
    if (depths.size() >= 3) {
        auto est = geometry::box_dimension_estimate(nsys, geometry::matched_scales(nsys, depths),
                                                    budget);
        annex["box_dimension"] = json{{"slope", est.slope},
                                      {"std_error", est.std_error},
                                      {"ci_half_width", est.ci_half_width}};
    }
    return annex;
}

json fourier_annex(const system::AffineSystem& nsys, const RunConfig& cfg) {
    json annex;
    for (const VecZ& w : frequency_ball(nsys.dim(), cfg.wmax)) {
        fourier::VwResult vw;
        try {
            vw = fourier::v_w_membership(nsys, w);
        } catch (const Error&) {
            continue;
        }
        if (vw.status == fourier::VwResult::Status::Member) {
            annex["certificate"] = serialize::certificate_to_json(*vw.certificate);
            auto pv = fourier::fourier_product_limit(nsys, w, cfg.precision);
            annex["product"] = json{{"value", serialize::complex_to_json(pv.value)},
                                    {"error_bound", json(pv.error_bound)}};
            return annex;
        }
    }
    annex["note"] = "no singularity certificate found for ||w||_inf <= " +
                    std::to_string(cfg.wmax) + " (nonexistence is not claimed)";
    return annex;
}

int run_classify(const RunConfig& cfg) {
    auto sys = serialize::system_from_json(serialize::load_json_file(cfg.input));
    overlap::ClassifyOptions opts;
    if (cfg.budget) opts.state_budget = cfg.budget;
    auto report = overlap::classify(sys, opts);
    json rj = serialize::report_to_json(report);

    const auto& nsys = *report.normalized_system;
    for (const auto& annex : cfg.annexes) {
        if (annex == "geometry") rj["estimates"]["geometry"] = geometry_annex(nsys, cfg);
        if (annex == "fourier") rj["estimates"]["fourier"] = fourier_annex(nsys, cfg);
    }
    write_report(cfg, rj);
    return report.status == "definitive" ? kExitOk : kExitInconclusive;
}

int run_render(const RunConfig& cfg) {
    auto sys = serialize::system_from_json(serialize::load_json_file(cfg.input));
    auto [nsys, conj] = system::normalize(sys);
    uint64_t budget = cfg.budget ? cfg.budget : system::kDefaultEnumerationBudget;

    auto raster = geometry::rasterize_attractor(nsys, cfg.depth, cfg.resolution, budget);
    serialize::write_text_file((fs::path(cfg.out) / "attractor.pgm").string(),
                               geometry::to_pgm(raster, false));
    json sidecar{{"kind", "occupancy"},
                 {"depth", raster.depth()},
                 {"resolution", raster.resolution()},
                 {"viewport", serialize::viewport_to_json(raster.viewport())},
                 {"occupied_cells", raster.occupied_count()},
                 {"measure_estimate", geometry::measure_estimate(raster)}};
    serialize::write_text_file((fs::path(cfg.out) / "attractor.json").string(),
                               sidecar.dump(2) + "\n");

    json rj{{"branch", nullptr},
            {"certificates", json::array()},
            {"estimates", json{{"measure_estimate", geometry::measure_estimate(raster)}}},
            {"status", "definitive"},
            {"manifest", json::object()}};

    if (cfg.samples > 0) {
        auto hist = geometry::chaos_game_histogram(nsys, cfg.samples, cfg.resolution, cfg.seed);
        serialize::write_text_file((fs::path(cfg.out) / "histogram.pgm").string(),
                                   geometry::to_pgm(hist, true));
        json hside{{"kind", "histogram"},
                   {"resolution", hist.resolution()},
                   {"viewport", serialize::viewport_to_json(hist.viewport())},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed}};
        serialize::write_text_file((fs::path(cfg.out) / "histogram.json").string(),
                                   hside.dump(2) + "\n");
    }
    write_report(cfg, rj);
    return kExitOk;
}

int run_fourier(const RunConfig& cfg) {
    auto sys = serialize::system_from_json(serialize::load_json_file(cfg.input));
    auto [nsys, conj] = system::normalize(sys);
    VecZ w = parse_w(cfg.w_spec, nsys.dim());

    auto vw = fourier::v_w_membership(nsys, w);
    json rj{{"branch", nullptr},
            {"certificates", json::array()},
            {"estimates", json::object()},
            {"manifest", json::object()}};

    switch (vw.status) {
        case fourier::VwResult::Status::Member: {
            rj["status"] = "definitive";
            rj["membership"] = true;
            rj["certificates"].push_back(serialize::certificate_to_json(*vw.certificate));
            auto pv = fourier::fourier_product_limit(nsys, w, cfg.precision);
            rj["estimates"]["product"] = json{{"value", serialize::complex_to_json(pv.value)},
                                              {"error_bound", pv.error_bound}};
            write_report(cfg, rj);
            return kExitOk;
        }
        case fourier::VwResult::Status::Failing: {
            rj["status"] = "definitive";
            rj["membership"] = false;
            rj["failing_power"] = vw.failing->n;
            write_report(cfg, rj);
            return kExitOk;
        }
        case fourier::VwResult::Status::Inconclusive:
        default: {
            rj["status"] = "inconclusive";
            rj["detail"] = vw.detail;
            write_report(cfg, rj);
            return kExitInconclusive;
        }
    }
}

int run_search_osc(const RunConfig& cfg) {
    std::optional<double> eps;
    if (cfg.epsilon > 0) eps = cfg.epsilon;
    auto [matrix, target] =
        serialize::target_from_json(serialize::load_json_file(cfg.input), eps);
    auto res = density::osc_near(matrix, target);

    serialize::write_text_file((fs::path(cfg.out) / "system.json").string(),
                               serialize::system_to_json(res.system).dump(2) + "\n");
    json rj{{"branch", "osc"},
            {"certificates", json::array({serialize::certificate_to_json(res.certificate)})},
            {"estimates",
             json{{"achieved_distance", res.achieved},
                  {"achieved_distance_sq", serialize::rat_str(res.achieved_sq)}}},
            {"status", "definitive"},
            {"manifest", json::object()}};
    write_report(cfg, rj);
    return kExitOk;
}

int run_search_singular(const RunConfig& cfg) {
    std::optional<double> eps;
    if (cfg.epsilon > 0) eps = cfg.epsilon;
    auto [matrix, target] =
        serialize::target_from_json(serialize::load_json_file(cfg.input), eps);
    VecZ w = parse_w(cfg.w_spec, matrix.dim());

    density::SingularSearchOptions opts;
    if (cfg.budget) opts.candidate_budget = cfg.budget;
    auto res = density::singular_near(matrix, target, w, opts);

    serialize::write_text_file((fs::path(cfg.out) / "system.json").string(),
                               serialize::system_to_json(res.system).dump(2) + "\n");
    json rj{{"branch", "overlap-candidate"},
            {"certificates", json::array({serialize::certificate_to_json(res.certificate)})},
            {"estimates",
             json{{"achieved_distance", res.achieved},
                  {"achieved_distance_sq", serialize::rat_str(res.achieved_sq)},
                  {"candidates_tried", res.candidates_tried}}},
            {"status", "definitive"},
            {"manifest", json::object()}};
    write_report(cfg, rj);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification laboratory for homogeneous affine IFS with integer expanding matrix"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", cfg.input, "input JSON file");
        if (needs_input) in->required();
        sub->add_option("--out", cfg.out, "output directory (created if missing)");
        sub->add_option("--depth", cfg.depth, "cylinder depth");
        sub->add_option("--resolution", cfg.resolution, "grid resolution (pixels per axis)");
        sub->add_option("--samples", cfg.samples, "chaos-game sample count");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--budget", cfg.budget, "enumeration/state/candidate budget override");
        sub->add_option("--w", cfg.w_spec, "frequency vector, comma separated (e.g. \"1\" or \"2,-1\")");
        sub->add_option("--epsilon", cfg.epsilon, "target tolerance for the search commands");
        sub->add_option("--wmax", cfg.wmax, "max ||w||_inf for the fourier annex search");
        sub->add_option("--precision", cfg.precision, "truncation precision for product evaluation");
    };

    auto* c_classify = app.add_subcommand("classify", "decide the dichotomy branch and emit certificates");
    add_common(c_classify, true);
    c_classify->add_option("--annex", cfg.annexes, "extra report sections: geometry, fourier");

    auto* c_render = app.add_subcommand("render", "rasterize the attractor (and optionally the measure)");
    add_common(c_render, true);

    auto* c_fourier = app.add_subcommand("fourier", "V_w membership and the infinite product");
    add_common(c_fourier, true);
    auto* c_sosc = app.add_subcommand("search-osc", "open-set-condition system near targets");
    add_common(c_sosc, true);
    auto* c_ssing = app.add_subcommand("search-singular", "V_w member system near targets");
    add_common(c_ssing, true);

    CLI11_PARSE(app, argc, argv);

    auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (cfg.command == "fourier" || cfg.command == "search-singular") {
        if (cfg.w_spec.empty()) {
            std::cerr << "error: " << cfg.command << " requires --w\n";
            return kExitError;
        }
    }
    if (cfg.depth < 1 || cfg.resolution < 8 || cfg.precision <= 0 || cfg.wmax < 1) {
        std::cerr << "error: numeric options must be positive\n";
        return kExitError;
    }

    try {
        fs::create_directories(cfg.out);
        write_manifest_file(cfg);
        if (cfg.command == "classify") return run_classify(cfg);
        if (cfg.command == "render") return run_render(cfg);
        if (cfg.command == "fourier") return run_fourier(cfg);
        if (cfg.command == "search-osc") return run_search_osc(cfg);
        if (cfg.command == "search-singular") return run_search_singular(cfg);
        std::cerr << "error: unknown command\n";
        return kExitError;
    } catch (const BudgetError& e) {
        json rj{{"branch", nullptr},
                {"certificates", json::array()},
                {"estimates", json::object()},
                {"status", "inconclusive"},
                {"error", json{{"code", error_code_name(e.code())}, {"message", e.what()}}},
                {"manifest", json::object()}};
        try {
            write_report(cfg, rj);
        } catch (...) {
        }
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const Error& e) {
        json rj{{"branch", nullptr},
                {"certificates", json::array()},
                {"estimates", json::object()},
                {"status", "error"},
                {"error", json{{"code", error_code_name(e.code())}, {"message", e.what()}}},
                {"manifest", json::object()}};
        try {
            write_report(cfg, rj);
        } catch (...) {
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitError;
    }
}
