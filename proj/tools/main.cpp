// Command-line front end: cycle, cover, dim-lower, render, boxcount,
// self-test. Every subcommand resolves its full config, writes its outputs
// plus a manifest with content hashes, and keeps byte-identical outputs for
// identical configs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "expbasin/config.hpp"
#include "expbasin/cover.hpp"
#include "expbasin/dynamics.hpp"
#include "expbasin/image_io.hpp"
#include "expbasin/pressure.hpp"
#include "expbasin/render.hpp"
#include "expbasin/symbolic.hpp"

namespace eb = expbasin;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;        // NoCycle / NotCertified
constexpr int kExitInvariant = 3;     // cover dominance violation

struct Common {
    std::string lambda_text = "-5,0";
    std::string config_file;
    std::string out_dir;
    long long seed = 1;
    int threads = 0;
    int max_iter = 2000;
    double escape_re = 50.0;
};

std::string out_path(const Common& c, const std::string& name) {
    return c.out_dir.empty() ? name : c.out_dir + "/" + name;
}

void ensure_out_dir(const Common& c) {
    if (!c.out_dir.empty()) std::filesystem::create_directories(c.out_dir);
}

void apply_config_file(const Common& c, CLI::App* sub) {
    if (c.config_file.empty()) return;
    auto kv = eb::parse_kv_file(c.config_file);
    for (const auto& [key, value] : kv) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt && opt->count() == 0) opt->add_result(value);
    }
}

void fill_common_manifest(eb::Manifest& m, const Common& c) {
    eb::cplx lam = eb::parse_complex(c.lambda_text);
    m.set("lambda_re", lam.real());
    m.set("lambda_im", lam.imag());
    m.set("seed", c.seed);
    m.set("max_iter", static_cast<long long>(c.max_iter));
    m.set("escape_re", c.escape_re);
}

eb::ExpMapConfig make_cfg(const Common& c) {
    return eb::ExpMapConfig(eb::parse_complex(c.lambda_text), c.max_iter, c.escape_re);
}

ordered_json cplx_json(const eb::cplx& z) {
    return ordered_json::array({z.real(), z.imag()});
}

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

const char* nocycle_reason(const eb::NoCycle& nc) {
    switch (nc.reason) {
        case eb::NoCycle::Reason::escaped: return "escaped";
        case eb::NoCycle::Reason::budget_exhausted: return "budget_exhausted";
        default: return "multiplier_not_attracting";
    }
}

// ---------------------------------------------------------------- cycle ---

int run_cycle(const Common& c, int max_period) {
    eb::ExpMapConfig cfg = make_cfg(c);
    auto result = eb::find_attracting_cycle(cfg, max_period);
    if (std::holds_alternative<eb::NoCycle>(result)) {
        const auto& nc = std::get<eb::NoCycle>(result);
        std::cerr << "no attracting cycle: " << nocycle_reason(nc) << " after " << nc.steps
                  << " steps\n";
        return kExitDomain;
    }
    const auto& cyc = std::get<eb::AttractingCycle>(result);
    ordered_json j;
    j["lambda"] = cplx_json(cfg.lambda);
    j["period"] = cyc.period;
    ordered_json pts = ordered_json::array();
    for (const auto& z : cyc.points) pts.push_back(cplx_json(z));
    j["points"] = pts;
    j["multiplier"] = cplx_json(cyc.multiplier);
    j["multiplier_abs"] = std::abs(cyc.multiplier);
    if (cyc.period > 1) {
        eb::Kneading k = eb::kneading_sequence(cfg, cyc);
        j["kneading"] = k.entries;
    } else {
        j["kneading"] = ordered_json::array();
    }
    ensure_out_dir(c);
    write_json(out_path(c, "cycle.json"), j);
    std::cout << j.dump(2) << "\n";
    eb::Manifest m("cycle");
    fill_common_manifest(m, c);
    m.set("max_period", static_cast<long long>(max_period));
    m.add_output(c.out_dir, "cycle.json");
    m.write(c.out_dir);
    return kExitOk;
}

// ---------------------------------------------------------------- cover ---

std::string word_text(const eb::BranchWord& w) {
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(w.letters[i]);
    }
    return s;
}

int run_cover(const Common& c, double delta, int levels, long long s_max, long long r_pad,
              int n_max, double M_override) {
    eb::ExpMapConfig cfg = make_cfg(c);
    auto found = eb::find_attracting_cycle(cfg, 16);
    if (std::holds_alternative<eb::NoCycle>(found)) {
        std::cerr << "no attracting cycle for this lambda\n";
        return kExitDomain;
    }
    const auto& cyc = std::get<eb::AttractingCycle>(found);
    if (cyc.period < 2) {
        std::cerr << "cover construction needs period > 1\n";
        return kExitDomain;
    }
    eb::Kneading k = eb::kneading_sequence(cfg, cyc);

    double M = M_override;
    if (M <= 0.0) {
        auto m = eb::find_min_M(cyc.period, delta, n_max);
        if (!m) {
            std::cerr << "no admissible M found (bug: one always exists)\n";
            return kExitInvariant;
        }
        M = *m;
    }
    eb::CoverParams params;
    params.M = M;
    params.delta = delta;
    params.depth = levels;
    params.s_max = s_max;
    params.r_max = params.r_lo() + r_pad;
    params.validate();

    ensure_out_dir(c);
    std::ofstream csv(out_path(c, "cover_cells.csv"), std::ios::trunc);
    csv << "level,cell_id,word,diam,diam_pow\n";
    ordered_json levels_json = ordered_json::array();
    bool dominance_ok = true;

    std::vector<eb::CoverCell> cells = eb::level0_cells(cfg, k, params);
    for (int level = 0; level <= levels; ++level) {
        if (level > 0) cells = eb::refine(cfg, k, params, cells);
        eb::CoverSum sum = eb::cover_sum(cells, params, cyc.period, level);
        long long id = 0;
        for (const auto& cell : cells) {
            csv << level << "," << id++ << "," << word_text(cell.word) << ","
                << eb::fmt_double(cell.diam) << ","
                << eb::fmt_double(std::pow(cell.diam, 1.0 + delta)) << "\n";
        }
        ordered_json lj;
        lj["level"] = level;
        lj["cells"] = cells.size();
        lj["direct_sum"] = sum.direct;
        if (sum.tail_infinite)
            lj["tail"] = "infinite";
        else
            lj["tail"] = sum.tail;
        if (level >= 1) {
            double bound = eb::analytic_bound(cyc.period, M, delta, level);
            lj["analytic_bound"] = bound;
            if (sum.direct > bound) dominance_ok = false;
        }
        levels_json.push_back(lj);
    }
    csv.close();

    ordered_json j;
    j["lambda"] = cplx_json(cfg.lambda);
    j["period"] = cyc.period;
    j["kneading"] = k.entries;
    j["M"] = M;
    j["delta"] = delta;
    j["s_max"] = s_max;
    j["r_max"] = params.r_hi();
    j["levels"] = levels_json;
    j["dominance_ok"] = dominance_ok;
    write_json(out_path(c, "cover_summary.json"), j);
    std::cout << j.dump(2) << "\n";

    eb::Manifest m("cover");
    fill_common_manifest(m, c);
    m.set("delta", delta);
    m.set("levels", static_cast<long long>(levels));
    m.set("s_max", s_max);
    m.set("r_max", params.r_hi());
    m.set("M", M);
    m.add_output(c.out_dir, "cover_cells.csv");
    m.add_output(c.out_dir, "cover_summary.json");
    m.write(c.out_dir);
    if (!dominance_ok) {
        std::cerr << "direct sum exceeded the analytic bound (invariant violation)\n";
        return kExitInvariant;
    }
    return kExitOk;
}

// ------------------------------------------------------------ dim-lower ---

int run_toy_selftest(const Common& c, const std::string& manifest_name) {
    eb::FiniteIfs toy = eb::make_toy_similarity_ifs();
    auto root = eb::bowen_root(toy, 0.5, 1.5, 1e-3);
    const double expected = std::log(3.0) / std::log(4.0);
    ordered_json j;
    j["system"] = "toy-similarity-3x(1/4)";
    j["expected_dim"] = expected;
    bool pass = false;
    if (std::holds_alternative<eb::BowenInterval>(root)) {
        auto iv = std::get<eb::BowenInterval>(root);
        j["bowen_interval"] = ordered_json::array({iv.lo, iv.hi});
        pass = iv.lo <= expected && expected <= iv.hi && (iv.hi - iv.lo) <= 1e-3;
    } else {
        j["bowen_interval"] = nullptr;
    }
    j["pass"] = pass;
    ensure_out_dir(c);
    write_json(out_path(c, "self_test.json"), j);
    std::cout << j.dump(2) << "\n";
    eb::Manifest m(manifest_name);
    m.set("system", "toy-similarity-3x(1/4)");
    m.set("seed", c.seed);
    m.add_output(c.out_dir, "self_test.json");
    m.write(c.out_dir);
    return pass ? kExitOk : kExitDomain;
}

int run_dim_lower(const Common& c, const std::string& schedule_text, long long u_range,
                  long long s_range, bool toy) {
    if (toy) return run_toy_selftest(c, "dim-lower");
    eb::ExpMapConfig cfg = make_cfg(c);
    auto found = eb::find_attracting_cycle(cfg, 16);
    if (std::holds_alternative<eb::NoCycle>(found)) {
        std::cerr << "no attracting cycle for this lambda\n";
        return kExitDomain;
    }
    const auto& cyc = std::get<eb::AttractingCycle>(found);
    if (cyc.period < 2) {
        std::cerr << "lower-bound construction needs period > 1\n";
        return kExitDomain;
    }
    std::vector<double> schedule = eb::parse_double_list(schedule_text);
    if (schedule.empty()) {
        std::cerr << "empty R schedule\n";
        return kExitUsage;
    }
    eb::CertifyReport report = eb::certify_dim_gt_one(cfg, cyc, schedule, u_range, s_range);

    ensure_out_dir(c);
    std::ofstream csv(out_path(c, "dim_lower_sweep.csv"), std::ios::trunc);
    csv << "R,pairs,sum_t1,bowen_lo,bowen_hi,certified,max_image_re\n";
    for (const auto& row : report.rows) {
        csv << eb::fmt_double(row.R) << "," << row.pairs << "," << eb::fmt_double(row.sum_t1)
            << ",";
        if (row.interval)
            csv << eb::fmt_double(row.interval->lo) << "," << eb::fmt_double(row.interval->hi);
        else
            csv << ",";
        csv << "," << (row.certified ? 1 : 0) << "," << eb::fmt_double(row.max_image_re) << "\n";
    }
    csv.close();

    ordered_json j;
    j["lambda"] = cplx_json(cfg.lambda);
    j["p"] = cyc.period;
    j["u_range"] = u_range;
    j["s_range"] = s_range;
    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json rj;
        rj["R"] = row.R;
        rj["pairs_count"] = row.pairs;
        rj["sum_t1"] = row.sum_t1;
        rj["bowen_interval"] =
            row.interval ? ordered_json::array({row.interval->lo, row.interval->hi})
                         : ordered_json();
        rj["certified"] = row.certified;
        rj["max_image_re"] = row.max_image_re;
        rows.push_back(rj);
    }
    j["rows"] = rows;
    j["certified"] = report.certified;
    if (report.certified) {
        j["certified_R"] = report.certified_R;
        j["dim_lower"] = report.dim_lower;
        j["hyperbolic_dim_lower"] = report.dim_lower;
    }
    write_json(out_path(c, "dim_lower.json"), j);
    std::cout << j.dump(2) << "\n";

    eb::Manifest m("dim-lower");
    fill_common_manifest(m, c);
    m.set("r_schedule", schedule_text);
    m.set("u_range", u_range);
    m.set("s_range", s_range);
    m.add_output(c.out_dir, "dim_lower_sweep.csv");
    m.add_output(c.out_dir, "dim_lower.json");
    m.write(c.out_dir);
    if (!report.certified) {
        std::cerr << "not certified on this R schedule\n";
        return kExitDomain;
    }
    return kExitOk;
}

// --------------------------------------------------------------- render ---

int parse_window(const std::string& text, eb::GridSpec& spec) {
    auto vals = eb::parse_double_list(text);
    if (vals.size() != 4) return -1;
    spec.x_min = vals[0];
    spec.x_max = vals[1];
    spec.y_min = vals[2];
    spec.y_max = vals[3];
    return 0;
}

int run_render(const Common& c, const std::string& window, int width, int height, bool png) {
    eb::ExpMapConfig cfg = make_cfg(c);
    auto found = eb::find_attracting_cycle(cfg, 16);
    if (std::holds_alternative<eb::NoCycle>(found)) {
        std::cerr << "no attracting cycle for this lambda\n";
        return kExitDomain;
    }
    const auto& cyc = std::get<eb::AttractingCycle>(found);
    eb::GridSpec spec;
    if (parse_window(window, spec) != 0) {
        std::cerr << "bad --window (need x_min,x_max,y_min,y_max)\n";
        return kExitUsage;
    }
    spec.width = width;
    spec.height = height;
    spec.validate();
    eb::ClassGrid grid = eb::render_grid(cfg, cyc, spec, c.threads);

    ensure_out_dir(c);
    auto gray = eb::grid_to_gray(grid);
    eb::write_pgm(out_path(c, "render.pgm"), spec.width, spec.height, gray);
    if (png) eb::write_png_gray(out_path(c, "render.png"), spec.width, spec.height, gray);

    auto hist = grid.component_histogram();
    ordered_json j;
    j["lambda"] = cplx_json(cfg.lambda);
    j["period"] = cyc.period;
    char prov[32];
    std::snprintf(prov, sizeof(prov), "%016llx",
                  static_cast<unsigned long long>(grid.provenance));
    j["provenance"] = prov;
    ordered_json hj;
    for (int comp = 0; comp < cyc.period; ++comp)
        hj["phase_" + std::to_string(comp)] = hist[static_cast<std::size_t>(comp)];
    hj["escaped"] = hist[static_cast<std::size_t>(cyc.period)];
    hj["undecided"] = hist[static_cast<std::size_t>(cyc.period) + 1];
    j["histogram"] = hj;
    j["undecided_fraction"] = grid.undecided_fraction();
    write_json(out_path(c, "render_summary.json"), j);
    std::cout << j.dump(2) << "\n";

    eb::Manifest m("render");
    fill_common_manifest(m, c);
    m.set("window", window);
    m.set("width", static_cast<long long>(width));
    m.set("height", static_cast<long long>(height));
    m.add_output(c.out_dir, "render.pgm");
    if (png) m.add_output(c.out_dir, "render.png");
    m.add_output(c.out_dir, "render_summary.json");
    m.write(c.out_dir);
    return kExitOk;
}

// ------------------------------------------------------------- boxcount ---

int run_boxcount(const Common& c, const std::string& window, int width, int height, int phase,
                 bool whole, const std::string& fixture) {
    eb::GridSpec spec;
    if (parse_window(window, spec) != 0) {
        std::cerr << "bad --window\n";
        return kExitUsage;
    }
    spec.width = width;
    spec.height = height;
    spec.validate();

    eb::PixelSet points;
    std::string source;
    if (fixture == "line") {
        for (int col = 0; col < width; ++col) points.emplace_back(col, height / 2);
        source = "fixture:line";
    } else if (fixture == "filled") {
        for (int r = 0; r < height; ++r)
            for (int col = 0; col < width; ++col) points.emplace_back(col, r);
        source = "fixture:filled";
    } else if (!fixture.empty()) {
        std::cerr << "unknown fixture (line|filled)\n";
        return kExitUsage;
    } else {
        eb::ExpMapConfig cfg = make_cfg(c);
        auto found = eb::find_attracting_cycle(cfg, 16);
        if (std::holds_alternative<eb::NoCycle>(found)) {
            std::cerr << "no attracting cycle for this lambda\n";
            return kExitDomain;
        }
        const auto& cyc = std::get<eb::AttractingCycle>(found);
        eb::ClassGrid grid = eb::render_grid(cfg, cyc, spec, c.threads);
        if (whole) {
            points = eb::whole_julia_surrogate(grid);
            source = "whole-julia-surrogate";
        } else {
            points = eb::extract_boundary(grid, phase);
            source = "boundary-phase-" + std::to_string(phase);
        }
    }

    eb::BoxCount bc;
    try {
        bc = eb::box_count(points, spec);
    } catch (const eb::InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitDomain;
    }

    ensure_out_dir(c);
    std::ofstream csv(out_path(c, "boxcount.csv"), std::ios::trunc);
    csv << "eps_px,count\n";
    for (const auto& [eps, count] : bc.counts) csv << eps << "," << count << "\n";
    csv.close();

    ordered_json j;
    j["source"] = source;
    j["points"] = points.size();
    j["slope"] = bc.slope;
    j["r2"] = bc.r2;
    write_json(out_path(c, "boxcount.json"), j);
    std::cout << j.dump(2) << "\n";

    eb::Manifest m("boxcount");
    fill_common_manifest(m, c);
    m.set("window", window);
    m.set("width", static_cast<long long>(width));
    m.set("height", static_cast<long long>(height));
    m.set("source", source);
    m.add_output(c.out_dir, "boxcount.csv");
    m.add_output(c.out_dir, "boxcount.json");
    m.write(c.out_dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimension experiments for exponential basin boundaries"};
    app.require_subcommand(1);

    Common c;
    if (const char* env = std::getenv("EXPBASIN_OUT")) c.out_dir = env;

    auto add_common = [&](CLI::App* sub, bool needs_lambda) {
        if (needs_lambda)
            sub->add_option("--lambda", c.lambda_text, "parameter as re,im")->required();
        else
            sub->add_option("--lambda", c.lambda_text, "parameter as re,im");
        sub->add_option("--config", c.config_file, "key=value config file");
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--seed", c.seed, "seed for sampling subroutines");
        sub->add_option("--threads", c.threads, "worker cap (0 = hardware)");
        sub->add_option("--max-iter", c.max_iter, "orbit budget");
        sub->add_option("--escape-re", c.escape_re, "escape threshold on Re");
    };

    // cycle
    auto* sc_cycle = app.add_subcommand("cycle", "attracting cycle from the singular orbit");
    int max_period = 8;
    add_common(sc_cycle, true);
    sc_cycle->add_option("--max-period", max_period, "largest period to detect");

    // cover
    auto* sc_cover = app.add_subcommand("cover", "escaping-boundary cover sums");
    double delta = 0.5;
    int cover_levels = 2;
    long long s_max = 64, r_pad = 64;
    int n_max = 50;
    double M_override = 0.0;
    add_common(sc_cover, false);
    sc_cover->add_option("--delta", delta, "exponent offset in (0,1]")->required();
    sc_cover->add_option("--levels", cover_levels, "refinement levels");
    sc_cover->add_option("--s-max", s_max, "branch letter truncation");
    sc_cover->add_option("--r-pad", r_pad, "cells beyond ceil(M)");
    sc_cover->add_option("--n-max", n_max, "bound check depth");
    sc_cover->add_option("--M", M_override, "override the searched M");

    // dim-lower
    auto* sc_dim = app.add_subcommand("dim-lower", "Bowen-root certification sweep");
    std::string schedule = "50,100,200,400,800";
    long long u_range = 200, s_range = 2000;
    bool toy = false;
    add_common(sc_dim, false);
    sc_dim->add_option("--r-schedule", schedule, "comma-separated R values");
    sc_dim->add_option("--u-range", u_range, "truncation for u indices");
    sc_dim->add_option("--s-range", s_range, "truncation for s indices");
    sc_dim->add_flag("--toy", toy, "run the toy-IFS self test instead");

    // render
    auto* sc_render = app.add_subcommand("render", "basin phase classification image");
    std::string window = "-7,6,-6.5,6.5";
    int width = 1024, height = 1024;
    bool png = false;
    add_common(sc_render, false);
    sc_render->add_option("--window", window, "x_min,x_max,y_min,y_max");
    sc_render->add_option("--width", width, "pixels across");
    sc_render->add_option("--height", height, "pixels down");
    sc_render->add_flag("--png", png, "also write PNG");

    // boxcount
    auto* sc_box = app.add_subcommand("boxcount", "box-counting slope of a pixel set");
    int phase = 0;
    bool whole = false;
    std::string fixture;
    add_common(sc_box, false);
    sc_box->add_option("--window", window, "x_min,x_max,y_min,y_max");
    sc_box->add_option("--width", width, "pixels across");
    sc_box->add_option("--height", height, "pixels down");
    sc_box->add_option("--phase", phase, "basin phase for the boundary set");
    sc_box->add_flag("--whole", whole, "whole-Julia surrogate set");
    sc_box->add_option("--fixture", fixture, "synthetic set: line|filled");

    // self-test
    auto* sc_self = app.add_subcommand("self-test", "toy-IFS Bowen validation");
    sc_self->add_option("--out", c.out_dir, "output directory");
    sc_self->add_option("--seed", c.seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_cycle->parsed()) {
            apply_config_file(c, sc_cycle);
            return run_cycle(c, max_period);
        }
        if (sc_cover->parsed()) {
            apply_config_file(c, sc_cover);
            if (!(delta > 0.0 && delta <= 1.0)) {
                std::cerr << "--delta must lie in (0, 1]\n";
                return kExitUsage;
            }
            return run_cover(c, delta, cover_levels, s_max, r_pad, n_max, M_override);
        }
        if (sc_dim->parsed()) {
            apply_config_file(c, sc_dim);
            return run_dim_lower(c, schedule, u_range, s_range, toy);
        }
        if (sc_render->parsed()) {
            apply_config_file(c, sc_render);
            return run_render(c, window, width, height, png);
        }
        if (sc_box->parsed()) {
            apply_config_file(c, sc_box);
            return run_boxcount(c, window, width, height, phase, whole, fixture);
        }
        if (sc_self->parsed()) {
            return run_toy_selftest(c, "self-test");
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
