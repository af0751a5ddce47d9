// Command-line surface for the Thue-Morse product library.
//
// Subcommands: eval-f, eval-h, verify, plot-h, h0, dirichlet.
// Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
// 3 domain/convergence error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmprod/dirichlet.hpp"
#include "tmprod/format.hpp"
#include "tmprod/h_function.hpp"
#include "tmprod/identities_json.hpp"
#include "tmprod/product.hpp"

namespace {

using nlohmann::json;

struct ResultRow {
    std::string label;
    double value = 0.0;
    double abs_error = 0.0;
    bool certified = false;
    bool budget_exceeded = false;
    std::optional<double> target;
    std::optional<double> deviation;
    std::optional<bool> pass;
};

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<ResultRow> results;
    std::optional<bool> pass;
    long long elapsed_ms = 0;
};

ResultRow row_from(const std::string& label, const tmprod::ValueWithError& v) {
    return ResultRow{label, v.value, v.abs_error, v.certified, v.budget_exceeded, {}, {}, {}};
}

void print_human(const RunReport& rep) {
    std::cout << "command: " << rep.command << '\n';
    std::cout << "inputs:\n";
    for (const auto& [k, v] : rep.inputs) std::cout << "  " << k << " = " << v << '\n';
    std::cout << "results:\n";
    for (const ResultRow& r : rep.results) {
        std::cout << "  " << r.label << " = " << tmprod::format_sig17(r.value)
                  << "  (abs error <= " << tmprod::format_sig17(r.abs_error)
                  << (r.certified ? ", certified" : ", estimated") << ')';
        if (r.budget_exceeded) std::cout << "  [budget exceeded]";
        if (r.target)
            std::cout << "  target = " << tmprod::format_sig17(*r.target)
                      << "  deviation = " << tmprod::format_sig17(*r.deviation) << "  "
                      << (*r.pass ? "PASS" : "FAIL");
        std::cout << '\n';
    }
    if (rep.pass) std::cout << "pass: " << (*rep.pass ? "true" : "false") << '\n';
    std::cout << "elapsed_ms: " << rep.elapsed_ms << '\n';
}

void print_json(const RunReport& rep) {
    json j;
    j["command"] = rep.command;
    json in = json::object();
    for (const auto& [k, v] : rep.inputs) in[k] = v;
    j["inputs"] = in;
    json rows = json::array();
    for (const ResultRow& r : rep.results) {
        json row;
        row["label"] = r.label;
        row["value"] = tmprod::format_sig17(r.value);
        row["abs_error"] = tmprod::format_sig17(r.abs_error);
        row["certified"] = r.certified;
        row["budget_exceeded"] = r.budget_exceeded;
        if (r.target) {
            row["target"] = tmprod::format_sig17(*r.target);
            row["deviation"] = tmprod::format_sig17(*r.deviation);
            row["pass"] = *r.pass;
        }
        rows.push_back(row);
    }
    j["results"] = rows;
    if (rep.pass) j["pass"] = *rep.pass;
    j["elapsed_ms"] = rep.elapsed_ms;
    std::cout << j.dump(2) << '\n';
}

class Stopwatch {
public:
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::int64_t env_max_blocks_cap() {
    const char* s = std::getenv("TMPROD_MAX_BLOCKS");
    if (!s) return -1;
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end == s || v <= 0) return -1;
    return v;
}

void apply_env_cap(tmprod::EvalConfig& cfg) {
    const std::int64_t cap = env_max_blocks_cap();
    if (cap > 0) cfg.max_blocks = std::min(cfg.max_blocks, cap);
}

tmprod::EvalMethod parse_method(const std::string& m) {
    if (m == "direct") return tmprod::EvalMethod::direct;
    if (m == "series") return tmprod::EvalMethod::series;
    return tmprod::EvalMethod::blocked;
}

// ---------------------------------------------------------------------------

struct EvalFArgs {
    double b = 0.0, c = 0.0, eps = 1e-10;
    std::string method = "blocked";
    int level = 3;
    bool json_out = false;
};

int run_eval_f(const EvalFArgs& a) {
    Stopwatch sw;
    tmprod::EvalConfig cfg;
    cfg.method = parse_method(a.method);
    cfg.level = a.level;
    cfg.target_eps = a.eps;
    apply_env_cap(cfg);

    tmprod::ValueWithError v;
    if (cfg.method == tmprod::EvalMethod::series) {
        cfg.method = tmprod::EvalMethod::blocked;
        v = tmprod::f_from_h(a.b, a.c, cfg);
    } else {
        v = tmprod::eval_f(a.b, a.c, cfg);
    }

    RunReport rep;
    rep.command = "eval-f";
    rep.inputs = {{"b", tmprod::format_sig17(a.b)},
                  {"c", tmprod::format_sig17(a.c)},
                  {"eps", tmprod::format_sig17(a.eps)},
                  {"method", a.method},
                  {"level", std::to_string(a.level)}};
    rep.results.push_back(row_from("f(b,c)", v));
    rep.elapsed_ms = sw.ms();
    a.json_out ? print_json(rep) : print_human(rep);
    return 0;
}

struct EvalHArgs {
    double x = 0.0, eps = 1e-10;
    int level = 3;
    bool json_out = false;
};

int run_eval_h(const EvalHArgs& a) {
    Stopwatch sw;
    tmprod::EvalConfig cfg;
    cfg.level = a.level;
    cfg.target_eps = a.eps;
    apply_env_cap(cfg);
    const tmprod::ValueWithError v = tmprod::eval_h(a.x, cfg);

    RunReport rep;
    rep.command = "eval-h";
    rep.inputs = {{"x", tmprod::format_sig17(a.x)},
                  {"eps", tmprod::format_sig17(a.eps)},
                  {"level", std::to_string(a.level)}};
    rep.results.push_back(row_from("h(x)", v));
    rep.elapsed_ms = sw.ms();
    a.json_out ? print_json(rep) : print_human(rep);
    return 0;
}

struct VerifyArgs {
    bool all = false;
    std::string name;
    double eps = 1e-8;
    bool json_out = false;
};

int run_verify(const VerifyArgs& a) {
    Stopwatch sw;
    const std::vector<tmprod::Identity> catalog = tmprod::builtin_catalog();
    std::vector<const tmprod::Identity*> selected;
    if (!a.name.empty()) {
        for (const auto& id : catalog)
            if (id.name == a.name) selected.push_back(&id);
        if (selected.empty()) {
            std::cerr << "unknown identity name '" << a.name << "'; known names:";
            for (const auto& id : catalog) std::cerr << ' ' << id.name;
            std::cerr << '\n';
            return 2;
        }
    } else {
        for (const auto& id : catalog) selected.push_back(&id);
    }

    RunReport rep;
    rep.command = "verify";
    rep.inputs = {{"selection", a.name.empty() ? std::string("--all") : a.name},
                  {"eps", tmprod::format_sig17(a.eps)}};
    bool all_pass = true;
    for (const tmprod::Identity* id : selected) {
        const tmprod::VerifyReport vr = tmprod::verify_identity(*id, a.eps);
        ResultRow row = row_from(vr.name, vr.computed);
        row.target = vr.target_value;
        row.deviation = vr.deviation;
        row.pass = vr.pass;
        if (!vr.reason.empty()) row.label += " (" + vr.reason + ")";
        rep.results.push_back(row);
        all_pass = all_pass && vr.pass;
    }
    rep.pass = all_pass;
    rep.elapsed_ms = sw.ms();
    a.json_out ? print_json(rep) : print_human(rep);
    return all_pass ? 0 : 1;
}

struct PlotArgs {
    double min = -1.5, max = 4.0, step = 0.01;
    std::int64_t trunc = 100;
    std::string out;
    bool json_out = false;
};

int run_plot_h(const PlotArgs& a) {
    Stopwatch sw;
    const std::vector<tmprod::PlotPoint> grid =
        tmprod::emit_plot_grid(a.min, a.max, a.step, a.trunc);

    if (a.out.empty()) {
        tmprod::write_plot_csv(std::cout, grid);
        return 0;
    }
    std::ofstream os(a.out);
    if (!os)
        throw std::runtime_error("plot-h: cannot open output file " + a.out);
    tmprod::write_plot_csv(os, grid);

    RunReport rep;
    rep.command = "plot-h";
    rep.inputs = {{"min", tmprod::format_sig17(a.min)},
                  {"max", tmprod::format_sig17(a.max)},
                  {"step", tmprod::format_sig17(a.step)},
                  {"trunc", std::to_string(a.trunc)},
                  {"out", a.out}};
    ResultRow rows_row;
    rows_row.label = "rows";
    rows_row.value = static_cast<double>(grid.size());
    rows_row.certified = true;
    rep.results.push_back(rows_row);
    rep.elapsed_ms = sw.ms();
    a.json_out ? print_json(rep) : print_human(rep);
    return 0;
}

struct H0Args {
    double eps = 1e-10;
    bool json_out = false;
};

int run_h0(const H0Args& a) {
    Stopwatch sw;
    const auto routes = tmprod::h0_four_ways(a.eps);
    tmprod::EvalConfig cfg;
    cfg.target_eps = a.eps;
    apply_env_cap(cfg);
    const tmprod::ValueWithError direct = tmprod::eval_h(0.0, cfg);

    bool consistent = true;
    for (std::size_t i = 0; i < routes.size(); ++i)
        for (std::size_t j = i + 1; j < routes.size(); ++j) {
            const double gap = std::abs(routes[i].result.value - routes[j].result.value);
            consistent =
                consistent && gap <= routes[i].result.abs_error + routes[j].result.abs_error;
        }
    for (const auto& r : routes) {
        const double gap = std::abs(r.result.value - direct.value);
        consistent = consistent && gap <= r.result.abs_error + direct.abs_error;
    }

    RunReport rep;
    rep.command = "h0";
    rep.inputs = {{"eps", tmprod::format_sig17(a.eps)}};
    for (const auto& r : routes) rep.results.push_back(row_from(r.label, r.result));
    rep.results.push_back(row_from("eval_h(0) cross-check", direct));
    rep.pass = consistent;
    rep.elapsed_ms = sw.ms();
    a.json_out ? print_json(rep) : print_human(rep);
    return consistent ? 0 : 1;
}

struct DirichletArgs {
    int k = 1;
    double a = 0.0;
    std::string variant = "s";
    double eps = 1e-12;
    bool json_out = false;
};

int run_dirichlet(const DirichletArgs& d) {
    Stopwatch sw;
    tmprod::ValueWithError v;
    std::string label;
    if (d.variant == "shifted") {
        v = tmprod::allouche_cohen_series(tmprod::ACVariant::shifted, d.k, d.eps);
        label = "sum_{n>=0} u_n/(n+1)^k";
    } else if (d.variant == "plain") {
        v = tmprod::allouche_cohen_series(tmprod::ACVariant::plain, d.k, d.eps);
        label = "sum_{n>=1} u_n/n^k";
    } else {
        v = tmprod::dirichlet_s(d.k, d.a, d.eps);
        label = "S_k(a) = sum_{n>=2} u_n/(n+a)^k";
    }

    RunReport rep;
    rep.command = "dirichlet";
    rep.inputs = {{"k", std::to_string(d.k)},
                  {"a", tmprod::format_sig17(d.a)},
                  {"variant", d.variant},
                  {"eps", tmprod::format_sig17(d.eps)}};
    rep.results.push_back(row_from(label, v));
    rep.elapsed_ms = sw.ms();
    d.json_out ? print_json(rep) : print_human(rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thue-Morse weighted infinite products and series, with certified error bounds"};
    app.require_subcommand(1);

    EvalFArgs ef;
    auto* cmd_f = app.add_subcommand("eval-f", "evaluate f(b,c) = prod ((n+b)/(n+c))^u_n, n >= 1");
    cmd_f->add_option("--b", ef.b, "numerator shift")->required();
    cmd_f->add_option("--c", ef.c, "denominator shift")->required();
    cmd_f->add_option("--eps", ef.eps, "log-domain tolerance")->check(CLI::PositiveNumber);
    cmd_f->add_option("--method", ef.method, "evaluation route")
        ->check(CLI::IsMember({"blocked", "direct", "series"}));
    cmd_f->add_option("--level", ef.level, "blocking level")->check(CLI::Range(0, 10));
    cmd_f->add_flag("--json", ef.json_out, "machine-readable output");

    EvalHArgs eh;
    auto* cmd_h = app.add_subcommand("eval-h", "evaluate h(x) = prod ((2n+x)/(2n+1+x))^u_n, n >= 1");
    cmd_h->add_option("--x", eh.x, "argument, must exceed -2")->required();
    cmd_h->add_option("--eps", eh.eps, "log-domain tolerance")->check(CLI::PositiveNumber);
    cmd_h->add_option("--level", eh.level, "blocking level")->check(CLI::Range(0, 10));
    cmd_h->add_flag("--json", eh.json_out, "machine-readable output");

    VerifyArgs vf;
    auto* cmd_v = app.add_subcommand("verify", "verify closed-form identities from the catalog");
    auto* all_flag = cmd_v->add_flag("--all", vf.all, "verify the whole catalog (default)");
    cmd_v->add_option("--name", vf.name, "verify a single identity by name")->excludes(all_flag);
    cmd_v->add_option("--eps", vf.eps, "pass margin added to the certified bound")
        ->check(CLI::PositiveNumber);
    cmd_v->add_flag("--json", vf.json_out, "machine-readable output");

    PlotArgs pl;
    auto* cmd_p = app.add_subcommand("plot-h", "emit a CSV grid of the truncated product h_trunc(x)");
    cmd_p->add_option("--min", pl.min, "grid start");
    cmd_p->add_option("--max", pl.max, "grid end");
    cmd_p->add_option("--step", pl.step, "grid step")->check(CLI::PositiveNumber);
    cmd_p->add_option("--trunc", pl.trunc, "truncation index")->check(CLI::PositiveNumber);
    cmd_p->add_option("--out", pl.out, "output CSV path (stdout when omitted)");
    cmd_p->add_flag("--json", pl.json_out, "machine-readable output");

    H0Args h0;
    auto* cmd_h0 = app.add_subcommand("h0", "compute h(0) by the four series expressions");
    cmd_h0->add_option("--eps", h0.eps, "tolerance per route")->check(CLI::PositiveNumber);
    cmd_h0->add_flag("--json", h0.json_out, "machine-readable output");

    DirichletArgs di;
    auto* cmd_d = app.add_subcommand("dirichlet", "evaluate Thue-Morse Dirichlet-type sums");
    cmd_d->add_option("--k", di.k, "exponent, k >= 1")->required()->check(CLI::Range(1, 1000));
    cmd_d->add_option("--a", di.a, "shift for the S_k(a) variant")->check(CLI::NonNegativeNumber);
    cmd_d->add_option("--variant", di.variant, "s (S_k(a)), shifted, or plain")
        ->check(CLI::IsMember({"s", "shifted", "plain"}));
    cmd_d->add_option("--eps", di.eps, "tolerance")->check(CLI::PositiveNumber);
    cmd_d->add_flag("--json", di.json_out, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_f->parsed()) return run_eval_f(ef);
        if (cmd_h->parsed()) return run_eval_h(eh);
        if (cmd_v->parsed()) return run_verify(vf);
        if (cmd_p->parsed()) return run_plot_h(pl);
        if (cmd_h0->parsed()) return run_h0(h0);
        if (cmd_d->parsed()) return run_dirichlet(di);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
