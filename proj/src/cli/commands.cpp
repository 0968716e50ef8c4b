#include "pgcubic/cli/commands.hpp"

#include <cmath>
#include <optional>

#include <CLI11.hpp>

#include "pgcubic/evolution.hpp"

namespace pgcubic::cli {

std::complex<double> parse_complex(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty complex literal");
    const bool has_i = text.back() == 'i' || text.back() == 'I';
    std::string body = has_i ? text.substr(0, text.size() - 1) : text;
    if (!has_i) {
        size_t pos = 0;
        double re = 0.0;
        try {
            re = std::stod(body, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed complex literal '" + text + "'");
        }
        if (pos != body.size())
            throw std::invalid_argument("malformed complex literal '" + text + "'");
        return {re, 0.0};
    }
    // Split RE and IM at the last +/- that is not an exponent sign.
    size_t split = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
    std::string im_part = split == std::string::npos ? body : body.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    try {
        size_t pos = 0;
        const double im = std::stod(im_part, &pos);
        if (pos != im_part.size()) throw std::invalid_argument("");
        double re = 0.0;
        if (!re_part.empty()) {
            pos = 0;
            re = std::stod(re_part, &pos);
            if (pos != re_part.size()) throw std::invalid_argument("");
        }
        return {re, im};
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed complex literal '" + text + "'");
    }
}

std::vector<double> parse_time_list(const std::string& text) {
    std::vector<double> times;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        size_t pos = 0;
        double t = 0.0;
        try {
            t = std::stod(part, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed time list entry '" + part + "'");
        }
        if (pos != part.size())
            throw std::invalid_argument("malformed time list entry '" + part + "'");
        times.push_back(t);
    }
    if (times.empty()) throw std::invalid_argument("time list is empty");
    return times;
}

namespace {

void append_config_meta(OutputDoc& doc, const std::string& command, const RunConfig& config) {
    doc.meta.emplace_back("command", command);
    doc.meta.emplace_back("tolerance", config.tolerance);
    doc.meta.emplace_back("n_boundary_samples", static_cast<long long>(config.n_boundary_samples));
    doc.meta.emplace_back("grid", std::to_string(config.grid[0]) + "," +
                                      std::to_string(config.grid[1]) + "," +
                                      std::to_string(config.grid[2]));
    doc.meta.emplace_back("format", to_string(config.format));
    doc.meta.emplace_back("seed", static_cast<long long>(config.seed));
}

CubicMap input_map(std::complex<double> a2, double a3) {
    if (!(a3 > 0.0 && a3 < 1.0 / 3.0))
        throw std::domain_error("a3 must lie in (0, 1/3)");
    return CubicMap(1.0, a2, a3);
}

ClassifyOptions classify_options(const RunConfig& config) {
    ClassifyOptions opts;
    opts.tolerance = config.tolerance;
    opts.univalence_samples = config.n_boundary_samples;
    return opts;
}

}  // namespace

int cmd_classify(std::complex<double> a2, double a3, const RunConfig& config, std::ostream& out) {
    const CubicMap f = input_map(a2, a3);
    EvolveOptions eopts;
    eopts.classify = classify_options(config);
    const ClassificationResult cls = classify(f, eopts.classify);

    OutputDoc doc;
    append_config_meta(doc, "classify", config);
    doc.meta.emplace_back("a2", format_double(a2.real()) + "+" + format_double(a2.imag()) + "i");
    doc.meta.emplace_back("a3", a3);
    doc.columns = {"tag",        "sup_value",     "arg_tau",      "sup_evaluations",
                   "local_member", "local_margin", "univ_member",  "univ_inconclusive",
                   "blows_up",   "tau_blow",      "t_star",       "zeta0_re",
                   "zeta0_im",   "cusp_exponent", "cusp_order",   "cusp_residual",
                   "continuable"};

    std::vector<Cell> row;
    row.emplace_back(to_string(cls.tag));
    row.emplace_back(cls.sup.sup_value);
    row.emplace_back(cls.sup.arg_tau);
    row.emplace_back(static_cast<long long>(cls.sup.evaluations));
    row.emplace_back(cls.local_verdict.member);
    row.emplace_back(cls.local_verdict.margin);
    if (cls.univalence_verdict) {
        row.emplace_back(cls.univalence_verdict->member);
        row.emplace_back(cls.univalence_verdict->inconclusive);
    } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
    }

    const bool classified = cls.tag == ClassifyTag::kC1 || cls.tag == ClassifyTag::kC2 ||
                            cls.tag == ClassifyTag::kC3;
    if (classified) {
        const BlowUpReport rep = blow_up(f, eopts);
        row.emplace_back(rep.blows_up);
        if (rep.blows_up) {
            row.emplace_back(*rep.tau_blow);
            row.emplace_back(*rep.t_star);
            row.emplace_back(rep.zeta0->real());
            row.emplace_back(rep.zeta0->imag());
            row.emplace_back(rep.cusp->fitted_exponent);
            row.emplace_back(to_string(rep.cusp->declared_order));
            row.emplace_back(rep.cusp->fit_residual);
        } else {
            for (int k = 0; k < 7; ++k) row.emplace_back(std::monostate{});
        }
        row.emplace_back(rep.continuable);
    } else {
        for (int k = 0; k < 8; ++k) row.emplace_back(std::monostate{});
        row.emplace_back(false);
    }
    doc.rows.push_back(std::move(row));
    write_doc(doc, config.format, out);
    return 0;
}

int cmd_evolve(std::complex<double> a2, double a3, const std::vector<double>& times,
               const RunConfig& config, std::ostream& out) {
    const CubicMap f0 = input_map(a2, a3);
    EvolveOptions eopts;
    eopts.classify = classify_options(config);

    OutputDoc doc;
    append_config_meta(doc, "evolve", config);
    doc.columns = {"t",  "tau", "a1", "re_a2", "im_a2", "a3",
                   "x1", "x2",  "x3", "ellipse_margin", "valid"};
    const Trajectory tr = trajectory_of(f0);
    for (const double t : times) {
        const EvolveResult r = evolve(f0, t, eopts);
        const LambdaPoint x = lambda_map(r.map);
        doc.rows.push_back({Cell{t}, Cell{r.tau}, Cell{r.map.a1}, Cell{r.map.a2.real()},
                            Cell{r.map.a2.imag()}, Cell{r.map.a3}, Cell{x.x1}, Cell{x.x2},
                            Cell{x.x3}, Cell{0.25 - h_value(tr.p, tr.q, tr.m2, r.tau)},
                            Cell{r.valid}});
    }
    write_doc(doc, config.format, out);
    return 0;
}

int cmd_region_scan(double s, const RunConfig& config, std::ostream& out) {
    if (!(s > 0.0 && s < 1.0 / 3.0)) throw std::domain_error("region-scan: s must lie in (0, 1/3)");
    const int nx = config.grid[0];
    const int ny = config.grid[1];
    const ClassifyOptions copts = classify_options(config);

    OutputDoc doc;
    append_config_meta(doc, "region-scan", config);
    doc.meta.emplace_back("s", s);
    doc.columns = {"x1", "x2", "x3", "tag", "sup_value", "in_loca", "in_A"};

    // The grid is symmetric by construction: x = step * k with integer or
    // half-integer k, so reflected coordinates are exact negations.
    const double step_x = 1.6 / (nx - 1);
    const double step_y = 1.6 / (ny - 1);
    for (int i = 0; i < nx; ++i) {
        const double x1 = step_x * (i - 0.5 * (nx - 1));
        for (int j = 0; j < ny; ++j) {
            const double x2 = step_y * (j - 0.5 * (ny - 1));
            const ClassificationResult cls = classify(CubicMap(1.0, {x1, x2}, s), copts);
            const bool in_a = in_set_A({x1, x2, s});
            doc.rows.push_back({Cell{x1}, Cell{x2}, Cell{s}, Cell{to_string(cls.tag)},
                                Cell{cls.sup.sup_value}, Cell{cls.local_verdict.member},
                                Cell{in_a}});
        }
    }
    write_doc(doc, config.format, out);
    return 0;
}

int cmd_boundary(double s, int n, const RunConfig& config, std::ostream& out) {
    if (!(s > 0.2 && s < 1.0 / 3.0))
        throw std::domain_error("boundary: s must lie in (1/5, 1/3)");
    if (n < 2) throw std::invalid_argument("boundary: n must be >= 2");

    OutputDoc doc;
    append_config_meta(doc, "boundary", config);
    doc.meta.emplace_back("s", s);
    doc.meta.emplace_back("tau_star", tau_star(s));
    const auto tss = tau_double_star(s);
    if (tss)
        doc.meta.emplace_back("tau_double_star", *tss);
    else
        doc.meta.emplace_back("tau_double_star", std::string("none"));
    doc.columns = {"tau", "g1", "g2", "x1", "x2", "x3"};
    for (const auto& pt : boundary_curve(s, n))
        doc.rows.push_back({Cell{pt.tau}, Cell{pt.g1}, Cell{pt.g2}, Cell{pt.point.x1},
                            Cell{pt.point.x2}, Cell{pt.point.x3}});
    write_doc(doc, config.format, out);
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Degree-three polynomial solutions of the Polubarinova-Galin equation: "
                 "classification, evolution, and coefficient-region tools"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::optional<std::string> config_path;
    std::optional<std::string> format_text;
    std::optional<double> tolerance;
    std::optional<long long> seed;
    std::optional<int> grid_n;
    app.add_option("--config", config_path, "config file (flat key=value)");
    app.add_option("--format", format_text, "output format: csv|json");
    app.add_option("--tolerance", tolerance, "classification tolerance on S vs 1/4");
    app.add_option("--seed", seed, "seed for randomized verification");
    app.add_option("--grid", grid_n, "grid resolution per axis");

    std::string a2_text = "0";
    double a3 = 0.0;
    double s_value = 0.0;
    std::string t_text;

    auto* classify_cmd = app.add_subcommand("classify", "classify an initial map");
    classify_cmd->add_option("--a2", a2_text, "a2 coefficient, RE+IMi")->required();
    classify_cmd->add_option("--a3", a3, "a3 coefficient in (0, 1/3)")->required();

    auto* evolve_cmd = app.add_subcommand("evolve", "evolve an initial map to given times");
    evolve_cmd->add_option("--a2", a2_text, "a2 coefficient, RE+IMi")->required();
    evolve_cmd->add_option("--a3", a3, "a3 coefficient in (0, 1/3)")->required();
    evolve_cmd->add_option("--t", t_text, "comma-separated times")->required();

    auto* scan_cmd = app.add_subcommand("region-scan", "classify a coefficient-plane slice");
    scan_cmd->add_option("--s", s_value, "slice height x3 = s in (0, 1/3)")->required();

    auto* boundary_cmd = app.add_subcommand("boundary", "emit the global-region boundary curve");
    boundary_cmd->add_option("--s", s_value, "slice height s in (1/5, 1/3)")->required();

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig config = environment_config();
        if (config_path) load_config_file(config, *config_path);
        if (format_text) config.format = parse_format(*format_text);
        if (tolerance) apply_config_entry(config, "tolerance", format_double(*tolerance));
        if (seed) config.seed = static_cast<std::uint64_t>(*seed);
        if (grid_n) apply_config_entry(config, "grid", std::to_string(*grid_n));

        if (classify_cmd->parsed()) return cmd_classify(parse_complex(a2_text), a3, config, out);
        if (evolve_cmd->parsed())
            return cmd_evolve(parse_complex(a2_text), a3, parse_time_list(t_text), config, out);
        if (scan_cmd->parsed()) return cmd_region_scan(s_value, config, out);
        if (boundary_cmd->parsed()) return cmd_boundary(s_value, config.grid[0], config, out);
        if (verify_cmd->parsed()) return cmd_verify(config, out);
        err << "usage error: no subcommand\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace pgcubic::cli
